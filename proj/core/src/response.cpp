#include "nhkubo/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct KData {
  ComplexMatrix h;
  ComplexMatrix a;
  ComplexMatrix b;
  // G_R - G_A = G_R (H - H_A - 2 i gamma) G_A, with H_A = H^dagger (Standard) or H (PHQM).
  ComplexMatrix jump_kernel;
  std::vector<double> pole_re;
  // Smallest distance of a G_R / G_A pole from the real axis.
  double pole_width = 0.0;
};

KData evaluate_k(const KuboProblem& p, double k) {
  KData d{p.hamiltonian(k), p.vertex_a(k), p.vertex_b(k), {}, {}, 0.0};
  require_square_finite(d.h, "kubo: H(k)");
  if (d.a.rows() != d.h.rows() || d.a.cols() != d.h.cols() || d.b.rows() != d.h.rows() ||
      d.b.cols() != d.h.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "kubo: vertex and Hamiltonian sizes differ");
  }
  if (p.validate_each_k) validate_framework(d.h, p.framework);
  if (p.framework.kind == FrameworkKind::Standard) {
    d.jump_kernel = d.h - d.h.adjoint();
  } else {
    d.jump_kernel = ComplexMatrix::Zero(d.h.rows(), d.h.cols());
  }
  d.jump_kernel.diagonal().array() -= 2.0 * kI * p.framework.gamma;
  const ComplexVector xi = sorted_eigenvalues(d.h);
  d.pole_width = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    d.pole_re.push_back(xi(i).real());
    const double width = p.framework.kind == FrameworkKind::Standard
                             ? std::abs(xi(i).imag() - p.framework.gamma)
                             : p.framework.gamma;
    d.pole_width = std::min(d.pole_width, width);
  }
  if (!(d.pole_width > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "kubo: poles on the real axis; use gamma > 0 (or chi_phqm_clean for the clean limit)");
  }
  return d;
}

void check_problem(const KuboProblem& p, const char* who) {
  if (!p.hamiltonian || !p.vertex_a || !p.vertex_b) {
    throw Error(ErrorCode::DomainError, std::string(who) + ": H, A and B must all be set");
  }
  if (p.framework.kind == FrameworkKind::Postselected) {
    throw Error(ErrorCode::ConstraintViolation,
                std::string(who) + ": the postselected framework has no Kubo formula here");
  }
  if (!(p.temperature >= 0.0) || !std::isfinite(p.temperature)) {
    throw Error(ErrorCode::DomainError, std::string(who) + ": temperature must be finite and >= 0");
  }
  p.omega_quad.validate();
  p.k_quad.validate();
}

// Half-width, in units of T, beyond which n_F differs from a step by < e^{-40}.
constexpr double kFermiWindow = 40.0;

// Frequency integral of n_F(w) f(w). The Fermi sea below w = 0 is integrated
// as at T = 0; the thermal correction (n_F - step) lives in |w| < 40 T, which
// keeps large-|k| evaluations free of cancellation between distant poles.
cplx occupied_integral(const ComplexIntegrand& f, double temperature, std::vector<double> cuts,
                       const QuadratureSpec& spec, long& evaluations, const char* who) {
  QuadratureResult r = integrate_semi_infinite(f, 0.0, spec, cuts);
  evaluations += r.evaluations;
  require_converged(r, who);
  if (temperature == 0.0) return r.value;
  cuts.push_back(0.0);
  auto thermal = [&](double w) { return (fermi(w, temperature) - fermi(w, 0.0)) * f(w); };
  const double window = kFermiWindow * temperature;
  QuadratureResult c = integrate(thermal, -window, window, spec, cuts);
  evaluations += c.evaluations;
  require_converged(c, who);
  return r.value + c.value;
}

// Spectral radius of H(k) (largest |eigenvalue|).
double spectral_radius(const KuboProblem& p, double k) {
  return sorted_eigenvalues(p.hamiltonian(k)).cwiseAbs().maxCoeff();
}

// Power-law continuation of one real component beyond k4, fitted through (k2, f2)
// and (k4 = 2 k2, f4). Components already at the frequency-quadrature noise level
// contribute nothing.
struct Tail {
  double value = 0.0;
  double error = 0.0;
};

Tail power_tail(double f1, double f2, double f4, double k4, double noise, const char* who) {
  if (std::abs(f4) <= noise && std::abs(f2) <= noise) return {0.0, noise * k4};
  if (f2 * f4 <= 0.0 || !(std::abs(f4) < std::abs(f2))) {
    std::ostringstream os;
    os << who << ": momentum integrand does not decay monotonically (" << f2 << ", " << f4 << ")";
    throw Error(ErrorCode::NonConvergent, os.str());
  }
  const double p_far = std::log2(f2 / f4);
  if (!(p_far > 1.2)) {
    std::ostringstream os;
    os << who << ": momentum integrand decays as k^-" << p_far << ", too slowly to integrate";
    throw Error(ErrorCode::NonConvergent, os.str());
  }
  Tail t;
  t.value = f4 * k4 / (p_far - 1.0);
  // Spread between the near and far exponent fits.
  if (f1 * f2 > 0.0 && std::abs(f2) < std::abs(f1)) {
    const double p_near = std::log2(f1 / f2);
    if (p_near > 1.0) t.error = std::abs(t.value - f4 * k4 / (p_near - 1.0));
  }
  t.error += noise * k4;
  return t;
}

/// Momentum integral with measure dk / 2 pi. Far out in k the frequency
/// integrals are dominated by cancellations between distant poles and flatten
/// at the quadrature noise level, so the integrand is integrated numerically on
/// |k| <= 4 K and continued as a power law fitted at K, 2K, 4K. K starts where
/// the band energy exceeds five times the largest energy scale of the problem
/// and is doubled while the integrand at 8 K stays well above the noise.
ResponseResult integrate_k(const std::function<cplx(double)>& per_k, const KuboProblem& p,
                           double omega, long& inner_evaluations, const char* who) {
  const double scale =
      std::max({spectral_radius(p, 0.0), std::abs(omega), p.framework.gamma,
                std::numeric_limits<double>::min()});
  double horizon = 1e-3 * scale;
  for (int i = 0; i < 200 && std::min(spectral_radius(p, horizon), spectral_radius(p, -horizon)) <
                                 5.0 * scale;
       ++i) {
    horizon *= 2.0;
  }
  if (std::min(spectral_radius(p, horizon), spectral_radius(p, -horizon)) < 5.0 * scale) {
    throw Error(ErrorCode::DomainError, std::string(who) + ": band energy does not grow with |k|");
  }
  const double noise = 10.0 * p.omega_quad.abs_tol;
  auto clear_of_noise = [&](double k) {
    return std::min(std::abs(per_k(k)), std::abs(per_k(-k))) > 1e3 * noise;
  };
  for (int i = 0; i < 40 && clear_of_noise(8.0 * horizon); ++i) horizon *= 2.0;
  const double far = 4.0 * horizon;
  const double cuts[] = {-2.0 * horizon, -horizon, 0.0, horizon, 2.0 * horizon};
  QuadratureResult r = integrate(per_k, -far, far, p.k_quad, cuts);
  require_converged(r, who);

  cplx tails = 0.0;
  double tail_error = 0.0;
  for (double side : {1.0, -1.0}) {
    const cplx f1 = per_k(side * horizon);
    const cplx f2 = per_k(side * 2.0 * horizon);
    const cplx f4 = per_k(side * far);
    const Tail re = power_tail(f1.real(), f2.real(), f4.real(), far, noise, who);
    const Tail im = power_tail(f1.imag(), f2.imag(), f4.imag(), far, noise, who);
    tails += cplx(re.value, im.value);
    tail_error += re.error + im.error;
  }
  return {(r.value + tails) / kTwoPi, (r.est_error + tail_error) / kTwoPi,
          r.evaluations + 6 + inner_evaluations};
}

// Breakpoints at each cut and at distances width * 10^j on either side, so that
// no panel is long compared with its distance to a peak.
std::vector<double> graded(const std::vector<double>& cuts, double width) {
  double reach = 0.0;
  for (double c : cuts) reach = std::max(reach, std::abs(c));
  reach = 2.0 * reach + 10.0 * width;
  std::vector<double> out;
  for (double c : cuts) {
    out.push_back(c);
    for (double d = width; d < reach; d *= 10.0) {
      out.push_back(c - d);
      out.push_back(c + d);
    }
  }
  return out;
}

std::vector<double> shifted_cuts(const KData& d, double omega) {
  const std::vector<double>& poles = d.pole_re;
  std::vector<double> cuts;
  for (double p : poles) {
    cuts.push_back(p);
    if (omega != 0.0) {
      cuts.push_back(p - omega);
      cuts.push_back(p + omega);
    }
  }
  if (omega != 0.0) cuts.push_back(-omega);
  return graded(cuts, d.pole_width);
}

// Resolvents at one frequency, with the jump written as a product so that it
// stays accurate far from the poles.
struct Resolvents {
  ComplexMatrix r;
  ComplexMatrix adv;
  ComplexMatrix jump;
};

Resolvents resolvents(const KData& d, const Framework& fw, double w) {
  Resolvents out{g_retarded(d.h, fw, w), advanced_propagator(d.h, fw, w), {}};
  out.jump = out.r * d.jump_kernel * out.adv;
  return out;
}

// tr[(R - A)(w) a R(w + W) b + A(w - W) a (R - A)(w) b].
cplx kubo_trace(const KData& d, const Framework& fw, double w, double omega) {
  const Resolvents g = resolvents(d, fw, w);
  if (omega == 0.0) return (g.jump * d.a * g.r * d.b + g.adv * d.a * g.jump * d.b).trace();
  const ComplexMatrix r_up = g_retarded(d.h, fw, w + omega);
  const ComplexMatrix a_down = advanced_propagator(d.h, fw, w - omega);
  return (g.jump * d.a * r_up * d.b + a_down * d.a * g.jump * d.b).trace();
}

// (kubo_trace(W) - kubo_trace(0)) / W through G(w + W) - G(w) = -W G(w + W) G(w).
cplx kubo_trace_slope(const KData& d, const Framework& fw, double w, double omega) {
  const Resolvents g = resolvents(d, fw, w);
  const ComplexMatrix r_up = g_retarded(d.h, fw, w + omega);
  const ComplexMatrix a_down = advanced_propagator(d.h, fw, w - omega);
  return (a_down * g.adv * d.a * g.jump * d.b - g.jump * d.a * r_up * g.r * d.b).trace();
}

constexpr cplx kChiPrefactor = -1.0 / (kTwoPi * kI);

}  // namespace

double fermi(double x, double temperature) {
  if (temperature == 0.0) {
    if (x < 0.0) return 1.0;
    if (x > 0.0) return 0.0;
    return 0.5;
  }
  const double y = x / temperature;
  if (y > 0.0) {
    const double e = std::exp(-y);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(y));
}

ResponseResult chi_local(const KuboProblem& p, double omega) {
  check_problem(p, "chi_local");
  if (!std::isfinite(omega)) throw Error(ErrorCode::DomainError, "chi_local: Omega must be finite");
  long inner = 0;
  auto per_k = [&](double k) {
    const KData d = evaluate_k(p, k);
    auto f = [&](double w) { return kubo_trace(d, p.framework, w, omega); };
    return kChiPrefactor *
           occupied_integral(f, p.temperature, shifted_cuts(d, omega), p.omega_quad, inner,
                             "chi_local (frequency)");
  };
  return integrate_k(per_k, p, omega, inner, "chi_local (momentum)");
}

ResponseResult sigma_optical(const KuboProblem& p, double omega) {
  check_problem(p, "sigma_optical");
  if (!(omega != 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::DomainError, "sigma_optical: Omega must be finite and nonzero");
  }
  long inner = 0;
  auto per_k = [&](double k) {
    const KData d = evaluate_k(p, k);
    auto f = [&](double w) { return kubo_trace_slope(d, p.framework, w, omega); };
    return kChiPrefactor *
           occupied_integral(f, p.temperature, shifted_cuts(d, omega), p.omega_quad, inner,
                             "sigma_optical (frequency)");
  };
  ResponseResult chi_diff = integrate_k(per_k, p, omega, inner, "sigma_optical (momentum)");
  const cplx scale = kTwoPi * kI;
  return {scale * chi_diff.value, std::abs(scale) * chi_diff.est_error, chi_diff.evaluations};
}

ResponseResult sigma_dc(const KuboProblem& p) {
  check_problem(p, "sigma_dc");
  long inner = 0;
  const Framework& fw = p.framework;
  auto per_k = [&](double k) {
    const KData d = evaluate_k(p, k);
    auto sea = [&](double w) {
      const ComplexMatrix r = g_retarded(d.h, fw, w);
      const ComplexMatrix adv = advanced_propagator(d.h, fw, w);
      return (r * d.a * r * r * d.b + adv * adv * d.a * adv * d.b).trace();
    };
    auto surface = [&](double w) {
      return (advanced_propagator(d.h, fw, w) * d.a * g_retarded(d.h, fw, w) * d.b).trace();
    };
    const cplx fermi_sea =
        occupied_integral(sea, p.temperature, shifted_cuts(d, 0.0), p.omega_quad, inner, "sigma_dc (frequency)");
    if (p.temperature == 0.0) return surface(0.0) + fermi_sea;
    // Fermi-surface term weighted by -dn_F/dw.
    const double t = p.temperature;
    auto weighted = [&](double w) {
      const double n = fermi(w, t);
      return n * (1.0 - n) / t * surface(w);
    };
    std::vector<double> cuts = shifted_cuts(d, 0.0);
    cuts.push_back(0.0);
    const double window = kFermiWindow * t;
    QuadratureResult r = integrate(weighted, -window, window, p.omega_quad, cuts);
    inner += r.evaluations;
    require_converged(r, "sigma_dc (frequency)");
    return r.value + fermi_sea;
  };
  return integrate_k(per_k, p, 0.0, inner, "sigma_dc (momentum)");
}

ResponseResult optical_sum(const KuboProblem& p) {
  check_problem(p, "optical_sum");
  if (p.temperature != 0.0) {
    throw Error(ErrorCode::DomainError, "optical_sum: the sum rule is evaluated at T = 0");
  }
  long inner = 0;
  auto per_k = [&](double k) {
    const KData d = evaluate_k(p, k);
    auto f = [&](double w) { return cplx(0.5 * kubo_trace(d, p.framework, w, 0.0).imag(), 0.0); };
    return occupied_integral(f, 0.0, shifted_cuts(d, 0.0), p.omega_quad, inner, "optical_sum (frequency)");
  };
  return integrate_k(per_k, p, 0.0, inner, "optical_sum (momentum)");
}

cplx lehmann_sum(const BiorthoSystem& sys, const ComplexMatrix& a, const ComplexMatrix& b,
                 double omega, double temperature, double mu, double delta0) {
  const double max_abs = sys.eigenvalues.cwiseAbs().maxCoeff();
  if (sys.eigenvalues.imag().cwiseAbs().maxCoeff() > 1e-9 * std::max(max_abs, 1.0)) {
    throw Error(ErrorCode::ComplexSpectrum, "lehmann_sum: spectrum is not real");
  }
  const ComplexMatrix a_lr = sys.left.adjoint() * a * sys.right;  // <L_i|A|R_j>
  const ComplexMatrix b_lr = sys.left.adjoint() * b * sys.right;
  const Eigen::Index n = sys.dim();
  std::vector<double> occ(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    occ[static_cast<std::size_t>(i)] = fermi(sys.eigenvalues(i).real() - mu, temperature);
  }
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dn = occ[static_cast<std::size_t>(i)] - occ[static_cast<std::size_t>(j)];
      if (dn == 0.0) continue;
      const double gap = sys.eigenvalues(i).real() - sys.eigenvalues(j).real();
      sum += a_lr(i, j) * b_lr(j, i) * dn / cplx(omega + gap, delta0);
    }
  }
  return sum;
}

ResponseResult chi_phqm_clean(const CleanKuboProblem& p, double omega) {
  if (!p.system || !p.vertex_a || !p.vertex_b) {
    throw Error(ErrorCode::DomainError, "chi_phqm_clean: system and vertices must be set");
  }
  if (!(p.delta0 > 0.0) || !(p.temperature >= 0.0)) {
    throw Error(ErrorCode::DomainError, "chi_phqm_clean: need delta0 > 0 and T >= 0");
  }
  p.k_quad.validate();
  auto per_k = [&](double k) {
    return lehmann_sum(p.system(k), p.vertex_a(k), p.vertex_b(k), omega, p.temperature, p.mu,
                       p.delta0);
  };
  const double cuts[] = {0.0};
  QuadratureResult r = integrate(per_k, -kInf, kInf, p.k_quad, cuts);
  require_converged(r, "chi_phqm_clean (momentum)");
  return {r.value / kTwoPi, r.est_error / kTwoPi, r.evaluations};
}

namespace {

struct Grid {
  std::vector<double> x;
  std::vector<double> g;
};

double interpolate(const Grid& grid, double w) {
  auto it = std::upper_bound(grid.x.begin(), grid.x.end(), w);
  std::size_t j = it == grid.x.begin() ? 0 : static_cast<std::size_t>(it - grid.x.begin()) - 1;
  j = std::min(j, grid.x.size() - 2);
  const double t = (w - grid.x[j]) / (grid.x[j + 1] - grid.x[j]);
  return grid.g[j] + t * (grid.g[j + 1] - grid.g[j]);
}

// Int_X^inf c / (x^2 (x - W)) dx expanded in W / X (valid for |W| < |X|); X > 0.
double tail_series(double c, double x_end, double w) {
  double sum = 0.0;
  double ratio = 1.0;
  for (int n = 0; n < 40; ++n) {
    sum += ratio / (n + 2.0);
    ratio *= w / x_end;
  }
  return c * sum / (x_end * x_end);
}

// P Int sigma'(x) / (x - W) dx over the piecewise-linear grid plus c/x^2 tails.
double principal_value(const Grid& grid, double w) {
  const std::size_t n = grid.x.size();
  const double a = grid.x.front();
  const double b = grid.x.back();
  const double gw = interpolate(grid, w);
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double x0 = grid.x[j], x1 = grid.x[j + 1];
    const double slope = (grid.g[j + 1] - grid.g[j]) / (x1 - x0);
    sum += slope * (x1 - x0);
    if (w >= x0 && w <= x1) continue;
    const double lin = grid.g[j] + slope * (w - x0);
    sum += (lin - gw) * std::log(std::abs((x1 - w) / (x0 - w)));
  }
  const double c_right = grid.g.back() * b * b;
  const double c_left = grid.g.front() * a * a;
  const bool series = std::abs(w) < 0.1 * std::min(std::abs(a), std::abs(b));
  double coef_b = gw;
  double coef_a = -gw;
  if (series) {
    sum += tail_series(c_right, b, w);
    sum -= tail_series(c_left, -a, -w);
  } else {
    const double w2 = w * w;
    sum += c_right / w2 * std::log(std::abs(b)) - c_right / (w * b);
    sum += -c_left / w2 * std::log(std::abs(a)) + c_left / (w * a);
    coef_b -= c_right / w2;
    coef_a += c_left / w2;
  }
  // At an endpoint the log coefficient vanishes identically.
  if (w != b) sum += coef_b * std::log(std::abs(b - w));
  if (w != a) sum += coef_a * std::log(std::abs(a - w));
  return sum;
}

Grid subsample(const Grid& grid) {
  Grid out;
  for (std::size_t i = 0; i < grid.x.size(); i += 2) {
    out.x.push_back(grid.x[i]);
    out.g.push_back(grid.g[i]);
  }
  if (out.x.back() != grid.x.back()) {
    out.x.push_back(grid.x.back());
    out.g.push_back(grid.g.back());
  }
  return out;
}

[[noreturn]] void insufficient(const std::string& why) {
  throw Error(ErrorCode::InsufficientGrid, "kramers_kronig: " + why);
}

}  // namespace

std::vector<KramersKronigPoint> kramers_kronig(const std::vector<double>& omega,
                                               const std::vector<double>& sigma_real,
                                               const KramersKronigOptions& options) {
  if (omega.size() != sigma_real.size()) {
    throw Error(ErrorCode::DimensionMismatch, "kramers_kronig: column lengths differ");
  }
  if (static_cast<int>(omega.size()) < options.min_points) {
    insufficient("need at least " + std::to_string(options.min_points) + " samples");
  }
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!std::isfinite(omega[i]) || !std::isfinite(sigma_real[i])) insufficient("non-finite sample");
    if (i > 0 && !(omega[i] > omega[i - 1])) insufficient("frequencies must be strictly increasing");
  }

  Grid grid;
  if (omega.front() >= 0.0) {
    const std::size_t stop = omega.front() == 0.0 ? 1 : 0;
    for (std::size_t i = omega.size(); i-- > stop;) {
      grid.x.push_back(-omega[i]);
      grid.g.push_back(sigma_real[i]);
    }
  }
  grid.x.insert(grid.x.end(), omega.begin(), omega.end());
  grid.g.insert(grid.g.end(), sigma_real.begin(), sigma_real.end());
  const double a = grid.x.front(), b = grid.x.back();
  if (!(a < 0.0 && b > 0.0)) insufficient("samples must straddle Omega = 0");

  const double span = b - a;
  for (std::size_t i = 1; i < grid.x.size(); ++i) {
    if (grid.x[i] - grid.x[i - 1] > options.max_spacing_fraction * span) {
      std::ostringstream os;
      os << "spacing " << grid.x[i] - grid.x[i - 1] << " exceeds " << options.max_spacing_fraction
         << " of the span " << span;
      insufficient(os.str());
    }
  }
  double body = 0.0;
  for (std::size_t i = 1; i < grid.x.size(); ++i) {
    body += 0.5 * (grid.g[i] + grid.g[i - 1]) * (grid.x[i] - grid.x[i - 1]);
  }
  const double tails = std::abs(grid.g.back() * b) + std::abs(grid.g.front() * a);
  if (tails > options.tail_tol * std::abs(body + grid.g.back() * b - grid.g.front() * a)) {
    std::ostringstream os;
    os << "tail weight " << tails << " exceeds " << options.tail_tol << " of the integrated weight";
    insufficient(os.str());
  }

  const Grid coarse = subsample(grid);
  std::vector<KramersKronigPoint> out;
  out.reserve(omega.size());
  for (double w : omega) {
    const double fine = -principal_value(grid, w) / std::numbers::pi;
    const double rough = -principal_value(coarse, w) / std::numbers::pi;
    out.push_back({w, fine, std::abs(fine - rough) / 3.0});
  }
  return out;
}

}  // namespace nhkubo
