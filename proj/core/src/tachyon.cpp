#include "nhkubo/tachyon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo::tachyon {
namespace {

void require_gapped(const TachyonParams& p, const char* who) {
  p.validate();
  const PhaseRegime r = regime(p);
  if (r.phase != Phase::Gapped) {
    std::ostringstream os;
    os << who << ": needs Delta^2 > m^2 (Delta = " << p.Delta << ", m = " << p.m << ")";
    throw Error(ErrorCode::RegimeViolation, os.str());
  }
}

// 0.5 log|(1 + x) / (1 - x)|: artanh inside (-1, 1), its real part outside.
double artanh_real(double x) {
  if (std::abs(x) < 1.0) return std::atanh(x);
  return 0.5 * std::log(std::abs((1.0 + x) / (1.0 - x)));
}

double cube(double x) { return x * x * x; }

double tilde_exact(double g, double m, double d) {
  const double g2 = g * g, m2 = m * m, d2 = d * d, ad = std::abs(d);
  const double gm = g2 - m2;
  const double pre = 1.0 / (g2 * cube(gm));
  const double t1 = g2 * g2 * (g2 * (2.0 * d2 - m2) + 2.0 * d2 * m2 + m2 * m2) / ad;
  const double t2 = -2.0 * std::sqrt(d2 - m2) * cube(gm);
  const double m4 = m2 * m2, m6 = m4 * m2, m8 = m4 * m4, m10 = m8 * m2;
  const double g4 = g2 * g2, g10 = g4 * g4 * g2;
  const double poly = g10 + m8 * (9.0 * g2 + 4.0 * d2) - m6 * (16.0 * g4 + 15.0 * g2 * d2 + 2.0 * d2 * d2) +
                      g2 * m4 * (14.0 * g4 + 23.0 * g2 * d2 + 6.0 * d2 * d2) -
                      2.0 * g4 * m2 * (3.0 * g4 + 6.0 * g2 * d2 + 4.0 * d2 * d2) - 2.0 * m10;
  const double t3 = poly / std::pow(g2 + d2 - m2, 1.5);
  return pre * (t1 + t2 + t3);
}

double osr_exact(double g, double m, double d) {
  const double ad = std::abs(d);
  const double ee = std::sqrt(g * g + d * d - m * m);
  const double gap = std::sqrt(d * d - m * m);
  const double head = 1.0 + g * (2.0 / (gap + ee) - 1.0 / (ad + ee));
  double tail;
  if (m == 0.0) {
    tail = ad / g + 1.0 - ee / g;  // m -> 0 limit of the artanh combination
  } else {
    tail = (ad / m - m / ad) *
           (artanh_real(m / g) + artanh_real(m / ad) - artanh_real(m * ee / (g * ad)));
  }
  return 0.5 * (head + tail);
}

// Near gamma = |m| the closed forms divide by (gamma^2 - m^2)^3 and lose all
// digits to cancellation. Inside a window of half-width w the value is taken
// from the degree-5 interpolant through gamma = |m| +- w, 2w, 3w.
template <class F>
double around_removable(F&& f, double g, double m, double d) {
  const double am = std::abs(m);
  const double w = std::min(0.02 * std::max(std::abs(d), am), 0.25 * am);
  if (am == 0.0 || std::abs(g - am) >= w) return f(g, m, d);
  constexpr std::array<double, 6> offsets = {-3.0, -2.0, -1.0, 1.0, 2.0, 3.0};
  const double t = (g - am) / w;
  double sum = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    double basis = 1.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      if (j != i) basis *= (t - offsets[j]) / (offsets[i] - offsets[j]);
    }
    sum += basis * f(am + offsets[i] * w, m, d);
  }
  return sum;
}

}  // namespace

void TachyonParams::validate() const {
  if (!std::isfinite(v_F) || !std::isfinite(Delta) || !std::isfinite(m) || !std::isfinite(mu) ||
      !std::isfinite(gamma)) {
    throw Error(ErrorCode::NonFinite, "TachyonParams: non-finite parameter");
  }
  if (!(v_F > 0.0)) throw Error(ErrorCode::DomainError, "TachyonParams: v_F must be positive");
  if (!(gamma >= 0.0)) throw Error(ErrorCode::DomainError, "TachyonParams: gamma must be >= 0");
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Gapped: return "gapped";
    case Phase::Linear: return "linear";
    case Phase::Tachyonic: return "tachyonic";
  }
  return "unknown";
}

std::string_view to_string(Approach approach) {
  switch (approach) {
    case Approach::Standard: return "standard";
    case Approach::PhqmJ: return "phqm-j";
    case Approach::PhqmTilde: return "phqm-tilde";
    case Approach::Postselected: return "postselected";
  }
  return "unknown";
}

PhaseRegime regime(const TachyonParams& p) {
  const double d2 = p.Delta * p.Delta, m2 = p.m * p.m;
  PhaseRegime r;
  r.effective_gap_sq = d2 - m2;
  const double scale = std::max(d2, m2);
  if (std::abs(r.effective_gap_sq) <= 1e-12 * scale) {
    r.phase = Phase::Linear;
  } else {
    r.phase = r.effective_gap_sq > 0.0 ? Phase::Gapped : Phase::Tachyonic;
  }
  return r;
}

ComplexMatrix hamiltonian(double k, const TachyonParams& p) {
  const double vk = p.v_F * k;
  ComplexMatrix h(2, 2);
  h << cplx(-p.mu, -p.m), cplx(vk, -p.Delta), cplx(vk, p.Delta), cplx(-p.mu, p.m);
  return h;
}

ComplexMatrix current_J(const TachyonParams& p) { return p.v_F * pauli::x(); }

ComplexMatrix current_tilde(double k, const TachyonParams& p) {
  require_gapped(p, "current_tilde");
  const double vk = p.v_F * k;
  const double d2 = p.Delta * p.Delta;
  const double e2 = vk * vk + d2 - p.m * p.m;
  const double e = std::sqrt(e2);
  const double e0_3 = std::pow(vk * vk + d2, 1.5);
  const cplx ax = vk * vk / e2 + d2 * e / e0_3;
  const cplx ay = vk * p.Delta * (1.0 / e2 - e / e0_3);
  const cplx az = -kI * vk * p.m / e2;
  return p.v_F * (ax * pauli::x() + ay * pauli::y() + az * pauli::z());
}

ComplexMatrix isospectral_closed(double k, const TachyonParams& p) {
  require_gapped(p, "isospectral_closed");
  const double vk = p.v_F * k;
  const double e0_sq = vk * vk + p.Delta * p.Delta;
  const double scale = std::sqrt((e0_sq - p.m * p.m) / e0_sq);
  return scale * (vk * pauli::x() + p.Delta * pauli::y()) - p.mu * pauli::identity();
}

double sigma_dc_standard(const TachyonParams& p) {
  p.validate();
  if (!(p.gamma > std::abs(p.m))) {
    std::ostringstream os;
    os << "standard framework needs gamma > |m| (gamma = " << p.gamma << ", m = " << p.m << ")";
    throw Error(ErrorCode::ConstraintViolation, os.str());
  }
  const double g2 = p.gamma * p.gamma, m2 = p.m * p.m;
  return (g2 - m2) / std::pow(g2 + p.Delta * p.Delta - m2, 1.5);
}

double sigma_dc_phqm_j(const TachyonParams& p) {
  require_gapped(p, "sigma_dc_phqm_j");
  const double g2 = p.gamma * p.gamma;
  return g2 / std::pow(g2 + p.Delta * p.Delta - p.m * p.m, 1.5);
}

double sigma_dc_postselected(const TachyonParams& p) {
  p.validate();
  if (p.m == 0.0 || regime(p).phase != Phase::Tachyonic) return 0.0;
  const double m2 = p.m * p.m;
  return 0.5 * std::numbers::pi * std::sqrt(m2 - p.Delta * p.Delta) / m2;
}

double sigma_dc_phqm_tilde(const TachyonParams& p) {
  require_gapped(p, "sigma_dc_phqm_tilde");
  if (!(p.gamma > 0.0)) return 0.0;
  return around_removable(tilde_exact, p.gamma, p.m, p.Delta);
}

double sigma_dc_phqm_tilde_dirty(const TachyonParams& p) {
  require_gapped(p, "sigma_dc_phqm_tilde_dirty");
  if (!(p.gamma > 0.0)) throw Error(ErrorCode::DomainError, "dirty expansion needs gamma > 0");
  const double ad = std::abs(p.Delta), m2 = p.m * p.m;
  const double c2 = 2.0 * ad - m2 / ad - 2.0 * std::sqrt(p.Delta * p.Delta - m2);
  return 1.0 / p.gamma + c2 / (p.gamma * p.gamma);
}

double sigma_dc_phqm_tilde_clean(const TachyonParams& p) {
  require_gapped(p, "sigma_dc_phqm_tilde_clean");
  const double d2 = p.Delta * p.Delta, ad = std::abs(p.Delta);
  const double m2 = p.m * p.m, m4 = m2 * m2;
  double c2;
  if (std::abs(p.m) < 1e-3 * ad) {
    // The two terms cancel to O(1); their m -> 0 limit is 1/|Delta|^3.
    c2 = 1.0 / cube(ad);
  } else {
    c2 = (8.0 * d2 * d2 - 8.0 * d2 * m2 + m4) / (4.0 * m4 * std::pow(d2 - m2, 1.5)) -
         (m2 + 2.0 * d2) / (m4 * ad);
  }
  return c2 * p.gamma * p.gamma;
}

double sigma_dc_closed(DcClosedForm form, const TachyonParams& p) {
  switch (form) {
    case DcClosedForm::Standard: return sigma_dc_standard(p);
    case DcClosedForm::PhqmJ: return sigma_dc_phqm_j(p);
    case DcClosedForm::Postselected: return sigma_dc_postselected(p);
    case DcClosedForm::PhqmTildeExact: return sigma_dc_phqm_tilde(p);
    case DcClosedForm::PhqmTildeExpansion:
      return p.gamma > std::abs(p.Delta) ? sigma_dc_phqm_tilde_dirty(p) : sigma_dc_phqm_tilde_clean(p);
  }
  return 0.0;
}

double osr_closed(const TachyonParams& p, OsrForm form) {
  require_gapped(p, "osr_closed");
  const double mb = p.m / std::abs(p.Delta);
  const double gb = p.gamma / std::abs(p.Delta);
  switch (form) {
    case OsrForm::Exact:
      if (!(p.gamma > 0.0)) throw Error(ErrorCode::DomainError, "osr_closed: Exact needs gamma > 0");
      return around_removable(osr_exact, p.gamma, p.m, p.Delta);
    case OsrForm::WeakNH: {
      if (!(gb > 0.0)) throw Error(ErrorCode::DomainError, "osr_closed: WeakNH needs gamma > 0");
      const double root = std::sqrt(gb * gb + 1.0);
      return 1.0 + (2.0 - 2.0 * root + gb * gb * (root - gb)) * mb * mb / (3.0 * cube(gb));
    }
    case OsrForm::StrongNH:
      return 1.0 + 1.0 / (2.0 * (1.0 + gb));
    case OsrForm::Clean: {
      if (!(std::abs(mb) < 1.0 - 1e-12)) {
        throw Error(ErrorCode::RegimeViolation, "osr_closed: Clean needs |m/Delta| < 1");
      }
      const double ratio = mb == 0.0 ? 1.0 : (1.0 / mb - mb) * std::atanh(mb);
      return 0.5 * (1.0 + ratio);
    }
  }
  return 0.0;
}

KuboProblem kubo_problem(const TachyonParams& p, Approach approach, double temperature) {
  p.validate();
  KuboProblem problem;
  problem.temperature = temperature;
  problem.hamiltonian = [p](double k) { return hamiltonian(k, p); };
  switch (approach) {
    case Approach::Standard:
      problem.framework = Framework::standard(p.gamma);
      break;
    case Approach::PhqmJ:
    case Approach::PhqmTilde:
      require_gapped(p, "kubo_problem");
      problem.framework = Framework::phqm(p.gamma);
      break;
    case Approach::Postselected:
      throw Error(ErrorCode::ConstraintViolation,
                  "kubo_problem: the postselected conductivity is available in closed form only");
  }
  if (approach == Approach::PhqmTilde) {
    problem.vertex_a = [p](double k) { return current_tilde(k, p); };
  } else {
    const ComplexMatrix j = current_J(p);
    problem.vertex_a = [j](double) { return j; };
  }
  problem.vertex_b = problem.vertex_a;
  // The framework constraint is k-independent for this model; check it once.
  validate_framework(hamiltonian(0.0, p), problem.framework);
  problem.validate_each_k = false;
  return problem;
}

CleanKuboProblem clean_problem(const TachyonParams& p, bool tilde, double delta0) {
  require_gapped(p, "clean_problem");
  CleanKuboProblem problem;
  problem.system = [p](double k) { return eig_biortho(hamiltonian(k, p)); };
  if (tilde) {
    problem.vertex_a = [p](double k) { return current_tilde(k, p); };
  } else {
    const ComplexMatrix j = current_J(p);
    problem.vertex_a = [j](double) { return j; };
  }
  problem.vertex_b = problem.vertex_a;
  problem.delta0 = delta0;
  // mu is already inside H.
  problem.mu = 0.0;
  return problem;
}

}  // namespace nhkubo::tachyon
