#include "nhkubo/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class PieceKind { Finite, LeftTail, RightTail };

struct Piece {
  PieceKind kind;
  double anchor;  // finite end of a tail piece
};

struct Panel {
  std::size_t piece;
  double lo, hi;
  cplx value;
  double error;
  double floor;  // roundoff level of this panel
  bool operator<(const Panel& other) const { return error < other.error; }
};

class Integrator {
 public:
  Integrator(const ComplexIntegrand& f, const QuadratureSpec& spec) : f_(f), spec_(spec) {}

  cplx mapped(const Piece& p, double t) {
    ++evaluations_;
    switch (p.kind) {
      case PieceKind::Finite:
        return f_(t);
      case PieceKind::LeftTail:
        if (spec_.tail_map == TailMap::Tangent) {
          const double c = std::cos(t);
          return f_(p.anchor - std::tan(t)) / (c * c);
        }
        return f_(p.anchor + std::log1p(-t)) / (1.0 - t);
      case PieceKind::RightTail:
        if (spec_.tail_map == TailMap::Tangent) {
          const double c = std::cos(t);
          return f_(p.anchor + std::tan(t)) / (c * c);
        }
        return f_(p.anchor - std::log1p(-t)) / (1.0 - t);
    }
    return {};
  }

  // QUADPACK qk15 with the usual error rescaling, applied to |.| of complex values.
  Panel kronrod(std::size_t index, const Piece& p, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<cplx, 15> fv;
    fv[7] = mapped(p, centre);
    for (int j = 0; j < 7; ++j) {
      const double dx = half * kKronrodNodes[static_cast<std::size_t>(j)];
      fv[static_cast<std::size_t>(j)] = mapped(p, centre - dx);
      fv[static_cast<std::size_t>(14 - j)] = mapped(p, centre + dx);
    }
    cplx kronrod = kKronrodWeights[7] * fv[7];
    cplx gauss = kGaussWeights[3] * fv[7];
    double abs_sum = kKronrodWeights[7] * std::abs(fv[7]);
    for (int j = 0; j < 7; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const cplx pair = fv[uj] + fv[14 - uj];
      kronrod += kKronrodWeights[uj] * pair;
      abs_sum += kKronrodWeights[uj] * (std::abs(fv[uj]) + std::abs(fv[14 - uj]));
      if (j % 2 == 1) gauss += kGaussWeights[uj / 2] * pair;
    }
    const cplx mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      asc += kKronrodWeights[uj] * (std::abs(fv[uj] - mean) + std::abs(fv[14 - uj] - mean));
    }
    kronrod *= half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);

    double err = std::abs((kronrod - gauss * half));
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double floor = 50.0 * eps * abs_sum;
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(floor, err);
    bool finite = std::isfinite(kronrod.real()) && std::isfinite(kronrod.imag());
    if (!finite) {
      finite_ = false;
      err = std::numeric_limits<double>::infinity();
    }
    return {index, lo, hi, kronrod, err, floor};
  }

  QuadratureResult run(const std::vector<Piece>& pieces, const std::vector<std::array<double, 2>>& ranges) {
    std::priority_queue<Panel> heap;
    std::vector<Panel> frozen;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      heap.push(kronrod(i, pieces[i], ranges[i][0], ranges[i][1]));
    }
    int subdivisions = static_cast<int>(pieces.size());
    QuadratureResult out;
    while (true) {
      cplx total = 0.0;
      double err = 0.0;
      double floor = 0.0;
      // Totals are recomputed from the live panels to avoid drift.
      {
        auto copy = heap;
        while (!copy.empty()) {
          total += copy.top().value;
          err += copy.top().error;
          floor += copy.top().floor;
          copy.pop();
        }
        for (const auto& p : frozen) {
          total += p.value;
          err += p.error;
          floor += p.floor;
        }
      }
      out.value = total;
      out.est_error = err;
      if (!finite_) {
        out.converged = false;
        break;
      }
      const double target = std::max(spec_.abs_tol, spec_.rel_tol * std::abs(total));
      if (err <= target) break;
      // Nothing left but cancellation noise: accept and flag.
      if (err <= 2.0 * floor) {
        out.roundoff_limited = true;
        break;
      }
      if (heap.empty() || subdivisions >= spec_.max_subdivisions) {
        out.converged = false;
        break;
      }
      Panel worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.lo + worst.hi);
      if (worst.error <= 2.0 * worst.floor || !(mid > worst.lo && mid < worst.hi) ||
          (worst.hi - worst.lo) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(std::abs(worst.lo), std::abs(worst.hi))) {
        frozen.push_back(worst);
        continue;
      }
      const Piece& piece = pieces[worst.piece];
      heap.push(kronrod(worst.piece, piece, worst.lo, mid));
      heap.push(kronrod(worst.piece, piece, mid, worst.hi));
      ++subdivisions;
    }
    out.evaluations = evaluations_;
    return out;
  }

 private:
  const ComplexIntegrand& f_;
  const QuadratureSpec& spec_;
  long evaluations_ = 0;
  bool finite_ = true;
};

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 10) {
    throw Error(ErrorCode::DomainError,
                "QuadratureSpec: tolerances must be positive and max_subdivisions >= 10");
  }
}

QuadratureResult integrate(const ComplexIntegrand& f, double lower, double upper,
                           const QuadratureSpec& spec, std::span<const double> breakpoints) {
  spec.validate();
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    throw Error(ErrorCode::DomainError, "integrate: need lower < upper");
  }
  std::vector<double> cuts;
  for (double b : breakpoints) {
    if (std::isfinite(b) && b > lower && b < upper) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const bool left_inf = std::isinf(lower);
  const bool right_inf = std::isinf(upper);
  // A doubly infinite domain needs one finite anchor.
  if (left_inf && right_inf && cuts.empty()) cuts.push_back(0.0);

  std::vector<double> nodes;
  if (!left_inf) nodes.push_back(lower);
  nodes.insert(nodes.end(), cuts.begin(), cuts.end());
  if (!right_inf) nodes.push_back(upper);

  const double tail_end = spec.tail_map == TailMap::Tangent ? 0.5 * std::numbers::pi : 1.0;
  std::vector<Piece> pieces;
  std::vector<std::array<double, 2>> ranges;
  if (left_inf) {
    pieces.push_back({PieceKind::LeftTail, nodes.front()});
    ranges.push_back({0.0, tail_end});
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    pieces.push_back({PieceKind::Finite, 0.0});
    ranges.push_back({nodes[i], nodes[i + 1]});
  }
  if (right_inf) {
    pieces.push_back({PieceKind::RightTail, nodes.back()});
    ranges.push_back({0.0, tail_end});
  }
  Integrator integrator(f, spec);
  return integrator.run(pieces, ranges);
}

QuadratureResult integrate_semi_infinite(const ComplexIntegrand& f, double upper,
                                         const QuadratureSpec& spec,
                                         std::span<const double> breakpoints) {
  return integrate(f, -std::numeric_limits<double>::infinity(), upper, spec, breakpoints);
}

void require_converged(const QuadratureResult& r, const char* who) {
  if (r.converged) return;
  std::ostringstream os;
  os << who << ": quadrature did not converge (partial value " << r.value << ", error estimate "
     << r.est_error << ", " << r.evaluations << " evaluations)";
  throw Error(ErrorCode::NonConvergent, os.str());
}

}  // namespace nhkubo
