#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nhkubo/linalg.hpp"

namespace nhkubo {

enum class TailMap {
  Tangent,      // x = b - tan(t): suited to algebraic (1/x^2) decay
  Exponential,  // x = b + log(1 - u): suited to exponential decay
};

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  TailMap tail_map = TailMap::Tangent;

  // Throws DomainError unless tolerances > 0 and max_subdivisions >= 10.
  void validate() const;
};

struct QuadratureResult {
  cplx value{0.0, 0.0};
  double est_error = 0.0;
  long evaluations = 0;
  bool converged = true;
  // The error estimate is set by floating-point cancellation, not by resolution.
  bool roundoff_limited = false;
};

using ComplexIntegrand = std::function<cplx(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [lower, upper].
///
/// Either bound may be infinite; infinite pieces are compactified with the
/// selected tail map. `breakpoints` (any order, duplicates and out-of-range values
/// are dropped) split the domain where f has kinks or narrow peaks. On an
/// exhausted subdivision budget or a non-finite evaluation the partial value is
/// returned with converged = false. When the remaining error is at the
/// cancellation floor of the integrand the result counts as converged and
/// roundoff_limited is set.
QuadratureResult integrate(const ComplexIntegrand& f, double lower, double upper,
                           const QuadratureSpec& spec, std::span<const double> breakpoints = {});

// Domains (-inf, upper] or (-inf, inf).
QuadratureResult integrate_semi_infinite(const ComplexIntegrand& f, double upper,
                                         const QuadratureSpec& spec,
                                         std::span<const double> breakpoints = {});

// Throws Error{NonConvergent} carrying the partial value in the message.
void require_converged(const QuadratureResult& r, const char* who);

}  // namespace nhkubo
