#pragma once

#include <numbers>
#include <vector>

#include "nhkubo/greens.hpp"
#include "nhkubo/quadrature.hpp"

namespace nhkubo::tools {

/// (i / 2 pi) Int_{-inf}^0 (G_R - G_A) dw, transposed, by direct quadrature of
/// each entry. Independent of the closed-form log evaluation.
inline ComplexMatrix occupation_by_quadrature(const ComplexMatrix& h, const Framework& fw) {
  const Eigen::Index n = h.rows();
  ComplexMatrix out(n, n);
  const QuadratureSpec spec{1e-11, 1e-13, 4000, TailMap::Tangent};
  std::vector<double> cuts;
  for (const cplx& xi : sorted_eigenvalues(h)) cuts.push_back(xi.real());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const QuadratureResult r = integrate_semi_infinite(
          [&](double w) {
            const ComplexMatrix d = g_retarded(h, fw, w) - advanced_propagator(h, fw, w);
            return kI * d(j, i) / (2.0 * std::numbers::pi);
          },
          0.0, spec, cuts);
      require_converged(r, "occupation_by_quadrature");
      out(i, j) = r.value;
    }
  }
  return out;
}

}  // namespace nhkubo::tools
