#pragma once

#include <vector>

#include "nhkubo/linalg.hpp"

namespace nhkubo {

struct SpectralTolerances {
  double biortho = 1e-10;  // relative
  double metric = 1e-10;   // relative
  double real = 1e-9;      // |Im xi| <= real * max|xi|
  double cond_max = 1e8;   // eigenvector-matrix condition number at which an EP is declared
};

/// Eigenvalues with biorthonormal right/left eigenvectors of a (generally
/// non-Hermitian) matrix.
///
/// Column a of `right` is |R_a> with unit 2-norm; column a of `left` is |L_a>,
/// scaled so that <L_a|R_b> = delta_ab. Ordering is Re ascending, then Im
/// descending.
struct BiorthoSystem {
  ComplexVector eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;
  double condition = 1.0;

  Eigen::Index dim() const { return eigenvalues.size(); }
  ComplexVector right_vector(Eigen::Index a) const { return right.col(a); }
  ComplexVector left_vector(Eigen::Index a) const { return left.col(a); }

  // Sum_a xi_a |R_a><L_a|.
  ComplexMatrix reconstruct() const;
  // |R_a><L_a|.
  ComplexMatrix projector(Eigen::Index a) const;
  // <L_a|O|R_b>.
  cplx matrix_element(const ComplexMatrix& op, Eigen::Index a, Eigen::Index b) const;
};

BiorthoSystem eig_biortho(const ComplexMatrix& m, const SpectralTolerances& tol = {});

/// Positive-definite metric eta = Sum_a |L_a><L_a| with cached square roots.
struct PseudoMetric {
  ComplexMatrix eta;
  ComplexMatrix eta_inv;
  ComplexMatrix eta_sqrt;
  ComplexMatrix eta_inv_sqrt;
  double min_eigenvalue = 0.0;

  Eigen::Index dim() const { return eta.rows(); }
};

PseudoMetric pseudo_metric(const BiorthoSystem& sys, const SpectralTolerances& tol = {});

// Convenience: eig_biortho followed by pseudo_metric.
PseudoMetric pseudo_metric_of(const ComplexMatrix& h, const SpectralTolerances& tol = {});

/// Hermitian isospectral counterpart h = eta^{1/2} H eta^{-1/2}.
ComplexMatrix isospectral_map(const ComplexMatrix& h, const PseudoMetric& eta,
                              const SpectralTolerances& tol = {});

enum class FrameDirection { ToNHFrame, ToHermitianFrame };

// ToNHFrame: eta^{-1/2} O eta^{1/2}. ToHermitianFrame: eta^{1/2} O eta^{-1/2}.
ComplexMatrix transform_observable(const ComplexMatrix& op, const PseudoMetric& eta,
                                   FrameDirection direction);

/// Overlap matrices S^{LR}, S^{LL}, S^{RR} of a biorthogonal system; these are the
/// anticommutators of the corresponding quasiparticle operators.
struct OverlapMatrices {
  ComplexMatrix left_right;
  ComplexMatrix left_left;
  ComplexMatrix right_right;
};

OverlapMatrices overlaps(const BiorthoSystem& sys);

// f(M) = Sum_a f(xi_a) |R_a><L_a| for a diagonalizable matrix.
template <class F>
ComplexMatrix matrix_function(const BiorthoSystem& sys, F&& f) {
  ComplexMatrix scaled = sys.right;
  for (Eigen::Index a = 0; a < sys.dim(); ++a) scaled.col(a) *= f(sys.eigenvalues(a));
  return scaled * sys.left.adjoint();
}

// exp(-i H t) through the biorthogonal decomposition.
ComplexMatrix time_evolution(const BiorthoSystem& sys, double t);

// Sorted eigenvalues (Re asc, Im desc) of any square matrix; no EP check.
ComplexVector sorted_eigenvalues(const ComplexMatrix& m);

}  // namespace nhkubo
