#pragma once

#include "nhkubo/greens.hpp"
#include "nhkubo/spectral.hpp"

namespace nhkubo {

/// Zero-temperature single-particle density matrix, entries(i, j) = <c_i^dagger c_j>.
struct OccupationMatrix {
  ComplexMatrix entries;

  // <O> = Sum_ij O_ij <c_i^dagger c_j>.
  cplx expectation(const ComplexMatrix& op) const;
};

/// Occupation from the retarded/advanced pole decomposition,
/// (i / 2 pi) Sum_a [Pi^R_a log(xi_a) - Pi^A_a log(xi_a^*)], xi_a = eig(H) - i gamma,
/// with Pi^R_a = |R_a><L_a|. Pi^A_a is |L_a><R_a| for Standard and |R_a><L_a| for
/// PHQM. Principal branch of log.
///
/// Throws DegenerateSpectrum for coincident eigenvalues, BranchAmbiguity when some
/// xi_a lies on the negative real axis (gamma = 0 with a filled level), and the
/// framework's own precondition errors. Postselected has no occupation matrix.
OccupationMatrix occupation(const ComplexMatrix& h, const Framework& fw);

/// Standard / PHQM: tr over the occupation matrix. Postselected: <R_0|O|R_0> / <R_0|R_0>
/// with R_0 chosen by select_ground_state.
cplx expectation(const ComplexMatrix& op, const ComplexMatrix& h, const Framework& fw);

/// PHQM filling weights -(1/pi) arg(xi_a - i gamma), in the eigenvalue order of eig_biortho.
Eigen::VectorXd phqm_weights(const BiorthoSystem& sys, double gamma);

/// Index of the eigenvalue with the largest imaginary part; ties (within
/// tol.real * max|xi|) go to the smallest real part. Throws DegenerateSelection
/// when both keys tie.
Eigen::Index select_ground_state(const BiorthoSystem& sys, const SpectralTolerances& tol = {});

/// Non-Hermitian thermal state e^{-beta H} eta^{-1} / tr(...). Checks that the
/// result is Hermitian and satisfies H rho = rho H^dagger.
ComplexMatrix nhts_density(const ComplexMatrix& h, const PseudoMetric& eta, double beta,
                           const SpectralTolerances& tol = {});

}  // namespace nhkubo
