#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nhkubo {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix identity(Eigen::Index dim = 2);
}  // namespace pauli

bool all_finite(const ComplexMatrix& m);

// Throws Error{NonFinite} / Error{DimensionMismatch} for non-square or NaN input.
void require_square_finite(const ComplexMatrix& m, const char* who);

double frobenius(const ComplexMatrix& m);

// ||M - M^dagger||_F.
double hermiticity_residual(const ComplexMatrix& m);

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Coefficient matrix Gamma of the anti-Hermitian part: M = herm + i * Gamma, Gamma Hermitian.
inline ComplexMatrix antihermitian_coefficient(const ComplexMatrix& m) {
  return (m - m.adjoint()) / (2.0 * kI);
}

// Inverse through partial-pivot LU; throws Error{SingularMatrix} when the pivot vanishes.
ComplexMatrix checked_inverse(const ComplexMatrix& m, const char* who);

}  // namespace nhkubo
