#include "nhkubo/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ExceptionalPoint: return "ExceptionalPoint";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::MissingMetric: return "MissingMetric";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::DegenerateSelection: return "DegenerateSelection";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
    case ErrorCode::NonConvergent: return "NonConvergent";
  }
  return "Unknown";
}

namespace pauli {
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }
}  // namespace pauli

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

void require_square_finite(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(who) + ": NaN or Inf entry");
}

double frobenius(const ComplexMatrix& m) { return m.norm(); }

double hermiticity_residual(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

ComplexMatrix checked_inverse(const ComplexMatrix& m, const char* who) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (m.rows() == 2 && m.cols() == 2) {
    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double scale = m.cwiseAbs2().sum();
    if (std::abs(det) <= 16.0 * eps * scale || std::abs(det) == 0.0) {
      throw Error(ErrorCode::SingularMatrix, std::string(who) + ": singular 2x2 matrix");
    }
    ComplexMatrix inv(2, 2);
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
  }
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  if (!(lu.rcond() > 16.0 * eps)) {
    throw Error(ErrorCode::SingularMatrix, std::string(who) + ": matrix is numerically singular");
  }
  return lu.inverse();
}

}  // namespace nhkubo
