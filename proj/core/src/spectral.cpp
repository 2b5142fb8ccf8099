#include "nhkubo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo {
namespace {

// Re ascending, then Im descending.
bool spectral_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() > b.imag();
}

// Rotate the phase so the largest-magnitude component is real and positive.
void fix_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const double mag = std::abs(v(imax));
  if (mag > 0.0) v *= std::conj(v(imax)) / mag;
}

struct RawEigen {
  ComplexVector values;
  ComplexMatrix vectors;
};

RawEigen eig_2x2(const ComplexMatrix& m) {
  const cplx a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const cplx half_trace = 0.5 * (a + d);
  const cplx half_diff = 0.5 * (a - d);
  const cplx root = std::sqrt(half_diff * half_diff + b * c);
  RawEigen out{ComplexVector(2), ComplexMatrix(2, 2)};
  out.values << half_trace - root, half_trace + root;

  const double scale = m.cwiseAbs().maxCoeff();
  for (int i = 0; i < 2; ++i) {
    const cplx lam = out.values(i);
    Eigen::Vector2cd v1(b, lam - a);
    Eigen::Vector2cd v2(lam - d, c);
    Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() <= 1e-14 * std::max(scale, 1e-300)) {
      // M is (numerically) a multiple of the identity: any basis diagonalizes it.
      v = Eigen::Vector2cd::Unit(i);
    }
    out.vectors.col(i) = v.normalized();
  }
  return out;
}

RawEigen eig_general(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFinite, "eig_biortho: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

ComplexMatrix BiorthoSystem::reconstruct() const {
  return matrix_function(*this, [](const cplx& xi) { return xi; });
}

ComplexMatrix BiorthoSystem::projector(Eigen::Index a) const {
  return right.col(a) * left.col(a).adjoint();
}

cplx BiorthoSystem::matrix_element(const ComplexMatrix& op, Eigen::Index a, Eigen::Index b) const {
  return left.col(a).dot(op * right.col(b));
}

BiorthoSystem eig_biortho(const ComplexMatrix& m, const SpectralTolerances& tol) {
  require_square_finite(m, "eig_biortho");
  RawEigen raw = m.rows() == 2 ? eig_2x2(m) : eig_general(m);

  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return spectral_less(raw.values(i), raw.values(j));
  });

  BiorthoSystem sys;
  sys.eigenvalues.resize(n);
  sys.right.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto src = order[static_cast<std::size_t>(a)];
    sys.eigenvalues(a) = raw.values(src);
    sys.right.col(a) = raw.vectors.col(src).normalized();
    fix_phase(sys.right.col(a));
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(sys.right);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  sys.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(sys.condition <= tol.cond_max)) {
    std::ostringstream os;
    os << "eigenvector condition number " << sys.condition << " exceeds " << tol.cond_max;
    throw Error(ErrorCode::ExceptionalPoint, os.str());
  }

  sys.left = sys.right.inverse().adjoint();
  return sys;
}

ComplexVector sorted_eigenvalues(const ComplexMatrix& m) {
  require_square_finite(m, "sorted_eigenvalues");
  ComplexVector v = m.rows() == 2 ? eig_2x2(m).values : ComplexVector(m.eigenvalues());
  std::sort(v.data(), v.data() + v.size(), spectral_less);
  return v;
}

PseudoMetric pseudo_metric(const BiorthoSystem& sys, const SpectralTolerances& tol) {
  const double max_abs = sys.eigenvalues.cwiseAbs().maxCoeff();
  const double max_imag = sys.eigenvalues.imag().cwiseAbs().maxCoeff();
  if (max_imag > tol.real * max_abs) {
    std::ostringstream os;
    os << "max |Im xi| = " << max_imag << " exceeds " << tol.real << " * max|xi| = " << tol.real * max_abs;
    throw Error(ErrorCode::ComplexSpectrum, os.str());
  }

  PseudoMetric pm;
  pm.eta = hermitian_part(sys.left * sys.left.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(pm.eta);
  const Eigen::VectorXd& w = solver.eigenvalues();
  pm.min_eigenvalue = w.minCoeff();
  if (!(pm.min_eigenvalue > 0.0)) {
    std::ostringstream os;
    os << "metric eigenvalue " << pm.min_eigenvalue << " is not positive";
    throw Error(ErrorCode::NotPositiveDefinite, os.str());
  }
  const ComplexMatrix& u = solver.eigenvectors();
  const Eigen::VectorXd root = w.cwiseSqrt();
  pm.eta_sqrt = u * root.cast<cplx>().asDiagonal() * u.adjoint();
  pm.eta_inv_sqrt = u * root.cwiseInverse().cast<cplx>().asDiagonal() * u.adjoint();
  pm.eta_inv = u * w.cwiseInverse().cast<cplx>().asDiagonal() * u.adjoint();
  return pm;
}

PseudoMetric pseudo_metric_of(const ComplexMatrix& h, const SpectralTolerances& tol) {
  return pseudo_metric(eig_biortho(h, tol), tol);
}

ComplexMatrix isospectral_map(const ComplexMatrix& h, const PseudoMetric& eta,
                              const SpectralTolerances& tol) {
  require_square_finite(h, "isospectral_map");
  if (h.rows() != eta.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "isospectral_map: metric and Hamiltonian sizes differ");
  }
  const ComplexMatrix mapped = eta.eta_sqrt * h * eta.eta_inv_sqrt;
  const double residual = hermiticity_residual(mapped);
  if (residual > tol.metric * mapped.norm()) {
    std::ostringstream os;
    os << "||h - h^dagger||_F = " << residual << " (metric inconsistent with H)";
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  return hermitian_part(mapped);
}

ComplexMatrix transform_observable(const ComplexMatrix& op, const PseudoMetric& eta,
                                   FrameDirection direction) {
  if (op.rows() != eta.dim() || op.cols() != eta.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "transform_observable: operator and metric sizes differ");
  }
  if (direction == FrameDirection::ToNHFrame) return eta.eta_inv_sqrt * op * eta.eta_sqrt;
  return eta.eta_sqrt * op * eta.eta_inv_sqrt;
}

OverlapMatrices overlaps(const BiorthoSystem& sys) {
  return {sys.left.adjoint() * sys.right, sys.left.adjoint() * sys.left,
          sys.right.adjoint() * sys.right};
}

ComplexMatrix time_evolution(const BiorthoSystem& sys, double t) {
  return matrix_function(sys, [t](const cplx& xi) { return std::exp(-kI * xi * t); });
}

}  // namespace nhkubo
