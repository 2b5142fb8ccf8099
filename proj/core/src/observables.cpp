#include "nhkubo/observables.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo {
namespace {

constexpr double kBranchTol = 1e-6;

void require_nondegenerate(const BiorthoSystem& sys, const char* who) {
  const double scale = std::max(1.0, sys.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < sys.dim(); ++i) {
    for (Eigen::Index j = i + 1; j < sys.dim(); ++j) {
      if (std::abs(sys.eigenvalues(i) - sys.eigenvalues(j)) <= 1e-10 * scale) {
        std::ostringstream os;
        os << who << ": eigenvalues " << sys.eigenvalues(i) << " and " << sys.eigenvalues(j)
           << " coincide";
        throw Error(ErrorCode::DegenerateSpectrum, os.str());
      }
    }
  }
}

cplx checked_log(cplx xi, const char* who) {
  if (xi == cplx(0.0, 0.0) || std::abs(std::abs(std::arg(xi)) - std::numbers::pi) < kBranchTol) {
    std::ostringstream os;
    os << who << ": pole " << xi << " lies on the branch cut; supply gamma > 0";
    throw Error(ErrorCode::BranchAmbiguity, os.str());
  }
  return std::log(xi);
}

}  // namespace

cplx OccupationMatrix::expectation(const ComplexMatrix& op) const {
  if (op.rows() != entries.rows() || op.cols() != entries.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "expectation: operator and occupation sizes differ");
  }
  return (op.array() * entries.array()).sum();
}

OccupationMatrix occupation(const ComplexMatrix& h, const Framework& fw) {
  if (fw.kind == FrameworkKind::Postselected) {
    throw Error(ErrorCode::ConstraintViolation,
                "occupation: the postselected framework has no occupation matrix");
  }
  validate_framework(h, fw);
  const BiorthoSystem sys = eig_biortho(h);
  require_nondegenerate(sys, "occupation");

  // M = Sum_a (i/2pi)[Pi^R log xi - Pi^A log xi^*]; entries are M transposed.
  const Eigen::Index n = sys.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const cplx pref = kI / (2.0 * std::numbers::pi);
  for (Eigen::Index a = 0; a < n; ++a) {
    const cplx xi = sys.eigenvalues(a) - kI * fw.gamma;
    const cplx log_r = checked_log(xi, "occupation");
    const cplx log_a = std::conj(log_r);
    const ComplexMatrix pi_r = sys.projector(a);
    if (fw.kind == FrameworkKind::Standard) {
      const ComplexMatrix pi_a = sys.left.col(a) * sys.right.col(a).adjoint();
      m += pref * (pi_r * log_r - pi_a * log_a);
    } else {
      m += pref * (log_r - log_a) * pi_r;
    }
  }
  return {m.transpose()};
}

cplx expectation(const ComplexMatrix& op, const ComplexMatrix& h, const Framework& fw) {
  if (fw.kind != FrameworkKind::Postselected) return occupation(h, fw).expectation(op);
  const BiorthoSystem sys = eig_biortho(h);
  if (op.rows() != sys.dim() || op.cols() != sys.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "expectation: operator and Hamiltonian sizes differ");
  }
  const ComplexVector r0 = sys.right.col(select_ground_state(sys));
  return r0.dot(op * r0) / r0.squaredNorm();
}

Eigen::VectorXd phqm_weights(const BiorthoSystem& sys, double gamma) {
  Eigen::VectorXd w(sys.dim());
  for (Eigen::Index a = 0; a < sys.dim(); ++a) {
    const cplx xi = sys.eigenvalues(a) - kI * gamma;
    w(a) = -std::imag(checked_log(xi, "phqm_weights")) / std::numbers::pi;
  }
  return w;
}

Eigen::Index select_ground_state(const BiorthoSystem& sys, const SpectralTolerances& tol) {
  const ComplexVector& xi = sys.eigenvalues;
  const double tie = tol.real * std::max(1.0, xi.cwiseAbs().maxCoeff());
  Eigen::Index best = 0;
  for (Eigen::Index a = 1; a < xi.size(); ++a) {
    const double d_imag = xi(a).imag() - xi(best).imag();
    if (d_imag > tie || (std::abs(d_imag) <= tie && xi(a).real() < xi(best).real() - tie)) best = a;
  }
  for (Eigen::Index a = 0; a < xi.size(); ++a) {
    if (a != best && std::abs(xi(a).imag() - xi(best).imag()) <= tie &&
        std::abs(xi(a).real() - xi(best).real()) <= tie) {
      std::ostringstream os;
      os << "select_ground_state: " << xi(a) << " and " << xi(best) << " tie under both keys";
      throw Error(ErrorCode::DegenerateSelection, os.str());
    }
  }
  return best;
}

ComplexMatrix nhts_density(const ComplexMatrix& h, const PseudoMetric& eta, double beta,
                           const SpectralTolerances& tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::DomainError, "nhts_density: beta must be positive and finite");
  }
  const BiorthoSystem sys = eig_biortho(h, tol);
  if (eta.dim() != sys.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "nhts_density: metric and Hamiltonian sizes differ");
  }
  const double max_abs = sys.eigenvalues.cwiseAbs().maxCoeff();
  if (sys.eigenvalues.imag().cwiseAbs().maxCoeff() > tol.real * max_abs) {
    throw Error(ErrorCode::ComplexSpectrum, "nhts_density: spectrum is not real");
  }
  // Shift by the lowest level so large beta does not underflow.
  const double floor = sys.eigenvalues.real().minCoeff();
  const ComplexMatrix boltzmann =
      matrix_function(sys, [&](const cplx& xi) { return std::exp(-beta * (xi.real() - floor)); });
  ComplexMatrix rho = boltzmann * eta.eta_inv;
  rho /= rho.trace();

  const double norm_rho = rho.norm();
  if (hermiticity_residual(rho) > 1e-10 * norm_rho) {
    std::ostringstream os;
    os << "nhts_density: ||rho - rho^dagger||_F = " << hermiticity_residual(rho);
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  const double stationarity = (h * rho - rho * h.adjoint()).norm();
  if (stationarity > 1e-9 * h.norm() * norm_rho) {
    std::ostringstream os;
    os << "nhts_density: ||H rho - rho H^dagger||_F = " << stationarity;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  return hermitian_part(rho);
}

}  // namespace nhkubo
