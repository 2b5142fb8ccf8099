#include "nhkubo/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nhkubo/errors.hpp"

namespace nhkubo {
namespace {

void reject_postselected(const Framework& fw, const char* who) {
  if (fw.kind == FrameworkKind::Postselected) {
    throw Error(ErrorCode::ConstraintViolation,
                std::string(who) + ": the postselected framework carries no Green's functions");
  }
}

ComplexMatrix shifted_inverse(const ComplexMatrix& h, cplx shift, const char* who) {
  ComplexMatrix m = -h;
  m.diagonal().array() += shift;
  try {
    return checked_inverse(m, who);
  } catch (const Error&) {
    // Report the pole that the frequency sits on.
    const ComplexVector poles = sorted_eigenvalues(h);
    Eigen::Index nearest = 0;
    (poles.array() - shift).abs().minCoeff(&nearest);
    std::ostringstream os;
    os << who << ": frequency " << shift << " coincides with eigenvalue " << poles(nearest);
    throw Error(ErrorCode::SingularMatrix, os.str());
  }
}

}  // namespace

std::string_view to_string(FrameworkKind kind) {
  switch (kind) {
    case FrameworkKind::Standard: return "standard";
    case FrameworkKind::PHQM: return "phqm";
    case FrameworkKind::Postselected: return "postselected";
  }
  return "unknown";
}

void validate_framework(const ComplexMatrix& h, const Framework& fw) {
  require_square_finite(h, "validate_framework");
  if (!(fw.gamma >= 0.0)) {
    throw Error(ErrorCode::ConstraintViolation, "decay rate gamma must be non-negative");
  }
  switch (fw.kind) {
    case FrameworkKind::Standard: {
      ComplexMatrix decay = antihermitian_coefficient(h);
      decay.diagonal().array() -= fw.gamma;
      const double top = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(decay, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .maxCoeff();
      if (!(top < 0.0)) {
        std::ostringstream os;
        os << "standard framework is dynamically unstable: anti-Hermitian part of H - i gamma has "
              "eigenvalue "
           << top << " >= 0 (gamma = " << fw.gamma << ")";
        throw Error(ErrorCode::ConstraintViolation, os.str());
      }
      break;
    }
    case FrameworkKind::PHQM:
      (void)pseudo_metric_of(h);
      break;
    case FrameworkKind::Postselected:
      break;
  }
}

ComplexMatrix g_retarded(const ComplexMatrix& h, const Framework& fw, double omega) {
  reject_postselected(fw, "g_retarded");
  return shifted_inverse(h, cplx(omega, fw.gamma), "g_retarded");
}

ComplexMatrix advanced_propagator(const ComplexMatrix& h, const Framework& fw, double omega) {
  reject_postselected(fw, "advanced_propagator");
  if (fw.kind == FrameworkKind::Standard) return g_retarded(h, fw, omega).adjoint();
  return shifted_inverse(h, cplx(omega, -fw.gamma), "advanced_propagator");
}

ComplexMatrix g_advanced(const ComplexMatrix& h, const Framework& fw, double omega) {
  if (fw.kind == FrameworkKind::PHQM) {
    throw Error(ErrorCode::MissingMetric, "g_advanced: PHQM requires the pseudo-metric");
  }
  reject_postselected(fw, "g_advanced");
  return g_retarded(h, fw, omega).adjoint();
}

ComplexMatrix g_advanced(const ComplexMatrix& h, const PseudoMetric& eta, const Framework& fw,
                         double omega) {
  if (fw.kind != FrameworkKind::PHQM) return g_advanced(h, fw, omega);
  if (eta.dim() != h.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "g_advanced: metric and Hamiltonian sizes differ");
  }
  return eta.eta_inv * g_retarded(h, fw, omega).adjoint() * eta.eta;
}

ComplexMatrix g_matsubara(const ComplexMatrix& h0, const ComplexMatrix& gamma_matrix,
                          const Framework& fw, int n, double temperature) {
  reject_postselected(fw, "g_matsubara");
  require_square_finite(h0, "g_matsubara");
  if (h0.rows() != gamma_matrix.rows() || h0.cols() != gamma_matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "g_matsubara: h0 and Gamma sizes differ");
  }
  if (!(temperature > 0.0)) throw Error(ErrorCode::DomainError, "g_matsubara: T must be positive");
  const double wn = matsubara_frequency(n, temperature);
  const double sgn = wn > 0.0 ? 1.0 : -1.0;
  const auto id = ComplexMatrix::Identity(h0.rows(), h0.cols());

  ComplexMatrix inverse_g;
  if (fw.kind == FrameworkKind::Standard) {
    inverse_g = kI * wn * id - h0 - kI * sgn * (gamma_matrix - fw.gamma * id);
  } else {
    inverse_g = kI * wn * id - (h0 + kI * gamma_matrix) + kI * sgn * fw.gamma * id;
  }
  return checked_inverse(inverse_g, "g_matsubara");
}

double spectral_function(const ComplexMatrix& h, const Framework& fw, double omega) {
  const cplx a = kI * (g_retarded(h, fw, omega) - advanced_propagator(h, fw, omega)).trace();
  if (std::abs(a.imag()) > 1e-10 * std::max(1.0, std::abs(a.real()))) {
    std::ostringstream os;
    os << "spectral_function: imaginary residual " << a.imag();
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  return a.real();
}

ComplexVector retarded_poles(const ComplexMatrix& h, const Framework& fw) {
  reject_postselected(fw, "retarded_poles");
  return sorted_eigenvalues(h).array() - kI * fw.gamma;
}

ComplexVector advanced_poles(const ComplexMatrix& h, const Framework& fw) {
  reject_postselected(fw, "advanced_poles");
  if (fw.kind == FrameworkKind::Standard) return retarded_poles(h, fw).conjugate();
  return sorted_eigenvalues(h).array() + kI * fw.gamma;
}

double action_kernel(double tau, double temperature) {
  if (!(temperature > 0.0) || !(tau > 0.0) || !(tau < 1.0 / temperature)) {
    std::ostringstream os;
    os << "action_kernel: tau = " << tau << " outside (0, 1/T) for T = " << temperature;
    throw Error(ErrorCode::DomainError, os.str());
  }
  return temperature / std::sin(std::numbers::pi * temperature * tau);
}

MatsubaraSumResult matsubara_sign_sum(double tau, double temperature, double abs_tol) {
  if (!(temperature > 0.0) || !(tau > 0.0) || !(tau < 1.0 / temperature) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::DomainError, "matsubara_sign_sum: need T > 0, 0 < tau < 1/T, tol > 0");
  }
  const double s = std::sin(std::numbers::pi * temperature * tau);
  constexpr long max_terms = 50'000'000;
  const long terms = std::min(max_terms, static_cast<long>(std::ceil(temperature / (abs_tol * s * s))));

  // partial: symmetric partial sum S_N; running: sum of S_1..S_M.
  cplx partial = 0.0;
  cplx running = 0.0;
  for (long n = 0; n < terms; ++n) {
    const double wp = matsubara_frequency(static_cast<int>(n), temperature);
    // n >= 0 has sgn +1; its partner -n-1 has frequency -wp and sgn -1.
    partial += kI * std::exp(-kI * wp * tau) - kI * std::exp(kI * wp * tau);
    running += partial;
  }
  MatsubaraSumResult out;
  out.value = temperature * running.real() / static_cast<double>(terms);
  out.error_bound = temperature / (static_cast<double>(terms) * s * s);
  out.terms = terms;
  return out;
}

}  // namespace nhkubo
