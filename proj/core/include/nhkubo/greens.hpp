#pragma once

#include <string_view>

#include "nhkubo/linalg.hpp"
#include "nhkubo/spectral.hpp"

namespace nhkubo {

enum class FrameworkKind { Standard, PHQM, Postselected };

std::string_view to_string(FrameworkKind kind);

/// Physical prescription for a non-Hermitian quasiparticle Hamiltonian together
/// with a uniform decay rate gamma (energy units).
///
/// Standard: the anti-Hermitian part of H is a retarded self-energy, so
/// G_A = G_R^dagger and stability needs Im(H - i gamma) negative definite.
/// PHQM: H is pseudo-Hermitian with a real spectrum, G_A = eta^{-1} G_R^dagger eta.
/// Postselected: no Green's functions; only stationary-state observables.
struct Framework {
  FrameworkKind kind = FrameworkKind::Standard;
  double gamma = 0.0;

  static Framework standard(double gamma) { return {FrameworkKind::Standard, gamma}; }
  static Framework phqm(double gamma) { return {FrameworkKind::PHQM, gamma}; }
  static Framework postselected() { return {FrameworkKind::Postselected, 0.0}; }
};

// Throws ConstraintViolation (Standard instability, gamma < 0, Postselected) or
// ComplexSpectrum/ExceptionalPoint (PHQM without a real diagonalizable spectrum).
void validate_framework(const ComplexMatrix& h, const Framework& fw);

// (omega - H + i gamma)^{-1}; the same formula for Standard and PHQM.
ComplexMatrix g_retarded(const ComplexMatrix& h, const Framework& fw, double omega);

// Standard only: G_R(omega)^dagger. PHQM without a metric throws MissingMetric.
ComplexMatrix g_advanced(const ComplexMatrix& h, const Framework& fw, double omega);

// Standard: G_R^dagger. PHQM: eta^{-1} G_R^dagger eta (generalized causal relation).
ComplexMatrix g_advanced(const ComplexMatrix& h, const PseudoMetric& eta, const Framework& fw,
                         double omega);

// Metric-free route used in the response integrals. For PHQM this is the
// resolvent (omega - H - i gamma)^{-1}, which equals eta^{-1} G_R^dagger eta by
// the intertwining relation.
ComplexMatrix advanced_propagator(const ComplexMatrix& h, const Framework& fw, double omega);

inline double matsubara_frequency(int n, double temperature) {
  return (2.0 * n + 1.0) * 3.14159265358979323846 * temperature;
}

/// Fermionic Matsubara Green's function for H = h0 + i Gamma.
/// Standard: (i w_n - h0 - i sgn(w_n) (Gamma - gamma))^{-1}.
/// PHQM:     (i w_n - H + i sgn(w_n) gamma)^{-1}.
ComplexMatrix g_matsubara(const ComplexMatrix& h0, const ComplexMatrix& gamma_matrix,
                          const Framework& fw, int n, double temperature);

// A(omega) = i tr[G_R - G_A] with the framework's advanced function.
double spectral_function(const ComplexMatrix& h, const Framework& fw, double omega);

// Poles of G_R (eigenvalues of H - i gamma) and of G_A for the framework.
ComplexVector retarded_poles(const ComplexMatrix& h, const Framework& fw);
ComplexVector advanced_poles(const ComplexMatrix& h, const Framework& fw);

/// T csc(pi T tau): imaginary-time image of i sgn(w_n).
double action_kernel(double tau, double temperature);

struct MatsubaraSumResult {
  double value = 0.0;
  double error_bound = 0.0;
  long terms = 0;
};

/// Fejer (Cesaro) mean of the symmetric partial sums T sum_{-N <= n < N} i sgn(w_n) e^{-i w_n tau}.
/// The raw partial sums oscillate without converging; the Cesaro mean converges
/// with |error| <= T / (M sin^2(pi T tau)), and M is chosen from that bound.
MatsubaraSumResult matsubara_sign_sum(double tau, double temperature, double abs_tol);

}  // namespace nhkubo
