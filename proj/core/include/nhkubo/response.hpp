#pragma once

#include <functional>
#include <vector>

#include "nhkubo/greens.hpp"
#include "nhkubo/quadrature.hpp"
#include "nhkubo/spectral.hpp"

namespace nhkubo {

/// Result of a response integral. Conductivities are in units e^2 v_F / (2 pi),
/// sum rules and correlation functions in units e^2 v_F.
struct ResponseResult {
  cplx value{0.0, 0.0};
  double est_error = 0.0;
  long evaluations = 0;
};

using MatrixOfK = std::function<ComplexMatrix(double)>;

/// A q -> 0 Kubo problem on a one-dimensional continuum: H(k), vertices A(k),
/// B(k), a framework and temperature. Momentum runs over the whole real line with
/// measure dk / 2 pi; the chemical potential is part of H.
struct KuboProblem {
  MatrixOfK hamiltonian;
  MatrixOfK vertex_a;
  MatrixOfK vertex_b;
  Framework framework;
  double temperature = 0.0;
  QuadratureSpec omega_quad{1e-10, 1e-13, 4000, TailMap::Tangent};
  QuadratureSpec k_quad{1e-8, 1e-11, 2000, TailMap::Tangent};
  // Run validate_framework on H(k) at every sampled momentum.
  bool validate_each_k = true;
};

/// chi(Omega) = -Int dk/2pi Int dw/(2 pi i) n_F(w)
///              tr[(G_R - G_A)(w) A G_R(w + Omega) B + G_A(w - Omega) A (G_R - G_A)(w) B].
ResponseResult chi_local(const KuboProblem& problem, double omega);

/// sigma(Omega) = (i / Omega)(chi(Omega) - chi(0)) for Omega != 0, evaluated as a
/// single nested integral of the difference. Real and imaginary parts are both
/// returned.
ResponseResult sigma_optical(const KuboProblem& problem, double omega);

/// DC conductivity. At T = 0: tr[G_A(0) A G_R(0) B] plus the Fermi-sea integral of
/// tr[G_R A G_R^2 B + G_A^2 A G_A B]; at T > 0 the Fermi-surface term carries
/// -dn_F/dw.
ResponseResult sigma_dc(const KuboProblem& problem);

/// -pi Re chi(0), the right-hand side of the optical sum rule. Needs T = 0.
ResponseResult optical_sum(const KuboProblem& problem);

/// Lehmann form of the clean response for a real-spectrum (PHQM) model:
/// Int dk/2pi Sum_ab <L_a|A|R_b><L_b|B|R_a> (n_a - n_b) / (Omega + xi_a - xi_b + i delta0).
struct CleanKuboProblem {
  std::function<BiorthoSystem(double)> system;
  MatrixOfK vertex_a;
  MatrixOfK vertex_b;
  double temperature = 0.0;
  double mu = 0.0;
  double delta0 = 1e-6;
  QuadratureSpec k_quad{1e-8, 1e-11, 2000, TailMap::Tangent};
};

ResponseResult chi_phqm_clean(const CleanKuboProblem& problem, double omega);

// Single-k Lehmann sum (no momentum integral).
cplx lehmann_sum(const BiorthoSystem& sys, const ComplexMatrix& a, const ComplexMatrix& b,
                 double omega, double temperature, double mu, double delta0);

struct KramersKronigOptions {
  // Largest admissible fraction of the integrated weight carried by the c/Omega^2 tails.
  double tail_tol = 0.05;
  int min_points = 8;
  // Largest admissible spacing as a fraction of the (extended) sample span.
  double max_spacing_fraction = 0.1;
};

struct KramersKronigPoint {
  double omega = 0.0;
  double sigma_imag = 0.0;
  double error = 0.0;
};

/// sigma''(Omega) = -(1/pi) P Int sigma'(x) / (x - Omega) dx from sampled sigma'.
///
/// sigma' is interpolated linearly between samples and continued beyond both ends
/// as c / x^2. Samples with Omega >= 0 only are extended as an even function.
/// The error column is a Richardson estimate from the same transform on every
/// other sample. Throws InsufficientGrid when the grid is too short, unsorted,
/// too coarse, or the tails carry too much weight.
std::vector<KramersKronigPoint> kramers_kronig(const std::vector<double>& omega,
                                               const std::vector<double>& sigma_real,
                                               const KramersKronigOptions& options = {});

// Fermi function 1 / (e^{x/T} + 1); a step (1/2 at x = 0) for T = 0.
double fermi(double x, double temperature);

}  // namespace nhkubo
