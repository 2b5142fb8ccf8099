#pragma once

#include <string_view>

#include "nhkubo/greens.hpp"
#include "nhkubo/linalg.hpp"
#include "nhkubo/response.hpp"

namespace nhkubo::tachyon {

/// H(k) = v_F k sigma_x + Delta sigma_y - i m sigma_z - mu with a uniform decay gamma.
struct TachyonParams {
  double v_F = 1.0;
  double Delta = 1.0;
  double m = 0.0;
  double mu = 0.0;
  double gamma = 0.0;

  // Throws DomainError for non-finite values, v_F <= 0 or gamma < 0.
  void validate() const;
};

enum class Phase { Gapped, Linear, Tachyonic };

std::string_view to_string(Phase phase);

struct PhaseRegime {
  Phase phase = Phase::Gapped;
  double effective_gap_sq = 0.0;  // Delta^2 - m^2
};

// Sign of Delta^2 - m^2, zero within 1e-12 relative to max(Delta^2, m^2).
PhaseRegime regime(const TachyonParams& p);

ComplexMatrix hamiltonian(double k, const TachyonParams& p);

// e v_F sigma_x (e = 1).
ComplexMatrix current_J(const TachyonParams& p);

/// Isospectral-frame current e v_F (a . sigma), with the Bloch vector
/// a = (v^2 k^2 / E^2 + Delta^2 E / E0^3, v k Delta (1/E^2 - E / E0^3), -i v k m / E^2),
/// E = sqrt(v^2 k^2 + Delta^2 - m^2), E0 = sqrt(v^2 k^2 + Delta^2). Gapped regime only.
ComplexMatrix current_tilde(double k, const TachyonParams& p);

/// sqrt(E^2 / E0^2) (v k sigma_x + Delta sigma_y) - mu. Gapped regime only.
ComplexMatrix isospectral_closed(double k, const TachyonParams& p);

/// The conductivity prescriptions compared for this model.
enum class Approach { Standard, PhqmJ, PhqmTilde, Postselected };

std::string_view to_string(Approach approach);

/// DC conductivities at mu = 0, T = 0 in units e^2 v_F / (2 pi).
double sigma_dc_standard(const TachyonParams& p);      // (g^2 - m^2) / (g^2 + D^2 - m^2)^{3/2}
double sigma_dc_phqm_j(const TachyonParams& p);        // g^2 / (g^2 + D^2 - m^2)^{3/2}
double sigma_dc_postselected(const TachyonParams& p);  // (pi/2) sqrt(m^2 - D^2) / m^2, 0 unless m^2 > D^2
double sigma_dc_phqm_tilde(const TachyonParams& p);    // exact, isospectral current
// Large-gamma series through gamma^{-2}.
double sigma_dc_phqm_tilde_dirty(const TachyonParams& p);
// Small-gamma series through gamma^{2}.
double sigma_dc_phqm_tilde_clean(const TachyonParams& p);

enum class DcClosedForm { Standard, PhqmJ, Postselected, PhqmTildeExact, PhqmTildeExpansion };

// PhqmTildeExpansion uses the dirty series for gamma > |Delta| and the clean one otherwise.
double sigma_dc_closed(DcClosedForm form, const TachyonParams& p);

enum class OsrForm { Exact, WeakNH, StrongNH, Clean };

/// Zero-temperature optical sum rule -pi Re chi(0) for the isospectral current, in
/// units e^2 v_F. WeakNH is the small-m expansion, StrongNH the m -> Delta limit,
/// Clean the gamma -> 0 limit; all in terms of m/Delta and gamma/Delta.
double osr_closed(const TachyonParams& p, OsrForm form);

// Kubo problem for one approach (Postselected is rejected).
KuboProblem kubo_problem(const TachyonParams& p, Approach approach, double temperature = 0.0);

// Lehmann problem in the PHQM clean limit, vertex J (tilde = false) or the isospectral current.
CleanKuboProblem clean_problem(const TachyonParams& p, bool tilde, double delta0);

}  // namespace nhkubo::tachyon
