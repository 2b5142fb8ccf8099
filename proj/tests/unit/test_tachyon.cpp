#include <gtest/gtest.h>

#include <cmath>

#include "nhkubo/errors.hpp"
#include "nhkubo/spectral.hpp"
#include "nhkubo/tachyon.hpp"

using namespace nhkubo;
using namespace nhkubo::tachyon;

namespace {

TachyonParams params(double m, double gamma, double delta = 1.0) {
  TachyonParams p;
  p.m = m;
  p.gamma = gamma;
  p.Delta = delta;
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no nhkubo::Error thrown";
  return ErrorCode::NonFinite;
}

// Fourth-order central difference.
template <class F>
ComplexMatrix derivative(F&& f, double k, double h = 1e-3) {
  return (8.0 * (f(k + h) - f(k - h)) - (f(k + 2.0 * h) - f(k - 2.0 * h))) / (12.0 * h);
}

}  // namespace

TEST(TachyonRegime, ClassifiesBySignOfEffectiveGap) {
  EXPECT_EQ(regime(params(0.5, 0.0)).phase, Phase::Gapped);
  EXPECT_EQ(regime(params(1.0, 0.0)).phase, Phase::Linear);
  EXPECT_EQ(regime(params(1.5, 0.0)).phase, Phase::Tachyonic);
  EXPECT_EQ(regime(params(1.0 + 1e-14, 0.0)).phase, Phase::Linear);
  EXPECT_DOUBLE_EQ(regime(params(0.6, 0.0)).effective_gap_sq, 0.64);
}

TEST(TachyonModel, EigenvaluesAreRelativisticWithEffectiveGap) {
  const TachyonParams p = params(0.6, 0.0);
  for (double k : {-2.0, 0.0, 0.5, 4.0}) {
    const double e = std::sqrt(k * k + 1.0 - 0.36);
    const ComplexVector xi = eig_biortho(hamiltonian(k, p)).eigenvalues;
    EXPECT_NEAR(std::abs(xi(0) + e), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(xi(1) - e), 0.0, 1e-12);
  }
}

TEST(TachyonModel, IsospectralClosedFormSharesSpectrum) {
  for (double m : {0.0, 0.5, 0.95}) {
    TachyonParams p = params(m, 0.0);
    p.mu = 0.2;
    for (int i = 0; i < 50; ++i) {
      const double k = -6.0 + 12.0 * i / 49.0;
      const ComplexVector a = sorted_eigenvalues(hamiltonian(k, p));
      const ComplexVector b = sorted_eigenvalues(isospectral_closed(k, p));
      EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10) << "m=" << m << " k=" << k;
    }
  }
}

TEST(TachyonModel, IsospectralClosedFormIsTheMetricImage) {
  const TachyonParams p = params(0.7, 0.0);
  for (double k : {-3.0, -0.2, 0.0, 1.1}) {
    const ComplexMatrix h = hamiltonian(k, p);
    EXPECT_LT((isospectral_map(h, pseudo_metric_of(h)) - isospectral_closed(k, p)).norm(), 1e-12);
  }
}

TEST(TachyonCurrent, TwoPathEquivalence) {
  for (double m : {0.3, 0.6, 0.9}) {
    const TachyonParams p = params(m, 0.0);
    for (int i = 0; i < 20; ++i) {
      const double k = -4.0 + 8.0 * i / 19.0;
      const PseudoMetric pm = pseudo_metric_of(hamiltonian(k, p));
      const ComplexMatrix dh = derivative([&](double q) { return isospectral_closed(q, p); }, k);
      const ComplexMatrix via_metric = pm.eta_inv_sqrt * dh * pm.eta_sqrt;
      EXPECT_LT((via_metric - current_tilde(k, p)).norm(), 1e-9) << "m=" << m << " k=" << k;
    }
  }
}

TEST(TachyonCurrent, CommutatorIdentity) {
  // J - v~ = [H, eta^{-1/2} d_k eta^{1/2}].
  const TachyonParams p = params(0.6, 0.0);
  const auto root = [&](double q) { return pseudo_metric_of(hamiltonian(q, p)).eta_sqrt; };
  for (int i = 0; i < 20; ++i) {
    const double k = -4.0 + 8.0 * i / 19.0;
    const ComplexMatrix h = hamiltonian(k, p);
    const ComplexMatrix conn = pseudo_metric_of(h).eta_inv_sqrt * derivative(root, k);
    const ComplexMatrix lhs = current_J(p) - current_tilde(k, p);
    EXPECT_LT((lhs - (h * conn - conn * h)).norm(), 1e-6) << "k=" << k;
  }
}

TEST(TachyonCurrent, HermitianLimitReducesToJ) {
  const TachyonParams p = params(0.0, 0.0);
  for (double k : {-1.0, 0.3, 2.0}) {
    EXPECT_LT((current_tilde(k, p) - current_J(p)).norm(), 1e-14);
  }
}

TEST(TachyonCurrent, GappedOnlyFormsRejectOtherPhases) {
  EXPECT_EQ(code_of([] { current_tilde(0.0, params(1.2, 0.0)); }), ErrorCode::RegimeViolation);
  EXPECT_EQ(code_of([] { isospectral_closed(0.0, params(1.0, 0.0)); }), ErrorCode::RegimeViolation);
}

TEST(TachyonDc, HermitianLimitCollapse) {
  for (auto [gamma, delta] : {std::pair{0.3, 1.0}, {1.0, 1.0}, {1.5, 1.0}, {2.0, 0.7}, {0.8, 1.3}}) {
    const TachyonParams p = params(0.0, gamma, delta);
    const double expect = gamma * gamma / std::pow(gamma * gamma + delta * delta, 1.5);
    EXPECT_NEAR(sigma_dc_standard(p), expect, 1e-14);
    EXPECT_NEAR(sigma_dc_phqm_j(p), expect, 1e-14);
    EXPECT_NEAR(sigma_dc_phqm_tilde(p), expect, 1e-12);
    EXPECT_EQ(sigma_dc_postselected(p), 0.0);
  }
}

TEST(TachyonDc, TableFormsAtAPoint) {
  const TachyonParams p = params(0.6, 1.5);
  EXPECT_NEAR(sigma_dc_standard(p), (2.25 - 0.36) / std::pow(2.25 + 1.0 - 0.36, 1.5), 1e-15);
  EXPECT_NEAR(sigma_dc_phqm_j(p), 2.25 / std::pow(2.25 + 1.0 - 0.36, 1.5), 1e-15);
  EXPECT_NEAR(sigma_dc_closed(DcClosedForm::PhqmTildeExact, p), sigma_dc_phqm_tilde(p), 0.0);
}

TEST(TachyonDc, StandardVanishesAtStabilityBoundary) {
  EXPECT_NEAR(sigma_dc_standard(params(0.6, 0.6 + 1e-12)), 0.0, 1e-11);
  EXPECT_EQ(code_of([] { sigma_dc_standard(params(0.6, 0.5)); }), ErrorCode::ConstraintViolation);
}

TEST(TachyonDc, PostselectedStepFunction) {
  EXPECT_EQ(sigma_dc_postselected(params(0.5, 0.0)), 0.0);
  EXPECT_EQ(sigma_dc_postselected(params(1.0, 0.0)), 0.0);
  const double m = 1.5;
  EXPECT_NEAR(sigma_dc_postselected(params(m, 0.0)), 0.5 * M_PI * std::sqrt(m * m - 1.0) / (m * m),
              1e-15);
}

TEST(TachyonDc, TildeSmoothAcrossGammaEqualsM) {
  const double at = sigma_dc_phqm_tilde(params(0.6, 0.6));
  const double below = sigma_dc_phqm_tilde(params(0.6, 0.6 - 1e-3));
  const double above = sigma_dc_phqm_tilde(params(0.6, 0.6 + 1e-3));
  EXPECT_TRUE(std::isfinite(at));
  EXPECT_NEAR(at, 0.5 * (below + above), 1e-5);
  // No jump where the direct formula takes over.
  for (double edge : {0.6 - 0.012, 0.6 + 0.012}) {
    EXPECT_NEAR(sigma_dc_phqm_tilde(params(0.6, edge - 1e-9)),
                sigma_dc_phqm_tilde(params(0.6, edge + 1e-9)), 1e-8);
  }
}

TEST(TachyonDc, ExpansionsConvergeAtTheirOrder) {
  const auto dirty_err = [](double g) {
    const TachyonParams p = params(0.6, g);
    return std::abs(sigma_dc_phqm_tilde_dirty(p) / sigma_dc_phqm_tilde(p) - 1.0);
  };
  const auto clean_err = [](double g) {
    const TachyonParams p = params(0.6, g);
    return std::abs(sigma_dc_phqm_tilde_clean(p) / sigma_dc_phqm_tilde(p) - 1.0);
  };
  // Relative error falls as gamma^-2 (dirty) and gamma^2 (clean).
  for (double g : {10.0, 20.0}) EXPECT_NEAR(dirty_err(g) / dirty_err(2.0 * g), 4.0, 0.5) << g;
  for (double g : {0.1, 0.05}) EXPECT_NEAR(clean_err(g) / clean_err(0.5 * g), 4.0, 0.5) << g;
  EXPECT_EQ(sigma_dc_closed(DcClosedForm::PhqmTildeExpansion, params(0.6, 10.0)),
            sigma_dc_phqm_tilde_dirty(params(0.6, 10.0)));
  EXPECT_EQ(sigma_dc_closed(DcClosedForm::PhqmTildeExpansion, params(0.6, 0.1)),
            sigma_dc_phqm_tilde_clean(params(0.6, 0.1)));
}

TEST(TachyonOsr, CleanLimitRecoversConventionalSumRule) {
  EXPECT_NEAR(osr_closed(params(0.0, 0.0), OsrForm::Clean), 1.0, 1e-15);
  EXPECT_NEAR(osr_closed(params(1e-6, 0.0), OsrForm::Clean), 1.0, 1e-10);
  EXPECT_NEAR(osr_closed(params(0.0, 0.7), OsrForm::Exact), 1.0, 1e-14);
}

TEST(TachyonOsr, LimitsDoNotCommute) {
  EXPECT_NEAR(osr_closed(params(0.999, 1e-9), OsrForm::StrongNH), 1.5, 1e-8);
  EXPECT_NEAR(osr_closed(params(1.0 - 1e-9, 0.0), OsrForm::Clean), 0.5, 1e-7);
  EXPECT_NEAR(osr_closed(params(1.0 - 1e-10, 1e-3), OsrForm::Exact), 1.5, 0.03);
  EXPECT_NEAR(osr_closed(params(0.999, 1e-7), OsrForm::Exact), 0.5, 0.01);
}

TEST(TachyonOsr, WeakAndCleanFormsApproachExact) {
  for (double m : {0.05, 0.1}) {
    const TachyonParams p = params(m, 1.0);
    const double exact = osr_closed(p, OsrForm::Exact) - 1.0;
    const double weak = osr_closed(p, OsrForm::WeakNH) - 1.0;
    EXPECT_NEAR(weak / exact, 1.0, 5.0 * m * m);
  }
  const TachyonParams p = params(0.6, 1e-6);
  EXPECT_NEAR(osr_closed(p, OsrForm::Exact), osr_closed(p, OsrForm::Clean), 1e-5);
}

TEST(TachyonOsr, ExactIsContinuousAcrossGammaEqualsM) {
  const double a = osr_closed(params(0.6, 0.6 - 1e-4), OsrForm::Exact);
  const double b = osr_closed(params(0.6, 0.6 + 1e-4), OsrForm::Exact);
  EXPECT_NEAR(a, b, 1e-3);
  EXPECT_TRUE(std::isfinite(osr_closed(params(0.6, 0.6), OsrForm::Exact)));
}

TEST(TachyonParamsValidation, RejectsBadInput) {
  EXPECT_EQ(code_of([] { params(0.1, -1.0).validate(); }), ErrorCode::DomainError);
  TachyonParams p;
  p.v_F = 0.0;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::DomainError);
  p = TachyonParams{};
  p.m = std::nan("");
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::NonFinite);
  EXPECT_EQ(code_of([] { kubo_problem(params(0.5, 1.0), Approach::Postselected); }),
            ErrorCode::ConstraintViolation);
  EXPECT_EQ(code_of([] { kubo_problem(params(0.6, 0.5), Approach::Standard); }),
            ErrorCode::ConstraintViolation);
  EXPECT_EQ(code_of([] { kubo_problem(params(1.2, 1.5), Approach::PhqmJ); }),
            ErrorCode::RegimeViolation);
}
