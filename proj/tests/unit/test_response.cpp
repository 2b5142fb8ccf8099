#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nhkubo/errors.hpp"
#include "nhkubo/response.hpp"
#include "nhkubo/tachyon.hpp"

using namespace nhkubo;
using namespace nhkubo::tachyon;

namespace {

TachyonParams params(double m, double gamma) {
  TachyonParams p;
  p.m = m;
  p.gamma = gamma;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(SigmaDc, NumericMatchesClosedFormPerApproach) {
  for (auto [m, g] : {std::pair{0.3, 0.5}, {0.6, 1.5}, {0.0, 1.0}}) {
    const TachyonParams p = params(m, g);
    EXPECT_LT(rel(sigma_dc(kubo_problem(p, Approach::Standard)).value.real(), sigma_dc_standard(p)), 1e-4);
    EXPECT_LT(rel(sigma_dc(kubo_problem(p, Approach::PhqmJ)).value.real(), sigma_dc_phqm_j(p)), 1e-4);
    EXPECT_LT(rel(sigma_dc(kubo_problem(p, Approach::PhqmTilde)).value.real(), sigma_dc_phqm_tilde(p)),
              1e-4);
  }
}

TEST(SigmaDc, ImaginaryPartVanishes) {
  const ResponseResult r = sigma_dc(kubo_problem(params(0.6, 1.5), Approach::Standard));
  EXPECT_LT(std::abs(r.value.imag()), 1e-8);
  EXPECT_GT(r.est_error, 0.0);
  EXPECT_GT(r.evaluations, 0);
}

TEST(SigmaDc, LowTemperatureApproachesGroundState) {
  const TachyonParams p = params(0.6, 1.5);
  const double cold = sigma_dc(kubo_problem(p, Approach::Standard, 0.01)).value.real();
  EXPECT_LT(rel(cold, sigma_dc_standard(p)), 1e-3);
}

TEST(SigmaDc, StandardDecreasesWithImaginaryMass) {
  double previous = std::numeric_limits<double>::infinity();
  for (double m : {0.0, 0.3, 0.6}) {
    const double s = sigma_dc(kubo_problem(params(m, 1.0), Approach::Standard)).value.real();
    EXPECT_LT(s, previous) << "m=" << m;
    previous = s;
  }
}

TEST(SigmaOptical, ContinuesToDcValue) {
  const TachyonParams p = params(0.6, 1.5);
  const KuboProblem prob = kubo_problem(p, Approach::Standard);
  EXPECT_LT(rel(sigma_optical(prob, 1e-2).value.real(), sigma_dc_standard(p)), 1e-3);
}

TEST(SigmaOptical, RealPartEvenImaginaryPartOdd) {
  const KuboProblem prob = kubo_problem(params(0.6, 1.5), Approach::Standard);
  const cplx plus = sigma_optical(prob, 0.8).value;
  const cplx minus = sigma_optical(prob, -0.8).value;
  EXPECT_NEAR(plus.real(), minus.real(), 1e-7);
  EXPECT_NEAR(plus.imag(), -minus.imag(), 1e-7);
}

TEST(SigmaOptical, StandardAbsorptionIsNonNegative) {
  const KuboProblem prob = kubo_problem(params(0.6, 1.5), Approach::Standard);
  for (double w : {0.2, 1.0, 2.5, 6.0}) EXPECT_GE(sigma_optical(prob, w).value.real(), 0.0) << w;
}

TEST(SigmaOptical, HermitianLimitFrameworksAgree) {
  const TachyonParams p = params(0.0, 1.0);
  for (double w : {0.5, 2.0}) {
    const cplx s = sigma_optical(kubo_problem(p, Approach::Standard), w).value;
    const cplx j = sigma_optical(kubo_problem(p, Approach::PhqmJ), w).value;
    EXPECT_LT(std::abs(s - j), 1e-7) << w;
  }
}

TEST(SigmaOptical, ZeroFrequencyIsRejected) {
  EXPECT_THROW(sigma_optical(kubo_problem(params(0.3, 1.0), Approach::Standard), 0.0), Error);
}

TEST(OpticalSum, IndependentOfDecayAndMass) {
  for (auto [m, g] : {std::pair{0.2, 0.5}, {0.6, 1.5}}) {
    const TachyonParams p = params(m, g);
    EXPECT_NEAR(optical_sum(kubo_problem(p, Approach::Standard)).value.real(), 1.0, 1e-4);
    EXPECT_NEAR(optical_sum(kubo_problem(p, Approach::PhqmJ)).value.real(), 1.0, 1e-4);
  }
}

TEST(OpticalSum, IsospectralCurrentMatchesClosedForm) {
  const TachyonParams p = params(0.6, 1.5);
  const double numeric = optical_sum(kubo_problem(p, Approach::PhqmTilde)).value.real();
  EXPECT_LT(rel(numeric, osr_closed(p, OsrForm::Exact)), 1e-4);
}

TEST(OpticalSum, NeedsZeroTemperature) {
  EXPECT_THROW(optical_sum(kubo_problem(params(0.3, 1.0), Approach::Standard, 0.1)), Error);
}

TEST(CleanLehmann, HermitianStaticLimit) {
  // Clean massive Dirac band, J vertex: chi(0) = -1 / pi.
  const CleanKuboProblem prob = clean_problem(params(0.0, 0.0), false, 1e-6);
  EXPECT_NEAR(chi_phqm_clean(prob, 0.0).value.real(), -1.0 / std::numbers::pi, 1e-7);
}

TEST(CleanLehmann, AgreesWithGreensRouteAtSmallDecay) {
  const double delta = 1e-4;
  const TachyonParams p = params(0.0, delta);
  const cplx lehmann = chi_phqm_clean(clean_problem(p, false, delta), 0.5).value;
  const cplx greens = chi_local(kubo_problem(p, Approach::PhqmJ), 0.5).value;
  EXPECT_NEAR(lehmann.real(), greens.real(), 1e-4);
}

TEST(CleanLehmann, SingleMomentumSumIsAntisymmetricInOccupation) {
  const BiorthoSystem sys = eig_biortho(hamiltonian(0.4, params(0.5, 0.0)));
  const ComplexMatrix j = current_J(params(0.5, 0.0));
  // Both levels filled or both empty: no transitions.
  EXPECT_EQ(lehmann_sum(sys, j, j, 0.3, 0.0, 10.0, 1e-6), cplx(0.0, 0.0));
  EXPECT_EQ(lehmann_sum(sys, j, j, 0.3, 0.0, -10.0, 1e-6), cplx(0.0, 0.0));
}

TEST(KramersKronig, DrudeLorentzian) {
  std::vector<double> w, s;
  for (double x = 0.0; x <= 4.0; x += 0.02) w.push_back(x);
  for (double x = 4.1; x <= 400.0; x *= 1.03) w.push_back(x);
  for (double x : w) s.push_back(1.0 / (1.0 + x * x));
  const auto out = kramers_kronig(w, s);
  ASSERT_EQ(out.size(), w.size());
  for (const auto& pt : out) {
    if (pt.omega > 20.0) break;
    EXPECT_NEAR(pt.sigma_imag, pt.omega / (1.0 + pt.omega * pt.omega), 2e-4) << pt.omega;
  }
}

TEST(KramersKronig, ErrorColumnBoundsActualError) {
  std::vector<double> w, s;
  for (double x = 0.0; x <= 4.0; x += 0.1) w.push_back(x);
  for (double x = 4.2; x <= 200.0; x *= 1.1) w.push_back(x);
  for (double x : w) s.push_back(1.0 / (1.0 + x * x));
  for (const auto& pt : kramers_kronig(w, s)) {
    if (pt.omega > 10.0) break;
    EXPECT_LE(std::abs(pt.sigma_imag - pt.omega / (1.0 + pt.omega * pt.omega)), 3.0 * pt.error + 1e-5);
  }
}

TEST(KramersKronig, InsufficientGrids) {
  const auto code = [](const std::vector<double>& w, const std::vector<double>& s) {
    try {
      kramers_kronig(w, s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NonFinite;
  };
  std::vector<double> few{0.0, 1.0, 2.0};
  EXPECT_EQ(code(few, {1.0, 0.5, 0.2}), ErrorCode::InsufficientGrid);

  std::vector<double> w, s;
  for (int i = 0; i < 20; ++i) w.push_back(0.1 * i);
  for (double x : w) s.push_back(1.0 / (1.0 + x * x));
  // Cut off at 1.9: the c / x^2 tail carries far more than 5% of the weight.
  EXPECT_EQ(code(w, s), ErrorCode::InsufficientGrid);

  std::vector<double> unsorted = w;
  std::swap(unsorted[3], unsorted[4]);
  EXPECT_EQ(code(unsorted, s), ErrorCode::InsufficientGrid);
}

TEST(Fermi, StepAndThermalForms) {
  EXPECT_EQ(fermi(-1.0, 0.0), 1.0);
  EXPECT_EQ(fermi(1.0, 0.0), 0.0);
  EXPECT_EQ(fermi(0.0, 0.0), 0.5);
  EXPECT_NEAR(fermi(0.3, 0.1), 1.0 / (std::exp(3.0) + 1.0), 1e-15);
  EXPECT_EQ(fermi(-1e4, 1e-3), 1.0);
}
