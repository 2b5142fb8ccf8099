#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "nhkubo/errors.hpp"
#include "nhkubo/observables.hpp"
#include "nhkubo/quadrature.hpp"
#include "occupation_oracle.hpp"
#include "random_models.hpp"

using namespace nhkubo;
using nhkubo::tools::rel_diff;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no nhkubo::Error thrown";
  return ErrorCode::NonFinite;
}

}  // namespace

TEST(Occupation, ClosedFormMatchesQuadratureStandard) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = nhkubo::tools::random_dissipative(rng, 2 + trial % 2);
    const Framework fw = Framework::standard(0.3);
    EXPECT_LT((occupation(h, fw).entries - nhkubo::tools::occupation_by_quadrature(h, fw)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Occupation, ClosedFormMatchesQuadraturePhqm) {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = nhkubo::tools::random_pseudo_hermitian(rng, 2 + trial % 2);
    const Framework fw = Framework::phqm(0.3);
    EXPECT_LT((occupation(h, fw).entries - nhkubo::tools::occupation_by_quadrature(h, fw)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Occupation, HermitianCleanLimitIsFilledProjector) {
  std::mt19937_64 rng(103);
  const ComplexMatrix h = nhkubo::tools::random_hermitian(rng, 3);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexMatrix p = ComplexMatrix::Zero(3, 3);
  for (int a = 0; a < 3; ++a) {
    if (es.eigenvalues()(a) < 0.0) p += es.eigenvectors().col(a) * es.eigenvectors().col(a).adjoint();
  }
  // Corrections are O(gamma / |xi|).
  const OccupationMatrix occ = occupation(h, Framework::standard(1e-5));
  EXPECT_LT((occ.entries - p.transpose()).norm(), 1e-4);
  EXPECT_NEAR(occ.expectation(ComplexMatrix::Identity(3, 3)).real(), p.trace().real(), 1e-4);
}

TEST(Occupation, PhqmTraceIsSumOfWeights) {
  std::mt19937_64 rng(104);
  const ComplexMatrix h = nhkubo::tools::random_pseudo_hermitian(rng, 3);
  const Framework fw = Framework::phqm(0.2);
  const Eigen::VectorXd w = phqm_weights(eig_biortho(h), fw.gamma);
  EXPECT_NEAR(occupation(h, fw).entries.trace().real(), w.sum(), 1e-12);
  EXPECT_GT(w.minCoeff(), 0.0);
  EXPECT_LT(w.maxCoeff(), 1.0);
}

TEST(Occupation, ErrorPaths) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = -1.0;
  h(1, 1) = 2.0;
  EXPECT_EQ(code_of([&] { occupation(h, Framework::phqm(0.0)); }), ErrorCode::BranchAmbiguity);
  EXPECT_EQ(code_of([&] { occupation(h, Framework::standard(0.0)); }), ErrorCode::ConstraintViolation);
  EXPECT_NO_THROW(occupation(h, Framework::standard(0.1)));
  EXPECT_EQ(code_of([&] { occupation(ComplexMatrix::Identity(2, 2), Framework::standard(0.1)); }),
            ErrorCode::DegenerateSpectrum);
  EXPECT_EQ(code_of([&] { occupation(h, Framework::postselected()); }), ErrorCode::ConstraintViolation);
  const OccupationMatrix occ = occupation(h, Framework::standard(0.1));
  EXPECT_EQ(code_of([&] { occ.expectation(ComplexMatrix::Identity(3, 3)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Postselected, ExpectationUsesLeastDampedRightState) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = cplx(-1.0, -0.5);
  h(1, 1) = cplx(3.0, -0.1);
  ComplexMatrix op = ComplexMatrix::Zero(2, 2);
  op(1, 1) = 7.0;
  EXPECT_NEAR(std::abs(expectation(op, h, Framework::postselected()) - 7.0), 0.0, 1e-12);
}

TEST(Postselected, GroundStateTieBreaksOnRealPart) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = cplx(2.0, -0.2);
  h(1, 1) = cplx(-1.0, -0.2);
  h(2, 2) = cplx(0.0, -0.9);
  const BiorthoSystem sys = eig_biortho(h);
  EXPECT_EQ(sys.eigenvalues(select_ground_state(sys)), cplx(-1.0, -0.2));
}

TEST(Postselected, FullTieIsDegenerateSelection) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = cplx(1.0, -0.2);
  h(1, 1) = cplx(1.0 + 1e-13, -0.2);
  BiorthoSystem sys;
  sys.eigenvalues = h.diagonal();
  sys.right = ComplexMatrix::Identity(2, 2);
  sys.left = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(code_of([&] { select_ground_state(sys); }), ErrorCode::DegenerateSelection);
}

TEST(ThermalState, HermitianStationaryAndNormalized) {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix h = nhkubo::tools::random_pseudo_hermitian(rng, 2 + trial % 2);
    const PseudoMetric pm = pseudo_metric_of(h);
    const double beta = 0.1 + 0.05 * trial;
    const ComplexMatrix rho = nhts_density(h, pm, beta);
    EXPECT_LT(hermiticity_residual(rho), 1e-9 * rho.norm());
    EXPECT_LT((h * rho - rho * h.adjoint()).norm(), 1e-9 * h.norm() * rho.norm());
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  }
}

TEST(ThermalState, LargeBetaDoesNotUnderflow) {
  std::mt19937_64 rng(106);
  const ComplexMatrix h = nhkubo::tools::random_pseudo_hermitian(rng, 2);
  const ComplexMatrix rho = nhts_density(h, pseudo_metric_of(h), 1e4);
  EXPECT_TRUE(all_finite(rho));
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
}

TEST(ThermalState, RejectsComplexSpectrumAndBadBeta) {
  std::mt19937_64 rng(107);
  const ComplexMatrix h = nhkubo::tools::random_pseudo_hermitian(rng, 2);
  const PseudoMetric pm = pseudo_metric_of(h);
  EXPECT_EQ(code_of([&] { nhts_density(h, pm, -1.0); }), ErrorCode::DomainError);
  ComplexMatrix c(2, 2);
  c << cplx(0.0, 1.0), 0.0, 0.0, cplx(1.0, -1.0);
  EXPECT_EQ(code_of([&] { nhts_density(c, pm, 1.0); }), ErrorCode::ComplexSpectrum);
}
