#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "nhkubo/errors.hpp"
#include "nhkubo/quadrature.hpp"

using namespace nhkubo;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Quadrature, LorentzianOverTheLine) {
  const QuadratureResult r = integrate([](double x) { return cplx(1.0 / (1.0 + x * x), 0.0); },
                                       -kInf, kInf, {});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real(), std::numbers::pi, 1e-10);
  EXPECT_LE(std::abs(r.value.real() - std::numbers::pi), 10.0 * r.est_error + 1e-14);
}

TEST(Quadrature, SemiInfiniteHalfLorentzian) {
  const QuadratureResult r =
      integrate_semi_infinite([](double x) { return cplx(1.0 / (1.0 + x * x), 0.0); }, 0.0, {});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real(), 0.5 * std::numbers::pi, 1e-10);
}

TEST(Quadrature, ExponentialTailMap) {
  QuadratureSpec spec;
  spec.tail_map = TailMap::Exponential;
  const QuadratureResult r =
      integrate_semi_infinite([](double x) { return cplx(std::exp(x), 2.0 * std::exp(2.0 * x)); }, 0.0, spec);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real(), 1.0, 1e-10);
  EXPECT_NEAR(r.value.imag(), 1.0, 1e-10);
}

TEST(Quadrature, BreakpointsResolveNarrowPeak) {
  const double w = 1e-6;
  const auto f = [w](double x) { return cplx(w / ((x - 3.0) * (x - 3.0) + w * w), 0.0); };
  const double bps[] = {3.0};
  const QuadratureResult r = integrate(f, -10.0, 10.0, {}, bps);
  ASSERT_TRUE(r.converged);
  const double exact = std::atan(7.0 / w) + std::atan(13.0 / w);
  EXPECT_NEAR(r.value.real(), exact, 1e-7);
}

TEST(Quadrature, DivergentIntegralIsNonConvergent) {
  QuadratureSpec spec;
  spec.max_subdivisions = 200;
  const QuadratureResult r = integrate([](double x) { return cplx(x, 0.0); }, -kInf, kInf, spec);
  EXPECT_FALSE(r.converged);
  try {
    require_converged(r, "test");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergent);
  }
}

TEST(Quadrature, InvalidSpecAndBoundsAreRejected) {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  EXPECT_THROW(integrate([](double) { return cplx(1.0); }, 0.0, 1.0, spec), Error);
  EXPECT_THROW(integrate([](double) { return cplx(1.0); }, 1.0, 0.0, {}), Error);
}

TEST(Quadrature, PolynomialIsExactOnOnePanel) {
  const QuadratureResult r =
      integrate([](double x) { return cplx(std::pow(x, 10), 0.0); }, 0.0, 1.0, {});
  EXPECT_NEAR(r.value.real(), 1.0 / 11.0, 1e-15);
  EXPECT_EQ(r.evaluations, 15);
}
