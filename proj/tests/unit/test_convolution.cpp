#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fisherp/convolution.hpp"
#include "fisherp/densities.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"

namespace fisherp {
namespace {

TEST(Convolution, TwoNormalsReduce) {
  const ConvolvedDensity c(DensityModel::normal(1.0, 3.0), DensityModel::normal(-2.0, 4.0));
  ASSERT_TRUE(c.reduced());
  const auto params = c.reduced()->normal_parameters();
  ASSERT_TRUE(params);
  EXPECT_DOUBLE_EQ(params->first, -1.0);
  EXPECT_DOUBLE_EQ(params->second, 5.0);
  const auto v = fisher_info_convolved(c, 2);
  EXPECT_NEAR(v.value, 2.0 / 625.0, 1e-12);
}

TEST(Convolution, NormalFactorGivesGaussianSmoothing) {
  const ConvolvedDensity c(DensityModel::gamma(3.0), DensityModel::normal(0.0, 0.5));
  ASSERT_TRUE(c.reduced());
  EXPECT_EQ(c.reduced()->family(), Family::GaussianConvolution);
}

TEST(Convolution, GammaAdditivity) {
  // Gamma(a) * Gamma(b) = Gamma(a + b)
  const ConvolvedDensity c(DensityModel::gamma(4.0), DensityModel::gamma(6.0));
  EXPECT_FALSE(c.reduced());
  const auto target = DensityModel::gamma(10.0);
  for (double x : {2.0, 7.5, 12.0, 20.0}) {
    for (int order = 0; order <= 2; ++order) {
      const double got = convolve_eval(c, order, x);
      const double want = target.derivative(order, x);
      EXPECT_NEAR(got, want, 1e-8 * std::max(1e-3, std::abs(want))) << "order " << order << " x " << x;
    }
  }
  const auto i1 = fisher_info_convolved(c, 1);
  ASSERT_TRUE(i1.finite());
  EXPECT_NEAR(i1.value / (1.0 / 8.0), 1.0, 1e-5);
}

TEST(Convolution, SplitFavoursTheSmootherFactor) {
  const ConvolvedDensity c(DensityModel::gamma(2.5), DensityModel::logistic());
  const auto [k, rest] = c.split(3);
  EXPECT_EQ(k + rest, 3);
  EXPECT_LE(k, 1);
  const ConvolvedDensity rough(DensityModel::gamma(1.5), DensityModel::gamma(1.5));
  EXPECT_THROW(rough.split(3), UnsupportedOrder);
  EXPECT_THROW(fisher_info_convolved(c, kMaxConvolvedOrder + 1), UnsupportedOrder);
}

TEST(Convolution, EverySplitAgrees) {
  const ConvolvedDensity c(DensityModel::gamma(8.0), DensityModel::gamma(9.0));
  auto inner = QuadratureConfig::with_rel_tol(1e-11);
  const double a = c.eval_split(2, 0, 15.0, inner);
  const double b = c.eval_split(2, 1, 15.0, inner);
  const double d = c.eval_split(2, 2, 15.0, inner);
  EXPECT_NEAR(a, b, 1e-10);
  EXPECT_NEAR(b, d, 1e-10);
}

TEST(Convolution, SupportIsMinkowskiSum) {
  const ConvolvedDensity c(DensityModel::gamma(3.0), DensityModel::beta(2.0, 2.0));
  EXPECT_EQ(c.support().lower(), 0.0);
  EXPECT_EQ(c.support().upper(), kInf);
}

TEST(SmoothingLadder, ValidatesEps) {
  const auto g = DensityModel::gamma(3.0);
  EXPECT_THROW(smoothing_ladder(g, 1, {0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(smoothing_ladder(g, 1, {0.5, 0.001}), InvalidArgument);
}

TEST(SmoothingLadder, ApproachesTheLimitFromBelow) {
  // I(Gamma(8)) = 1/6; smoothing lowers the Fisher information.
  const auto g = DensityModel::gamma(8.0);
  const auto ladder = smoothing_ladder(g, 1, {0.8, 0.4, 0.2, 0.1});
  ASSERT_EQ(ladder.values.size(), 4u);
  for (std::size_t i = 1; i < ladder.values.size(); ++i) {
    EXPECT_GT(ladder.values[i].value, ladder.values[i - 1].value);
    EXPECT_LT(ladder.values[i].value, 1.0 / 6.0);
  }
  ASSERT_TRUE(ladder.extrapolated);
  EXPECT_NEAR(*ladder.extrapolated, 1.0 / 6.0, 1e-3);
}

TEST(SmoothingLadder, NormalBaseHasExactRungs) {
  const auto ladder = smoothing_ladder(DensityModel::normal(), 2, {1.0, 0.5});
  EXPECT_NEAR(ladder.values[0].value, 2.0 / 4.0, 1e-9);
  EXPECT_NEAR(ladder.values[1].value, 2.0 / (1.25 * 1.25), 1e-9);
}

}  // namespace
}  // namespace fisherp
