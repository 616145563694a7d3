#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "fisherp/densities.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"
#include "fisherp/profile.hpp"

namespace fisherp {
namespace {

TEST(Quantile, NormalMatchesBoost) {
  const auto m = DensityModel::normal(1.0, 2.0);
  const boost::math::normal_distribution<> ref(1.0, 2.0);
  for (double t : {1e-9, 1e-4, 0.1, 0.5, 0.77, 0.999}) {
    EXPECT_NEAR(quantile(m, t), boost::math::quantile(ref, t), 1e-8) << t;
  }
  EXPECT_NEAR(upper_quantile(m, 1e-12), boost::math::quantile(boost::math::complement(ref, 1e-12)), 1e-7);
}

TEST(Quantile, GammaMatchesBoost) {
  const auto m = DensityModel::gamma(3.5);
  const boost::math::gamma_distribution<> ref(3.5);
  for (double t : {1e-6, 0.2, 0.5, 0.95}) {
    const double q = boost::math::quantile(ref, t);
    EXPECT_NEAR(quantile(m, t), q, 1e-8 * std::max(1.0, q)) << t;
  }
}

TEST(Quantile, RejectsOutOfRange) {
  EXPECT_THROW(quantile(DensityModel::normal(), 0.0), InvalidArgument);
  EXPECT_THROW(quantile(DensityModel::normal(), 1.5), InvalidArgument);
}

TEST(Profile, NormalPullbacks) {
  // L' = -x and L L'' = -1 for the standard normal.
  const auto grid = build_profile(DensityModel::normal(), 17);
  ASSERT_EQ(grid.size(), 17u);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(grid.Lp[i], -grid.x[i], 1e-9);
    EXPECT_NEAR(grid.LLpp[i], -1.0, 1e-8);
    EXPECT_GE(grid.t[i], kProfileClip);
    EXPECT_LE(grid.t[i], 1.0 - kProfileClip);
  }
}

TEST(Profile, LogisticIsQuadratic) {
  // L(t) = t (1 - t), L' = 1 - 2t
  const auto grid = build_profile(DensityModel::logistic(), 9);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.t[i];
    EXPECT_NEAR(grid.L[i], t * (1.0 - t), 1e-12);
    EXPECT_NEAR(grid.Lp[i], 1.0 - 2.0 * t, 1e-9);
  }
}

TEST(Profile, CsvLayout) {
  const auto csv = profile_csv(build_profile(DensityModel::normal(), 5));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,L,Lp,LLpp");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Profile, RequiresSingleIntervalOfPositivity) {
  EXPECT_THROW(build_profile(DensityModel::hermite_weighted(), 9), UnsupportedDensity);
}

TEST(Profile, IntegralsMatchDirectFunctionals) {
  const auto g = DensityModel::gamma(10.0);
  EXPECT_NEAR(info_via_profile(g, 2.0).value / fisher_info(g, 1).value, 1.0, 1e-7);
  const double i2 = fisher_info(g, 2).value;
  EXPECT_NEAR(i2_via_profile(g, I2Variant::Squared).value / i2, 1.0, 1e-6);
  EXPECT_NEAR(i2_via_profile(g, I2Variant::Split).value / i2, 1.0, 1e-6);
  EXPECT_NEAR(info_via_profile(DensityModel::logistic(), 2.0).value, 1.0 / 3.0, 1e-9);
}

TEST(Profile, BoundaryDiagnostics) {
  const auto report = boundary_diagnostics(DensityModel::gamma(10.0));
  EXPECT_EQ(report.lower.size(), 5u);
  EXPECT_EQ(report.upper.size(), 5u);
  EXPECT_TRUE(report.monotone);
  EXPECT_NEAR(report.lower.front().t, 1e-2, 1e-15);
  EXPECT_NEAR(report.upper.back().t, 1.0 - 1e-6, 1e-15);
}

}  // namespace
}  // namespace fisherp
