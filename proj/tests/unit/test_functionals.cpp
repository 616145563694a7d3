#include <cmath>

#include <gtest/gtest.h>

#include "fisherp/densities.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"

namespace fisherp {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent of the library: closed forms derived from Gamma moments.
double gamma_i1(double n) { return 1.0 / (n - 2.0); }
double gamma_i2(double n) { return 2.0 * (n + 2.0) / ((n - 2.0) * (n - 3.0) * (n - 4.0)); }
double gamma_i3(double n) {
  return 6.0 * (n * n + 13.0 * n + 6.0) / ((n - 2.0) * (n - 3.0) * (n - 4.0) * (n - 5.0) * (n - 6.0));
}

TEST(Fisher, GammaClosedForms) {
  for (double n : {7.0, 8.5, 10.0, 16.0, 40.0}) {
    const auto g = DensityModel::gamma(n);
    const auto i1 = fisher_info(g, 1);
    const auto i2 = fisher_info(g, 2);
    const auto i3 = fisher_info(g, 3);
    ASSERT_TRUE(i1.finite() && i2.finite() && i3.finite()) << n;
    EXPECT_LT(rel(i1.value, gamma_i1(n)), 1e-8) << n;
    EXPECT_LT(rel(i2.value, gamma_i2(n)), 1e-8) << n;
    EXPECT_LT(rel(i3.value, gamma_i3(n)), 1e-8) << n;
  }
}

TEST(Fisher, NormalIsFactorialOverSigmaPower) {
  for (double sigma : {0.5, 1.0, 3.0}) {
    const auto m = DensityModel::normal(1.0, sigma);
    double fact = 1.0;
    for (int p = 1; p <= 6; ++p) {
      fact *= p;
      const auto v = fisher_info(m, p);
      ASSERT_TRUE(v.finite());
      EXPECT_LT(rel(v.value, fact * std::pow(sigma, -2.0 * p)), 1e-8) << sigma << " " << p;
    }
  }
}

TEST(Fisher, Logistic) {
  EXPECT_LT(rel(fisher_info(DensityModel::logistic(), 1).value, 1.0 / 3.0), 1e-9);
  EXPECT_LT(rel(score_moment(DensityModel::logistic(), 4.0).value, 1.0 / 5.0), 1e-9);
}

TEST(Fisher, OrderZeroIsOne) { EXPECT_EQ(fisher_info(DensityModel::gamma(3.0), 0).value, 1.0); }

TEST(Fisher, GateGivesDivergence) {
  EXPECT_TRUE(fisher_info(DensityModel::gamma(5.0), 3).divergent());
  EXPECT_TRUE(fisher_info(DensityModel::gamma(2.0), 1).divergent());
  EXPECT_TRUE(fisher_info(DensityModel::half_gaussian(), 2).divergent());
}

TEST(Fisher, RawIntegralDivergesNearTheGate) {
  // Gamma(n): f''^2 / f ~ x^(n-5) near 0, not integrable for n <= 4.
  EXPECT_TRUE(fisher_integral(DensityModel::gamma(3.5), 2).divergent());
  EXPECT_TRUE(fisher_integral(DensityModel::gamma(4.5), 2).finite());
}

TEST(Fisher, OrderLimit) {
  EXPECT_THROW(fisher_info(DensityModel::normal(), kMaxFisherOrder + 1), UnsupportedOrder);
}

TEST(Fisher, ScalingLaw) {
  for (double b : {0.5, 2.0}) {
    const auto base = DensityModel::logistic();
    const auto scaled = DensityModel::affine(base, 0.3, b);
    for (int p = 1; p <= 3; ++p) {
      EXPECT_LT(rel(fisher_info(scaled, p).value, fisher_info(base, p).value * std::pow(b, -2.0 * p)), 1e-8);
    }
  }
}

TEST(Fisher, MixtureAgainstDirectQuadrature) {
  const auto m = DensityModel::mixture({{0.4, DensityModel::normal(-1.0, 1.0)}, {0.6, DensityModel::normal(2.0, 0.7)}});
  auto config = QuadratureConfig::with_rel_tol(1e-12);
  const auto direct = integrate(
      [&](double x) {
        const double f = m.density(x);
        const double d = m.derivative(2, x);
        return f > 1e-300 ? d * d / f : 0.0;
      },
      SupportInterval::real_line(), config, {{-1.0, 2.0}, 1.0});
  EXPECT_LT(rel(fisher_info(m, 2).value, direct.value), 1e-8);
}

TEST(ScoreMoment, AgreesWithFisherAtTwo) {
  const auto g = DensityModel::gamma(9.0);
  EXPECT_LT(rel(score_moment(g, 2.0).value, fisher_info(g, 1).value), 1e-9);
}

TEST(CrossFunctional, Properties) {
  const auto g = DensityModel::gamma(12.0);
  // V_{k,0} = int f^(k) = 0 for k >= 1
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(cross_functional(g, k, 0).value, 0.0, 1e-9);
  // V_{1,2} = 2/((n-2)(n-3))
  EXPECT_LT(rel(cross_functional(g, 1, 2).value, 2.0 / (10.0 * 9.0)), 1e-8);
  EXPECT_DOUBLE_EQ(cross_functional(g, 1, 2).value, cross_functional(g, 2, 1).value);
  const auto matrix = cross_functional_matrix(g, 3);
  EXPECT_EQ(matrix.order(), 3);
  EXPECT_LT(rel(matrix.at(2, 2).value, gamma_i2(12.0)), 1e-8);
  EXPECT_EQ(matrix.at(1, 3).value, matrix.at(3, 1).value);
  // Normal: V_{1,2} = E[-x (x^2 - 1)] = 0
  EXPECT_NEAR(cross_functional(DensityModel::normal(), 1, 2).value, 0.0, 1e-12);
}

TEST(RelativeFisher, VanishesForNormal) {
  for (int p = 1; p <= 4; ++p) {
    const auto r = relative_fisher(DensityModel::normal(), p);
    EXPECT_NEAR(r.value.value, 0.0, 1e-9) << p;
    EXPECT_NEAR(r.identity_value, 0.0, 1e-9) << p;
    EXPECT_FALSE(r.defect);
  }
}

TEST(RelativeFisher, IdentityHolds) {
  const auto g = DensityModel::gamma(12.0);
  const auto r = relative_fisher(g, 2);
  EXPECT_LT(std::abs(r.value.value - r.identity_value), 1e-8 * (r.identity_value + 4.0));
  EXPECT_FALSE(r.defect);
}

TEST(RelativeFisher, MomentRequired) {
  EXPECT_THROW(relative_fisher(DensityModel::polynomial_tail(4.0), 2), MomentRequired);
}

TEST(HermiteSquareMean, Normal) {
  EXPECT_NEAR(hermite_square_mean(DensityModel::normal(), hermite(3)).value, 6.0, 1e-9);
}

TEST(Norms, NormalOracles) {
  const auto m = DensityModel::normal();
  const double phi0 = 1.0 / std::sqrt(2.0 * M_PI);
  const double phi1 = std::exp(-0.5) * phi0;
  EXPECT_NEAR(derivative_tv_norm(m, 1).value, 2.0 * phi0, 1e-9);
  EXPECT_NEAR(derivative_tv_norm(m, 2).value, 4.0 * phi1, 1e-9);
  EXPECT_NEAR(derivative_l2_norm(m, 2).value, 3.0 / (8.0 * std::sqrt(M_PI)), 1e-10);
  // int |x| |phi'| = int x^2 phi = 1
  EXPECT_NEAR(derivative_weighted_l1(m, 1, 1.0).value, 1.0, 1e-9);
  EXPECT_NEAR(derivative_sup_norm(m, 0), phi0, 1e-9);
  EXPECT_NEAR(derivative_sup_norm(m, 1), phi1, 1e-9);  // attained at |x| = 1
}

TEST(Norms, GateClosedIsDivergent) {
  EXPECT_TRUE(derivative_tv_norm(DensityModel::gamma(1.5), 2).divergent());
}

TEST(Charfn, ClosedFormAndQuadratureAgree) {
  const auto g = DensityModel::gamma(3.0);
  for (double t : {1.0, 5.0}) {
    const double exact = std::pow(1.0 + t * t, -1.5);
    EXPECT_NEAR(charfn_modulus(g, t).value, exact, 1e-12);
    EXPECT_NEAR(charfn_modulus_quadrature(g, t).value, exact, 1e-7);
  }
  EXPECT_EQ(charfn_modulus(g, 2 * kMaxCharfnArgument).status, Status::Inconclusive);
}

}  // namespace
}  // namespace fisherp
