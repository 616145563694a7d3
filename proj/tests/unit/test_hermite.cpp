#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fisherp/errors.hpp"
#include "fisherp/hermite.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp {
namespace {

TEST(Hermite, LowDegreeCoefficients) {
  EXPECT_EQ(hermite_coefficients(0), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(hermite_coefficients(1), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(hermite_coefficients(2), (std::vector<std::int64_t>{-1, 0, 1}));
  EXPECT_EQ(hermite_coefficients(3), (std::vector<std::int64_t>{0, -3, 0, 1}));
  EXPECT_EQ(hermite_coefficients(4), (std::vector<std::int64_t>{3, 0, -6, 0, 1}));
  EXPECT_EQ(hermite_coefficients(5), (std::vector<std::int64_t>{0, 15, 0, -10, 0, 1}));
}

TEST(Hermite, ConstantTermIsDoubleFactorial) {
  // H_{2m}(0) = (-1)^m (2m-1)!!
  std::int64_t dfact = 1;
  for (int m = 1; m <= 15; ++m) {
    dfact *= 2 * m - 1;
    const auto c = hermite_coefficients(2 * m);
    EXPECT_EQ(c[0], (m % 2 ? -1 : 1) * dfact) << "m=" << m;
  }
}

TEST(Hermite, RecursionMatchesCoefficients) {
  for (int p = 0; p <= 12; ++p) {
    const MonicPolynomial h = hermite(p);
    for (double x : {-3.5, -1.0, 0.0, 0.3, 2.0, 4.75}) {
      EXPECT_NEAR(hermite_eval(p, x), h(x), 1e-9 * std::max(1.0, std::abs(h(x)))) << "p=" << p << " x=" << x;
    }
  }
}

TEST(Hermite, EvalAllFillsEveryDegree) {
  std::vector<double> out(9);
  hermite_eval_all(1.3, out);
  for (int p = 0; p < 9; ++p) EXPECT_DOUBLE_EQ(out[p], hermite_eval(p, 1.3));
}

TEST(Hermite, DerivativeIsScaledLowerPolynomial) {
  // H_p' = p H_{p-1}
  for (int p = 1; p <= 10; ++p) {
    const auto d = hermite(p).derivative_coefficients();
    const auto lower = hermite_coefficients(p - 1);
    ASSERT_EQ(d.size(), lower.size());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_DOUBLE_EQ(d[i], p * static_cast<double>(lower[i]));
  }
}

TEST(Hermite, GaussianSquareMeanIsFactorial) {
  double f = 1.0;
  for (int p = 0; p <= 20; ++p) {
    if (p > 0) f *= p;
    EXPECT_DOUBLE_EQ(hermite_sq_gaussian_mean(p), f);
    EXPECT_DOUBLE_EQ(factorial(p), f);
  }
}

TEST(Hermite, OrthogonalUnderGaussianWeight) {
  const QuadratureConfig config;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  for (int k = 0; k <= 6; ++k) {
    for (int l = k; l <= 6; ++l) {
      const auto v = integrate(
          [&](double x) { return hermite_eval(k, x) * hermite_eval(l, x) * std::exp(-0.5 * x * x) * inv_sqrt_2pi; },
          SupportInterval::real_line(), config);
      ASSERT_TRUE(v.finite());
      EXPECT_NEAR(v.value, k == l ? factorial(k) : 0.0, 1e-9 * std::max(1.0, factorial(k))) << k << "," << l;
    }
  }
}

TEST(Hermite, Limits) {
  EXPECT_NO_THROW(hermite(30));
  EXPECT_THROW(hermite(31), DegreeTooLarge);
  EXPECT_THROW(hermite_coefficients(-1), InvalidArgument);
}

TEST(MonicPolynomial, RequiresUnitLeadingCoefficient) {
  EXPECT_THROW(MonicPolynomial({1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(MonicPolynomial(std::vector<double>{}), InvalidArgument);
  const MonicPolynomial p({2.0, -3.0, 1.0});  // (x - 1)(x - 2)
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p(1.0), 0.0);
  EXPECT_DOUBLE_EQ(p(2.0), 0.0);
  EXPECT_DOUBLE_EQ(p(0.0), 2.0);
  EXPECT_DOUBLE_EQ(MonicPolynomial::monomial(3)(2.0), 8.0);
}

}  // namespace
}  // namespace fisherp
