#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fisherp/densities.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp {
namespace {

using nlohmann::json;

struct Named {
  std::string name;
  DensityModel model;
};

std::vector<Named> catalog() {
  return {
      {"normal", DensityModel::normal(0.5, 2.0)},
      {"gamma3", DensityModel::gamma(3.0)},
      {"gamma2.5", DensityModel::gamma(2.5)},
      {"gamma12", DensityModel::gamma(12.0)},
      {"beta", DensityModel::beta(3.0, 5.0)},
      {"hermite_weighted", DensityModel::hermite_weighted()},
      {"polynomial_tail", DensityModel::polynomial_tail(4.0)},
      {"half_gaussian", DensityModel::half_gaussian()},
      {"logistic", DensityModel::logistic()},
      {"mixture", DensityModel::mixture({{0.3, DensityModel::normal(-1.0, 0.5)}, {0.7, DensityModel::gamma(6.0)}})},
      {"smoothed_gamma", DensityModel::gaussian_convolution(DensityModel::gamma(3.0), 0.5)},
      {"affine", DensityModel::affine(DensityModel::gamma(8.0), -2.0, 0.5)},
  };
}

QuadratureConfig tight() {
  auto c = QuadratureConfig::with_rel_tol(1e-12);
  c.abs_tol = 1e-14;
  return c;
}

FunctionalValue integrate_model(const DensityModel& m, const std::function<double(double)>& g) {
  return integrate(g, m.support(), tight(), m.integration_hints());
}

TEST(Densities, IntegrateToOne) {
  for (const auto& [name, m] : catalog()) {
    const auto v = integrate_model(m, [&](double x) { return m.density(x); });
    ASSERT_TRUE(v.finite()) << name;
    EXPECT_NEAR(v.value, 1.0, 1e-9) << name;
  }
}

TEST(Densities, DerivativesMatchFiniteDifferences) {
  for (const auto& [name, m] : catalog()) {
    const int top = std::min(m.smoothness_order(), 4);
    const double c = m.center();
    const double s = m.spread();
    for (double offset : {-0.7, 0.1, 0.9}) {
      const double x = c + offset * s;
      if (!m.support().contains(x) || !m.support().contains(x - 0.01 * s) || !m.support().contains(x + 0.01 * s)) {
        continue;
      }
      for (int k = 1; k <= top; ++k) {
        const double h = 1e-4 * s;
        const double fd = (m.derivative(k - 1, x + h) - m.derivative(k - 1, x - h)) / (2.0 * h);
        const double exact = m.derivative(k, x);
        const double scale = std::abs(m.derivative(k - 1, x)) / h * 1e-6 + std::abs(exact) * 1e-6 + 1e-9;
        EXPECT_NEAR(fd, exact, scale) << name << " k=" << k << " x=" << x;
      }
    }
  }
}

TEST(Densities, DerivativesVectorMatchesScalar) {
  const auto m = DensityModel::logistic();
  std::vector<double> out(6);
  m.derivatives(0.4, out);
  for (int k = 0; k < 6; ++k) EXPECT_DOUBLE_EQ(out[k], m.derivative(k, 0.4));
}

TEST(Densities, NormalDerivativesAreHermite) {
  // phi^(k)(x) = (-1)^k He_k(x) phi(x)
  const auto m = DensityModel::normal();
  const double x = 1.7;
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  EXPECT_NEAR(m.derivative(1, x), -x * phi, 1e-15);
  EXPECT_NEAR(m.derivative(2, x), (x * x - 1.0) * phi, 1e-15);
  EXPECT_NEAR(m.derivative(3, x), -(x * x * x - 3.0 * x) * phi, 1e-15);
  EXPECT_NEAR(m.derivative(4, x), (std::pow(x, 4) - 6.0 * x * x + 3.0) * phi, 1e-14);
}

TEST(Densities, CdfMatchesQuadrature) {
  for (const auto& [name, m] : catalog()) {
    const double x = m.center() + 0.3 * m.spread();
    if (!m.support().contains(x)) continue;
    const auto v = integrate([&](double y) { return m.density(y); }, {m.support().lower(), x}, tight());
    ASSERT_TRUE(v.finite()) << name;
    EXPECT_NEAR(m.cdf(x), v.value, 1e-9) << name;
    EXPECT_NEAR(m.cdf(x) + m.survival(x), 1.0, 1e-12) << name;
  }
}

TEST(Densities, SurvivalInTheUpperTail) {
  const auto m = DensityModel::normal();
  // Q(10) from the asymptotic expansion, relative error below 1e-5.
  const double x = 10.0;
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  const double asym = phi / x * (1.0 - 1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6));
  EXPECT_NEAR(m.survival(x) / asym, 1.0, 1e-5);
}

TEST(Densities, CharacteristicFunctionMatchesQuadrature) {
  for (const auto& [name, m] : catalog()) {
    for (double t : {0.5, 2.0}) {
      const auto cf = m.characteristic_function(t);
      if (!cf) continue;
      const auto re = integrate_model(m, [&](double x) { return std::cos(t * x) * m.density(x); });
      const auto im = integrate_model(m, [&](double x) { return std::sin(t * x) * m.density(x); });
      EXPECT_NEAR(cf->real(), re.value, 1e-8) << name << " t=" << t;
      EXPECT_NEAR(cf->imag(), im.value, 1e-8) << name << " t=" << t;
    }
  }
}

TEST(Densities, KnownCharacteristicFunctions) {
  const auto n = DensityModel::normal(0.0, 2.0).characteristic_function(1.5);
  ASSERT_TRUE(n);
  EXPECT_NEAR(std::abs(*n), std::exp(-0.5 * 4.0 * 2.25), 1e-14);
  const auto g = DensityModel::gamma(4.0).characteristic_function(1.0);
  ASSERT_TRUE(g);
  EXPECT_NEAR(std::abs(*g), std::pow(2.0, -2.0), 1e-14);  // |1 - i|^-4
  const auto l = DensityModel::logistic().characteristic_function(1.0);
  ASSERT_TRUE(l);
  EXPECT_NEAR(l->real(), M_PI / std::sinh(M_PI), 1e-13);
}

TEST(Densities, AbsoluteMoments) {
  // E X^2 = n(n + 1) for Gamma(n)
  const auto g = DensityModel::gamma(5.0);
  EXPECT_NEAR(moment(g, 2.0).value, 30.0, 1e-9);
  EXPECT_NEAR(moment(DensityModel::normal(), 4.0).value, 3.0, 1e-9);
  // polynomial_tail(q): E|X|^s is infinite once s >= q - 1
  EXPECT_TRUE(moment(DensityModel::polynomial_tail(4.0), 3.0).divergent());
  const auto finite = moment(DensityModel::polynomial_tail(4.0), 1.0);
  EXPECT_TRUE(finite.finite());
  // Quadrature agrees with the closed form where one exists.
  const auto q = integrate_model(g, [&](double x) { return x * x * g.density(x); });
  EXPECT_NEAR(q.value, 30.0, 1e-8);
}

TEST(Densities, SmoothnessGates) {
  EXPECT_TRUE(DensityModel::gamma(5.0).smoothness_gate(2));
  EXPECT_FALSE(DensityModel::gamma(4.0).smoothness_gate(2));
  EXPECT_FALSE(DensityModel::gamma(5.0).smoothness_gate(3));
  EXPECT_TRUE(DensityModel::beta(7.0, 9.0).smoothness_gate(3));
  EXPECT_FALSE(DensityModel::beta(7.0, 5.0).smoothness_gate(3));
  EXPECT_TRUE(DensityModel::half_gaussian().smoothness_gate(1));
  EXPECT_FALSE(DensityModel::half_gaussian().smoothness_gate(2));
  EXPECT_TRUE(DensityModel::normal().smoothness_gate(8));
  EXPECT_EQ(DensityModel::normal().smoothness_order(), kInfiniteSmoothness);
  const auto mix = DensityModel::mixture({{0.5, DensityModel::normal()}, {0.5, DensityModel::gamma(5.0)}});
  EXPECT_TRUE(mix.smoothness_gate(2));
  EXPECT_FALSE(mix.smoothness_gate(3));
}

TEST(Densities, OutsideSupportIsZero) {
  const auto g = DensityModel::gamma(3.0);
  EXPECT_EQ(g.density(-1.0), 0.0);
  EXPECT_EQ(g.derivative(2, -1.0), 0.0);
  EXPECT_EQ(g.cdf(-1.0), 0.0);
}

TEST(Densities, UnsupportedOrder) {
  EXPECT_NO_THROW(DensityModel::normal().derivative(kMaxDerivativeOrder, 0.3));
  EXPECT_THROW(DensityModel::normal().derivative(kMaxDerivativeOrder + 1, 0.3), UnsupportedOrder);
  EXPECT_THROW(DensityModel::normal().derivative(-1, 0.3), UnsupportedOrder);
}

TEST(Densities, InvalidParameters) {
  EXPECT_THROW(DensityModel::normal(0.0, 0.0), InvalidArgument);
  EXPECT_THROW(DensityModel::gamma(-1.0), InvalidArgument);
  EXPECT_THROW(DensityModel::polynomial_tail(1.0), InvalidArgument);
  EXPECT_THROW(DensityModel::mixture({{0.2, DensityModel::normal()}}), InvalidArgument);
  EXPECT_THROW(DensityModel::affine(DensityModel::normal(), 0.0, -1.0), InvalidArgument);
}

TEST(Densities, MixtureIsWeightedSum) {
  const auto a = DensityModel::normal(-1.0, 0.5);
  const auto b = DensityModel::logistic();
  const auto m = DensityModel::mixture({{0.25, a}, {0.75, b}});
  for (double x : {-2.0, 0.0, 1.5}) {
    for (int k = 0; k <= 3; ++k) {
      EXPECT_NEAR(m.derivative(k, x), 0.25 * a.derivative(k, x) + 0.75 * b.derivative(k, x), 1e-15);
    }
  }
}

TEST(Densities, AffineChangeOfVariables) {
  const auto base = DensityModel::gamma(6.0);
  const auto m = DensityModel::affine(base, 1.0, 2.0);
  for (double x : {3.0, 8.0, 15.0}) {
    const double u = (x - 1.0) / 2.0;
    EXPECT_NEAR(m.density(x), base.density(u) / 2.0, 1e-15);
    EXPECT_NEAR(m.derivative(2, x), base.derivative(2, u) / 8.0, 1e-15);
    EXPECT_NEAR(m.cdf(x), base.cdf(u), 1e-15);
  }
  EXPECT_EQ(m.support().lower(), 1.0);
}

TEST(Densities, NormalParameters) {
  const auto p = DensityModel::affine(DensityModel::normal(1.0, 2.0), 3.0, 0.5).normal_parameters();
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->first, 3.5);
  EXPECT_DOUBLE_EQ(p->second, 1.0);
  EXPECT_FALSE(DensityModel::gamma(3.0).normal_parameters());
  const auto s = DensityModel::gaussian_convolution(DensityModel::normal(0.0, 3.0), 4.0).normal_parameters();
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->second, 5.0);
}

TEST(DensityJson, RoundTrip) {
  for (const auto& [name, m] : catalog()) {
    const json j = m.to_json();
    const auto back = DensityModel::from_json(j);
    EXPECT_EQ(back.to_json(), j) << name;
    EXPECT_EQ(back.family(), m.family()) << name;
    for (double x : {m.center(), m.center() + m.spread()}) EXPECT_EQ(back.density(x), m.density(x)) << name;
  }
}

TEST(DensityJson, Aliases) {
  const auto a = DensityModel::from_json(json::parse(R"({"family":"gamma","params":{"shape":4}})"));
  EXPECT_EQ(a.density(2.0), DensityModel::gamma(4.0).density(2.0));
  const auto b = DensityModel::from_json(json::parse(R"({"family":"normal"})"));
  EXPECT_EQ(b.density(0.3), DensityModel::normal().density(0.3));
}

std::string error_field(const std::string& text) {
  try {
    DensityModel::from_json(json::parse(text));
  } catch (const DescriptorError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(DensityJson, ErrorsNameTheField) {
  EXPECT_EQ(error_field(R"({"family":"cauchy"})"), "family");
  EXPECT_EQ(error_field(R"({"params":{}})"), "family");
  EXPECT_EQ(error_field(R"({"family":"gamma","params":{}})"), "params.n");
  EXPECT_EQ(error_field(R"({"family":"gamma","params":{"n":"x"}})"), "params.n");
  EXPECT_EQ(error_field(R"({"family":"gamma","params":{"n":3,"m":1}})"), "params.m");
  EXPECT_EQ(error_field(R"({"family":"gamma","params":{"n":-3}})"), "params");
  EXPECT_EQ(error_field(R"({"family":"gamma","extra":1})"), "extra");
  EXPECT_EQ(error_field(R"([1,2])"), "$");
  EXPECT_EQ(error_field(R"({"family":"mixture","params":{"components":[{"weight":1,"density":{"family":"nope"}}]}})"),
            "params.components[0].density.family");
  EXPECT_EQ(error_field(R"({"family":"affine","params":{"base":{"family":"beta","params":{"alpha":2}}}})"),
            "params.base.params.beta");
}

}  // namespace
}  // namespace fisherp
