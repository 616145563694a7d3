#include "fisherp/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "fisherp/errors.hpp"

namespace fisherp {

namespace {

void check_order(int p, const char* what) {
  if (p < 0) throw InvalidArgument(std::string(what) + " order must be nonnegative");
  if (p > kMaxFisherOrder) {
    throw UnsupportedOrder(std::string(what) + " order " + std::to_string(p) + " exceeds the cap " +
                           std::to_string(kMaxFisherOrder));
  }
}

using Derivs = std::array<double, kMaxDerivativeOrder + 1>;

// Integrates g(x, f^(0..order)(x)) over the support; g is skipped where f is negligible.
template <class G>
FunctionalValue integrate_derivs(const DensityModel& model, int order, const QuadratureConfig& config,
                                 G g, bool skip_small_density = true) {
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  return integrate(
      [&](double x) {
        Derivs d{};
        model.derivatives(x, std::span<double>(d.data(), n));
        if (skip_small_density && d[0] <= kDensityFloor) return 0.0;
        return g(x, d);
      },
      model.support(), config, model.integration_hints());
}

}  // namespace

FunctionalValue fisher_integral(const DensityModel& model, int p, const QuadratureConfig& config) {
  check_order(p, "Fisher information");
  return integrate_derivs(model, p, config,
                          [p](double, const Derivs& d) { return d[p] * d[p] / d[0]; });
}

FunctionalValue fisher_info(const DensityModel& model, int p, const QuadratureConfig& config) {
  check_order(p, "Fisher information");
  if (p == 0) return FunctionalValue::exact(1.0);
  if (!model.smoothness_gate(p)) return FunctionalValue::divergent_value();
  return fisher_integral(model, p, config);
}

FunctionalValue score_moment(const DensityModel& model, double p, const QuadratureConfig& config) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("score moment order must be >= 1");
  return integrate_derivs(model, 1, config, [p](double, const Derivs& d) {
    return std::pow(std::abs(d[1] / d[0]), p) * d[0];
  });
}

FunctionalValue cross_functional(const DensityModel& model, int k, int l, const QuadratureConfig& config) {
  check_order(k, "cross functional");
  check_order(l, "cross functional");
  if (!model.smoothness_gate(std::max(k, l))) return FunctionalValue::divergent_value();
  if (k == 0 && l == 0) return FunctionalValue::exact(1.0);
  return integrate_derivs(model, std::max(k, l), config,
                          [k, l](double, const Derivs& d) { return d[k] * d[l] / d[0]; });
}

CrossFunctionalMatrix::CrossFunctionalMatrix(int order, std::vector<FunctionalValue> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order < 0 || entries_.size() != static_cast<std::size_t>((order + 1) * (order + 1))) {
    throw InvalidArgument("cross functional matrix has the wrong shape");
  }
}

const FunctionalValue& CrossFunctionalMatrix::at(int k, int l) const {
  if (k < 0 || l < 0 || k > order_ || l > order_) {
    throw InvalidArgument("cross functional index out of range");
  }
  return entries_[static_cast<std::size_t>(k * (order_ + 1) + l)];
}

CrossFunctionalMatrix cross_functional_matrix(const DensityModel& model, int p,
                                              const QuadratureConfig& config) {
  check_order(p, "cross functional");
  const int n = p + 1;
  std::vector<FunctionalValue> entries(static_cast<std::size_t>(n * n));
  for (int k = 0; k <= p; ++k) {
    for (int l = k; l <= p; ++l) {
      const FunctionalValue v = k == l ? fisher_info(model, k, config) : cross_functional(model, k, l, config);
      entries[static_cast<std::size_t>(k * n + l)] = v;
      entries[static_cast<std::size_t>(l * n + k)] = v;
    }
  }
  return CrossFunctionalMatrix(p, std::move(entries));
}

FunctionalValue hermite_square_mean(const DensityModel& model, const MonicPolynomial& poly,
                                    const QuadratureConfig& config) {
  IntegrationHints hints = model.integration_hints();
  return integrate(
      [&](double x) {
        const double f = model.density(x);
        if (f == 0.0) return 0.0;
        const double h = poly(x);
        return h * h * f;
      },
      model.support(), config, hints);
}

RelativeFisherValue relative_fisher(const DensityModel& model, int p, const QuadratureConfig& config) {
  check_order(p, "relative Fisher information");
  if (moment(model, 2.0 * p, config).divergent()) {
    throw MomentRequired("relative Fisher information of order " + std::to_string(p) +
                         " needs a finite moment of order " + std::to_string(2 * p));
  }
  RelativeFisherValue out;
  const FunctionalValue info = fisher_info(model, p, config);
  if (info.divergent()) {
    out.value = info;
    out.identity_value = kInf;
    return out;
  }
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  out.value = integrate_derivs(model, p, config, [p, sign](double x, const Derivs& d) {
    const double r = d[p] / d[0] - sign * hermite_eval(p, x);
    return r * r * d[0];
  });
  const FunctionalValue hsq = hermite_square_mean(model, hermite(p), config);
  out.identity_value = info.value - 2.0 * factorial(p) + hsq.value;
  // Near the normal law both sides vanish; measure against the terms instead.
  const double ref = std::max({std::abs(out.value.value), std::abs(out.identity_value),
                               info.value + hsq.value});
  out.relative_discrepancy = std::abs(out.value.value - out.identity_value) / ref;
  out.defect = out.relative_discrepancy > RelativeFisherValue::kRelativeFisherDefect;
  return out;
}

FunctionalValue derivative_tv_norm(const DensityModel& model, int k, const QuadratureConfig& config) {
  check_order(k, "derivative norm");
  if (!model.smoothness_gate(k)) return FunctionalValue::divergent_value();
  return integrate_derivs(
      model, k, config, [k](double, const Derivs& d) { return std::abs(d[k]); }, false);
}

FunctionalValue derivative_l2_norm(const DensityModel& model, int p, const QuadratureConfig& config) {
  check_order(p, "derivative norm");
  if (!model.smoothness_gate(p)) return FunctionalValue::divergent_value();
  return integrate_derivs(
      model, p, config, [p](double, const Derivs& d) { return d[p] * d[p]; }, false);
}

FunctionalValue derivative_weighted_l1(const DensityModel& model, int p, double s,
                                       const QuadratureConfig& config) {
  check_order(p, "derivative norm");
  if (!(s >= 0.0)) throw InvalidArgument("weight exponent must be nonnegative");
  if (!model.smoothness_gate(p)) return FunctionalValue::divergent_value();
  return integrate_derivs(
      model, p, config,
      [p, s](double x, const Derivs& d) { return d[p] == 0.0 ? 0.0 : std::pow(std::abs(x), s) * std::abs(d[p]); },
      false);
}

double derivative_sup_norm(const DensityModel& model, int k) {
  if (k < 0 || k > kMaxDerivativeOrder) throw UnsupportedOrder("derivative order out of range");
  const auto& s = model.support();
  const double c = model.center();
  const double w = 40.0 * model.spread();
  const double lo = std::max(s.lower(), c - w);
  const double hi = std::min(s.upper(), c + w);
  auto value = [&](double x) { return std::abs(model.derivative(k, x)); };

  std::vector<double> xs;
  constexpr int kGrid = 4000;
  for (int i = 1; i < kGrid; ++i) xs.push_back(lo + (hi - lo) * i / kGrid);
  for (int j = 1; j <= 60; ++j) {
    const double h = (hi - lo) * std::ldexp(1.0, -j);
    if (s.lower_finite()) xs.push_back(lo + h);
    if (s.upper_finite()) xs.push_back(hi - h);
  }
  for (double b : model.integration_hints().breakpoints) {
    if (b > lo && b < hi) xs.push_back(b);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> vs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = value(xs[i]);
  double best = 0.0;
  for (double v : vs) best = std::max(best, v);

  // Refine the local maxima of the sample.
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] && vs[i] >= 0.5 * best) {
      const auto r = boost::math::tools::brent_find_minima([&](double x) { return -value(x); },
                                                           xs[i - 1], xs[i + 1], 50);
      best = std::max(best, -r.second);
    }
  }
  return best;
}

FunctionalValue charfn_modulus_quadrature(const DensityModel& model, double t, const QuadratureConfig& config) {
  if (std::abs(t) > kMaxCharfnArgument) {
    return {std::numeric_limits<double>::quiet_NaN(), kInf, Status::Inconclusive, 0};
  }
  constexpr double kTail = 1e-16;
  const auto& s = model.support();
  double lo = s.lower();
  double hi = s.upper();
  if (!s.lower_finite()) {
    double step = model.spread();
    for (int i = 0; i < 200 && model.cdf(model.center() - step) > kTail; ++i) step *= 2.0;
    lo = model.center() - step;
  }
  if (!s.upper_finite()) {
    double step = model.spread();
    for (int i = 0; i < 200 && model.survival(model.center() + step) > kTail; ++i) step *= 2.0;
    hi = model.center() + step;
  }
  const double periods = (hi - lo) * std::abs(t) / std::numbers::pi;
  const int pieces = static_cast<int>(std::clamp(std::ceil(periods), 1.0, 4000.0));
  std::vector<double> cuts;
  for (int i = 1; i < pieces; ++i) cuts.push_back(lo + (hi - lo) * i / pieces);
  for (double b : model.integration_hints().breakpoints) cuts.push_back(b);

  const double abs_tol = 0.01 * config.abs_tol;
  const FunctionalValue re = integrate_finite(
      [&](double x) { return std::cos(t * x) * model.density(x); }, lo, hi, config.rel_tol, abs_tol, cuts);
  const FunctionalValue im = integrate_finite(
      [&](double x) { return std::sin(t * x) * model.density(x); }, lo, hi, config.rel_tol, abs_tol, cuts);
  FunctionalValue out;
  out.value = std::hypot(re.value, im.value);
  out.error_estimate = re.error_estimate + im.error_estimate + 2.0 * kTail;
  out.node_count = re.node_count + im.node_count;
  out.status = re.finite() && im.finite() ? Status::Finite : Status::Inconclusive;
  return out;
}

FunctionalValue charfn_modulus(const DensityModel& model, double t, const QuadratureConfig& config) {
  if (std::abs(t) > kMaxCharfnArgument) {
    return {std::numeric_limits<double>::quiet_NaN(), kInf, Status::Inconclusive, 0};
  }
  if (const auto cf = model.characteristic_function(t)) return FunctionalValue::exact(std::abs(*cf));
  return charfn_modulus_quadrature(model, t, config);
}

}  // namespace fisherp
