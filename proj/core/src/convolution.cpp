#include "fisherp/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"

namespace fisherp {

namespace {

std::optional<DensityModel> reduce(const DensityModel& left, const DensityModel& right) {
  const auto l = left.normal_parameters();
  const auto r = right.normal_parameters();
  if (l && r) return DensityModel::normal(l->first + r->first, std::hypot(l->second, r->second));
  auto with_normal = [](const DensityModel& other, std::pair<double, double> normal) {
    DensityModel smoothed = DensityModel::gaussian_convolution(other, normal.second);
    if (normal.first == 0.0) return smoothed;
    return DensityModel::affine(smoothed, normal.first, 1.0);
  };
  if (l) return with_normal(right, *l);
  if (r) return with_normal(left, *r);
  return std::nullopt;
}

int saturating_add(int a, int b) {
  if (a == kInfiniteSmoothness || b == kInfiniteSmoothness) return kInfiniteSmoothness;
  return a + b;
}

QuadratureConfig outer_config(const QuadratureConfig& config) {
  QuadratureConfig outer = config;
  outer.rel_tol = std::max(config.rel_tol, 1e-7);
  outer.tail_mass_bound = std::max(config.tail_mass_bound, outer.rel_tol / 10.0);
  return outer;
}

QuadratureConfig inner_config(const QuadratureConfig& outer) {
  QuadratureConfig inner = outer;
  inner.rel_tol = outer.rel_tol / 10.0;
  inner.abs_tol = 1e-300;
  inner.tail_mass_bound = inner.rel_tol / 10.0;
  return inner;
}

}  // namespace

ConvolvedDensity::ConvolvedDensity(DensityModel left, DensityModel right)
    : left_(std::move(left)), right_(std::move(right)), reduced_(reduce(left_, right_)) {}

SupportInterval ConvolvedDensity::support() const {
  return {left_.support().lower() + right_.support().lower(),
          left_.support().upper() + right_.support().upper()};
}

IntegrationHints ConvolvedDensity::integration_hints() const {
  if (reduced_) return reduced_->integration_hints();
  IntegrationHints hints;
  hints.breakpoints.push_back(left_.center() + right_.center());
  hints.scale = std::hypot(left_.spread(), right_.spread());
  return hints;
}

int ConvolvedDensity::smoothness_order() const {
  if (reduced_) return reduced_->smoothness_order();
  return saturating_add(left_.smoothness_order(), right_.smoothness_order());
}

std::pair<int, int> ConvolvedDensity::split(int order) const {
  if (order < 0) throw InvalidArgument("derivative order must be nonnegative");
  const int sf = left_.smoothness_order();
  const int sg = right_.smoothness_order();
  const int k = sf >= sg ? std::min(order, sf) : order - std::min(order, sg);
  if (k > sf || order - k > sg) {
    throw UnsupportedOrder("no derivative split of order " + std::to_string(order) +
                           " fits the factor smoothness");
  }
  return {k, order - k};
}

double ConvolvedDensity::eval_split(int order, int k, double x, const QuadratureConfig& inner) const {
  if (k < 0 || k > order) throw InvalidArgument("split index out of range");
  if (reduced_) return reduced_->derivative(order, x);
  const auto& sf = left_.support();
  const auto& sg = right_.support();
  const double lo = std::max(sg.lower(), x - sf.upper());
  const double hi = std::min(sg.upper(), x - sf.lower());
  if (!(lo < hi)) return 0.0;

  IntegrationHints hints;
  for (double b : right_.integration_hints().breakpoints) hints.breakpoints.push_back(b);
  for (double b : left_.integration_hints().breakpoints) hints.breakpoints.push_back(x - b);
  hints.breakpoints.push_back(x - left_.center());
  hints.scale = std::min(left_.spread(), right_.spread());
  const int l = order - k;
  return integrate(
             [&](double y) {
               const double g = right_.derivative(l, y);
               if (g == 0.0) return 0.0;
               return left_.derivative(k, x - y) * g;
             },
             {lo, hi}, inner, hints)
      .value;
}

double convolve_eval(const ConvolvedDensity& c, int order, double x, const QuadratureConfig& config) {
  if (order > kMaxDerivativeOrder) throw UnsupportedOrder("convolution derivative order too large");
  if (c.reduced()) return c.reduced()->derivative(order, x);
  return c.eval_split(order, c.split(order).first, x, inner_config(outer_config(config)));
}

FunctionalValue fisher_info_convolved(const ConvolvedDensity& c, int p, const QuadratureConfig& config) {
  if (p < 0) throw InvalidArgument("Fisher information order must be nonnegative");
  if (p > kMaxConvolvedOrder) {
    throw UnsupportedOrder("convolved Fisher information is limited to p <= " +
                           std::to_string(kMaxConvolvedOrder));
  }
  if (p == 0) return FunctionalValue::exact(1.0);
  if (c.reduced()) return fisher_info(*c.reduced(), p, config);
  if (p > c.smoothness_order()) return FunctionalValue::divergent_value();

  const QuadratureConfig outer = outer_config(config);
  const QuadratureConfig inner = inner_config(outer);
  const int k0 = c.split(0).first;
  const int kp = c.split(p).first;
  FunctionalValue out = integrate(
      [&](double x) {
        const double h = c.eval_split(0, k0, x, inner);
        if (h <= kDensityFloor) return 0.0;
        const double hp = c.eval_split(p, kp, x, inner);
        return hp * hp / h;
      },
      c.support(), outer, c.integration_hints());
  if (out.divergent()) return out;
  // Inner errors enter the integrand roughly three times (h^(p) twice, h once).
  out.error_estimate += 3.0 * inner.rel_tol * std::abs(out.value);
  out.status = out.error_estimate <= 1e-4 * std::abs(out.value) ? Status::Finite : Status::Inconclusive;
  return out;
}

SmoothingLadder smoothing_ladder(const DensityModel& model, int p, const std::vector<double>& eps_list,
                                 const QuadratureConfig& config) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] >= 0.01) || !std::isfinite(eps_list[i])) {
      throw InvalidArgument("ladder eps values must be finite and at least 0.01");
    }
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw InvalidArgument("ladder eps values must be strictly decreasing");
    }
  }
  SmoothingLadder ladder;
  ladder.eps = eps_list;
  for (double eps : eps_list) {
    ladder.values.push_back(fisher_info(DensityModel::gaussian_convolution(model, eps), p, config));
  }
  const std::size_t n = ladder.values.size();
  if (n >= 3) {
    bool usable = true;
    double sum = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
      if (!ladder.values[i].finite()) usable = false;
      const double ui = eps_list[i] * eps_list[i];
      double weight = 1.0;
      for (std::size_t j = n - 3; j < n; ++j) {
        if (j == i) continue;
        const double uj = eps_list[j] * eps_list[j];
        weight *= -uj / (ui - uj);
      }
      sum += weight * ladder.values[i].value;
    }
    if (usable) ladder.extrapolated = sum;
  }
  return ladder;
}

}  // namespace fisherp
