#include "fisherp/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"

namespace fisherp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 200;

double midpoint(double lo, double hi) {
  if (lo > 0.0 && hi > 0.0) return std::sqrt(lo) * std::sqrt(hi);
  if (lo < 0.0 && hi < 0.0) return -std::sqrt(-lo) * std::sqrt(-hi);
  if (lo == 0.0 && hi > 0.0) return hi / 64.0;
  if (hi == 0.0 && lo < 0.0) return lo / 64.0;
  return 0.5 * (lo + hi);
}

// Solves F(x) = target (lower tail) or 1 - F(x) = target (upper tail) for
// 0 < target <= 1/2. h(x) below is increasing in x in both cases.
double solve_tail(const DensityModel& model, double target, bool lower_tail) {
  auto h = [&](double x) { return lower_tail ? model.cdf(x) - target : target - model.survival(x); };
  const auto& s = model.support();
  const double c = model.center();
  const double w = model.spread();

  double lo = s.lower();
  double hi = s.upper();
  int iterations = 0;
  if (!s.lower_finite()) {
    double step = w;
    lo = std::min(c, s.upper() - w) - step;
    while (h(lo) > 0.0) {
      if (++iterations > kMaxIterations) throw NonConvergence("quantile: cannot bracket from below");
      step *= 2.0;
      lo = c - step;
    }
  }
  if (!s.upper_finite()) {
    double step = w;
    hi = std::max(c, s.lower() + w) + step;
    while (h(hi) < 0.0) {
      if (++iterations > kMaxIterations) throw NonConvergence("quantile: cannot bracket from above");
      step *= 2.0;
      hi = c + step;
    }
  }

  // Bisection to relative width 1e-8.
  double x = midpoint(lo, hi);
  while (hi - lo > 1e-8 * std::max(std::abs(lo), std::abs(hi)) && hi - lo > 1e-12 * w) {
    if (++iterations > kMaxIterations) throw NonConvergence("quantile: bisection did not converge");
    x = midpoint(lo, hi);
    if (!(x > lo && x < hi)) break;
    const double v = h(x);
    if (v == 0.0) return x;
    (v < 0.0 ? lo : hi) = x;
  }
  x = midpoint(lo, hi);

  // Newton polish with f as the derivative of h, kept inside the bracket.
  while (true) {
    if (++iterations > kMaxIterations) throw NonConvergence("quantile: Newton polish did not converge");
    const double v = h(x);
    if (std::abs(v) <= 4.0 * kEps * target) return x;
    (v < 0.0 ? lo : hi) = x;
    const double f = model.density(x);
    double next = f > 0.0 ? x - v / f : midpoint(lo, hi);
    if (!(next > lo && next < hi)) next = midpoint(lo, hi);
    if (std::abs(next - x) <= 4.0 * kEps * std::abs(x) || next == x) return next;
    x = next;
  }
}

void require_profile_density(const DensityModel& model) {
  if (!model.positive_on_support()) {
    throw UnsupportedDensity(std::string("profile needs a density positive on a single interval; got ") +
                             std::string(to_string(model.family())));
  }
}

using Pullback = std::array<double, 3>;  // f, f', f''

// int_0^1 g(f, f', f'' at F^-1(t)) dt, split at t = 1/2 so that each half is
// parameterized by its own tail probability.
template <class G>
FunctionalValue integrate_over_t(const DensityModel& model, const QuadratureConfig& config, G g) {
  auto make = [&](bool lower) {
    return [&, lower](double t) {
      const double x = lower ? quantile(model, t) : upper_quantile(model, t);
      Pullback d{};
      model.derivatives(x, d);
      if (d[0] <= kDensityFloor) return 0.0;
      return g(d);
    };
  };
  const SupportInterval half(0.0, 0.5);
  const FunctionalValue lower = integrate(make(true), half, config);
  const FunctionalValue upper = integrate(make(false), half, config);
  FunctionalValue total = add_values(lower, upper);
  if (total.finite()) {
    const double target = std::max(config.rel_tol * std::abs(total.value), config.abs_tol);
    if (total.error_estimate > target) total.status = Status::Inconclusive;
  }
  return total;
}

}  // namespace

double cdf(const DensityModel& model, double x) { return model.cdf(x); }

double quantile(const DensityModel& model, double t) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
  return t <= 0.5 ? solve_tail(model, t, true) : solve_tail(model, 1.0 - t, false);
}

double upper_quantile(const DensityModel& model, double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("tail level must lie in (0, 1)");
  return s <= 0.5 ? solve_tail(model, s, false) : solve_tail(model, 1.0 - s, true);
}

ProfileGrid build_profile(const DensityModel& model, int n_nodes) {
  if (n_nodes < 1) throw InvalidArgument("profile needs at least one node");
  require_profile_density(model);
  std::vector<double> ts;
  for (int j = 0; j < n_nodes; ++j) {
    const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / n_nodes));
    ts.push_back(std::clamp(t, kProfileClip, 1.0 - kProfileClip));
  }
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  ProfileGrid grid;
  for (double t : ts) {
    const double x = t <= 0.5 ? quantile(model, t) : upper_quantile(model, 1.0 - t);
    Pullback d{};
    model.derivatives(x, d);
    const double lp = d[1] / d[0];
    grid.t.push_back(t);
    grid.x.push_back(x);
    grid.L.push_back(d[0]);
    grid.Lp.push_back(lp);
    grid.LLpp.push_back(d[2] / d[0] - lp * lp);
  }
  return grid;
}

std::string profile_csv(const ProfileGrid& grid) {
  std::string out = "t,x,L,Lp,LLpp\n";
  char buf[160];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.t[i], grid.x[i], grid.L[i],
                  grid.Lp[i], grid.LLpp[i]);
    out += buf;
  }
  return out;
}

FunctionalValue info_via_profile(const DensityModel& model, double p_exponent, const QuadratureConfig& config) {
  if (!(p_exponent >= 1.0)) throw InvalidArgument("profile exponent must be >= 1");
  require_profile_density(model);
  return integrate_over_t(model, config,
                          [p_exponent](const Pullback& d) { return std::pow(std::abs(d[1] / d[0]), p_exponent); });
}

FunctionalValue i2_via_profile(const DensityModel& model, I2Variant variant, const QuadratureConfig& config) {
  require_profile_density(model);
  if (!model.smoothness_gate(2)) return FunctionalValue::divergent_value();
  if (variant == I2Variant::Squared) {
    return integrate_over_t(model, config, [](const Pullback& d) {
      const double r = d[2] / d[0];
      return r * r;
    });
  }
  return integrate_over_t(model, config, [](const Pullback& d) {
    const double lp = d[1] / d[0];
    const double llpp = d[2] / d[0] - lp * lp;
    return llpp * llpp + lp * lp * lp * lp / 3.0;
  });
}

BoundaryReport boundary_diagnostics(const DensityModel& model) {
  require_profile_density(model);
  BoundaryReport report;
  auto point = [&](double t, double x) {
    std::array<double, 2> d{};
    model.derivatives(x, d);
    const double lp = d[1] / d[0];
    return BoundaryPoint{t, d[1], d[1] * lp * lp};
  };
  for (int k = 2; k <= 6; ++k) {
    const double s = std::pow(10.0, -k);
    report.lower.push_back(point(s, quantile(model, s)));
    report.upper.push_back(point(1.0 - s, upper_quantile(model, s)));
  }
  auto decreasing = [](const std::vector<BoundaryPoint>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(std::abs(v[i].l_lp) < std::abs(v[i - 1].l_lp))) return false;
      if (!(std::abs(v[i].l_lp3) < std::abs(v[i - 1].l_lp3))) return false;
    }
    return true;
  };
  report.monotone = decreasing(report.lower) && decreasing(report.upper);
  return report;
}

}  // namespace fisherp
