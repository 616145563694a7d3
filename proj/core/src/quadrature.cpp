#include "fisherp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fisherp/errors.hpp"

namespace fisherp {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0) || !(divergence_cap > 0) || !(tail_mass_bound > 0)) {
    throw InvalidArgument("quadrature tolerances must be positive");
  }
  if (max_depth < 10) {
    throw InvalidArgument("quadrature max_depth must be at least 10");
  }
  if (max_subdivisions < 1) {
    throw InvalidArgument("quadrature max_subdivisions must be positive");
  }
}

QuadratureConfig QuadratureConfig::with_rel_tol(double rel_tol) {
  QuadratureConfig config;
  config.rel_tol = rel_tol;
  config.tail_mass_bound = rel_tol / 10.0;
  return config;
}

Status classify_divergence(std::span<const double> partial_sums, const QuadratureConfig& config) {
  const auto n = partial_sums.size();
  if (n < 8) {
    return Status::Inconclusive;
  }
  const auto window = partial_sums.subspan(n - 6);
  bool monotone = true;
  bool fast_growth = true;
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (!(window[i] > window[i - 1])) {
      monotone = false;
    }
    if (!(window[i] >= window[i - 1] * (1.0 + 10.0 * config.rel_tol))) {
      fast_growth = false;
    }
  }
  const double last = window.back();
  if (monotone && (last > config.divergence_cap || fast_growth)) {
    return Status::Divergent;
  }
  if (std::isfinite(last) && std::abs(last - window[window.size() - 2]) <= config.rel_tol * std::abs(last)) {
    return Status::Finite;
  }
  return Status::Inconclusive;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Smallest panel width relative to |end|. Below it the rounding of x near a
// nonzero end shows up as integrand noise above the panel tolerance.
constexpr double kResolution = 1e6 * kEps;

// One half of a piece: the end at u = 0 may be singular or infinite, the end
// at u = 1 is the finite interior point `inner`.
struct Half {
  double end;
  double inner;
  double scale;

  double x(double u) const {
    if (end == kInf) return inner + scale * (1.0 - u) / u;
    if (end == -kInf) return inner - scale * (1.0 - u) / u;
    return end + (inner - end) * u;
  }
  double jacobian(double u) const {
    if (std::isinf(end)) return scale / (u * u);
    return std::abs(inner - end);
  }
};

struct GkEstimate {
  double a = 0.0;
  double b = 0.0;
  double integral = 0.0;
  double error = 0.0;
  double abs_integral = 0.0;
  bool nonfinite = false;
};

struct KronrodTables {
  std::array<double, 11> nodes{};
  std::array<double, 11> kronrod{};
  std::array<double, 5> gauss{};  // weights for nodes[1], nodes[3], ..., nodes[9]
};

const KronrodTables& tables() {
  static const KronrodTables t = [] {
    KronrodTables k;
    const auto& x = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
    const auto& w = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
    const auto& g = boost::math::quadrature::gauss<double, 10>::weights();
    std::copy(x.begin(), x.end(), k.nodes.begin());
    std::copy(w.begin(), w.end(), k.kronrod.begin());
    std::copy(g.begin(), g.end(), k.gauss.begin());
    return k;
  }();
  return t;
}

class PanelIntegrator {
 public:
  PanelIntegrator(const Integrand& g, const Half& half) : g_(g), half_(half) {}

  double eval(double u) {
    ++nodes_;
    const double v = g_(half_.x(u));
    if (v == 0.0) return 0.0;
    return v * half_.jacobian(u);
  }

  GkEstimate gk21(double a, double b) {
    const auto& t = tables();
    const double center = 0.5 * (a + b);
    const double half_len = 0.5 * (b - a);
    std::array<double, 21> f{};
    f[0] = eval(center);
    for (int i = 1; i < 11; ++i) {
      const double dx = half_len * t.nodes[i];
      f[2 * i - 1] = eval(center - dx);
      f[2 * i] = eval(center + dx);
    }
    GkEstimate r;
    r.a = a;
    r.b = b;
    double kronrod = t.kronrod[0] * f[0];
    double gauss = 0.0;
    double abs_sum = t.kronrod[0] * std::abs(f[0]);
    for (int i = 1; i < 11; ++i) {
      const double pair = f[2 * i - 1] + f[2 * i];
      kronrod += t.kronrod[i] * pair;
      abs_sum += t.kronrod[i] * (std::abs(f[2 * i - 1]) + std::abs(f[2 * i]));
      if (i % 2 == 1) gauss += t.gauss[i / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = t.kronrod[0] * std::abs(f[0] - mean);
    for (int i = 1; i < 11; ++i) {
      asc += t.kronrod[i] * (std::abs(f[2 * i - 1] - mean) + std::abs(f[2 * i] - mean));
    }
    r.integral = kronrod * half_len;
    r.abs_integral = abs_sum * half_len;
    const double resasc = asc * half_len;
    double err = std::abs((kronrod - gauss) * half_len);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (r.abs_integral > std::numeric_limits<double>::min() / (50.0 * kEps)) {
      err = std::max(50.0 * kEps * r.abs_integral, err);
    }
    r.error = err;
    r.nonfinite = !std::isfinite(r.integral) || !std::isfinite(r.error);
    return r;
  }

  std::int64_t nodes() const { return nodes_; }

 private:
  const Integrand& g_;
  const Half& half_;
  std::int64_t nodes_ = 0;
};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  bool nonfinite = false;
  bool converged = true;
};

// Globally adaptive bisection on [a, b] until the summed error drops below
// max(rel_tol * integral of |g|, abs_floor).
PanelResult adaptive_panel(PanelIntegrator& integrator, double a, double b, double rel_tol,
                           double abs_floor, int max_subdivisions) {
  auto worse = [](const GkEstimate& l, const GkEstimate& r) { return l.error < r.error; };
  std::priority_queue<GkEstimate, std::vector<GkEstimate>, decltype(worse)> queue(worse);
  GkEstimate first = integrator.gk21(a, b);
  PanelResult result;
  result.value = first.integral;
  result.error = first.error;
  result.abs_value = first.abs_integral;
  if (first.nonfinite) {
    result.nonfinite = true;
    return result;
  }
  queue.push(first);
  int subdivisions = 0;
  while (result.error > std::max(rel_tol * result.abs_value, abs_floor)) {
    if (subdivisions >= max_subdivisions) {
      result.converged = false;
      break;
    }
    GkEstimate worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 8.0 * kEps * std::abs(mid)) {
      result.converged = false;
      break;
    }
    queue.pop();
    GkEstimate left = integrator.gk21(worst.a, mid);
    GkEstimate right = integrator.gk21(mid, worst.b);
    if (left.nonfinite || right.nonfinite) {
      result.nonfinite = true;
      return result;
    }
    result.value += left.integral + right.integral - worst.integral;
    result.error += left.error + right.error - worst.error;
    result.abs_value += left.abs_integral + right.abs_integral - worst.abs_integral;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }
  // Recompute sums from the leaves to shed accumulated update round-off.
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  while (!queue.empty()) {
    value += queue.top().integral;
    error += queue.top().error;
    abs_value += queue.top().abs_integral;
    queue.pop();
  }
  result.value = value;
  result.error = error;
  result.abs_value = abs_value;
  return result;
}

struct HalfResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  Status status = Status::Finite;
  std::int64_t nodes = 0;
};

struct TailEstimate {
  double value;
  double error;      // fit error plus a 1e-3 relative safety margin
  double fit_error;  // from the spread of the observed ratios alone
};

// Sum of the remaining generations when the last four decay at a stable
// ratio below 0.95 without changing sign.
std::optional<TailEstimate> geometric_tail(const std::vector<double>& signed_parts,
                                           const std::vector<double>& abs_parts) {
  const auto n = abs_parts.size();
  if (n < 6 || !(abs_parts[n - 4] > 0.0)) return std::nullopt;
  const double r1 = abs_parts[n - 1] / abs_parts[n - 2];
  const double r2 = abs_parts[n - 2] / abs_parts[n - 3];
  const double r3 = abs_parts[n - 3] / abs_parts[n - 4];
  const bool same_sign = (signed_parts[n - 1] > 0) == (signed_parts[n - 2] > 0) &&
                         (signed_parts[n - 2] > 0) == (signed_parts[n - 3] > 0);
  const double r_max = std::max({r1, r2, r3});
  if (!same_sign || !(r1 > 0.0) || !(r_max < 0.95)) return std::nullopt;
  const double spread = std::max(std::abs(r1 - r2), std::abs(r2 - r3));
  const double tail = signed_parts[n - 1] * r1 / (1.0 - r1);
  const double fit = abs_parts[n - 1] * spread / ((1.0 - r_max) * (1.0 - r_max));
  return TailEstimate{tail, fit + 1e-3 * std::abs(tail), fit};
}

HalfResult integrate_half(const Integrand& g, const Half& half, const QuadratureConfig& config) {
  PanelIntegrator integrator(g, half);
  HalfResult out;
  std::vector<double> signed_parts;
  std::vector<double> abs_parts;
  std::vector<double> history;  // partial sums of absolute contributions
  const double panel_rel = 0.1 * config.rel_tol;
  const double panel_abs = 0.01 * config.abs_tol;
  bool stopped = false;
  bool resolution_limited = false;

  for (int k = 0; k < config.max_depth; ++k) {
    const double hi = std::ldexp(1.0, -k);
    const double lo = std::ldexp(1.0, -k - 1);
    // Closer to a finite nonzero end than x can resolve: stop refining.
    if (std::isfinite(half.end) && std::abs(half.inner - half.end) * lo < kResolution * std::abs(half.end)) {
      resolution_limited = true;
      break;
    }
    const PanelResult panel =
        adaptive_panel(integrator, lo, hi, panel_rel, panel_abs, config.max_subdivisions);
    if (panel.nonfinite) {
      out.status = Status::Divergent;
      out.value = kInf;
      out.error = kInf;
      out.nodes = integrator.nodes();
      return out;
    }
    out.value += panel.value;
    out.error += panel.error;
    out.abs_value += panel.abs_value;
    if (!panel.converged) out.status = Status::Inconclusive;
    signed_parts.push_back(panel.value);
    abs_parts.push_back(panel.abs_value);
    history.push_back(out.abs_value);

    if (out.abs_value > config.divergence_cap && history.size() >= 8 &&
        classify_divergence(history, config) == Status::Divergent) {
      out.status = Status::Divergent;
      break;
    }

    const auto n = abs_parts.size();
    // Negligible tail: the last two generations carry no measurable mass.
    if (k >= 3) {
      const double bound = std::max(config.tail_mass_bound * out.abs_value, panel_abs);
      if (abs_parts[n - 1] <= bound && abs_parts[n - 2] <= bound && abs_parts[n - 1] <= abs_parts[n - 2]) {
        out.error += abs_parts[n - 1];
        stopped = true;
        break;
      }
    }
    // Geometric tail: contributions decay at a stable ratio, sum the rest.
    if (const auto tail = geometric_tail(signed_parts, abs_parts)) {
      if (tail->error <= 0.1 * config.rel_tol * out.abs_value) {
        out.value += tail->value;
        out.abs_value += std::abs(tail->value);
        out.error += tail->error;
        stopped = true;
        break;
      }
    }
  }
  if (resolution_limited && out.status == Status::Finite) {
    const auto tail = geometric_tail(signed_parts, abs_parts);
    if (tail && tail->fit_error <= 0.01 * config.rel_tol * out.abs_value) {
      out.value += tail->value;
      out.abs_value += std::abs(tail->value);
      out.error += 10.0 * tail->fit_error;
      stopped = true;
    }
  }
  out.nodes = integrator.nodes();
  if (out.status == Status::Divergent) {
    out.value = kInf;
    out.error = kInf;
    return out;
  }
  if (!stopped) {
    const Status verdict = classify_divergence(history, config);
    if (verdict == Status::Divergent) {
      out.status = Status::Divergent;
      out.value = kInf;
      out.error = kInf;
    } else if (verdict == Status::Inconclusive) {
      out.status = Status::Inconclusive;
    } else {
      out.error += abs_parts.back();
    }
  }
  return out;
}

}  // namespace

FunctionalValue integrate_finite(const Integrand& integrand, double a, double b, double rel_tol,
                                 double abs_tol, std::span<const double> breakpoints,
                                 int max_subdivisions) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw InvalidArgument("integrate_finite needs finite limits");
  }
  if (!(rel_tol > 0) || !(abs_tol > 0)) {
    throw InvalidArgument("integrate_finite tolerances must be positive");
  }
  FunctionalValue result;
  if (a == b) return result;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  bool converged = true;
  double abs_total = 0.0;
  const int pieces = static_cast<int>(cuts.size()) - 1;
  for (int i = 0; i < pieces; ++i) {
    const Half piece{cuts[i], cuts[i + 1], 1.0};
    PanelIntegrator integrator(integrand, piece);
    const PanelResult part =
        adaptive_panel(integrator, 0.0, 1.0, rel_tol, abs_tol / pieces, max_subdivisions);
    result.node_count += integrator.nodes();
    if (part.nonfinite) {
      result.value = std::numeric_limits<double>::quiet_NaN();
      result.error_estimate = kInf;
      result.status = Status::Inconclusive;
      return result;
    }
    result.value += part.value;
    result.error_estimate += part.error;
    abs_total += part.abs_value;
    converged = converged && part.converged;
  }
  result.value *= sign;
  const double target = std::max({rel_tol * abs_total, abs_tol, 100.0 * kEps * abs_total});
  result.status = converged || result.error_estimate <= target ? Status::Finite : Status::Inconclusive;
  return result;
}

FunctionalValue integrate(const Integrand& integrand, const SupportInterval& interval,
                          const QuadratureConfig& config, const IntegrationHints& hints) {
  config.validate();
  const double scale = hints.scale > 0.0 && std::isfinite(hints.scale) ? hints.scale : 1.0;

  std::vector<double> points;
  for (double b : hints.breakpoints) {
    if (std::isfinite(b) && interval.contains(b)) points.push_back(b);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty() && !interval.lower_finite() && !interval.upper_finite()) {
    points.push_back(0.0);
  }

  std::vector<double> cuts;
  cuts.push_back(interval.lower());
  cuts.insert(cuts.end(), points.begin(), points.end());
  cuts.push_back(interval.upper());

  std::vector<Half> halves;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (std::isfinite(a) && std::isfinite(b)) {
      const double m = 0.5 * (a + b);
      halves.push_back({a, m, scale});
      halves.push_back({b, m, scale});
    } else if (std::isfinite(a)) {
      const double m = a + scale;
      halves.push_back({a, m, scale});
      halves.push_back({kInf, m, scale});
    } else {
      const double m = b - scale;
      halves.push_back({b, m, scale});
      halves.push_back({-kInf, m, scale});
    }
  }

  FunctionalValue result;
  double abs_total = 0.0;
  bool inconclusive = false;
  for (const Half& half : halves) {
    const HalfResult part = integrate_half(integrand, half, config);
    result.node_count += part.nodes;
    if (part.status == Status::Divergent) {
      return FunctionalValue::divergent_value(result.node_count);
    }
    if (part.status == Status::Inconclusive) inconclusive = true;
    result.value += part.value;
    result.error_estimate += part.error;
    abs_total += part.abs_value;
  }
  // Relative to the integral of |g| as well, so that cancelling integrals
  // (odd moments, V_{k,0}) can be Finite.
  const double target = std::max({config.rel_tol * std::abs(result.value), config.abs_tol,
                                  0.1 * config.rel_tol * abs_total, 100.0 * kEps * abs_total});
  if (inconclusive || !(result.error_estimate <= target)) {
    result.status = Status::Inconclusive;
  } else {
    result.status = Status::Finite;
  }
  return result;
}

}  // namespace fisherp
