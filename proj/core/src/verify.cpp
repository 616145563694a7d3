#include "fisherp/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "fisherp/convolution.hpp"
#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"
#include "fisherp/profile.hpp"

namespace fisherp {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Verdict judge(double slack, double tolerance) { return slack >= -tolerance ? Verdict::Pass : Verdict::Fail; }

// Empty when v can enter an inequality, otherwise the skip reason.
std::string unusable(const FunctionalValue& v) {
  if (v.divergent()) return skip_reason::kDivergentInput;
  if (!v.finite()) return skip_reason::kInconclusive;
  return {};
}

std::string first_unusable(std::initializer_list<const FunctionalValue*> values) {
  for (const auto* v : values) {
    if (auto r = unusable(*v); !r.empty()) return r;
  }
  return {};
}

json model_inputs(const DensityModel& model, int p) { return {{"density", model.to_json()}, {"p", p}}; }

json coefficients_json(const MonicPolynomial& poly) {
  json out = json::array();
  for (double c : poly.coefficients()) out.push_back(c);
  return out;
}

bool same_polynomial(const MonicPolynomial& a, const MonicPolynomial& b) {
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// Strict monotonicity along a sequence, reported for the weakest step.
InequalityReport strict_monotone(std::string name, json inputs, const std::vector<double>& values,
                                 const std::vector<double>& at, const char* key, bool increasing) {
  auto step = [&](std::size_t i) { return increasing ? values[i + 1] - values[i] : values[i] - values[i + 1]; };
  std::size_t worst = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (step(i) < step(worst)) worst = i;
  }
  inputs[key] = json::array({at[worst], at[worst + 1]});
  const double big = increasing ? values[worst + 1] : values[worst];
  const double small = increasing ? values[worst] : values[worst + 1];
  InequalityReport r = inequality_report(std::move(name), std::move(inputs), big, small, 0.0);
  if (r.slack == 0.0) {
    r.verdict = Verdict::Fail;
    r.reason = "not strictly monotone";
  }
  return r;
}

}  // namespace

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
    case Verdict::Observation: return "observation";
  }
  return "unknown";
}

double default_tolerance(double rhs) { return std::max(1e-6 * std::abs(rhs), 1e-9); }

double equality_tolerance(double rhs) { return 10.0 * default_tolerance(rhs); }

InequalityReport inequality_report(std::string name, json inputs, double lhs, double rhs, double tolerance) {
  InequalityReport r;
  r.check_name = std::move(name);
  r.inputs = std::move(inputs);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  if (std::isinf(lhs) && std::isinf(rhs) && (lhs > 0) == (rhs > 0)) r.slack = 0.0;
  r.tolerance_used = tolerance < 0.0 ? default_tolerance(rhs) : tolerance;
  r.verdict = std::isnan(r.slack) ? Verdict::Fail : judge(r.slack, r.tolerance_used);
  return r;
}

InequalityReport equality_report(std::string name, json inputs, double lhs, double rhs, double tolerance) {
  InequalityReport r = inequality_report(std::move(name), std::move(inputs), lhs, rhs,
                                         tolerance < 0.0 ? equality_tolerance(rhs) : tolerance);
  r.slack = -std::abs(r.slack);
  r.verdict = std::isnan(r.slack) ? Verdict::Fail : judge(r.slack, r.tolerance_used);
  return r;
}

InequalityReport skipped_report(std::string name, json inputs, std::string reason) {
  InequalityReport r;
  r.check_name = std::move(name);
  r.inputs = std::move(inputs);
  r.lhs = r.rhs = r.slack = kNaN;
  r.verdict = Verdict::Skipped;
  r.reason = std::move(reason);
  return r;
}

InequalityReport inverted(InequalityReport r) {
  if (r.verdict == Verdict::Skipped) return r;
  std::swap(r.lhs, r.rhs);
  r.slack = r.lhs - r.rhs;
  r.tolerance_used = default_tolerance(r.rhs);
  r.verdict = std::isnan(r.slack) ? Verdict::Fail : judge(r.slack, r.tolerance_used);
  r.reason = "inverted";
  return r;
}

// Weights ---------------------------------------------------------------------

StamWeights::StamWeights(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw InvalidArgument("weights must not be empty");
  double sum = 0.0;
  for (double a : alpha_) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("weights must be finite and nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("weights must sum to 1");
}

StamWeights StamWeights::optimal(std::span<const double> a) {
  const double m = stam_minimum(a);
  std::vector<double> alpha;
  alpha.reserve(a.size());
  for (double ak : a) alpha.push_back(m / ak);
  return StamWeights(std::move(alpha));
}

double StamWeights::objective(std::span<const double> a) const {
  if (a.size() != alpha_.size()) throw InvalidArgument("coefficient count does not match the weights");
  double q = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) q += a[k] * alpha_[k] * alpha_[k];
  return q;
}

double stam_minimum(std::span<const double> a) {
  if (a.empty()) throw InvalidArgument("no coefficients");
  double s = 0.0;
  for (double ak : a) {
    if (!(ak > 0.0) || !std::isfinite(ak)) throw InvalidArgument("coefficients must be positive and finite");
    s += 1.0 / ak;
  }
  return 1.0 / s;
}

// Closed forms ----------------------------------------------------------------

std::optional<double> closed_form_fisher(const DensityModel& model, int p) {
  if (p < 0) throw InvalidArgument("Fisher information order must be nonnegative");
  if (p == 0) return 1.0;
  if (const auto np = model.normal_parameters()) return factorial(p) * std::pow(np->second, -2.0 * p);
  const json params = model.to_json()["params"];
  switch (model.family()) {
    case Family::Gamma: {
      const double n = params.at("n").get<double>();
      if (p > 3) return std::nullopt;
      if (n <= 2.0 * p) return kInf;
      if (p == 1) return 1.0 / (n - 2.0);
      if (p == 2) return 2.0 * (n + 2.0) / ((n - 2.0) * (n - 3.0) * (n - 4.0));
      return 6.0 * (n * n + 13.0 * n + 6.0) / ((n - 2.0) * (n - 3.0) * (n - 4.0) * (n - 5.0) * (n - 6.0));
    }
    case Family::Logistic:
      if (p == 1) return 1.0 / 3.0;
      if (p == 2) return 1.0 / 5.0;
      return std::nullopt;
    case Family::Affine: {
      const auto base = closed_form_fisher(DensityModel::from_json(params.at("base")), p);
      if (!base) return std::nullopt;
      return *base * std::pow(params.at("scale").get<double>(), -2.0 * p);
    }
    default:
      return std::nullopt;
  }
}

std::optional<double> closed_form_v12(const DensityModel& model) {
  if (model.normal_parameters()) return 0.0;
  const json params = model.to_json()["params"];
  if (model.family() == Family::Gamma) {
    const double n = params.at("n").get<double>();
    if (n <= 3.0) return std::nullopt;
    return 2.0 / ((n - 2.0) * (n - 3.0));
  }
  if (model.family() == Family::Affine) {
    const auto base = closed_form_v12(DensityModel::from_json(params.at("base")));
    if (!base) return std::nullopt;
    return *base * std::pow(params.at("scale").get<double>(), -3.0);
  }
  return std::nullopt;
}

// Checks ----------------------------------------------------------------------

std::vector<InequalityReport> check_cramer_rao(const DensityModel& model, int p, const MonicPolynomial& poly,
                                               const QuadratureConfig& config) {
  if (p < 1) throw InvalidArgument("Cramer-Rao check needs p >= 1");
  if (poly.degree() != p) throw InvalidArgument("polynomial degree must equal p");
  json inputs = model_inputs(model, p);
  inputs["poly"] = coefficients_json(poly);
  const std::string name = "cramer_rao";

  const FunctionalValue beta = moment(model, 2.0 * p, config);
  if (beta.divergent()) return {skipped_report(name, inputs, skip_reason::kMomentRequired)};
  const FunctionalValue info = fisher_info(model, p, config);
  const FunctionalValue eh2 = hermite_square_mean(model, poly, config);
  if (auto r = first_unusable({&beta, &info, &eh2}); !r.empty()) return {skipped_report(name, inputs, r)};

  const double pf = factorial(p);
  std::vector<InequalityReport> out{inequality_report(name, inputs, info.value + eh2.value, 2.0 * pf)};
  if (same_polynomial(poly, hermite(p)) && std::abs(eh2.value - pf) <= 1e-6 * pf) {
    out.push_back(inequality_report("cramer_rao/matched_moment", inputs, info.value, pf - 1e-6));
  }
  return out;
}

InequalityReport check_cramer_rao_product(const DensityModel& model, int p, const QuadratureConfig& config) {
  if (p < 1) throw InvalidArgument("Cramer-Rao check needs p >= 1");
  const json inputs = model_inputs(model, p);
  const std::string name = "cramer_rao_product";
  const FunctionalValue beta = moment(model, 2.0 * p, config);
  if (beta.divergent()) return skipped_report(name, inputs, skip_reason::kMomentRequired);
  const FunctionalValue info = fisher_info(model, p, config);
  if (auto r = first_unusable({&beta, &info}); !r.empty()) return skipped_report(name, inputs, r);
  return inequality_report(name, inputs, info.value * beta.value, factorial(p) / 2.0);
}

InequalityReport check_relative_fisher(const DensityModel& model, int p, double rel_tol,
                                       const QuadratureConfig& config) {
  if (p < 1) throw InvalidArgument("relative Fisher check needs p >= 1");
  const json inputs = model_inputs(model, p);
  const std::string name = "relative_fisher";
  if (!smoothness_gate(model, p)) return skipped_report(name, inputs, skip_reason::kDivergentInput);
  RelativeFisherValue rel;
  try {
    rel = relative_fisher(model, p, config);
  } catch (const MomentRequired&) {
    return skipped_report(name, inputs, skip_reason::kMomentRequired);
  }
  if (auto r = unusable(rel.value); !r.empty()) return skipped_report(name, inputs, r);
  // I^(p) + E H_p^2 is the size of the terms that cancel in the identity.
  const double scale = rel.identity_value + 2.0 * factorial(p);
  return equality_report(name, inputs, rel.value.value, rel.identity_value, rel_tol * scale);
}

std::vector<InequalityReport> check_order_two_chain(const DensityModel& model, const QuadratureConfig& config) {
  const json inputs{{"density", model.to_json()}};
  const std::string upper = "order_two_chain/i2_vs_i4";
  const std::string lower = "order_two_chain/i4_vs_i1";
  const FunctionalValue i2 = fisher_info(model, 2, config);
  if (auto r = unusable(i2); !r.empty()) return {skipped_report(upper, inputs, r), skipped_report(lower, inputs, r)};
  const FunctionalValue i4 = score_moment(model, 4.0, config);
  const FunctionalValue i1 = fisher_info(model, 1, config);
  if (auto r = first_unusable({&i4, &i1}); !r.empty()) {
    return {skipped_report(upper, inputs, r), skipped_report(lower, inputs, r)};
  }
  return {inequality_report(upper, inputs, i2.value, i4.value / 3.0),
          inequality_report(lower, inputs, i4.value / 3.0, i1.value * i1.value / 3.0)};
}

namespace {

struct StamTerms {
  FunctionalValue sum;
  FunctionalValue x_p, y_p, x_k, y_pk;
};

StamTerms stam_terms(const DensityModel& x, const DensityModel& y, int p, int k, const QuadratureConfig& config) {
  if (p < 2 || k < 1 || k > p - 1) throw InvalidArgument("Stam check needs p >= 2 and 1 <= k <= p - 1");
  StamTerms t;
  t.x_p = fisher_info(x, p, config);
  t.y_p = fisher_info(y, p, config);
  t.x_k = fisher_info(x, k, config);
  t.y_pk = fisher_info(y, p - k, config);
  if (first_unusable({&t.x_p, &t.y_p, &t.x_k, &t.y_pk}).empty()) {
    t.sum = fisher_info_convolved(ConvolvedDensity(x, y), p, config);
  } else {
    t.sum = FunctionalValue::divergent_value();
  }
  return t;
}

json pair_inputs(const DensityModel& x, const DensityModel& y, int p) {
  return {{"x", x.to_json()}, {"y", y.to_json()}, {"p", p}};
}

}  // namespace

InequalityReport check_stam(const DensityModel& x, const DensityModel& y, int p, int k,
                            const QuadratureConfig& config) {
  json inputs = pair_inputs(x, y, p);
  inputs["k"] = k;
  const StamTerms t = stam_terms(x, y, p, k, config);
  if (auto r = first_unusable({&t.x_p, &t.y_p, &t.x_k, &t.y_pk, &t.sum}); !r.empty()) {
    return skipped_report("stam", inputs, r);
  }
  const double rhs = 1.0 / t.x_p.value + 1.0 / t.y_p.value + 1.0 / (t.x_k.value * t.y_pk.value);
  return inequality_report("stam", inputs, 1.0 / t.sum.value, rhs);
}

InequalityReport check_stam_product(const DensityModel& x, const DensityModel& y, int p, int k,
                                    const QuadratureConfig& config) {
  json inputs = pair_inputs(x, y, p);
  inputs["k"] = k;
  const StamTerms t = stam_terms(x, y, p, k, config);
  if (auto r = first_unusable({&t.x_k, &t.y_pk, &t.x_p, &t.y_p, &t.sum}); !r.empty()) {
    return skipped_report("stam_product", inputs, r);
  }
  return inequality_report("stam_product", inputs, t.x_k.value * t.y_pk.value, t.sum.value);
}

InequalityReport check_stam_sharp(const DensityModel& x, const DensityModel& y, int p,
                                  const QuadratureConfig& config) {
  if (p < 1) throw InvalidArgument("sharp Stam check needs p >= 1");
  const json inputs = pair_inputs(x, y, p);
  const std::string name = "stam_sharp";
  double rhs = 0.0;
  for (int k = 0; k <= p; ++k) {
    const FunctionalValue ix = fisher_info(x, k, config);
    const FunctionalValue iy = fisher_info(y, p - k, config);
    if (auto r = first_unusable({&ix, &iy}); !r.empty()) return skipped_report(name, inputs, r);
    rhs += 1.0 / (ix.value * iy.value);
  }
  const FunctionalValue sum = fisher_info_convolved(ConvolvedDensity(x, y), p, config);
  if (auto r = unusable(sum); !r.empty()) return skipped_report(name, inputs, r);
  InequalityReport report = inequality_report(name, inputs, 1.0 / sum.value, rhs);
  if (!x.normal_parameters()) {
    report.reason = "exploratory: X is not normal";
    if (report.verdict == Verdict::Fail) report.verdict = Verdict::Observation;
  }
  return report;
}

std::vector<InequalityReport> check_cross_term_sign(double n, const QuadratureConfig& config) {
  const json inputs{{"n", n}, {"p", 3}};
  const std::string sign = "cross_term_sign/positive";
  const std::string closed = "cross_term_sign/closed_form";
  if (!(n > 6.0)) {
    return {skipped_report(sign, inputs, skip_reason::kDivergentInput),
            skipped_report(closed, inputs, skip_reason::kDivergentInput)};
  }
  const DensityModel g = DensityModel::gamma(n);
  const FunctionalValue v12 = cross_functional(g, 1, 2, config);
  const FunctionalValue v21 = cross_functional(g, 2, 1, config);
  if (auto r = first_unusable({&v12, &v21}); !r.empty()) {
    return {skipped_report(sign, inputs, r), skipped_report(closed, inputs, r)};
  }
  const double product = v12.value * v21.value;
  const double bound = std::abs(v12.value) * v21.error_estimate + std::abs(v21.value) * v12.error_estimate +
                       v12.error_estimate * v21.error_estimate;
  const double exact = 2.0 / ((n - 2.0) * (n - 3.0));
  return {inequality_report(sign, inputs, product, bound, 0.0),
          equality_report(closed, inputs, v12.value, exact, 1e-6 * exact)};
}

InequalityReport check_convexity(const DensityModel& mixture, int p, const QuadratureConfig& config) {
  const json inputs = model_inputs(mixture, p);
  const std::string name = "convexity";
  std::vector<MixtureComponent> parts = mixture.mixture_components();
  if (parts.empty()) parts.push_back({1.0, mixture});
  double lhs = 0.0;
  for (const auto& c : parts) {
    const FunctionalValue v = fisher_info(c.model, p, config);
    if (auto r = unusable(v); !r.empty()) return skipped_report(name, inputs, r);
    lhs += c.weight * v.value;
  }
  const FunctionalValue mix = fisher_info(mixture, p, config);
  if (auto r = unusable(mix); !r.empty()) return skipped_report(name, inputs, r);
  return inequality_report(name, inputs, lhs, mix.value);
}

std::vector<InequalityReport> check_derivative_bounds(const DensityModel& model, int p,
                                                      const QuadratureConfig& config) {
  if (p < 2) throw InvalidArgument("derivative bounds need p >= 2");
  const json base = model_inputs(model, p);
  const std::array<const char*, 7> names{"derivative_bounds/a", "derivative_bounds/b", "derivative_bounds/c_l1",
                                         "derivative_bounds/c_sup", "derivative_bounds/d", "derivative_bounds/e",
                                         "derivative_bounds/f"};
  std::vector<InequalityReport> out;
  auto skip_all = [&](const std::string& reason) {
    for (const char* n : names) out.push_back(skipped_report(n, base, reason));
    return out;
  };

  const FunctionalValue info = fisher_info(model, p, config);
  if (auto r = unusable(info); !r.empty()) return skip_all(r);
  const double root_i = std::sqrt(info.value);

  std::vector<FunctionalValue> tv;
  for (int k = 0; k <= p; ++k) tv.push_back(derivative_tv_norm(model, k, config));
  for (const auto& v : tv) {
    if (auto r = unusable(v); !r.empty()) return skip_all(r);
  }

  // a
  const double a_bound = std::pow(4.0, p - 1) * tv[0].value + std::exp2(std::pow(4.0, p)) * tv[p].value;
  for (int k = 1; k <= p - 1; ++k) {
    json in = base;
    in["k"] = k;
    out.push_back(inequality_report(names[0], in, a_bound, tv[k].value));
  }
  // b
  out.push_back(inequality_report(names[1], base, tv[0].value + 2.0 / 3.0 * tv[2].value, tv[1].value));
  // c
  out.push_back(inequality_report(names[2], base, root_i, tv[p].value));
  out.push_back(inequality_report(names[3], base, root_i, derivative_sup_norm(model, p - 1)));
  // d
  const FunctionalValue l2 = derivative_l2_norm(model, p, config);
  if (auto r = unusable(l2); !r.empty()) {
    out.push_back(skipped_report(names[4], base, r));
  } else {
    out.push_back(inequality_report(names[4], base, std::pow(info.value, 1.5), l2.value));
  }
  // e and f need beta_2p.
  const FunctionalValue beta = moment(model, 2.0 * p, config);
  if (beta.divergent()) {
    out.push_back(skipped_report(names[5], base, skip_reason::kMomentRequired));
    out.push_back(skipped_report(names[6], base, skip_reason::kMomentRequired));
    return out;
  }
  const FunctionalValue weighted = derivative_weighted_l1(model, p, p, config);
  if (auto r = first_unusable({&beta, &weighted}); !r.empty()) {
    out.push_back(skipped_report(names[5], base, r));
  } else {
    out.push_back(inequality_report(names[5], base, std::sqrt(beta.value * info.value), weighted.value));
  }
  if (auto r = unusable(beta); !r.empty()) {
    out.push_back(skipped_report(names[6], base, r));
    return out;
  }
  const double c = (1.0 + std::sqrt(beta.value)) * root_i;
  double worst_ratio = -kInf;
  double worst_x = 0.0, worst_bound = 0.0, worst_value = 0.0;
  for (int j = 0; j <= 20; ++j) {
    const double x = model.center() + 0.6 * (j - 10) * model.spread();
    const double bound = c / (1.0 + std::pow(std::abs(x), p));
    const double value = std::abs(model.derivative(p - 1, x));
    const double ratio = value / bound;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_x = x;
      worst_bound = bound;
      worst_value = value;
    }
  }
  json in = base;
  in["x"] = worst_x;
  out.push_back(inequality_report(names[6], in, worst_bound, worst_value));
  return out;
}

InequalityReport check_charfn_decay(const DensityModel& model, int p, const QuadratureConfig& config) {
  const json inputs = model_inputs(model, p);
  const std::string name = "charfn_decay";
  const FunctionalValue info = fisher_info(model, p, config);
  if (auto r = unusable(info); !r.empty()) return skipped_report(name, inputs, r);
  const std::vector<double> ts{5.0, 10.0, 20.0, 40.0};
  std::vector<double> g;
  for (double t : ts) {
    const FunctionalValue m = charfn_modulus(model, t, config);
    if (!m.finite()) return skipped_report(name, inputs, skip_reason::kInconclusive);
    g.push_back(std::pow(t, p) * m.value);
  }
  return strict_monotone(name, inputs, g, ts, "t", false);
}

InequalityReport check_finiteness(const DensityModel& model, int p, bool expect_finite,
                                  const QuadratureConfig& config) {
  json inputs = model_inputs(model, p);
  inputs["expect"] = expect_finite ? "finite" : "divergent";
  const FunctionalValue v = fisher_info(model, p, config);
  const bool match = expect_finite ? v.finite() : v.divergent();
  InequalityReport r = inequality_report("finiteness", inputs, match ? 1.0 : 0.0, 1.0, 0.0);
  r.reason = std::string(to_string(v.status));
  return r;
}

InequalityReport check_fisher_closed_form(const DensityModel& model, int p, double rel_tol,
                                          const QuadratureConfig& config) {
  json inputs = model_inputs(model, p);
  inputs["rel_tol"] = rel_tol;
  const std::string name = "fisher_closed_form";
  const auto exact = closed_form_fisher(model, p);
  if (!exact) return skipped_report(name, inputs, skip_reason::kUnsupported);
  const FunctionalValue v = fisher_info(model, p, config);
  if (std::isinf(*exact)) {
    InequalityReport r = inequality_report(name, inputs, v.divergent() ? 1.0 : 0.0, 1.0, 0.0);
    r.reason = std::string(to_string(v.status));
    return r;
  }
  InequalityReport r = equality_report(name, inputs, v.value, *exact, rel_tol * std::abs(*exact));
  if (!v.finite()) {
    r.verdict = Verdict::Fail;
    r.reason = std::string(to_string(v.status));
  }
  return r;
}

std::vector<InequalityReport> check_profile_equivalence(const DensityModel& model, double rel_tol_i2,
                                                        double rel_tol_i1, const QuadratureConfig& config) {
  const json inputs{{"density", model.to_json()}};
  const std::string base = "profile_equivalence/";
  const std::array<std::string, 4> names{base + "i2_squared", base + "i2_split", base + "i2_variants", base + "i1"};
  std::vector<InequalityReport> out;
  if (!model.positive_on_support()) {
    for (const auto& n : names) out.push_back(skipped_report(n, inputs, skip_reason::kUnsupported));
    return out;
  }
  auto compare = [&](const std::string& name, const FunctionalValue& a, const FunctionalValue& b, double rel) {
    if (auto r = first_unusable({&a, &b}); !r.empty()) return skipped_report(name, inputs, r);
    return equality_report(name, inputs, a.value, b.value, rel * std::abs(b.value));
  };

  const FunctionalValue direct2 = fisher_info(model, 2, config);
  if (direct2.divergent()) {
    for (int i = 0; i < 3; ++i) out.push_back(skipped_report(names[i], inputs, skip_reason::kDivergentInput));
  } else {
    const FunctionalValue sq = i2_via_profile(model, I2Variant::Squared, config);
    const FunctionalValue split = i2_via_profile(model, I2Variant::Split, config);
    out.push_back(compare(names[0], sq, direct2, rel_tol_i2));
    out.push_back(compare(names[1], split, direct2, rel_tol_i2));
    out.push_back(compare(names[2], sq, split, rel_tol_i2));
  }

  const FunctionalValue direct1 = fisher_info(model, 1, config);
  const FunctionalValue prof1 = info_via_profile(model, 2.0, config);
  out.push_back(compare(names[3], prof1, direct1, rel_tol_i1));
  if (const auto exact = closed_form_fisher(model, 1); exact && std::isfinite(*exact)) {
    out.push_back(compare(base + "i1_closed_form", prof1, FunctionalValue::exact(*exact), rel_tol_i1 / 10.0));
  }
  return out;
}

std::vector<InequalityReport> check_smoothing_ladder(const DensityModel& model, int p, const std::vector<double>& eps,
                                                     std::optional<double> target, double final_rel,
                                                     const QuadratureConfig& config) {
  if (eps.size() < 2) throw InvalidArgument("ladder needs at least two eps values");
  json inputs = model_inputs(model, p);
  inputs["eps"] = eps;
  const std::string base = "smoothing_ladder/";
  const SmoothingLadder ladder = smoothing_ladder(model, p, eps, config);
  std::vector<double> values;
  for (const auto& v : ladder.values) {
    if (auto r = unusable(v); !r.empty()) return {skipped_report(base + "increasing", inputs, r)};
    values.push_back(v.value);
  }
  std::vector<InequalityReport> out;
  out.push_back(strict_monotone(base + "increasing", inputs, values, eps, "eps_pair", true));

  for (std::size_t i = 0; i < eps.size(); ++i) {
    json in = inputs;
    in["eps"] = eps[i];
    out.push_back(inequality_report(base + "gaussian_bound", in, factorial(p) * std::pow(eps[i], -2.0 * p),
                                    ladder.values[i].value));
  }
  if (target) {
    json in = inputs;
    in["target"] = *target;
    in["final_rel"] = final_rel;
    InequalityReport r = inequality_report(base + "final_rung", in, final_rel * std::abs(*target),
                                           std::abs(ladder.values.back().value - *target), 0.0);
    if (ladder.extrapolated) r.reason = "extrapolated " + format_number(*ladder.extrapolated);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<InequalityReport> check_hermite_orthogonality(int max_orth, int max_norm) {
  if (max_orth < 1 || max_norm < 0 || max_orth > 20 || max_norm > 20) {
    throw InvalidArgument("Hermite degrees must lie in [0, 20]");
  }
  QuadratureConfig config = QuadratureConfig::with_rel_tol(1e-13);
  config.abs_tol = 1e-15;
  const DensityModel z = DensityModel::normal();
  auto gaussian_mean = [&](int k, int l) {
    return integrate([&](double x) { return hermite_eval(k, x) * hermite_eval(l, x) * z.density(x); },
                     SupportInterval::real_line(), config, z.integration_hints());
  };

  double worst = -1.0;
  int wk = 0, wl = 1;
  for (int l = 1; l <= max_orth; ++l) {
    for (int k = 0; k < l; ++k) {
      const double v = std::abs(gaussian_mean(k, l).value);
      if (v > worst) {
        worst = v;
        wk = k;
        wl = l;
      }
    }
  }
  std::vector<InequalityReport> out;
  out.push_back(inequality_report("hermite_orthogonality/cross", {{"max_degree", max_orth}, {"k", wk}, {"l", wl}},
                                  1e-9, worst, 0.0));

  double worst_rel = -1.0;
  int wp = 0;
  for (int p = 0; p <= max_norm; ++p) {
    const double rel = std::abs(gaussian_mean(p, p).value - factorial(p)) / factorial(p);
    if (rel > worst_rel) {
      worst_rel = rel;
      wp = p;
    }
  }
  out.push_back(
      inequality_report("hermite_orthogonality/norm", {{"max_degree", max_norm}, {"p", wp}}, 1e-9, worst_rel, 0.0));
  return out;
}

std::vector<InequalityReport> check_weight_optimality(const std::vector<double>& a, int perturbations,
                                                      unsigned seed) {
  if (perturbations < 0) throw InvalidArgument("perturbation count must be nonnegative");
  const json inputs{{"a", a}, {"perturbations", perturbations}, {"seed", seed}};
  const double q_min = stam_minimum(a);
  const StamWeights best = StamWeights::optimal(a);
  std::vector<InequalityReport> out;
  out.push_back(equality_report("weight_optimality/minimum", inputs, best.objective(a), q_min, 1e-12 * q_min));

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double lowest = kInf;
  for (int i = 0; i < perturbations; ++i) {
    // A mixture of the optimum and a random simplex point stays admissible.
    std::vector<double> w(a.size());
    for (double& x : w) x = expo(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double lambda = 1.0 - unit(rng);
    std::vector<double> alpha(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) alpha[k] = (1.0 - lambda) * best.alpha()[k] + lambda * w[k] / total;
    const double sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    for (double& x : alpha) x /= sum;
    lowest = std::min(lowest, StamWeights(alpha).objective(a));
  }
  if (perturbations > 0) out.push_back(inequality_report("weight_optimality/perturbed", inputs, lowest, q_min));
  return out;
}

}  // namespace fisherp
