#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fisherp/errors.hpp"
#include "fisherp/verify.hpp"

namespace fisherp {

namespace {

using json = nlohmann::json;
using Reports = std::vector<InequalityReport>;

// Read-only view of one expanded manifest entry. Every lookup records the
// key so that misspelled parameters can be rejected afterwards.
class Params {
 public:
  Params(const json& params, std::string where) : params_(params), where_(std::move(where)) {}

  const json& raw(const std::string& key) const {
    used_.insert(key);
    if (!params_.contains(key)) fail(key, "missing parameter");
    return params_.at(key);
  }
  bool has(const std::string& key) const {
    used_.insert(key);
    return params_.contains(key);
  }

  int integer(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }
  int integer_or(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

  double number(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::string text(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  DensityModel density(const std::string& key) const {
    try {
      return DensityModel::from_json(raw(key));
    } catch (const DescriptorError& e) {
      fail(key, e.what());
    }
  }

  MonicPolynomial polynomial(const std::string& key, int p) const {
    if (!has(key)) return hermite(p);
    const json& v = raw(key);
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "hermite") return hermite(p);
      if (s == "monomial") return MonicPolynomial::monomial(p);
      fail(key, "expected \"hermite\", \"monomial\" or a coefficient array");
    }
    try {
      return MonicPolynomial(numbers(key));
    } catch (const InvalidArgument& e) {
      fail(key, e.what());
    }
  }

  void reject_unused() const {
    for (const auto& [key, value] : params_.items()) {
      if (key != "invert" && !used_.count(key)) fail(key, "unknown parameter");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ManifestError(where_ + ".params." + key + ": " + message);
  }

 private:
  const json& params_;
  std::string where_;
  mutable std::set<std::string> used_;
};

using Runner = std::function<Reports(const Params&, const QuadratureConfig&)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> checks{
      {"cramer_rao",
       [](const Params& p, const QuadratureConfig& c) {
         const int order = p.integer("p");
         return check_cramer_rao(p.density("density"), order, p.polynomial("poly", order), c);
       }},
      {"cramer_rao_product",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{check_cramer_rao_product(p.density("density"), p.integer("p"), c)};
       }},
      {"relative_fisher",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{
             check_relative_fisher(p.density("density"), p.integer("p"), p.number_or("rel_tol", 1e-5), c)};
       }},
      {"order_two_chain",
       [](const Params& p, const QuadratureConfig& c) { return check_order_two_chain(p.density("density"), c); }},
      {"stam",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{check_stam(p.density("x"), p.density("y"), p.integer("p"), p.integer("k"), c)};
       }},
      {"stam_product",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{check_stam_product(p.density("x"), p.density("y"), p.integer("p"), p.integer("k"), c)};
       }},
      {"stam_sharp",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{check_stam_sharp(p.density("x"), p.density("y"), p.integer("p"), c)};
       }},
      {"cross_term_sign",
       [](const Params& p, const QuadratureConfig& c) { return check_cross_term_sign(p.number("n"), c); }},
      {"convexity",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{check_convexity(p.density("density"), p.integer("p"), c)};
       }},
      {"derivative_bounds",
       [](const Params& p, const QuadratureConfig& c) {
         return check_derivative_bounds(p.density("density"), p.integer("p"), c);
       }},
      {"charfn_decay",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{check_charfn_decay(p.density("density"), p.integer("p"), c)};
       }},
      {"finiteness",
       [](const Params& p, const QuadratureConfig& c) {
         const std::string expect = p.text("expect");
         if (expect != "finite" && expect != "divergent") p.fail("expect", "expected \"finite\" or \"divergent\"");
         return Reports{check_finiteness(p.density("density"), p.integer("p"), expect == "finite", c)};
       }},
      {"fisher_closed_form",
       [](const Params& p, const QuadratureConfig& c) {
         return Reports{
             check_fisher_closed_form(p.density("density"), p.integer("p"), p.number_or("rel_tol", 1e-5), c)};
       }},
      {"profile_equivalence",
       [](const Params& p, const QuadratureConfig& c) {
         return check_profile_equivalence(p.density("density"), p.number_or("rel_tol_i2", 1e-4),
                                          p.number_or("rel_tol_i1", 1e-5), c);
       }},
      {"smoothing_ladder",
       [](const Params& p, const QuadratureConfig& c) {
         std::optional<double> target;
         if (p.has("target")) target = p.number("target");
         return check_smoothing_ladder(p.density("density"), p.integer("p"), p.numbers("eps"), target,
                                       p.number_or("final_rel", 0.03), c);
       }},
      {"hermite_orthogonality",
       [](const Params& p, const QuadratureConfig&) {
         return check_hermite_orthogonality(p.integer_or("max_orth", 8), p.integer_or("max_norm", 10));
       }},
      {"weight_optimality",
       [](const Params& p, const QuadratureConfig&) {
         return check_weight_optimality(p.numbers("a"), p.integer_or("perturbations", 20),
                                        static_cast<unsigned>(p.integer_or("seed", 1)));
       }},
  };
  return checks;
}

// Cartesian product of the grid values (keys in sorted order), each merged
// over the base parameters.
std::vector<json> expand(const json& params, const json& grid, const std::string& where) {
  std::vector<json> out{params};
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty()) {
      throw ManifestError(where + ".grid." + key + ": expected a nonempty array");
    }
    std::vector<json> next;
    for (const auto& partial : out) {
      for (const auto& v : values) {
        json merged = partial;
        merged[key] = v;
        next.push_back(std::move(merged));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> suite_check_names() {
  std::vector<std::string> names;
  for (const auto& [name, runner] : registry()) names.push_back(name);
  return names;
}

std::vector<InequalityReport> run_suite(const json& manifest, const QuadratureConfig& config) {
  if (!manifest.is_object() || !manifest.contains("checks") || !manifest.at("checks").is_array()) {
    throw ManifestError("manifest must be an object with a \"checks\" array");
  }
  for (const auto& [key, value] : manifest.items()) {
    if (key != "checks") throw ManifestError("unknown manifest key: " + key);
  }
  Reports reports;
  const json& checks = manifest.at("checks");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const json& entry = checks[i];
    const std::string where = "checks[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("name") || !entry.at("name").is_string()) {
      throw ManifestError(where + ": expected an object with a string \"name\"");
    }
    for (const auto& [key, value] : entry.items()) {
      if (key != "name" && key != "params" && key != "grid") throw ManifestError(where + ": unknown key " + key);
    }
    const std::string name = entry.at("name").get<std::string>();
    const auto it = registry().find(name);
    if (it == registry().end()) throw ManifestError(where + ": unknown check name \"" + name + "\"");
    const json params = entry.value("params", json::object());
    const json grid = entry.value("grid", json::object());
    if (!params.is_object() || !grid.is_object()) throw ManifestError(where + ": params and grid must be objects");

    for (const json& expanded : expand(params, grid, where)) {
      const Params view(expanded, where);
      bool invert = false;
      if (expanded.contains("invert")) {
        if (!expanded.at("invert").is_boolean()) view.fail("invert", "expected a boolean");
        invert = expanded.at("invert").get<bool>();
      }
      Reports produced;
      try {
        produced = it->second(view, config);
      } catch (const ManifestError&) {
        throw;
      } catch (const InvalidArgument& e) {
        throw ManifestError(where + " (" + name + "): " + e.what());
      } catch (const DescriptorError& e) {
        throw ManifestError(where + " (" + name + "): " + e.what());
      } catch (const Error& e) {
        // Outside what the library can evaluate (order limits, missing moments).
        InequalityReport r = skipped_report(name, expanded, skip_reason::kUnsupported);
        r.reason += std::string(": ") + e.what();
        produced.push_back(std::move(r));
      }
      view.reject_unused();
      for (auto& r : produced) {
        if (invert) {
          r = inverted(std::move(r));
          r.inputs["invert"] = true;
        }
        reports.push_back(std::move(r));
      }
    }
  }
  std::stable_sort(reports.begin(), reports.end(), [](const InequalityReport& a, const InequalityReport& b) {
    if (a.check_name != b.check_name) return a.check_name < b.check_name;
    return a.inputs.dump() < b.inputs.dump();
  });
  return reports;
}

int suite_exit_status(const std::vector<InequalityReport>& reports) {
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) return 1;
  }
  return 0;
}

json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json InequalityReport::to_json() const {
  return {{"check_name", check_name},
          {"inputs", inputs},
          {"lhs", json_number(lhs)},
          {"rhs", json_number(rhs)},
          {"slack", json_number(slack)},
          {"verdict", std::string(fisherp::to_string(verdict))},
          {"tolerance", json_number(tolerance_used)},
          {"reason", reason}};
}

json reports_to_json(const std::vector<InequalityReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(r.to_json());
  return out;
}

std::string reports_to_csv(const std::vector<InequalityReport>& reports) {
  std::string out = "check_name,inputs,lhs,rhs,slack,verdict,tolerance,reason\n";
  for (const auto& r : reports) {
    out += csv_field(r.check_name) + ',' + csv_field(r.inputs.dump()) + ',' + format_number(r.lhs) + ',' +
           format_number(r.rhs) + ',' + format_number(r.slack) + ',' + std::string(to_string(r.verdict)) + ',' +
           format_number(r.tolerance_used) + ',' + csv_field(r.reason) + '\n';
  }
  return out;
}

}  // namespace fisherp
