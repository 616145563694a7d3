#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fisherp/errors.hpp"
#include "fisherp/functionals.hpp"
#include "fisherp/profile.hpp"
#include "fisherp/verify.hpp"

namespace fisherp::cli {

namespace {

using json = nlohmann::json;
using Row = std::vector<std::string>;

std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv(const Row& header, const std::vector<Row>& rows) {
  auto line = [](const Row& r) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell(r[i]);
    return out + "\n";
  };
  std::string out = line(header);
  for (const Row& r : rows) out += line(r);
  return out;
}

std::string markdown(const Row& header, const std::vector<Row>& rows) {
  auto line = [](const Row& r) {
    std::string out = "|";
    for (const auto& c : r) out += " " + c + " |";
    return out + "\n";
  };
  std::string out = line(header) + "|";
  for (std::size_t i = 0; i < header.size(); ++i) out += "---|";
  out += "\n";
  for (const Row& r : rows) out += line(r);
  return out;
}

std::string table(const Row& header, const std::vector<Row>& rows, Format format) {
  return format == Format::Csv ? csv(header, rows) : markdown(header, rows);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Divergent values print as the literal "inf".
Row value_row(const std::string& quantity, const std::string& p, const std::string& l, const FunctionalValue& v) {
  const bool div = v.divergent();
  return {quantity, p, l, div ? "inf" : format_number(v.value), div ? "inf" : format_number(v.error_estimate),
          std::string(to_string(v.status))};
}

double rel_error(double numeric, double exact) {
  if (std::isinf(exact) && std::isinf(numeric)) return 0.0;
  return std::abs(numeric - exact) / std::abs(exact);
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "md") return Format::Md;
  throw InvalidArgument("unknown format \"" + name + "\" (expected json, csv or md)");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DescriptorError(path, e.what());
  }
}

QuadratureConfig config_from_json(const json& config) {
  if (!config.is_object()) throw DescriptorError("config", "expected an object");
  QuadratureConfig out;
  auto number = [&](const char* key, auto& field) {
    if (!config.contains(key)) return;
    const json& v = config.at(key);
    using T = std::decay_t<decltype(field)>;
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw DescriptorError(std::string("config.") + key, "expected an integer");
    } else {
      if (!v.is_number()) throw DescriptorError(std::string("config.") + key, "expected a number");
    }
    field = v.get<T>();
  };
  for (const auto& [key, value] : config.items()) {
    static const std::vector<std::string> known{"rel_tol",        "abs_tol",         "max_depth",
                                                "divergence_cap", "tail_mass_bound", "max_subdivisions"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw DescriptorError("config." + key, "unknown setting");
    }
  }
  number("rel_tol", out.rel_tol);
  out.tail_mass_bound = out.rel_tol / 10.0;
  number("abs_tol", out.abs_tol);
  number("max_depth", out.max_depth);
  number("divergence_cap", out.divergence_cap);
  number("tail_mass_bound", out.tail_mass_bound);
  number("max_subdivisions", out.max_subdivisions);
  try {
    out.validate();
  } catch (const InvalidArgument& e) {
    throw DescriptorError("config", e.what());
  }
  return out;
}

json config_to_json(const QuadratureConfig& c) {
  return {{"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"max_depth", c.max_depth},
          {"divergence_cap", c.divergence_cap},
          {"tail_mass_bound", c.tail_mass_bound},
          {"max_subdivisions", c.max_subdivisions}};
}

json value_json(const FunctionalValue& v) {
  if (v.divergent()) return {{"status", "divergent"}};
  return {{"value", json_number(v.value)},
          {"error", json_number(v.error_estimate)},
          {"status", std::string(to_string(v.status))},
          {"nodes", v.node_count}};
}

std::string render_compute(const ComputeRequest& request, Format format) {
  const DensityModel& model = request.model;
  const QuadratureConfig& config = request.config;
  json fisher = json::array();
  json moments = json::array();
  std::vector<Row> rows;
  for (int p : request.orders) {
    if (p < 0) throw InvalidArgument("orders must be nonnegative");
    const FunctionalValue v = fisher_info(model, p, config);
    json entry = value_json(v);
    entry["p"] = p;
    fisher.push_back(entry);
    rows.push_back(value_row("fisher", std::to_string(p), "", v));
    if (p >= 1) {
      const FunctionalValue m = score_moment(model, p, config);
      json me = value_json(m);
      me["p"] = p;
      moments.push_back(me);
      rows.push_back(value_row("score_moment", std::to_string(p), "", m));
    }
  }

  json out{{"density", model.to_json()}, {"config", config_to_json(config)}, {"fisher", fisher},
           {"score_moments", moments}};

  if (request.cross && !request.orders.empty()) {
    const int order = *std::max_element(request.orders.begin(), request.orders.end());
    const CrossFunctionalMatrix m = cross_functional_matrix(model, order, config);
    json entries = json::array();
    for (int k = 0; k <= order; ++k) {
      json row = json::array();
      for (int l = 0; l <= order; ++l) {
        row.push_back(value_json(m.at(k, l)));
        rows.push_back(value_row("cross", std::to_string(k), std::to_string(l), m.at(k, l)));
      }
      entries.push_back(row);
    }
    out["cross"] = {{"order", order}, {"entries", entries}};
  }

  if (request.relative) {
    json rel = json::array();
    for (int p : request.orders) {
      if (p < 1) continue;
      json entry{{"p", p}};
      try {
        const RelativeFisherValue r = relative_fisher(model, p, config);
        entry["value"] = value_json(r.value);
        entry["identity"] = json_number(r.identity_value);
        entry["discrepancy"] = json_number(r.relative_discrepancy);
        entry["defect"] = r.defect;
        rows.push_back(value_row("relative_fisher", std::to_string(p), "", r.value));
      } catch (const MomentRequired&) {
        entry["value"] = {{"status", "moment_required"}};
        rows.push_back({"relative_fisher", std::to_string(p), "", "", "", "moment_required"});
      }
      rel.push_back(entry);
    }
    out["relative"] = rel;
  }

  if (format == Format::Json) return dump(out);
  return table({"quantity", "p", "l", "value", "error", "status"}, rows, format);
}

std::string render_profile(const ProfileRequest& request, Format format) {
  const ProfileGrid grid = build_profile(request.model, request.nodes);
  if (format == Format::Csv) return profile_csv(grid);
  if (format == Format::Md) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back({format_number(grid.t[i]), format_number(grid.x[i]), format_number(grid.L[i]),
                      format_number(grid.Lp[i]), format_number(grid.LLpp[i])});
    }
    return markdown({"t", "x", "L", "Lp", "LLpp"}, rows);
  }
  json nodes = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    nodes.push_back({{"t", json_number(grid.t[i])},
                     {"x", json_number(grid.x[i])},
                     {"L", json_number(grid.L[i])},
                     {"Lp", json_number(grid.Lp[i])},
                     {"LLpp", json_number(grid.LLpp[i])}});
  }
  const BoundaryReport boundary = boundary_diagnostics(request.model);
  auto points = [](const std::vector<BoundaryPoint>& v) {
    json out = json::array();
    for (const auto& b : v) {
      out.push_back({{"t", json_number(b.t)}, {"l_lp", json_number(b.l_lp)}, {"l_lp3", json_number(b.l_lp3)}});
    }
    return out;
  };
  const json out{
      {"density", request.model.to_json()},
      {"nodes", nodes},
      {"fisher_via_profile", value_json(info_via_profile(request.model, 2.0, request.config))},
      {"i2_squared", value_json(i2_via_profile(request.model, I2Variant::Squared, request.config))},
      {"i2_split", value_json(i2_via_profile(request.model, I2Variant::Split, request.config))},
      {"boundary", {{"lower", points(boundary.lower)}, {"upper", points(boundary.upper)},
                    {"monotone", boundary.monotone}}}};
  return dump(out);
}

std::string render_table(const TableRequest& request, Format format) {
  const bool gamma = request.family == "gamma";
  if (!gamma && request.family != "normal") {
    throw DescriptorError("family", "table supports gamma and normal");
  }
  struct Column {
    std::string name;
    int p;  // -1 for V_{1,2}
  };
  std::vector<Column> columns;
  for (int p : request.orders) columns.push_back({"I" + std::to_string(p), p});
  if (gamma) columns.push_back({"V12", -1});

  Row header{gamma ? "n" : "sigma"};
  for (const auto& c : columns) {
    for (const char* suffix : {"_closed", "_numeric", "_rel_err"}) header.push_back(c.name + suffix);
  }

  std::vector<Row> rows;
  json records = json::array();
  for (double v : request.values) {
    const DensityModel model = gamma ? DensityModel::gamma(v) : DensityModel::normal(0.0, v);
    Row row{format_number(v)};
    json record{{gamma ? "n" : "sigma", v}};
    for (const auto& c : columns) {
      std::optional<double> exact;
      FunctionalValue numeric;
      if (c.p >= 0) {
        exact = closed_form_fisher(model, c.p);
        numeric = fisher_info(model, c.p, request.config);
      } else {
        exact = closed_form_v12(model);
        numeric = model.smoothness_gate(3) ? cross_functional(model, 1, 2, request.config)
                                           : FunctionalValue::divergent_value();
      }
      const double num = numeric.divergent() ? kInf : numeric.value;
      const double err = exact ? rel_error(num, *exact) : std::nan("");
      row.push_back(exact ? format_number(*exact) : "");
      row.push_back(format_number(num));
      row.push_back(exact ? format_number(err) : "");
      record[c.name] = {{"closed", exact ? json_number(*exact) : json(nullptr)},
                        {"numeric", value_json(numeric)},
                        {"rel_err", exact ? json_number(err) : json(nullptr)}};
    }
    rows.push_back(row);
    records.push_back(record);
  }
  if (format == Format::Json) {
    return dump({{"family", request.family}, {"columns", header}, {"rows", records}});
  }
  return table(header, rows, format);
}

VerifyOutcome run_verify(const json& manifest, const QuadratureConfig& config, Format format) {
  const std::vector<InequalityReport> reports = run_suite(manifest, config);
  VerifyOutcome outcome;
  outcome.exit_status = suite_exit_status(reports);

  std::map<Verdict, int> counts;
  std::string skipped;
  for (const auto& r : reports) {
    ++counts[r.verdict];
    if (r.verdict == Verdict::Skipped) skipped += "  skipped " + r.check_name + " (" + r.reason + ")\n";
  }
  std::ostringstream summary;
  summary << reports.size() << " reports: " << counts[Verdict::Pass] << " pass, " << counts[Verdict::Fail]
          << " fail, " << counts[Verdict::Skipped] << " skipped, " << counts[Verdict::Observation]
          << " observation\n"
          << skipped;
  outcome.summary = summary.str();

  if (format == Format::Json) {
    outcome.report = dump(reports_to_json(reports));
  } else if (format == Format::Csv) {
    outcome.report = reports_to_csv(reports);
  } else {
    std::vector<Row> rows;
    for (const auto& r : reports) {
      rows.push_back({r.check_name, r.inputs.dump(), format_number(r.lhs), format_number(r.rhs),
                      format_number(r.slack), std::string(to_string(r.verdict)), format_number(r.tolerance_used),
                      r.reason});
    }
    outcome.report =
        markdown({"check_name", "inputs", "lhs", "rhs", "slack", "verdict", "tolerance", "reason"}, rows);
  }
  return outcome;
}

}  // namespace fisherp::cli
