// fisherp: compute Fisher-type information functionals, profile tables and
// inequality checks from the command line.
//
// Exit status: 0 success, 1 a verification check failed, 2 bad input or an
// internal error. A divergent functional is a valid result, not an error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "commands.hpp"
#include "fisherp/errors.hpp"

namespace {

using fisherp::cli::Format;
using json = nlohmann::json;

struct DensityFlags {
  std::string family;
  std::string density;       // inline JSON descriptor
  std::string density_file;  // descriptor file
  std::optional<double> mean, sigma, n, alpha, beta, q;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "Density family (normal, gamma, beta, logistic, ...)");
    app->add_option("--density", density, "Inline JSON density descriptor");
    app->add_option("--density-file", density_file, "File holding a JSON density descriptor");
    app->add_option("--mean", mean, "normal: mean");
    app->add_option("--sigma", sigma, "normal: standard deviation");
    app->add_option("--n", n, "gamma: shape");
    app->add_option("--alpha", alpha, "beta: first shape");
    app->add_option("--beta", beta, "beta: second shape");
    app->add_option("--q", q, "polynomial_tail: tail exponent");
  }

  json descriptor() const {
    const int sources = !family.empty() + !density.empty() + !density_file.empty();
    if (sources != 1) {
      throw fisherp::DescriptorError("density", "give exactly one of --family, --density, --density-file");
    }
    if (!density.empty()) {
      try {
        return json::parse(density);
      } catch (const json::parse_error& e) {
        throw fisherp::DescriptorError("--density", e.what());
      }
    }
    if (!density_file.empty()) return fisherp::cli::load_json_file(density_file);
    json params = json::object();
    auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) params[key] = *v;
    };
    put("mean", mean);
    put("sigma", sigma);
    put("n", n);
    put("alpha", alpha);
    put("beta", beta);
    put("q", q);
    return {{"family", family}, {"params", params}};
  }
};

struct ConfigFlags {
  std::string config_file;
  std::optional<double> rel_tol;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON quadrature settings (flags take precedence)");
    app->add_option("--rel-tol", rel_tol, "Relative quadrature tolerance");
  }

  fisherp::QuadratureConfig build() const {
    json settings = config_file.empty() ? json::object() : fisherp::cli::load_json_file(config_file);
    if (rel_tol) {
      settings["rel_tol"] = *rel_tol;
      settings.erase("tail_mass_bound");
    }
    return fisherp::cli::config_from_json(settings);
  }
};

struct OutputFlags {
  std::string format = "json";
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "md"}));
    app->add_option("--out", out, "Output file (default: standard output)");
  }

  void write(const std::string& text) const {
    if (out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw fisherp::InvalidArgument("cannot write " + out);
    file << text;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw fisherp::InvalidArgument("not a number: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-type information functionals of order p"};
  app.require_subcommand(1);

  DensityFlags density;
  ConfigFlags config;
  OutputFlags output;

  auto* compute = app.add_subcommand("compute", "I^(p), I_p, cross functionals and relative Fisher information");
  std::vector<int> orders{1};
  bool cross = false;
  bool relative = false;
  density.attach(compute);
  config.attach(compute);
  output.attach(compute);
  compute->add_option("--p", orders, "Orders, comma separated")->delimiter(',');
  compute->add_flag("--cross", cross, "Also print V_{k,l} up to the largest order");
  compute->add_flag("--relative", relative, "Also print the relative Fisher information");

  auto* profile = app.add_subcommand("profile", "Isoperimetric profile table and profile integrals");
  int nodes = 33;
  density.attach(profile);
  config.attach(profile);
  output.attach(profile);
  profile->add_option("--nodes", nodes, "Number of Chebyshev nodes");

  auto* table = app.add_subcommand("table", "Closed forms against numerical values");
  std::string table_family = "gamma";
  std::optional<std::string> values_text;
  std::vector<int> table_orders{1, 2, 3};
  table->add_option("--family", table_family, "gamma or normal")->check(CLI::IsMember({"gamma", "normal"}));
  table->add_option("--values", values_text, "Gamma shapes or normal sigmas, comma separated");
  table->add_option("--p", table_orders, "Orders, comma separated")->delimiter(',');
  config.attach(table);
  output.attach(table);

  auto* verify = app.add_subcommand("verify", "Run an inequality manifest");
  std::string manifest_path;
  verify->add_option("--manifest", manifest_path, "Manifest JSON file")->required();
  config.attach(verify);
  output.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Format format = fisherp::cli::parse_format(output.format);
    const fisherp::QuadratureConfig settings = config.build();
    if (*compute) {
      const auto model = fisherp::DensityModel::from_json(density.descriptor());
      output.write(fisherp::cli::render_compute({model, orders, cross, relative, settings}, format));
    } else if (*profile) {
      const auto model = fisherp::DensityModel::from_json(density.descriptor());
      output.write(fisherp::cli::render_profile({model, nodes, settings}, format));
    } else if (*table) {
      std::vector<double> values = table_family == "gamma" ? std::vector<double>{8, 10, 16} : std::vector<double>{1, 2};
      if (values_text) values = parse_list(*values_text);
      output.write(fisherp::cli::render_table({table_family, values, table_orders, settings}, format));
    } else if (*verify) {
      const json manifest = fisherp::cli::load_json_file(manifest_path);
      const auto outcome = fisherp::cli::run_verify(manifest, settings, format);
      output.write(outcome.report);
      std::cerr << outcome.summary;
      return outcome.exit_status;
    }
  } catch (const fisherp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
