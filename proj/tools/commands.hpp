#pragma once

// Report builders behind the fisherp command-line tool. Each returns the full
// text of the report so that output is independent of where it is written.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fisherp/densities.hpp"
#include "fisherp/quadrature.hpp"

namespace fisherp::cli {

enum class Format { Json, Csv, Md };

/// "json", "csv" or "md"; throws InvalidArgument otherwise.
Format parse_format(const std::string& name);

/// Reads and parses a JSON file. Throws InvalidArgument when the file cannot
/// be opened and DescriptorError (with line and column) on a syntax error.
nlohmann::json load_json_file(const std::string& path);

/// Quadrature settings from {"rel_tol", "abs_tol", "max_depth",
/// "divergence_cap", "tail_mass_bound", "max_subdivisions"}. Unknown keys are
/// rejected. A rel_tol without tail_mass_bound also sets the tail bound.
QuadratureConfig config_from_json(const nlohmann::json& config);
nlohmann::json config_to_json(const QuadratureConfig& config);

/// {"status": "divergent"} for divergent values, otherwise value, error,
/// status and node count.
nlohmann::json value_json(const FunctionalValue& v);

struct ComputeRequest {
  DensityModel model;
  std::vector<int> orders;
  bool cross = false;     // V_{k,l} matrix up to the largest order
  bool relative = false;  // I^(p)(X|Z) for every order >= 1
  QuadratureConfig config;
};

std::string render_compute(const ComputeRequest& request, Format format);

struct ProfileRequest {
  DensityModel model;
  int nodes = 33;
  QuadratureConfig config;
};

std::string render_profile(const ProfileRequest& request, Format format);

struct TableRequest {
  std::string family;          // "gamma" (values are shapes) or "normal" (values are sigmas)
  std::vector<double> values;  // one row each; empty gives a header-only table
  std::vector<int> orders;     // I^(p) columns
  QuadratureConfig config;
};

std::string render_table(const TableRequest& request, Format format);

struct VerifyOutcome {
  std::string report;
  std::string summary;  // counts per verdict and the skipped checks
  int exit_status = 0;  // 0 when nothing failed, 1 otherwise
};

/// Throws ManifestError on a malformed manifest.
VerifyOutcome run_verify(const nlohmann::json& manifest, const QuadratureConfig& config, Format format);

}  // namespace fisherp::cli
