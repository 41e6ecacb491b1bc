#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anisolab/functions/test_function.hpp"
#include "anisolab/geometry/convex_body.hpp"

namespace anisolab {

enum class Experiment {
  bbm,
  ms,
  bvsy_large_lambda,
  gy_small_lambda,
  quasinorm,
  sandwich,
  verify_bp,
  verify_prop21,
  verify_prop22,
  verify_claims,
  m1,
};

const char* to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

enum class OutputFormat { csv, json, plot };

const char* to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view name);

struct BodySpec {
  std::string shape = "box";
  double radius = 1.0;
  std::vector<double> half_widths;  // one value broadcasts to every axis
  std::vector<double> form;         // ellipsoid, row-major n x n
  std::vector<double> normals;      // polytope, m rows of n
  double q = 2.0;
  double scale = 1.0;
};

struct FunctionSpec {
  std::string kind = "poly-bump";
  std::vector<double> center;  // default: origin
  double sigma = 1.0;
  int m = 3;
  std::vector<double> lo, hi;
  double scale = 1.0;
};

/// Raw "section.key" -> (value, line) pairs; line 0 marks an override.
using ConfigEntries = std::map<std::string, std::pair<std::string, int>>;

struct ExperimentConfig {
  Experiment experiment = Experiment::bbm;
  std::uint64_t seed = 0;
  int n = 1;
  double p = 1.0;
  std::string part = "b";  // level-set part for quasinorm / sandwich

  BodySpec body;
  FunctionSpec function;

  std::vector<double> s_list;       // empty: module default
  std::vector<double> lambda_list;  // empty: module default
  int points_per_decade = 16;
  std::vector<double> gammas{0.5, 1.0, 2.0};

  std::size_t samples = 100000;
  int chunks = 32;
  int threads = 1;
  int subdivisions = 256;
  std::string method = "auto";  // seminorm: auto | quadrature | mc
  int resolution = 4000;
  int table_nodes = 100000;

  std::string bp_instance = "both";  // disks | squares | both

  std::vector<double> deltas{0.25, 0.5, 0.75};
  std::vector<double> lambda_factors{10.0, 100.0};
  std::size_t configs = 1000;
  std::size_t pairs = 1000;
  std::size_t budget = 1000000;
  std::size_t segments = 1000;
  double r = 1.0;

  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  bool timing = true;

  ConfigEntries entries;
};

/// Flat INI grammar: `[section]` headers, `key = value` lines, `#` or `;`
/// comments, comma-separated lists. Throws ErrorCode::config with the line
/// number, key and reason.
ExperimentConfig parse_config(std::string_view text);

/// Re-validates after replacing one "section.key" (command-line overrides).
ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key,
                               const std::string& value);

/// Echo of the entries that determine results (everything but threads and
/// output location), in key order.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg);

std::shared_ptr<const ConvexBody> build_body(const ExperimentConfig& cfg);
TestFunction build_function(const ExperimentConfig& cfg, std::shared_ptr<const ConvexBody> body);

}  // namespace anisolab
