#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "anisolab/cli/config.hpp"
#include "anisolab/core/sweep.hpp"
#include "anisolab/estimators/certificates.hpp"

namespace anisolab {

inline constexpr const char* kVersion = "anisolab 0.1.0";

struct Reference {
  std::string name;
  double value = 0.0;
  std::string source;  // formula the value comes from
};

struct CertificateOutcome {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::size_t tested = 0;
  std::size_t attempts = 0;
  double min_margin = 0.0;
  std::vector<Counterexample> counterexamples;  // at most kMaxCounterexamples
  std::size_t counterexample_count = 0;
};

inline constexpr std::size_t kMaxCounterexamples = 20;

struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<SweepRow> rows;
  std::vector<Reference> references;
  std::vector<CertificateOutcome> certificates;
  Verdict verdict = Verdict::inconclusive;
  double runtime_ms = 0.0;
  std::string version = kVersion;
};

/// Dispatches to the owning estimator. Module errors are rethrown with the
/// experiment name prefixed.
Report run_experiment(const ExperimentConfig& cfg);

/// CSV `param,value,stderr,reference,rel_error` (6 significant digits), the
/// JSON document, or two-column plot data.
std::string emit(const Report& report, OutputFormat format);

/// Sidecar for plot data: `param reference` lines.
std::string emit_plot_reference(const Report& report);

/// Inverse of the JSON emitter on the emitted fields.
Report parse_report_json(const std::string& text);

/// 0 pass, 2 fail, 3 inconclusive.
int exit_code(Verdict v);

/// Built-in configuration text for `verify <suite>`, or empty if unknown.
std::string builtin_suite_config(const std::string& suite);
std::vector<std::string> builtin_suites();

}  // namespace anisolab
