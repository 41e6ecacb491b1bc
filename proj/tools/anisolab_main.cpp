#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "anisolab/cli/report.hpp"
#include "anisolab/core/error.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool no_timing = false;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Override experiment.seed");
  cmd->add_option("--samples", o.samples, "Override mc.samples");
  cmd->add_option("--threads", o.threads, "Worker threads (wall time only)");
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv, json or plot")->check(CLI::IsMember({"csv", "json", "plot"}));
  cmd->add_flag("--no-timing", o.no_timing, "Report runtime_ms as 0");
}

anisolab::ExperimentConfig apply(anisolab::ExperimentConfig cfg, const Overrides& o) {
  using anisolab::with_override;
  if (o.seed) cfg = with_override(cfg, "experiment.seed", std::to_string(*o.seed));
  if (o.samples) cfg = with_override(cfg, "mc.samples", std::to_string(*o.samples));
  if (o.threads) cfg = with_override(cfg, "mc.threads", std::to_string(*o.threads));
  if (o.out) cfg = with_override(cfg, "output.path", *o.out);
  if (o.format) cfg = with_override(cfg, "output.format", *o.format);
  if (o.no_timing) cfg = with_override(cfg, "output.timing", "false");
  return cfg;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) anisolab::fail(anisolab::ErrorCode::config, "cannot open output file '" + path + "'");
  f << bytes;
}

int execute(const std::string& text, const Overrides& o) {
  const anisolab::ExperimentConfig cfg = apply(anisolab::parse_config(text), o);
  const anisolab::Report report = anisolab::run_experiment(cfg);
  const std::string bytes = anisolab::emit(report, cfg.format);
  if (cfg.output_path.empty()) {
    std::cout << bytes;
  } else {
    write_file(cfg.output_path, bytes);
    if (cfg.format == anisolab::OutputFormat::plot)
      write_file(cfg.output_path + ".ref", anisolab::emit_plot_reference(report));
  }
  std::cerr << report.experiment << ": " << anisolab::to_string(report.verdict) << "\n";
  return anisolab::exit_code(report.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic fractional Sobolev and level-set experiments"};
  app.require_subcommand(1);
  Overrides run_o, verify_o;

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  add_flags(run, run_o);

  std::string suite;
  std::string suites_help = "Built-in suite:";
  for (const auto& s : anisolab::builtin_suites()) suites_help += " " + s;
  auto* verify = app.add_subcommand("verify", "Run a built-in verification suite");
  verify->add_option("suite", suite, suites_help)->required()->check(CLI::IsMember(anisolab::builtin_suites()));
  add_flags(verify, verify_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      std::ifstream in(config_path, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      return execute(buf.str(), run_o);
    }
    return execute(anisolab::builtin_suite_config(suite), verify_o);
  } catch (const anisolab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
