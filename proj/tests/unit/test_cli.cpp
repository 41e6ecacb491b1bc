#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "anisolab/cli/report.hpp"
#include "anisolab/core/error.hpp"

using namespace anisolab;
using doctest::Approx;

namespace {

const std::string kMinimal = "[experiment]\nname = ms\nseed = 1\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing test data: " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& rel) { return std::string(ANISOLAB_TEST_DATA_DIR) + "/" + rel; }

// Message of the config error raised by `text`, or "" if it parses.
std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.experiment == Experiment::ms);
  CHECK(c.seed == 1);
  CHECK(c.n == 1);
  CHECK(c.p == 1.0);
  CHECK(c.samples == 100000);
  CHECK(c.chunks == 32);
  CHECK(c.threads == 1);
  CHECK(c.format == OutputFormat::csv);
  CHECK(c.timing);
  CHECK(c.s_list.empty());
  CHECK(c.body.shape == "box");
  CHECK(c.function.kind == "poly-bump");
}

TEST_CASE("experiment names round-trip") {
  for (const char* name : {"bbm", "ms", "bvsy-large-lambda", "gy-small-lambda", "quasinorm", "sandwich",
                           "verify-bp", "verify-prop21", "verify-prop22", "verify-claims", "m1"}) {
    const auto e = parse_experiment(name);
    REQUIRE(e.has_value());
    CHECK(std::string(to_string(*e)) == name);
  }
  CHECK_FALSE(parse_experiment("bogus").has_value());
}

TEST_CASE("comments, blank lines and lists") {
  const ExperimentConfig c = parse_config(
      "# leading comment\n\n[experiment]\nname = bbm\n; full-line only\nseed = 9\n[grid]\ns = 0.5,0.9 , 0.99\n");
  CHECK(c.experiment == Experiment::bbm);
  REQUIRE(c.s_list.size() == 3);
  CHECK(c.s_list[2] == 0.99);
}

TEST_CASE("config errors name the line and key") {
  CHECK(contains(config_error(kMinimal + "p = 0.5\n"), "line 4"));
  CHECK(contains(config_error(kMinimal + "p = 0.5\n"), "experiment.p"));
  CHECK(contains(config_error(kMinimal + "seed = 2\n"), "duplicate key (first set on line 3)"));
  CHECK(contains(config_error(kMinimal + "colour = red\n"), "unknown key"));
  CHECK(contains(config_error("[experiment]\nname = ms\n"), "experiment.seed"));
  CHECK(contains(config_error("name = ms\n"), "line 1"));
  CHECK(contains(config_error("[experiment\nname = ms\n"), "malformed section header"));
  CHECK(contains(config_error(kMinimal + "n\n"), "expected 'key = value'"));
  CHECK(contains(config_error(kMinimal + "[mc]\nsamples = many\n"), "mc.samples"));
  CHECK(contains(config_error("[experiment]\nname = nope\nseed = 1\n"), "experiment.name"));
  CHECK(contains(config_error(kMinimal + "n = 2\n[function]\ncenter = 0\n"), "function.center"));
  CHECK(config_error(kMinimal).empty());
}

TEST_CASE("command-line overrides revalidate") {
  const ExperimentConfig c = parse_config(kMinimal);
  const ExperimentConfig d = with_override(c, "mc.samples", "500");
  CHECK(d.samples == 500);
  CHECK(with_override(c, "experiment.seed", "42").seed == 42);
  try {
    with_override(c, "experiment.p", "0.2");
    FAIL("accepted p < 1");
  } catch (const Error& e) {
    CHECK(contains(e.what(), "override"));
  }
}

TEST_CASE("config echo leaves out threads and output") {
  const ExperimentConfig c = parse_config(kMinimal + "[mc]\nthreads = 4\n[output]\nformat = json\ntiming = false\n");
  for (const auto& [k, v] : config_echo(c)) {
    CHECK(k != "mc.threads");
    CHECK(k.rfind("output.", 0) != 0);
  }
  CHECK(config_echo(c).size() == 2);  // only keys that were set
}

TEST_CASE("CSV layout") {
  Report r;
  CHECK(emit(r, OutputFormat::csv) == "param,value,stderr,reference,rel_error\n");
  r.rows.push_back(make_row(0.5, 1.0 / 3.0, 0.0, 4.0));
  r.rows.push_back(make_row(1e-7, 123456789.0, 2.5e-3, 0.0));
  const std::string csv = emit(r, OutputFormat::csv);
  CHECK(contains(csv, "\n0.5,0.333333,0,4,0.916667\n"));
  CHECK(contains(csv, "\n1e-07,1.23457e+08,0.0025,0,"));
}

TEST_CASE("JSON round-trips the emitted fields") {
  Report r;
  r.experiment = "m1";
  r.config = {{"experiment.name", "m1"}, {"experiment.seed", "5"}};
  r.rows.push_back(make_row(0.1, 19.25, 0.125, 20.0));
  r.rows.push_back(make_row(1.0, std::nan(""), kInf, -kInf));
  r.references.push_back({"center", 20.0, "|K| lambda^{-p} ||f||_p^p"});
  CertificateOutcome co;
  co.name = "claim1";
  co.verdict = Verdict::fail;
  co.tested = 10;
  co.min_margin = -0.5;
  co.counterexamples.push_back({Vec::Constant(1, 0.25), Vec::Constant(1, -1.0), 1e-3, -0.5});
  co.counterexample_count = 1;
  r.certificates.push_back(co);
  r.verdict = Verdict::fail;
  r.runtime_ms = 12.5;

  const std::string text = emit(r, OutputFormat::json);
  const Report back = parse_report_json(text);
  CHECK(back.experiment == "m1");
  CHECK(back.config == r.config);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].value == 19.25);
  CHECK(back.rows[0].rel_error == r.rows[0].rel_error);
  CHECK(std::isnan(back.rows[1].value));
  CHECK(back.rows[1].std_error == kInf);
  CHECK(back.rows[1].reference == -kInf);
  CHECK(back.references[0].source == r.references[0].source);
  REQUIRE(back.certificates.size() == 1);
  CHECK(back.certificates[0].counterexamples[0].x[0] == 0.25);
  CHECK(back.verdict == Verdict::fail);
  CHECK(back.runtime_ms == 12.5);
  CHECK(emit(back, OutputFormat::json) == text);
  CHECK_THROWS_AS(parse_report_json("{ not json"), Error);
}

TEST_CASE("plot output and its reference sidecar") {
  Report r;
  r.rows.push_back(make_row(0.5, 3.0, 0.0, 4.0));
  CHECK(emit(r, OutputFormat::plot) == "0.5 3\n");
  CHECK(emit_plot_reference(r) == "0.5 4\n");
}

TEST_CASE("exit codes") {
  CHECK(exit_code(Verdict::pass) == 0);
  CHECK(exit_code(Verdict::fail) == 2);
  CHECK(exit_code(Verdict::inconclusive) == 3);
}

TEST_CASE("small-lambda run follows 4 - 2 lambda") {
  ExperimentConfig c = parse_config(slurp(data("configs/small_lambda.ini")));
  const Report r = run_experiment(c);
  REQUIRE(r.rows.size() == 3);
  for (const SweepRow& row : r.rows) CHECK(row.value == Approx(4 - 2 * row.param).epsilon(0.02));
  CHECK(r.rows.back().value == Approx(4.0).epsilon(0.02));
  CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("built-in squares instance passes") {
  const std::string text = builtin_suite_config("bp");
  REQUIRE_FALSE(text.empty());
  ExperimentConfig c = parse_config(text);
  c = with_override(c, "bp.instance", "squares");
  c = with_override(c, "mc.samples", "20000");
  const Report r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].reference == 16.0);
  CHECK(r.verdict == Verdict::pass);
  CHECK(builtin_suite_config("nope").empty());
  CHECK(builtin_suites().size() == 11);
}

TEST_CASE("run errors carry the experiment name") {
  ExperimentConfig c = parse_config("[experiment]\nname = m1\nseed = 1\n[function]\nkind = gaussian\n");
  try {
    run_experiment(c);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::support_not_contained);
    CHECK(contains(e.what(), "m1"));
  }
}

TEST_CASE("repeated runs are byte-identical") {
  for (const char* cfg : {"configs/bump_small_lambda.ini", "configs/claims_ball.ini"}) {
    ExperimentConfig c = parse_config(slurp(data(cfg)));
    c.timing = false;
    const std::string a = emit(run_experiment(c), OutputFormat::json);
    c.threads = 3;
    const std::string b = emit(run_experiment(c), OutputFormat::json);
    CHECK(a == b);
  }
}

TEST_CASE("golden outputs") {
  struct Golden {
    const char* config;
    const char* expected;
    OutputFormat format;
  };
  for (const Golden& g : {Golden{"ms_indicator", "ms_indicator.csv", OutputFormat::csv},
                          Golden{"small_lambda", "small_lambda.csv", OutputFormat::csv},
                          Golden{"bump_small_lambda", "bump_small_lambda.csv", OutputFormat::csv},
                          Golden{"prop21", "prop21.csv", OutputFormat::csv},
                          Golden{"claims_ball", "claims_ball.csv", OutputFormat::csv},
                          Golden{"quasinorm", "quasinorm.json", OutputFormat::json}}) {
    CAPTURE(g.config);
    const ExperimentConfig c = parse_config(slurp(data(std::string("configs/") + g.config + ".ini")));
    CHECK(emit(run_experiment(c), g.format) == slurp(data(std::string("golden/") + g.expected)));
  }
}
