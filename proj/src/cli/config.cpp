#include "anisolab/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "anisolab/core/error.hpp"
#include "anisolab/core/parallel.hpp"

namespace anisolab {

namespace {

constexpr const char* kExperimentNames[] = {
    "bbm",       "ms",        "bvsy-large-lambda", "gy-small-lambda", "quasinorm", "sandwich",
    "verify-bp", "verify-prop21", "verify-prop22", "verify-claims",  "m1",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Reasons are thrown as invalid_argument and wrapped with line and key.
[[noreturn]] void reject(const std::string& reason) { throw std::invalid_argument(reason); }

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    reject("'" + std::string(s) + "' is not a number");
  if (!std::isfinite(v)) reject("value must be finite");
  return v;
}

template <class Int>
Int to_int(std::string_view s) {
  s = trim(s);
  Int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    reject("'" + std::string(s) + "' is not a non-negative integer");
  return v;
}

std::vector<double> to_list(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(to_double(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  reject("expected true or false");
}

std::string one_of(std::string_view s, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (s == a) return std::string(s);
  std::string msg = "expected one of:";
  for (const char* a : allowed) msg += std::string(" ") + a;
  reject(msg);
}

double positive(double v) {
  if (!(v > 0.0)) reject("must be positive");
  return v;
}

template <class Int>
Int at_least(Int v, Int lo) {
  if (v < lo) reject("must be >= " + std::to_string(lo));
  return v;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.name",
       [](ExperimentConfig& c, std::string_view v) {
         auto e = parse_experiment(v);
         if (!e) reject("unknown experiment '" + std::string(v) + "'");
         c.experiment = *e;
       }},
      {"experiment.seed", [](ExperimentConfig& c, std::string_view v) { c.seed = to_int<std::uint64_t>(v); }},
      {"experiment.n",
       [](ExperimentConfig& c, std::string_view v) {
         c.n = to_int<int>(v);
         if (c.n < 1 || c.n > kMaxDim) reject("dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
       }},
      {"experiment.p",
       [](ExperimentConfig& c, std::string_view v) {
         c.p = to_double(v);
         if (!(c.p >= 1.0)) reject("p must be >= 1");
       }},
      {"experiment.part", [](ExperimentConfig& c, std::string_view v) { c.part = one_of(v, {"a", "b"}); }},

      {"body.shape",
       [](ExperimentConfig& c, std::string_view v) {
         c.body.shape = one_of(v, {"ball", "ellipsoid", "box", "polytope", "lq"});
       }},
      {"body.radius", [](ExperimentConfig& c, std::string_view v) { c.body.radius = positive(to_double(v)); }},
      {"body.half_widths", [](ExperimentConfig& c, std::string_view v) { c.body.half_widths = to_list(v); }},
      {"body.form", [](ExperimentConfig& c, std::string_view v) { c.body.form = to_list(v); }},
      {"body.normals", [](ExperimentConfig& c, std::string_view v) { c.body.normals = to_list(v); }},
      {"body.q",
       [](ExperimentConfig& c, std::string_view v) {
         c.body.q = to_double(v);
         if (!(c.body.q >= 1.0)) reject("q must be >= 1");
       }},
      {"body.scale", [](ExperimentConfig& c, std::string_view v) { c.body.scale = positive(to_double(v)); }},

      {"function.kind",
       [](ExperimentConfig& c, std::string_view v) {
         c.function.kind = one_of(v, {"zero", "poly-bump", "smooth-bump", "gaussian", "indicator-box",
                                      "indicator-body", "triangle"});
       }},
      {"function.center", [](ExperimentConfig& c, std::string_view v) { c.function.center = to_list(v); }},
      {"function.sigma", [](ExperimentConfig& c, std::string_view v) { c.function.sigma = positive(to_double(v)); }},
      {"function.m", [](ExperimentConfig& c, std::string_view v) { c.function.m = at_least(to_int<int>(v), 3); }},
      {"function.lo", [](ExperimentConfig& c, std::string_view v) { c.function.lo = to_list(v); }},
      {"function.hi", [](ExperimentConfig& c, std::string_view v) { c.function.hi = to_list(v); }},
      {"function.scale", [](ExperimentConfig& c, std::string_view v) { c.function.scale = positive(to_double(v)); }},

      {"grid.s",
       [](ExperimentConfig& c, std::string_view v) {
         c.s_list = to_list(v);
         for (double s : c.s_list)
           if (!(s > 0.0 && s < 1.0)) reject("every s must lie in (0, 1)");
       }},
      {"grid.lambda",
       [](ExperimentConfig& c, std::string_view v) {
         c.lambda_list = to_list(v);
         for (double l : c.lambda_list) positive(l);
       }},
      {"grid.points_per_decade",
       [](ExperimentConfig& c, std::string_view v) { c.points_per_decade = at_least(to_int<int>(v), 1); }},
      {"grid.gamma",
       [](ExperimentConfig& c, std::string_view v) {
         c.gammas = to_list(v);
         for (double g : c.gammas) positive(g);
       }},

      {"mc.samples",
       [](ExperimentConfig& c, std::string_view v) { c.samples = at_least<std::size_t>(to_int<std::size_t>(v), 1); }},
      {"mc.chunks", [](ExperimentConfig& c, std::string_view v) { c.chunks = at_least(to_int<int>(v), 1); }},
      {"mc.threads", [](ExperimentConfig& c, std::string_view v) { c.threads = at_least(to_int<int>(v), 1); }},
      {"mc.subdivisions",
       [](ExperimentConfig& c, std::string_view v) { c.subdivisions = at_least(to_int<int>(v), 8); }},
      {"mc.method",
       [](ExperimentConfig& c, std::string_view v) { c.method = one_of(v, {"auto", "quadrature", "mc"}); }},
      {"mc.resolution", [](ExperimentConfig& c, std::string_view v) { c.resolution = at_least(to_int<int>(v), 16); }},
      {"mc.table_nodes",
       [](ExperimentConfig& c, std::string_view v) { c.table_nodes = at_least(to_int<int>(v), 16); }},

      {"bp.instance",
       [](ExperimentConfig& c, std::string_view v) { c.bp_instance = one_of(v, {"disks", "squares", "both"}); }},

      {"certificate.deltas",
       [](ExperimentConfig& c, std::string_view v) {
         c.deltas = to_list(v);
         for (double d : c.deltas)
           if (!(d > 0.0 && d < 1.0)) reject("every delta must lie in (0, 1)");
       }},
      {"certificate.lambda_factors",
       [](ExperimentConfig& c, std::string_view v) {
         c.lambda_factors = to_list(v);
         for (double l : c.lambda_factors) positive(l);
       }},
      {"certificate.configs",
       [](ExperimentConfig& c, std::string_view v) { c.configs = at_least<std::size_t>(to_int<std::size_t>(v), 1); }},
      {"certificate.pairs",
       [](ExperimentConfig& c, std::string_view v) { c.pairs = at_least<std::size_t>(to_int<std::size_t>(v), 1); }},
      {"certificate.budget",
       [](ExperimentConfig& c, std::string_view v) { c.budget = at_least<std::size_t>(to_int<std::size_t>(v), 1); }},
      {"certificate.segments",
       [](ExperimentConfig& c, std::string_view v) { c.segments = at_least<std::size_t>(to_int<std::size_t>(v), 1); }},
      {"certificate.r", [](ExperimentConfig& c, std::string_view v) { c.r = positive(to_double(v)); }},

      {"output.path", [](ExperimentConfig& c, std::string_view v) { c.output_path = std::string(v); }},
      {"output.format",
       [](ExperimentConfig& c, std::string_view v) {
         auto f = parse_format(v);
         if (!f) reject("expected csv, json or plot");
         c.format = *f;
       }},
      {"output.timing", [](ExperimentConfig& c, std::string_view v) { c.timing = to_bool(v); }},
  };
  return table;
}

[[noreturn]] void config_error(int line, const std::string& key, const std::string& reason) {
  std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "override: ";
  fail(ErrorCode::config, where + "key '" + key + "': " + reason);
}

int line_of(const ConfigEntries& e, const std::string& key) {
  auto it = e.find(key);
  return it == e.end() ? 0 : it->second.second;
}

void cross_check(const ExperimentConfig& c) {
  const auto& e = c.entries;
  auto sized = [&](const std::vector<double>& v, const char* key, std::size_t want) {
    if (!v.empty() && v.size() != want)
      config_error(line_of(e, key), key, "expected " + std::to_string(want) + " values for n = " + std::to_string(c.n));
  };
  const auto n = static_cast<std::size_t>(c.n);
  sized(c.function.center, "function.center", n);
  sized(c.function.lo, "function.lo", n);
  sized(c.function.hi, "function.hi", n);
  sized(c.body.form, "body.form", n * n);
  if (!c.body.half_widths.empty() && c.body.half_widths.size() != 1)
    sized(c.body.half_widths, "body.half_widths", n);
  if (c.body.normals.size() % n != 0)
    config_error(line_of(e, "body.normals"), "body.normals", "length must be a multiple of n");
  if (c.body.shape == "ellipsoid" && c.body.form.empty())
    config_error(line_of(e, "body.shape"), "body.form", "ellipsoid needs a form matrix");
  if (c.body.shape == "polytope" && c.body.normals.empty())
    config_error(line_of(e, "body.shape"), "body.normals", "polytope needs normals");
  if (c.function.kind == "triangle" && c.n != 1)
    config_error(line_of(e, "function.kind"), "function.kind", "triangle is one-dimensional");
}

ExperimentConfig from_entries(const ConfigEntries& entries) {
  ExperimentConfig cfg;
  cfg.threads = default_threads();
  cfg.entries = entries;
  const auto& table = setters();
  for (const auto& [key, value] : entries) {
    auto it = table.find(key);
    if (it == table.end()) config_error(value.second, key, "unknown key");
    try {
      it->second(cfg, trim(value.first));
    } catch (const std::invalid_argument& ex) {
      config_error(value.second, key, ex.what());
    }
  }
  for (const char* required : {"experiment.name", "experiment.seed"})
    if (!entries.count(required)) config_error(0, required, "missing required key");
  cross_check(cfg);
  return cfg;
}

}  // namespace

const char* to_string(Experiment e) { return kExperimentNames[static_cast<int>(e)]; }

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kExperimentNames)); ++i)
    if (name == kExperimentNames[i]) return static_cast<Experiment>(i);
  return std::nullopt;
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::plot: return "plot";
  }
  return "?";
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "plot") return OutputFormat::plot;
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text) {
  ConfigEntries entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        fail(ErrorCode::config, "line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(ErrorCode::config, "line " + std::to_string(line_no) + ": empty key");
    if (section.empty()) config_error(line_no, key, "key outside any [section]");
    const std::string full = section + "." + key;
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) config_error(line_no, full, "empty value");
    auto [it, fresh] = entries.emplace(full, std::make_pair(value, line_no));
    if (!fresh)
      config_error(line_no, full, "duplicate key (first set on line " + std::to_string(it->second.second) + ")");
  }
  return from_entries(entries);
}

ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  ConfigEntries entries = cfg.entries;
  entries[key] = {value, 0};
  return from_entries(entries);
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : cfg.entries) {
    if (key == "mc.threads" || key.rfind("output.", 0) == 0) continue;
    out.emplace_back(key, value.first);
  }
  return out;
}

std::shared_ptr<const ConvexBody> build_body(const ExperimentConfig& cfg) {
  const BodySpec& b = cfg.body;
  const int n = cfg.n;
  if (b.shape == "ball") return std::make_shared<const ConvexBody>(ConvexBody::ball(n, b.radius));
  if (b.shape == "lq") return std::make_shared<const ConvexBody>(ConvexBody::lq_ball(n, b.q, b.scale));
  if (b.shape == "ellipsoid") {
    Mat a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = b.form[static_cast<std::size_t>(r * n + c)];
    return std::make_shared<const ConvexBody>(ConvexBody::ellipsoid(a));
  }
  if (b.shape == "polytope") {
    std::vector<Vec> normals;
    for (std::size_t i = 0; i < b.normals.size(); i += static_cast<std::size_t>(n)) {
      Vec v(n);
      for (int k = 0; k < n; ++k) v[k] = b.normals[i + static_cast<std::size_t>(k)];
      normals.push_back(v);
    }
    return std::make_shared<const ConvexBody>(ConvexBody::polytope(normals));
  }
  Vec h = Vec::Ones(n);
  if (b.half_widths.size() == 1) h.setConstant(b.half_widths[0]);
  else if (!b.half_widths.empty())
    for (int k = 0; k < n; ++k) h[k] = b.half_widths[static_cast<std::size_t>(k)];
  return std::make_shared<const ConvexBody>(ConvexBody::box(h));
}

TestFunction build_function(const ExperimentConfig& cfg, std::shared_ptr<const ConvexBody> body) {
  const FunctionSpec& s = cfg.function;
  const int n = cfg.n;
  auto vec = [n](const std::vector<double>& v, double fill) {
    Vec out = Vec::Constant(n, fill);
    for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<int>(k)] = v[k];
    return out;
  };
  const Vec center = vec(s.center, 0.0);
  if (s.kind == "zero") return TestFunction::zero(n);
  if (s.kind == "smooth-bump") return TestFunction::smooth_bump(center, s.sigma);
  if (s.kind == "gaussian") return TestFunction::gaussian(center, s.sigma);
  if (s.kind == "indicator-box") return TestFunction::indicator_box(vec(s.lo, 0.0), vec(s.hi, 1.0));
  if (s.kind == "indicator-body") return TestFunction::indicator_body(std::move(body), center, s.scale);
  if (s.kind == "triangle") return TestFunction::triangle(center[0], s.sigma);
  return TestFunction::poly_bump(center, s.sigma, s.m);
}

}  // namespace anisolab
