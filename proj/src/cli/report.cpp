#include <charconv>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "anisolab/cli/report.hpp"
#include "anisolab/core/error.hpp"

namespace anisolab {

namespace {

using Json = nlohmann::ordered_json;

// %.6g without locale dependence.
std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

// Shortest round-trip representation.
std::string fmt_exact(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// JSON has no NaN or infinity; they travel as null or strings.
Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double from_json(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return j.get<std::string>() == "inf" ? kInf : -kInf;
  return j.get<double>();
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Vec vec_from(const Json& j) {
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = from_json(j[i]);
  return v;
}

Verdict verdict_from(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  return Verdict::inconclusive;
}

std::string to_json(const Report& r) {
  Json j;
  Json config = Json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  j["config"] = config;
  Json rows = Json::array();
  for (const SweepRow& row : r.rows)
    rows.push_back({{"param", number(row.param)},
                    {"value", number(row.value)},
                    {"stderr", number(row.std_error)},
                    {"reference", number(row.reference)},
                    {"rel_error", number(row.rel_error)}});
  j["rows"] = rows;
  Json refs = Json::array();
  for (const Reference& ref : r.references)
    refs.push_back({{"name", ref.name}, {"value", number(ref.value)}, {"source", ref.source}});
  j["references"] = refs;
  j["verdict"] = to_string(r.verdict);
  j["runtime_ms"] = r.runtime_ms;
  j["version"] = r.version;
  j["experiment"] = r.experiment;
  if (!r.certificates.empty()) {
    Json certs = Json::array();
    for (const CertificateOutcome& c : r.certificates) {
      Json ce = Json::array();
      for (const Counterexample& x : c.counterexamples)
        ce.push_back({{"x", vec_json(x.x)}, {"omega", vec_json(x.omega)}, {"s", number(x.s)}, {"margin", number(x.margin)}});
      certs.push_back({{"name", c.name},
                       {"verdict", to_string(c.verdict)},
                       {"tested", c.tested},
                       {"attempts", c.attempts},
                       {"min_margin", number(c.min_margin)},
                       {"counterexample_count", c.counterexample_count},
                       {"counterexamples", ce}});
    }
    j["certificates"] = certs;
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string emit(const Report& report, OutputFormat format) {
  std::string out;
  switch (format) {
    case OutputFormat::csv:
      out = "param,value,stderr,reference,rel_error\n";
      for (const SweepRow& row : report.rows)
        out += fmt6(row.param) + "," + fmt6(row.value) + "," + fmt6(row.std_error) + "," + fmt6(row.reference) +
               "," + fmt6(row.rel_error) + "\n";
      return out;
    case OutputFormat::json: return to_json(report);
    case OutputFormat::plot:
      for (const SweepRow& row : report.rows) out += fmt_exact(row.param) + " " + fmt_exact(row.value) + "\n";
      return out;
  }
  return out;
}

std::string emit_plot_reference(const Report& report) {
  std::string out;
  for (const SweepRow& row : report.rows) out += fmt_exact(row.param) + " " + fmt_exact(row.reference) + "\n";
  return out;
}

Report parse_report_json(const std::string& text) {
  Report r;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("report json: ") + e.what());
  }
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  for (const Json& row : j.at("rows")) {
    SweepRow s;
    s.param = from_json(row.at("param"));
    s.value = from_json(row.at("value"));
    s.std_error = from_json(row.at("stderr"));
    s.reference = from_json(row.at("reference"));
    s.rel_error = from_json(row.at("rel_error"));
    r.rows.push_back(s);
  }
  for (const Json& ref : j.at("references"))
    r.references.push_back({ref.at("name").get<std::string>(), from_json(ref.at("value")),
                            ref.at("source").get<std::string>()});
  r.verdict = verdict_from(j.at("verdict").get<std::string>());
  r.runtime_ms = j.at("runtime_ms").get<double>();
  r.version = j.at("version").get<std::string>();
  r.experiment = j.value("experiment", std::string{});
  if (j.contains("certificates")) {
    for (const Json& c : j.at("certificates")) {
      CertificateOutcome o;
      o.name = c.at("name").get<std::string>();
      o.verdict = verdict_from(c.at("verdict").get<std::string>());
      o.tested = c.at("tested").get<std::size_t>();
      o.attempts = c.at("attempts").get<std::size_t>();
      o.min_margin = from_json(c.at("min_margin"));
      o.counterexample_count = c.at("counterexample_count").get<std::size_t>();
      for (const Json& x : c.at("counterexamples"))
        o.counterexamples.push_back({vec_from(x.at("x")), vec_from(x.at("omega")), from_json(x.at("s")),
                                     from_json(x.at("margin"))});
      r.certificates.push_back(o);
    }
  }
  return r;
}

}  // namespace anisolab
