#include "intersample/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace intersample {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump_value(std::string& out, const ojson& v, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case ojson::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += ojson(it.key()).dump();
        out += pretty ? ": " : ":";
        dump_value(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case ojson::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const ojson& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat && pretty ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_value(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case ojson::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

template <class J>
Eigen::MatrixXd read_matrix(const J& node, const std::string& name) {
  if (!node.is_array() || node.empty()) throw SpecError(name + " must be a nonempty array of rows");
  const std::size_t rows = node.size();
  const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
  if (cols == 0) throw SpecError(name + " rows must be nonempty arrays");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!node[i].is_array() || node[i].size() != cols) throw SpecError(name + " is not rectangular");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!node[i][j].is_number()) throw SpecError(name + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = node[i][j].template get<double>();
    }
  }
  return m;
}

template <class J>
std::vector<double> read_numbers(const J& node, const std::string& name) {
  if (!node.is_array()) throw SpecError(name + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& e : node) {
    if (!e.is_number()) throw SpecError(name + " entries must be numbers");
    out.push_back(e.template get<double>());
  }
  return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw SpecError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

template <class T>
std::optional<T> optional_of(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<T>();
}

ojson optional_number(const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); }

ojson interval_json(const Interval& x) {
  return ojson::array({x.lo(), x.hi()});
}

}  // namespace

SpecDocument parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("spec must be a JSON object");

  SpecDocument out;
  try {
    out.system.a = read_matrix(member(doc, "A", "spec"), "A");
    out.system.b = read_matrix(member(doc, "B", "spec"), "B");
    const json& dt = member(doc, "dt", "spec");
    if (!dt.is_number()) throw SpecError("dt must be a number");
    out.system.dt = dt.get<double>();
    out.system.h = read_matrix(member(member(doc, "X", "spec"), "H", "X"), "X.H");
    out.system.hu = read_matrix(member(member(doc, "U", "spec"), "H", "U"), "U.H");

    const json& queries = member(doc, "queries", "spec");
    if (!queries.is_array()) throw SpecError("queries must be an array");
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const std::string where = "queries[" + std::to_string(i) + "]";
      const json& q = queries[i];
      QueryPoint qp;
      qp.x0 = to_eigen(read_numbers(member(q, "x0", where), where + ".x0"));
      qp.u0 = to_eigen(read_numbers(member(q, "u0", where), where + ".u0"));
      if (q.contains("label")) {
        if (!q.at("label").is_string()) throw SpecError(where + ".label must be a string");
        qp.label = q.at("label").get<std::string>();
      } else {
        qp.label = "q" + std::to_string(i);
      }
      out.queries.push_back(std::move(qp));
    }
    out.system.validate();
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(e.what());
  }
  return out;
}

SpecDocument load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string dump_json(const ojson& doc, int indent) {
  std::string out;
  dump_value(out, doc, indent, 0);
  return out;
}

ojson report_to_json(const VerificationReport& report, bool include_timing) {
  ojson config;
  config["epsilon"] = report.config.epsilon;
  config["k"] = report.config.k;
  config["l"] = report.config.l;
  config["overestimator"] = report.config.overestimator;
  config["max_bisections"] = report.config.max_bisections;
  config["min_t_width"] = optional_number(report.config.min_t_width);
  config["facet"] = report.config.facet ? ojson(*report.config.facet) : ojson(nullptr);

  ojson queries = ojson::array();
  for (const QueryReport& q : report.queries) {
    ojson facets = ojson::array();
    for (const FacetResult& f : q.facets) {
      ojson fj;
      fj["j"] = f.j;
      fj["h"] = f.h;
      fj["f_upper"] = optional_number(f.f_upper);
      fj["f_lower"] = f.f_lower;
      fj["gap"] = optional_number(f.gap);
      fj["satisfied"] = f.satisfied;
      fj["verdict"] = std::string(to_string(f.verdict));
      fj["bisections"] = f.bisections;
      fj["convex_ops"] = f.convex_ops;
      fj["nodes_final"] = f.nodes_final;
      fj["status"] = f.status;
      fj["witness_t"] = f.witness_t;
      fj["analytic_case"] = f.analytic_case;
      if (include_timing) fj["time_ms"] = f.time_ms;
      fj["error"] = f.error ? ojson(*f.error) : ojson(nullptr);
      facets.push_back(std::move(fj));
    }
    ojson qj;
    qj["query"] = q.label;
    qj["x0"] = q.x0;
    qj["u0"] = q.u0;
    qj["membership"] = {{"x0_in_X", q.membership.x0_in_x},
                        {"u0_in_U", q.membership.u0_in_u},
                        {"successor_in_X", q.membership.successor_in_x}};
    qj["facets"] = std::move(facets);
    qj["intersample_ok"] = q.intersample_ok;
    qj["verdict"] = std::string(to_string(q.verdict));
    qj["errors"] = q.errors;
    queries.push_back(std::move(qj));
  }

  ojson doc;
  doc["config"] = std::move(config);
  doc["queries"] = std::move(queries);
  return doc;
}

VerificationReport report_from_json(const json& doc) {
  VerificationReport r;
  try {
    const json& c = member(doc, "config", "report");
    r.config.epsilon = c.at("epsilon").get<double>();
    r.config.k = c.at("k").get<unsigned>();
    r.config.l = c.at("l").get<unsigned>();
    r.config.overestimator = c.at("overestimator").get<std::string>();
    r.config.max_bisections = c.at("max_bisections").get<std::size_t>();
    r.config.min_t_width = optional_of<double>(c, "min_t_width");
    r.config.facet = optional_of<std::size_t>(c, "facet");

    for (const json& qj : member(doc, "queries", "report")) {
      QueryReport q;
      q.label = qj.at("query").get<std::string>();
      q.x0 = qj.at("x0").get<std::vector<double>>();
      q.u0 = qj.at("u0").get<std::vector<double>>();
      const json& m = qj.at("membership");
      q.membership.x0_in_x = m.at("x0_in_X").get<bool>();
      q.membership.u0_in_u = m.at("u0_in_U").get<bool>();
      q.membership.successor_in_x = m.at("successor_in_X").get<bool>();
      for (const json& fj : qj.at("facets")) {
        FacetResult f;
        f.j = fj.at("j").get<std::size_t>();
        f.h = fj.at("h").get<std::vector<double>>();
        f.f_upper = optional_of<double>(fj, "f_upper");
        f.f_lower = fj.at("f_lower").get<double>();
        f.gap = optional_of<double>(fj, "gap");
        f.satisfied = fj.at("satisfied").get<bool>();
        const auto verdict = parse_verdict(fj.at("verdict").get<std::string>());
        if (!verdict) throw SpecError("unknown facet verdict");
        f.verdict = *verdict;
        f.bisections = fj.at("bisections").get<std::size_t>();
        f.convex_ops = fj.at("convex_ops").get<std::size_t>();
        f.nodes_final = fj.at("nodes_final").get<std::size_t>();
        f.status = fj.at("status").get<std::string>();
        f.witness_t = fj.at("witness_t").get<double>();
        f.analytic_case = fj.at("analytic_case").get<std::string>();
        f.time_ms = optional_of<double>(fj, "time_ms").value_or(0.0);
        f.error = optional_of<std::string>(fj, "error");
        q.facets.push_back(std::move(f));
      }
      q.intersample_ok = qj.at("intersample_ok").get<bool>();
      const auto verdict = parse_verdict(qj.at("verdict").get<std::string>());
      if (!verdict) throw SpecError("unknown query verdict");
      q.verdict = *verdict;
      q.errors = qj.at("errors").get<std::vector<std::string>>();
      r.queries.push_back(std::move(q));
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string serialize_report(const VerificationReport& report, bool include_timing) {
  return dump_json(report_to_json(report, include_timing)) + "\n";
}

VerificationReport parse_report(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("report is not valid JSON: ") + e.what());
  }
  return report_from_json(doc);
}

ojson trace_to_json(const TraceEvent& event, std::size_t query, std::size_t j) {
  ojson e;
  e["query"] = query;
  e["j"] = j;
  e["sweep"] = event.sweep;
  e["node"] = event.node_seq;
  e["t"] = interval_json(event.t);
  e["fprime"] = interval_json(event.fprime);
  e["fsecond"] = interval_json(event.fsecond);
  e["branch"] = std::string(to_string(event.branch));
  e["fdagger"] = interval_json(event.fdagger);
  e["t_dagger"] = event.t_dagger;
  e["f_lower"] = event.f_lower;
  if (event.overestimator) {
    const OverestimatorParams& g = *event.overestimator;
    ojson gj;
    gj["kind"] = std::string(to_string(g.kind));
    gj["t_lo"] = g.t_lo;
    gj["t_hi"] = g.t_hi;
    gj["f_lo"] = g.f_lo;
    gj["f_hi"] = g.f_hi;
    switch (g.kind) {
      case OverestimatorKind::PiecewiseAffine:
        gj["slope_lo"] = g.slope_lo;
        gj["slope_hi"] = g.slope_hi;
        gj["t_c"] = g.t_c;
        break;
      case OverestimatorKind::PiecewiseQuadratic:
        gj["df_lo"] = g.df_lo;
        gj["df_hi"] = g.df_hi;
        gj["curvature"] = g.curvature;
        gj["t_c"] = g.t_c;
        break;
      case OverestimatorKind::ConcaveShift:
        gj["curvature"] = g.curvature;
        break;
    }
    e["overestimator"] = std::move(gj);
  } else {
    e["overestimator"] = nullptr;
  }
  return e;
}

std::string trace_line(const TraceEvent& event, std::size_t query, std::size_t j) {
  return dump_json(trace_to_json(event, query, j), -1);
}

void write_csv(std::ostream& os, const SampleTable& table) {
  os << "t,f";
  for (Eigen::Index i = 0; i < table.states.cols(); ++i) os << ",x" << (i + 1);
  os << '\n';
  for (std::size_t r = 0; r < table.t.size(); ++r) {
    os << format_double(table.t[r]) << ',' << format_double(table.f[r]);
    for (Eigen::Index i = 0; i < table.states.cols(); ++i) {
      os << ',' << format_double(table.states(static_cast<Eigen::Index>(r), i));
    }
    os << '\n';
  }
}

}  // namespace intersample
