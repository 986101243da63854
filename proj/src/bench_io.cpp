#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "adasketch/bench.hpp"
#include "json.hpp"

namespace adasketch::bench {

using nlohmann::json;

namespace {

const char* const kRecordColumns[] = {"problem",  "method",         "group",          "seed",
                                      "status",   "final_kkt",      "iterations",     "obj_cons_evals",
                                      "grad_jac_evals", "total_flops"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_string(const std::string& s) { return json(s).dump(); }

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParseError(rows.size() + 1, "unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line, "bad number '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) throw ParseError(line, "bad count '" + s + "'");
  return v;
}

std::vector<RunRecord> parse_csv_records(std::string_view text) {
  const auto rows = split_csv(text);
  std::vector<RunRecord> out;
  if (rows.empty()) return out;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
  for (const char* name : kRecordColumns)
    if (!col.count(name)) throw ParseError(1, std::string("missing column '") + name + "'");
  const bool has_wall = col.count("wall_time") > 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != rows[0].size()) throw ParseError(line, "wrong number of fields");
    const auto at = [&](const char* name) -> const std::string& { return row[col.at(name)]; };
    RunRecord rec;
    rec.problem_id = at("problem");
    rec.method_id = at("method");
    rec.group = at("group");
    rec.seed = parse_count(at("seed"), line);
    rec.status = at("status");
    rec.final_kkt = parse_double(at("final_kkt"), line);
    rec.iterations = parse_count(at("iterations"), line);
    rec.obj_cons_evals = parse_count(at("obj_cons_evals"), line);
    rec.grad_jac_evals = parse_count(at("grad_jac_evals"), line);
    rec.total_flops = parse_count(at("total_flops"), line);
    if (has_wall) rec.wall_time = parse_double(at("wall_time"), line);
    out.push_back(std::move(rec));
  }
  return out;
}

double json_double(const json& v) { return v.is_null() ? std::nan("") : v.get<double>(); }

std::vector<RunRecord> parse_json_records(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("records are not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError(1, "JSON records must be an array");
  std::vector<RunRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& o = doc[i];
    try {
      RunRecord rec;
      rec.problem_id = o.at("problem").get<std::string>();
      rec.method_id = o.at("method").get<std::string>();
      rec.group = o.value("group", std::string());
      rec.seed = o.at("seed").get<std::uint64_t>();
      rec.status = o.at("status").get<std::string>();
      rec.final_kkt = json_double(o.at("final_kkt"));
      rec.iterations = o.at("iterations").get<std::uint64_t>();
      rec.obj_cons_evals = o.at("obj_cons_evals").get<std::uint64_t>();
      rec.grad_jac_evals = o.at("grad_jac_evals").get<std::uint64_t>();
      rec.total_flops = o.at("total_flops").get<std::uint64_t>();
      rec.wall_time = o.contains("wall_time") ? json_double(o["wall_time"]) : 0.0;
      if (o.contains("trajectory")) {
        for (const json& p : o["trajectory"]) {
          TrajectoryPoint tp;
          tp.k = p.at("k").get<std::size_t>();
          tp.kkt_norm = json_double(p.at("kkt_norm"));
          if (p.contains("log_err") && !p["log_err"].is_null()) tp.log_err = p["log_err"].get<double>();
          rec.trajectory.push_back(tp);
        }
      }
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError(i + 1, std::string("record ") + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

Format format_from_string(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw InvalidArgument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string emit_records(const std::vector<RunRecord>& records, Format format, bool csv_wall_time) {
  std::string out;
  if (format == Format::Csv) {
    for (const char* name : kRecordColumns) {
      if (name != kRecordColumns[0]) out += ',';
      out += name;
    }
    out += csv_wall_time ? ",wall_time\n" : "\n";
    for (const RunRecord& r : records) {
      out += fmt::format("{},{},{},{},{},{},{},{},{},{}", csv_field(r.problem_id), csv_field(r.method_id),
                         csv_field(r.group), r.seed, csv_field(r.status), format_double(r.final_kkt), r.iterations,
                         r.obj_cons_evals, r.grad_jac_evals, r.total_flops);
      if (csv_wall_time) out += "," + format_double(r.wall_time);
      out += '\n';
    }
    return out;
  }
  out += "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    out += i ? ",\n  {" : "\n  {";
    out += fmt::format(
        "\"problem\": {}, \"method\": {}, \"group\": {}, \"seed\": {}, \"status\": {}, \"final_kkt\": {}, "
        "\"iterations\": {}, \"obj_cons_evals\": {}, \"grad_jac_evals\": {}, \"total_flops\": {}, "
        "\"wall_time\": {}, \"trajectory\": [",
        json_string(r.problem_id), json_string(r.method_id), json_string(r.group), r.seed, json_string(r.status),
        json_number(r.final_kkt), r.iterations, r.obj_cons_evals, r.grad_jac_evals, r.total_flops,
        json_number(r.wall_time));
    for (std::size_t j = 0; j < r.trajectory.size(); ++j) {
      const TrajectoryPoint& p = r.trajectory[j];
      if (j) out += ", ";
      out += fmt::format("{{\"k\": {}, \"kkt_norm\": {}, \"log_err\": {}}}", p.k, json_number(p.kkt_norm),
                         p.log_err ? json_number(*p.log_err) : "null");
    }
    out += "]}";
  }
  out += records.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string emit_profile(const std::vector<ProfileCurve>& curves, Format format) {
  std::string out;
  if (format == Format::Csv) {
    out = "method,tau,rho\n";
    for (const auto& c : curves)
      for (const auto& p : c.points)
        out += fmt::format("{},{},{}\n", csv_field(c.method_id), format_double(p.tau), format_double(p.rho));
    return out;
  }
  out = "[";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out += i ? ",\n  " : "\n  ";
    out += fmt::format("{{\"method\": {}, \"points\": [", json_string(curves[i].method_id));
    for (std::size_t j = 0; j < curves[i].points.size(); ++j) {
      const auto& p = curves[i].points[j];
      out += fmt::format("{}{{\"tau\": {}, \"rho\": {}}}", j ? ", " : "", json_number(p.tau), json_number(p.rho));
    }
    out += "]}";
  }
  out += curves.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string emit_trace(const std::vector<RunRecord>& records, Format format) {
  std::string out = format == Format::Csv ? "problem,method,group,seed,k,kkt_norm,log_err\n" : "[";
  bool first = true;
  for (const RunRecord& r : records) {
    for (const TrajectoryPoint& p : r.trajectory) {
      if (format == Format::Csv) {
        out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(r.problem_id), csv_field(r.method_id),
                           csv_field(r.group), r.seed, p.k, format_double(p.kkt_norm),
                           p.log_err ? format_double(*p.log_err) : "");
      } else {
        out += first ? "\n  " : ",\n  ";
        out += fmt::format(
            "{{\"problem\": {}, \"method\": {}, \"group\": {}, \"seed\": {}, \"k\": {}, \"kkt_norm\": {}, "
            "\"log_err\": {}}}",
            json_string(r.problem_id), json_string(r.method_id), json_string(r.group), r.seed, p.k,
            json_number(p.kkt_norm), p.log_err ? json_number(*p.log_err) : "null");
      }
      first = false;
    }
  }
  if (format == Format::Json) out += first ? "]\n" : "\n]\n";
  return out;
}

std::string emit_summary(const std::vector<BoxSummary>& rows, Format format) {
  std::string out = format == Format::Csv ? "group,metric,count,min,q1,median,q3,max\n" : "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BoxSummary& b = rows[i];
    if (format == Format::Csv) {
      out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(b.group), b.metric, b.count, format_double(b.min),
                         format_double(b.q1), format_double(b.median), format_double(b.q3), format_double(b.max));
    } else {
      out += i ? ",\n  " : "\n  ";
      out += fmt::format(
          "{{\"group\": {}, \"metric\": {}, \"count\": {}, \"min\": {}, \"q1\": {}, \"median\": {}, \"q3\": {}, "
          "\"max\": {}}}",
          json_string(b.group), json_string(b.metric), b.count, json_number(b.min), json_number(b.q1),
          json_number(b.median), json_number(b.q3), json_number(b.max));
    }
  }
  if (format == Format::Json) out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<RunRecord> parse_records(std::string_view text) {
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) return {};
  if (text[start] == '[') return parse_json_records(text);
  return parse_csv_records(text);
}

}  // namespace adasketch::bench
