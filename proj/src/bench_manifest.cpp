#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "adasketch/bench.hpp"

namespace adasketch::bench {

using nlohmann::json;

namespace {

constexpr Method kMethods[] = {Method::AdaSketchGv, Method::AdaSketchRk, Method::Byrd, Method::ByrdAdaptive,
                               Method::AugLag};

[[noreturn]] void bad(const std::string& what) { throw InvalidArgument("manifest: " + what); }

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      bad("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) bad(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

std::uint64_t count(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned()) bad(std::string("'") + key + "' must be a nonnegative integer");
  return obj[key].get<std::uint64_t>();
}

Vec vector_of(const json& v, const std::string& what) {
  if (!v.is_array()) bad(what + " must be an array of numbers");
  Vec out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) bad(what + " must be an array of numbers");
    out(static_cast<Index>(i)) = v[i].get<double>();
  }
  return out;
}

Mat matrix_of(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) bad(what + " must be a nonempty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  Mat out(static_cast<Index>(v.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec row = vector_of(v[i], what + " row");
    if (static_cast<std::size_t>(row.size()) != cols) bad(what + " rows differ in length");
    out.row(static_cast<Index>(i)) = row.transpose();
  }
  return out;
}

ProblemSpec parse_problem(const json& p, const std::filesystem::path& base_dir) {
  if (!p.is_object()) bad("each problem must be an object");
  ProblemSpec spec;
  if (!p.contains("kind") || !p["kind"].is_string()) bad("problem needs a string 'kind'");
  spec.kind = p["kind"].get<std::string>();
  spec.id = p.value("id", spec.kind);

  if (spec.kind == "qp") {
    check_keys(p, {"id", "kind", "Q", "g", "A", "b", "z0"}, "qp problem");
    for (const char* key : {"Q", "g", "A", "b"})
      if (!p.contains(key)) bad(std::string("qp problem needs '") + key + "'");
    spec.q = matrix_of(p["Q"], "Q");
    spec.g = vector_of(p["g"], "g");
    spec.a = matrix_of(p["A"], "A");
    spec.b = vector_of(p["b"], "b");
  } else if (spec.kind == "random_qp") {
    check_keys(p, {"id", "kind", "n", "m", "seed", "z0"}, "random_qp problem");
    spec.n = static_cast<Index>(count(p, "n", 0));
    spec.m = static_cast<Index>(count(p, "m", 0));
    spec.seed = count(p, "seed", 0);
  } else if (spec.kind == "pde") {
    check_keys(p, {"id", "kind", "grid", "zeta", "eps_n", "eps_s", "spacing", "z0"}, "pde problem");
    spec.grid = static_cast<Index>(count(p, "grid", 3));
    spec.zeta = number(p, "zeta", spec.zeta);
    spec.eps_n = number(p, "eps_n", spec.eps_n);
    spec.eps_s = number(p, "eps_s", spec.eps_s);
    spec.spacing = number(p, "spacing", spec.spacing);
  } else if (spec.kind == "logreg") {
    check_keys(p, {"id", "kind", "data", "m_lin", "seed", "z0"}, "logreg problem");
    if (!p.contains("data") || !p["data"].is_string()) bad("logreg problem needs a string 'data' path");
    spec.data = p["data"].get<std::string>();
    if (spec.data.is_relative() && !base_dir.empty()) spec.data = base_dir / spec.data;
    spec.m = static_cast<Index>(count(p, "m_lin", 10));
    spec.seed = count(p, "seed", 0);
    spec.dataset = std::make_shared<const Dataset>(load_libsvm(spec.data));
  } else {
    bad("unknown problem kind '" + spec.kind + "'");
  }

  if (p.contains("z0")) {
    const json& z0 = p["z0"];
    if (z0.is_string()) {
      spec.z0 = z0.get<std::string>();
      if (spec.z0 != "ones" && spec.z0 != "zeros") bad("z0 must be \"ones\", \"zeros\" or an array");
    } else {
      spec.z0 = "values";
      spec.z0_values = vector_of(z0, "z0");
    }
  }
  return spec;
}

ThetaSchedule parse_theta(const json& s) {
  const std::string kind = s.value("theta", std::string("constant"));
  const double value = number(s, "theta_value", kind == "geometric" ? 0.5 : 1.0);
  if (kind == "constant") return ThetaSchedule::constant(value);
  if (kind == "harmonic") return ThetaSchedule::harmonic();
  if (kind == "geometric") return ThetaSchedule::geometric(value);
  bad("theta must be constant, harmonic or geometric");
}

SolverConfig parse_solver(const json& s) {
  if (!s.is_object()) bad("'solver' must be an object");
  check_keys(s, {"eta1_0", "eta2_0", "delta_0", "xi_b", "beta", "nu", "theta", "theta_value", "inner_cap",
                 "max_penalty_rounds", "alpha_min"},
             "solver");
  SolverConfig cfg;
  cfg.eta1_0 = number(s, "eta1_0", cfg.eta1_0);
  cfg.eta2_0 = number(s, "eta2_0", cfg.eta2_0);
  cfg.delta_0 = number(s, "delta_0", cfg.delta_0);
  cfg.xi_b = number(s, "xi_b", cfg.xi_b);
  cfg.beta = number(s, "beta", cfg.beta);
  cfg.nu = number(s, "nu", cfg.nu);
  cfg.alpha_min = number(s, "alpha_min", cfg.alpha_min);
  cfg.theta_schedule = parse_theta(s);
  if (s.contains("inner_cap")) cfg.inner_cap = count(s, "inner_cap", 0);
  cfg.max_penalty_rounds = count(s, "max_penalty_rounds", cfg.max_penalty_rounds);
  cfg.validate();
  return cfg;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::AdaSketchGv: return "adasketch-gv";
    case Method::AdaSketchRk: return "adasketch-rk";
    case Method::Byrd: return "byrd";
    case Method::ByrdAdaptive: return "byrd-adaptive";
    case Method::AugLag: return "auglag";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : kMethods)
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

bool is_randomized(Method method) { return method == Method::AdaSketchGv || method == Method::AdaSketchRk; }

ProblemPtr ProblemSpec::build() const {
  if (kind == "qp") return make_qp_problem(q, g, a, b, id);
  if (kind == "random_qp") return make_random_qp(n, m, seed);
  if (kind == "pde") return make_pde_problem(grid, zeta, eps_n, eps_s, spacing);
  if (kind == "logreg") {
    if (!dataset) throw InvalidArgument("logreg problem '" + id + "' has no loaded dataset");
    return make_logreg_problem(dataset, m, seed);
  }
  throw InvalidArgument("unknown problem kind '" + kind + "'");
}

Iterate ProblemSpec::start(const Problem& problem) const {
  if (z0_values) {
    if (z0_values->size() != problem.n() + problem.m())
      throw DimensionError("z0 for problem '" + id + "' has the wrong length");
    return Iterate::from_stacked(*z0_values, problem.n());
  }
  return Iterate::constant(problem.n(), problem.m(), z0 == "zeros" ? 0.0 : 1.0);
}

Manifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto upto = json_text.substr(0, std::min<std::size_t>(e.byte, json_text.size()));
    const auto line = static_cast<std::size_t>(std::count(upto.begin(), upto.end(), '\n')) + 1;
    throw ParseError(line, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");
  check_keys(doc, {"problems", "methods", "seeds", "kkt_tol", "max_outer", "solver", "trajectories"}, "manifest");

  Manifest out;
  if (doc.contains("problems")) {
    if (!doc["problems"].is_array()) bad("'problems' must be an array");
    for (const auto& p : doc["problems"]) out.problems.push_back(parse_problem(p, base_dir));
  }
  if (doc.contains("methods")) {
    if (!doc["methods"].is_array()) bad("'methods' must be an array");
    for (const auto& m : doc["methods"]) {
      if (!m.is_string()) bad("methods must be strings");
      out.methods.push_back(method_from_string(m.get<std::string>()));
    }
  }
  if (doc.contains("seeds")) {
    const json& s = doc["seeds"];
    out.seeds.clear();
    if (s.is_string()) {
      out.seeds = parse_seed_list(s.get<std::string>());
    } else if (s.is_array()) {
      for (const auto& v : s) {
        if (!v.is_number_unsigned()) bad("seeds must be nonnegative integers");
        out.seeds.push_back(v.get<std::uint64_t>());
      }
    } else {
      bad("'seeds' must be an array or a seed-list string");
    }
    if (out.seeds.empty()) bad("'seeds' must not be empty");
  }
  out.kkt_tol = number(doc, "kkt_tol", out.kkt_tol);
  out.max_outer = count(doc, "max_outer", out.max_outer);
  if (doc.contains("solver")) out.solver = parse_solver(doc["solver"]);
  if (doc.contains("trajectories")) {
    if (!doc["trajectories"].is_boolean()) bad("'trajectories' must be true or false");
    out.trajectories = doc["trajectories"].get<bool>();
  }
  return out;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open manifest '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  auto parse_one = [&](std::string_view tok) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
      throw InvalidArgument("bad seed '" + std::string(tok) + "'");
    return v;
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (const auto dash = tok.find('-'); dash != std::string_view::npos) {
      const std::uint64_t lo = parse_one(tok.substr(0, dash));
      const std::uint64_t hi = parse_one(tok.substr(dash + 1));
      if (hi < lo) throw InvalidArgument("bad seed range '" + std::string(tok) + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(parse_one(tok));
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace adasketch::bench
