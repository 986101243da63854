#pragma once

// Benchmark harness: manifests, suite runs, seed aggregation, performance
// profiles, sensitivity sweeps and record (de)serialization.
//
// Manifest (JSON):
//   {
//     "problems": [ {"id": "pde", "kind": "pde", "grid": 3, ...}, ... ],
//     "methods":  ["adasketch-gv", "adasketch-rk", "byrd", "byrd-adaptive", "auglag"],
//     "seeds": [0, 1, 2],
//     "kkt_tol": 1e-4, "max_outer": 10000,
//     "solver": { "eta1_0": 1, "theta": "harmonic", ... },
//     "trajectories": false
//   }
// See README.md for every problem kind and solver key.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adasketch/baselines.hpp"
#include "adasketch/libsvm.hpp"
#include "adasketch/problem.hpp"
#include "adasketch/solver.hpp"

namespace adasketch::bench {

enum class Method { AdaSketchGv, AdaSketchRk, Byrd, ByrdAdaptive, AugLag };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
bool is_randomized(Method method);

struct ProblemSpec {
  std::string id;
  std::string kind;  // qp, random_qp, pde, logreg

  // qp
  Mat q, a;
  Vec g, b;
  // random_qp and logreg
  Index n = 0;
  Index m = 0;
  std::uint64_t seed = 0;
  // pde
  Index grid = 3;
  double zeta = 0.1;
  double eps_n = 0.1;
  double eps_s = 3.872983346207417;  // sqrt(15)
  double spacing = 1.0;
  // logreg
  std::filesystem::path data;
  std::shared_ptr<const Dataset> dataset;  // loaded by parse_manifest

  // Starting point: "ones", "zeros", or explicit stacked values.
  std::string z0 = "ones";
  std::optional<Vec> z0_values;

  /// Fresh oracle with its own counters.
  ProblemPtr build() const;
  Iterate start(const Problem& problem) const;
};

struct Manifest {
  std::vector<ProblemSpec> problems;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds{0};
  double kkt_tol = 1e-4;
  std::size_t max_outer = 10000;
  SolverConfig solver;  // AdaSketch options; sketch, seed and limits are set per cell
  bool trajectories = false;
};

/// Relative data paths resolve against `base_dir`. Throws ParseError or
/// InvalidArgument on malformed input.
Manifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir = {});
Manifest load_manifest(const std::filesystem::path& path);

/// "0,1,5" or "0-9" or a mix ("0-3,7").
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct TrajectoryPoint {
  std::size_t k = 0;
  double kkt_norm = 0.0;
  std::optional<double> log_err;  // log10 ||z_k - z*||

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct RunRecord {
  std::string problem_id;
  std::string method_id;
  std::string group;  // sweep configuration label, empty otherwise
  std::uint64_t seed = 0;
  std::string status;
  double final_kkt = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t obj_cons_evals = 0;
  std::uint64_t grad_jac_evals = 0;
  std::uint64_t total_flops = 0;
  double wall_time = 0.0;
  std::vector<TrajectoryPoint> trajectory;

  bool converged() const { return status == "CONVERGED"; }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Runs one method on one problem. Never throws for solver-level failures;
/// exceptions from the oracle show up as status "ERROR".
RunRecord run_cell(const ProblemSpec& spec, Method method, std::uint64_t seed, const Manifest& manifest,
                   const std::optional<Vec>& z_star = std::nullopt, std::string group = {});

/// Every problem x method x seed cell (deterministic methods once, with the
/// first seed). Cells run in parallel with OpenMP; output order is fixed.
std::vector<RunRecord> run_suite(const Manifest& manifest);

/// Mean over seeds for one (problem, method, group).
struct Aggregate {
  std::string problem_id;
  std::string method_id;
  std::string group;
  std::size_t runs = 0;
  bool solved = false;  // every seed converged
  double final_kkt = 0.0;
  double obj_cons_evals = 0.0;
  double grad_jac_evals = 0.0;
  double total_flops = 0.0;
  double wall_time = 0.0;
  std::vector<const RunRecord*> members;
};

/// Groups in first-appearance order.
std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records);

struct ProfilePoint {
  double tau = 1.0;
  double rho = 0.0;
};

struct ProfileCurve {
  std::string method_id;
  std::vector<ProfilePoint> points;
};

struct ProfileResult {
  std::vector<ProfileCurve> curves;
  std::vector<std::string> warnings;  // problems dropped because nothing converged
};

/// Dolan-More profiles on mean flops. Every curve is evaluated on the union
/// of all finite ratios, so the curves share one tau grid starting at 1.
/// Throws InvalidArgument if a (problem, method) pair appears in more than
/// one group.
ProfileResult performance_profile(const std::vector<RunRecord>& records);

/// One varied parameter value; the label doubles as the record group.
struct SweepConfig {
  std::string parameter;
  double value = 0.0;
  SolverConfig cfg;
  std::string label() const;
};

/// eta1_0, eta2_0, delta_0, beta varied one at a time over three values
/// each, the others at their defaults from `base`.
std::vector<SweepConfig> sweep_configs(const SolverConfig& base);

/// Runs every sweep configuration with the manifest's AdaSketch methods
/// (Gaussian only when none are listed).
std::vector<RunRecord> sensitivity_sweep(const Manifest& manifest);

struct BoxSummary {
  std::string group;
  std::string metric;  // final_kkt, obj_cons_evals, grad_jac_evals, total_flops
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Five-number summaries per group over seed-averaged problem results.
std::vector<BoxSummary> summarize_groups(const std::vector<RunRecord>& records);

enum class Format { Csv, Json };
Format format_from_string(std::string_view name);

/// CSV omits wall time and trajectories unless asked for; JSON carries both.
std::string emit_records(const std::vector<RunRecord>& records, Format format, bool csv_wall_time = false);
std::string emit_profile(const std::vector<ProfileCurve>& curves, Format format);
std::string emit_trace(const std::vector<RunRecord>& records, Format format);
std::string emit_summary(const std::vector<BoxSummary>& rows, Format format);

/// Accepts either emitted format.
std::vector<RunRecord> parse_records(std::string_view text);

/// 17 significant digits; nan, inf and -inf spelled out.
std::string format_double(double v);

}  // namespace adasketch::bench
