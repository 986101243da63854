#pragma once

// Adaptive sketched Newton SQP for equality-constrained problems.
//
// Each outer iteration solves the Newton KKT system inexactly by
// sketch-and-project, tightening the inner accuracy together with the merit
// penalties until the direction is a descent direction of the exact
// augmented Lagrangian, then backtracks on that merit.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adasketch/linalg.hpp"
#include "adasketch/merit.hpp"
#include "adasketch/problem.hpp"
#include "adasketch/sketch.hpp"

namespace adasketch {

enum class ThetaKind { Constant, Harmonic, Geometric };

struct ThetaSchedule {
  ThetaKind kind = ThetaKind::Constant;
  double value = 1.0;  // theta for Constant, rho for Geometric

  static ThetaSchedule constant(double theta) { return {ThetaKind::Constant, theta}; }
  static ThetaSchedule harmonic() { return {ThetaKind::Harmonic, 1.0}; }
  static ThetaSchedule geometric(double rho) { return {ThetaKind::Geometric, rho}; }
};

double theta(const ThetaSchedule& schedule, std::size_t k);

enum class InnerSolver {
  Sketch,  // sketch-and-project to the adaptive accuracy
  Exact,   // dense LU
};

struct SolverConfig {
  double eta1_0 = 1.0;
  double eta2_0 = 0.1;
  double delta_0 = 0.1;
  double xi_b = 0.1;
  double beta = 0.1;
  double nu = 1.5;
  ThetaSchedule theta_schedule;
  SketchKind sketch = SketchKind::GaussianVector;
  InnerSolver inner = InnerSolver::Sketch;
  double kkt_tol = 1e-4;
  std::size_t max_outer = 10000;
  std::optional<std::size_t> inner_cap;  // default_inner_cap(n + m)
  std::size_t max_penalty_rounds = 200;
  double alpha_min = kDefaultAlphaMin;
  std::uint64_t seed = 0;
  bool record_iterates = false;
  /// Solve each system exactly as well and record the relative error of
  /// the accepted direction. Costs an LU per iteration, excluded from flops.
  bool verify = false;

  /// Throws InvalidArgument when a parameter is out of range.
  void validate() const;
};

enum class SolveStatus { Converged, MaxIter, InnerBudget, LineSearchFail, EvalFail };

std::string_view to_string(SolveStatus status);

struct IterationRecord {
  std::size_t k = 0;
  double kkt_norm = 0.0;  // at z_k
  double theta = 0.0;
  double alpha = 0.0;
  std::size_t inner_iterations = 0;
  std::size_t outer_while_rounds = 0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double delta = 0.0;
  double penalty = 0.0;             // baselines: pi, or mu for the augmented Lagrangian
  double accuracy_threshold = 0.0;  // augmented Lagrangian: subproblem tolerance
  double residual_norm = 0.0;
  double dir_deriv = 0.0;
  double descent_bound = 0.0;  // -eta2 kkt^2 / 2
  double merit_before = 0.0;
  double merit_after = 0.0;
  int line_search_trials = 0;
  double direction_error = 0.0;  // ||dz - exact|| / ||exact||, verify only
  std::uint64_t flops = 0;       // cumulative at the end of the iteration
  std::optional<Vec> z;          // z_k, record_iterates only
  std::optional<Vec> dz;         // accepted direction, record_iterates only
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  std::string message;
  std::vector<IterationRecord> iterations;
  Iterate z;
  double final_kkt = 0.0;
  EvalCounters counters;
  std::uint64_t total_flops = 0;
};

/// Never throws for failures inside the iteration; those end up in
/// `status`. Throws DimensionError if z0 does not match the problem and
/// InvalidArgument for a bad configuration.
SolveReport solve(const Problem& problem, const Iterate& z0, const SolverConfig& cfg);

/// High-accuracy reference point: exact inner solves, kkt_tol = 1e-10.
/// Throws Error when the run does not converge.
Iterate estimate_solution(const Problem& problem, const Iterate& z0);

}  // namespace adasketch
