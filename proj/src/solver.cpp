#include "adasketch/solver.hpp"

#include <cmath>

#include "adasketch/errors.hpp"
#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"
#include "adasketch/kkt.hpp"

namespace adasketch {

double theta(const ThetaSchedule& schedule, std::size_t k) {
  switch (schedule.kind) {
    case ThetaKind::Constant: return schedule.value;
    case ThetaKind::Harmonic: return 1.0 / static_cast<double>(k + 1);
    case ThetaKind::Geometric: return std::pow(schedule.value, static_cast<double>(k));
  }
  return schedule.value;
}

void SolverConfig::validate() const {
  if (!(eta1_0 > 0.0) || !(eta2_0 > 0.0)) throw InvalidArgument("eta1_0 and eta2_0 must be positive");
  if (!(delta_0 > 0.0 && delta_0 < 1.0)) throw InvalidArgument("delta_0 must lie in (0, 1)");
  if (!(xi_b > 0.0)) throw InvalidArgument("xi_B must be positive");
  if (!(beta > 0.0 && beta < 0.5)) throw InvalidArgument("beta must lie in (0, 0.5)");
  if (!(nu > 1.0)) throw InvalidArgument("nu must exceed 1");
  if (!(kkt_tol >= 0.0)) throw InvalidArgument("kkt_tol must be nonnegative");
  if (!(alpha_min > 0.0 && alpha_min <= 1.0)) throw InvalidArgument("alpha_min must lie in (0, 1]");
  switch (theta_schedule.kind) {
    case ThetaKind::Constant:
      if (!(theta_schedule.value > 0.0 && theta_schedule.value <= 1.0))
        throw InvalidArgument("constant theta must lie in (0, 1]");
      break;
    case ThetaKind::Geometric:
      if (!(theta_schedule.value > 0.0 && theta_schedule.value < 1.0))
        throw InvalidArgument("geometric rho must lie in (0, 1)");
      break;
    case ThetaKind::Harmonic: break;
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "CONVERGED";
    case SolveStatus::MaxIter: return "MAX_ITER";
    case SolveStatus::InnerBudget: return "INNER_BUDGET";
    case SolveStatus::LineSearchFail: return "LINE_SEARCH_FAIL";
    case SolveStatus::EvalFail: return "EVAL_FAIL";
  }
  return "UNKNOWN";
}

namespace {

struct Stop {
  SolveStatus status;
  std::string message;
};

}  // namespace

SolveReport solve(const Problem& problem, const Iterate& z0, const SolverConfig& cfg) {
  cfg.validate();
  const Index n = problem.n();
  const Index m = problem.m();
  if (z0.n() != n || z0.m() != m) throw DimensionError("solve: starting point does not match the problem");

  const flops::FlopScope scope;
  const EvalCounters counters0 = problem.counters();
  const std::size_t cap = cfg.inner_cap.value_or(default_inner_cap(n + m));

  // Oracle solves done for verification are not part of the method's cost.
  std::uint64_t excluded = 0;
  const auto flops_now = [&] { return scope.count() - excluded; };

  SolveReport report;
  PenaltyState p{cfg.eta1_0, cfg.eta2_0, cfg.delta_0, cfg.nu, cfg.beta};
  InnerState state(n + m, cfg.seed);
  Iterate z = z0;

  auto finish = [&](SolveStatus status, std::string message) {
    report.status = status;
    report.message = std::move(message);
  };

  for (std::size_t k = 0;; ++k) {
    EvalBundle eval;
    try {
      eval = problem.evaluate(z, Request::all());
    } catch (const EvalError& e) {
      finish(SolveStatus::EvalFail, e.what());
      break;
    }
    const Vec grad_l = lagrangian_gradient(eval, z);
    const double kkt = kernels::nrm2(grad_l);
    report.final_kkt = kkt;
    if (kkt <= cfg.kkt_tol) {
      finish(SolveStatus::Converged, "");
      break;
    }
    if (k >= cfg.max_outer) {
      finish(SolveStatus::MaxIter, "outer iteration budget exhausted");
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.kkt_norm = kkt;
    rec.theta = theta(cfg.theta_schedule, k);
    if (cfg.record_iterates) rec.z = z.stacked();

    KktSystem sys;
    try {
      sys = assemble(eval, z, cfg.xi_b, {p.eta1, p.eta2, p.beta});
    } catch (const RankError& e) {
      finish(SolveStatus::EvalFail, e.what());
      break;
    }
    p.delta = std::min(p.delta, sys.delta_trial);
    const auto trial = [&](double eta1, double eta2) {
      return delta_trial(eta1, eta2, p.beta, sys.upsilon, sys.psi);
    };

    state.restart(sys.rhs);
    std::optional<SketchProjector> projector;
    if (cfg.inner == InnerSolver::Sketch) projector.emplace(sys.Gamma, sys.gamma_norm_bound, cfg.sketch);

    std::optional<Stop> stop;
    double dir_deriv = 0.0;
    for (std::size_t round = 1;; ++round) {
      rec.outer_while_rounds = round;
      if (projector) {
        try {
          run_inner_loop(*projector, sys, state, rec.theta, p.delta, cap);
        } catch (const InnerBudgetError& e) {
          state = e.state();
          stop = Stop{SolveStatus::InnerBudget, e.what()};
          break;
        }
      } else if (round == 1) {
        try {
          state.dz = exact_solve(sys.Gamma, sys.rhs);
        } catch (const SingularMatrixError& e) {
          stop = Stop{SolveStatus::EvalFail, e.what()};
          break;
        }
        state.r = residual(sys.Gamma, state.dz, sys.rhs);
      }
      const Vec mgrad = merit_gradient(eval, z, p.eta1, p.eta2);
      dir_deriv = kernels::dot(mgrad, state.dz);
      if (descent_ok(mgrad, state.dz, p.eta2, kkt)) break;
      if (round >= cfg.max_penalty_rounds) {
        stop = Stop{SolveStatus::InnerBudget, "penalty update budget exhausted"};
        break;
      }
      p = update_penalty(p, trial);
    }

    rec.inner_iterations = state.j;
    rec.eta1 = p.eta1;
    rec.eta2 = p.eta2;
    rec.delta = p.delta;
    rec.accuracy_threshold = accuracy_threshold(sys, rec.theta, p.delta);
    rec.residual_norm = kernels::nrm2(state.r);
    rec.dir_deriv = dir_deriv;
    rec.descent_bound = -0.5 * p.eta2 * kkt * kkt;
    if (cfg.record_iterates) rec.dz = state.dz;
    if (cfg.verify && !stop) {
      const flops::FlopScope oracle;
      const Vec exact = exact_solve(sys.Gamma, sys.rhs);
      rec.direction_error = (state.dz - exact).norm() / exact.norm();
      excluded += oracle.count();
    }

    if (stop) {
      rec.flops = flops_now();
      report.iterations.push_back(std::move(rec));
      finish(stop->status, std::move(stop->message));
      break;
    }

    try {
      const LineSearchResult ls = armijo_backtrack(problem, z, state.dz, p, dir_deriv, cfg.alpha_min);
      rec.alpha = ls.alpha;
      rec.merit_before = ls.phi0;
      rec.merit_after = ls.phi_alpha;
      rec.line_search_trials = ls.trials;
    } catch (const LineSearchError& e) {
      rec.flops = flops_now();
      report.iterations.push_back(std::move(rec));
      finish(SolveStatus::LineSearchFail, e.what());
      break;
    } catch (const EvalError& e) {
      rec.flops = flops_now();
      report.iterations.push_back(std::move(rec));
      finish(SolveStatus::EvalFail, e.what());
      break;
    }
    z = step(z, state.dz, rec.alpha);
    rec.flops = flops_now();
    report.iterations.push_back(std::move(rec));
  }

  report.z = std::move(z);
  report.counters = problem.counters() - counters0;
  report.total_flops = flops_now();
  return report;
}

Iterate estimate_solution(const Problem& problem, const Iterate& z0) {
  SolverConfig cfg;
  cfg.inner = InnerSolver::Exact;
  cfg.kkt_tol = 1e-10;
  SolveReport report = solve(problem, z0, cfg);
  if (report.status == SolveStatus::Converged) return report.z;

  // Close to the solution the merit decrease drowns in rounding and the
  // line search gives up; finish with unit Newton steps.
  if (report.status == SolveStatus::LineSearchFail && report.final_kkt <= 1e-6) {
    Iterate z = report.z;
    for (int it = 0; it < 50; ++it) {
      const auto eval = problem.evaluate(z, Request::all());
      if (lagrangian_gradient(eval, z).norm() <= cfg.kkt_tol) return z;
      const KktSystem sys = assemble(eval, z, cfg.xi_b, {cfg.eta1_0, cfg.eta2_0, cfg.beta});
      z = step(z, exact_solve(sys.Gamma, sys.rhs), 1.0);
    }
  }
  throw Error("estimate_solution: reference solve did not converge (" +
              std::string(to_string(report.status)) + ", kkt " + std::to_string(report.final_kkt) + ")");
}

}  // namespace adasketch
