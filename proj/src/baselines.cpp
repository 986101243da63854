#include "adasketch/baselines.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"
#include "adasketch/kkt.hpp"
#include "adasketch/merit.hpp"

namespace adasketch {

double l1_merit(const Problem& problem, const Vec& x, double pi) {
  const auto eval = problem.evaluate(Iterate{x, Vec::Zero(problem.m())}, Field::F | Field::C);
  return *eval.f + pi * eval.c->lpNorm<1>();
}

double ModelReduction::trial() const {
  const double slope = (c_l1 - lin_l1) - sigma * std::max(c_l1, lin_l1 - c_l1);
  if (!(slope > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max((grad_dot + curvature + std::max(curvature, 0.0)) / slope, 0.0);
}

ModelReduction model_reduction(const Vec& grad_f, const Mat& b, const Mat& g, const Vec& c,
                               const Vec& dx, double sigma) {
  ModelReduction mr;
  mr.sigma = sigma;
  mr.grad_dot = kernels::dot(grad_f, dx);
  Vec bdx(dx.size());
  kernels::gemv(b, dx, bdx);
  mr.curvature = 0.5 * kernels::dot(dx, bdx);
  Vec lin(c.size());
  kernels::gemv(g, dx, lin);
  lin += c;
  mr.c_l1 = c.lpNorm<1>();
  mr.lin_l1 = lin.lpNorm<1>();
  return mr;
}

namespace {

// Shared bookkeeping for the three methods.
struct Run {
  const Problem& problem;
  const BaselineLimits& limits;
  flops::FlopScope scope;
  EvalCounters counters0;
  SolveReport report;

  Run(const Problem& p, const BaselineLimits& l) : problem(p), limits(l), counters0(p.counters()) {}

  void push(IterationRecord rec) {
    rec.flops = scope.count();
    report.iterations.push_back(std::move(rec));
  }
  void finish(SolveStatus status, std::string message) {
    report.status = status;
    report.message = std::move(message);
  }
  SolveReport done(Iterate z) {
    report.z = std::move(z);
    report.counters = problem.counters() - counters0;
    report.total_flops = scope.count();
    return std::move(report);
  }
};

void check_limits(const Problem& problem, const Iterate& z0, const BaselineLimits& limits, double eta) {
  if (z0.n() != problem.n() || z0.m() != problem.m()) throw DimensionError("baseline: starting point does not match the problem");
  if (!(limits.kkt_tol >= 0.0)) throw InvalidArgument("kkt_tol must be nonnegative");
  if (!(limits.alpha_min > 0.0 && limits.alpha_min <= 1.0)) throw InvalidArgument("alpha_min must lie in (0, 1]");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("Armijo parameter must lie in (0, 1)");
}

// Halves alpha from 1 until phi(alpha) <= phi0 + eta alpha slope.
template <class Phi>
LineSearchResult backtrack(Phi&& phi, double phi0, double slope, double eta, double alpha_min) {
  LineSearchResult out;
  out.phi0 = phi0;
  for (double alpha = 1.0; alpha >= alpha_min; alpha *= 0.5) {
    ++out.trials;
    const double value = phi(alpha);
    if (value <= phi0 + eta * alpha * slope) {
      out.alpha = alpha;
      out.phi_alpha = value;
      return out;
    }
  }
  throw LineSearchError("backtracking: no acceptable step above alpha_min");
}

// Current GMRES iterate of Gamma dz = -grad_l and its residual.
struct KrylovState {
  GmresIteration gmres;
  Vec dz;
  Vec r;

  KrylovState(const Mat& gamma, const Vec& grad_l)
      : gmres(gamma, Vec(-grad_l)), dz(Vec::Zero(grad_l.size())), r(grad_l) {}

  bool advance(const Mat& gamma, const Vec& grad_l) {
    if (!gmres.step()) return false;
    dz = gmres.solution();
    r = residual(gamma, dz, grad_l);
    return true;
  }
};

// One SQP iteration's worth of oracle data.
struct SqpPoint {
  EvalBundle eval;
  Vec grad_l;
  double kkt = 0.0;
};

// Evaluates, checks convergence and the budget. Returns false when the run
// should stop (status already set).
bool sqp_point(Run& run, const Iterate& z, std::size_t k, SqpPoint& out) {
  try {
    out.eval = run.problem.evaluate(z, Request::all());
  } catch (const EvalError& e) {
    run.finish(SolveStatus::EvalFail, e.what());
    return false;
  }
  out.grad_l = lagrangian_gradient(out.eval, z);
  out.kkt = kernels::nrm2(out.grad_l);
  run.report.final_kkt = out.kkt;
  if (out.kkt <= run.limits.kkt_tol) {
    run.finish(SolveStatus::Converged, "");
    return false;
  }
  if (k >= run.limits.max_outer) {
    run.finish(SolveStatus::MaxIter, "outer iteration budget exhausted");
    return false;
  }
  return true;
}

// l1-merit Armijo along dz; returns false (status set) on failure.
bool l1_line_search(Run& run, const Iterate& z, const Vec& dz, const ModelReduction& mr, double pi,
                    double eta, IterationRecord& rec) {
  const Index n = z.n();
  const double linear_decrease = -mr.grad_dot + pi * (mr.c_l1 - mr.lin_l1);
  rec.dir_deriv = -linear_decrease;
  try {
    const double phi0 = l1_merit(run.problem, z.x, pi);
    const auto phi = [&](double alpha) { return l1_merit(run.problem, z.x + alpha * dz.head(n), pi); };
    const LineSearchResult ls = backtrack(phi, phi0, -linear_decrease, eta, run.limits.alpha_min);
    rec.alpha = ls.alpha;
    rec.merit_before = ls.phi0;
    rec.merit_after = ls.phi_alpha;
    rec.line_search_trials = ls.trials;
    return true;
  } catch (const LineSearchError& e) {
    run.finish(SolveStatus::LineSearchFail, e.what());
  } catch (const EvalError& e) {
    run.finish(SolveStatus::EvalFail, e.what());
  }
  return false;
}

}  // namespace

SolveReport solve_byrd(const Problem& problem, const Iterate& z0, const ByrdConfig& cfg) {
  check_limits(problem, z0, cfg, cfg.eta);
  if (!(cfg.pi0 > 0.0)) throw InvalidArgument("pi0 must be positive");
  const Index n = problem.n();
  const Index m = problem.m();
  const double sigma = cfg.tau * (1.0 - cfg.epsilon);

  Run run(problem, cfg);
  Iterate z = z0;
  double pi = cfg.pi0;
  for (std::size_t k = 0;; ++k) {
    SqpPoint pt;
    if (!sqp_point(run, z, k, pt)) break;
    const Mat& g = *pt.eval.jac;
    const Vec& c = *pt.eval.c;
    Mat b;
    try {
      b = modify_hessian(*pt.eval.hess_lagrangian, g, cfg.xi_b);
    } catch (const RankError& e) {
      run.finish(SolveStatus::EvalFail, e.what());
      break;
    }
    const Mat gamma = kkt_matrix(b, g);
    const double c_norm = kernels::nrm2(c);

    KrylovState ks(gamma, pt.grad_l);
    const auto test1 = [&] { return kernels::nrm2(ks.r) <= cfg.kappa1 * pt.kkt; };
    const auto test2 = [&] {
      const double rc = kernels::nrm2(ks.r.tail(m));  // = ||c + G dx||
      return rc <= cfg.epsilon * std::min(c_norm, rc + cfg.tau * c_norm);
    };
    while (!test1() && !test2()) {
      if (!ks.advance(gamma, pt.grad_l)) break;  // Krylov space exhausted: dz is exact
    }

    const ModelReduction mr = model_reduction(*pt.eval.grad_f, b, g, c, ks.dz.head(n), sigma);
    if (test2() && !mr.holds(pi)) {
      const double trial = mr.trial();
      if (std::isfinite(trial)) pi = std::max(pi, trial + 1e-4);
    }

    IterationRecord rec;
    rec.k = k;
    rec.kkt_norm = pt.kkt;
    rec.inner_iterations = static_cast<std::size_t>(ks.gmres.iterations());
    rec.outer_while_rounds = 1;
    rec.penalty = pi;
    rec.accuracy_threshold = cfg.kappa1 * pt.kkt;
    rec.residual_norm = kernels::nrm2(ks.r);
    if (cfg.record_iterates) rec.z = z.stacked();
    const bool ok = l1_line_search(run, z, ks.dz, mr, pi, cfg.eta, rec);
    if (ok) z = step(z, ks.dz, rec.alpha);
    run.push(std::move(rec));
    if (!ok) break;
  }
  return run.done(std::move(z));
}

SolveReport solve_byrd_adaptive(const Problem& problem, const Iterate& z0, const ByrdAdaptiveConfig& cfg) {
  check_limits(problem, z0, cfg, cfg.eta);
  if (!(cfg.pi0 > 0.0) || !(cfg.kappa0 > 0.0)) throw InvalidArgument("pi0 and kappa0 must be positive");
  if (!(cfg.nu > 1.0)) throw InvalidArgument("nu must exceed 1");
  const Index n = problem.n();

  Run run(problem, cfg);
  Iterate z = z0;
  double pi = cfg.pi0;
  double kappa = cfg.kappa0;
  for (std::size_t k = 0;; ++k) {
    SqpPoint pt;
    if (!sqp_point(run, z, k, pt)) break;
    const Mat& g = *pt.eval.jac;
    Mat b;
    try {
      b = modify_hessian(*pt.eval.hess_lagrangian, g, cfg.xi_b);
    } catch (const RankError& e) {
      run.finish(SolveStatus::EvalFail, e.what());
      break;
    }
    const Mat gamma = kkt_matrix(b, g);
    const double grad_l1 = pt.grad_l.lpNorm<1>();

    KrylovState ks(gamma, pt.grad_l);
    ModelReduction mr;
    std::size_t rounds = 0;
    bool gave_up = false;
    for (;;) {
      ++rounds;
      while (ks.r.lpNorm<1>() > kappa * grad_l1) {
        if (!ks.advance(gamma, pt.grad_l)) break;
      }
      mr = model_reduction(*pt.eval.grad_f, b, g, *pt.eval.c, ks.dz.head(n), cfg.sigma);
      if (mr.holds(pi)) break;
      if (rounds >= cfg.max_rounds) {
        gave_up = true;
        break;
      }
      pi *= cfg.nu;
      kappa /= cfg.nu * cfg.nu;
    }

    IterationRecord rec;
    rec.k = k;
    rec.kkt_norm = pt.kkt;
    rec.inner_iterations = static_cast<std::size_t>(ks.gmres.iterations());
    rec.outer_while_rounds = rounds;
    rec.penalty = pi;
    rec.accuracy_threshold = kappa * grad_l1;
    rec.residual_norm = kernels::nrm2(ks.r);
    if (cfg.record_iterates) rec.z = z.stacked();
    if (gave_up) {
      run.push(std::move(rec));
      run.finish(SolveStatus::InnerBudget, "model reduction condition not met within the round budget");
      break;
    }
    const bool ok = l1_line_search(run, z, ks.dz, mr, pi, cfg.eta, rec);
    if (ok) z = step(z, ks.dz, rec.alpha);
    run.push(std::move(rec));
    if (!ok) break;
  }
  return run.done(std::move(z));
}

namespace {

// H when it is positive definite, otherwise H shifted so that its smallest
// eigenvalue becomes xi.
Mat convexify(const Mat& h, double xi) {
  flops::add(3 * static_cast<std::uint64_t>(h.rows() * h.rows() * h.rows()));
  Eigen::SelfAdjointEigenSolver<Mat> eig(h, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo > 1e-10) return h;
  Mat b = h;
  b.diagonal().array() += xi - lo;
  return b;
}

double auglag_value(const Problem& problem, const Vec& x, const Vec& lambda, double mu) {
  const auto eval = problem.evaluate(Iterate{x, lambda}, Field::F | Field::C);
  const Vec& c = *eval.c;
  return *eval.f + kernels::dot(lambda, c) + 0.5 * mu * kernels::dot(c, c);
}

}  // namespace

SolveReport solve_auglag(const Problem& problem, const Iterate& z0, const AuglagConfig& cfg) {
  check_limits(problem, z0, cfg, cfg.eta);
  if (!(cfg.mu0 > 0.0) || !(cfg.tau0 > 0.0) || !(cfg.kappa > 0.0)) throw InvalidArgument("mu0, tau0 and kappa must be positive");
  if (!(cfg.nu_mu > 1.0) || !(cfg.nu_tau > 0.0 && cfg.nu_tau < 1.0)) throw InvalidArgument("bad penalty schedule");
  const Index n = problem.n();

  Run run(problem, cfg);
  Vec x = z0.x;
  Vec lambda = z0.lambda;
  double mu = cfg.mu0;
  double tau = cfg.tau0;
  std::size_t steps = 0;

  // grad f, c and G do not depend on lambda, so the bundle at the last
  // subproblem iterate serves the next outer iteration too.
  EvalBundle eval;
  bool have_eval = false;
  const auto first_order = [&](const Vec& at) {
    eval = problem.evaluate(Iterate{at, lambda}, Field::C | Field::Grad | Field::Jac);
    have_eval = true;
  };

  bool stop = false;
  for (std::size_t k = 0; !stop; ++k) {
    try {
      if (!have_eval) first_order(x);
    } catch (const EvalError& e) {
      run.finish(SolveStatus::EvalFail, e.what());
      break;
    }
    const double kkt = kernels::nrm2(lagrangian_gradient(eval, Iterate{x, lambda}));
    run.report.final_kkt = kkt;
    if (kkt <= cfg.kkt_tol) {
      run.finish(SolveStatus::Converged, "");
      break;
    }

    Vec xs = x;
    for (;;) {
      const Mat& g = *eval.jac;
      const Vec& c = *eval.c;
      const Vec shifted = lambda + mu * c;
      Vec grad_mu(n);
      kernels::gemv_t(g, shifted, grad_mu);
      grad_mu += *eval.grad_f;
      if (kernels::nrm2(grad_mu) <= tau) break;
      if (steps >= cfg.max_outer) {
        run.finish(SolveStatus::MaxIter, "Newton step budget exhausted");
        stop = true;
        break;
      }

      IterationRecord rec;
      rec.k = steps;
      rec.kkt_norm = kernels::nrm2(lagrangian_gradient(eval, Iterate{xs, lambda}));
      rec.outer_while_rounds = k + 1;
      rec.penalty = mu;
      rec.accuracy_threshold = tau;
      if (cfg.record_iterates) rec.z = Iterate{xs, lambda}.stacked();

      Vec dx;
      try {
        const auto hess = problem.evaluate(Iterate{xs, shifted}, Field::Hess);
        Mat gtg;
        kernels::gemm_tn(g, g, gtg);
        const Mat b = convexify(*hess.hess_lagrangian + mu * gtg, cfg.xi_b);
        GmresIteration it(b, Vec(-grad_mu));
        const double target = cfg.kappa * kernels::nrm2(grad_mu);
        while (it.residual_estimate() > target && it.step()) {
        }
        dx = it.solution();
        rec.inner_iterations = static_cast<std::size_t>(it.iterations());
        rec.residual_norm = it.residual_estimate();
      } catch (const EvalError& e) {
        run.push(std::move(rec));
        run.finish(SolveStatus::EvalFail, e.what());
        stop = true;
        break;
      }

      const double slope = kernels::dot(grad_mu, dx);
      rec.dir_deriv = slope;
      try {
        const double phi0 = auglag_value(problem, xs, lambda, mu);
        const auto phi = [&](double alpha) { return auglag_value(problem, xs + alpha * dx, lambda, mu); };
        const LineSearchResult ls = backtrack(phi, phi0, slope, cfg.eta, cfg.alpha_min);
        rec.alpha = ls.alpha;
        rec.merit_before = ls.phi0;
        rec.merit_after = ls.phi_alpha;
        rec.line_search_trials = ls.trials;
        xs += ls.alpha * dx;
        first_order(xs);
      } catch (const LineSearchError& e) {
        run.push(std::move(rec));
        run.finish(SolveStatus::LineSearchFail, e.what());
        stop = true;
        break;
      } catch (const EvalError& e) {
        run.push(std::move(rec));
        run.finish(SolveStatus::EvalFail, e.what());
        stop = true;
        break;
      }
      ++steps;
      run.push(std::move(rec));
    }
    if (stop) {
      x = xs;
      break;
    }
    x = xs;
    lambda += mu * *eval.c;
    mu *= cfg.nu_mu;
    tau *= cfg.nu_tau;
  }
  return run.done(Iterate{x, lambda});
}

}  // namespace adasketch
