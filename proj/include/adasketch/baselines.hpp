#pragma once

// Deterministic comparison methods:
//   * Byrd-Curtis-Nocedal inexact SQP with an l1 merit and GMRES inner solves,
//   * the same with an adaptive accuracy gate and penalty,
//   * a Newton-GMRES augmented Lagrangian method.
// All three report through SolveReport so the benchmark can treat every
// method alike.

#include <vector>

#include "adasketch/errors.hpp"
#include "adasketch/linalg.hpp"
#include "adasketch/problem.hpp"
#include "adasketch/solver.hpp"

namespace adasketch {

/// Full-memory GMRES on A x = b from x0 = 0, one Arnoldi step at a time
/// (modified Gram-Schmidt, Givens rotations).
class GmresIteration {
 public:
  GmresIteration(const Mat& a, const Vec& b);
  GmresIteration(Mat&&, const Vec&) = delete;  // keeps a reference to `a`

  /// Adds one Krylov vector. Returns false once the space is exhausted
  /// (dimension reached or happy breakdown); the iterate is then exact up
  /// to rounding.
  bool step();

  Vec solution() const;
  /// |b - A x| as tracked by the rotations.
  double residual_estimate() const { return residual_; }
  Index iterations() const { return k_; }
  bool exhausted() const { return exhausted_; }

 private:
  const Mat& a_;
  Index dim_;
  Mat v_;                   // Krylov basis, one column per vector
  Mat r_;                   // rotated Hessenberg, upper triangular
  std::vector<double> cs_;
  std::vector<double> sn_;
  Vec g_;
  Index k_ = 0;
  double residual_ = 0.0;
  bool exhausted_ = false;
};

class GmresError : public Error {
 public:
  GmresError(const std::string& what, Vec best) : Error(what), best_(std::move(best)) {}
  const Vec& best() const noexcept { return best_; }

 private:
  Vec best_;
};

/// x with ||A x - b|| <= rel_tol ||b||. Throws GmresError carrying the best
/// iterate when max_iter steps do not suffice.
Vec gmres(const Mat& a, const Vec& b, double rel_tol, Index max_iter);

/// f(x) + pi ||c(x)||_1; one objective / constraint evaluation.
double l1_merit(const Problem& problem, const Vec& x, double pi);

struct BaselineLimits {
  double kkt_tol = 1e-4;
  std::size_t max_outer = 10000;
  double alpha_min = kDefaultAlphaMin;
  bool record_iterates = false;
};

struct ByrdConfig : BaselineLimits {
  double xi_b = 0.1;
  double pi0 = 1.0;
  double kappa1 = 0.1;   // residual test: ||r|| <= kappa1 ||grad L||
  double epsilon = 0.1;  // constraint test and sigma = tau (1 - epsilon)
  double tau = 0.1;
  double eta = 1e-8;     // Armijo
};

struct ByrdAdaptiveConfig : BaselineLimits {
  double xi_b = 0.1;
  double pi0 = 1.0;
  double kappa0 = 0.1;   // gate ||r||_1 <= kappa ||grad L||_1
  double nu = 1.5;
  double sigma = 0.09;   // model reduction weight, tau (1 - epsilon) with tau = epsilon = 0.1
  double eta = 1e-8;
  std::size_t max_rounds = 200;
};

struct AuglagConfig : BaselineLimits {
  double mu0 = 1.0;
  double tau0 = 0.1;     // subproblem tolerance
  double kappa = 1e-4;   // GMRES forcing term
  double nu_mu = 1.5;
  double nu_tau = 0.5;
  double eta = 0.1;      // Armijo
  double xi_b = 0.1;     // Hessian shift when L_mu is not locally convex
};

/// Predicted l1-model decrease terms for a primal step dx at the current
/// point. `holds(pi)` is the model reduction condition and `trial()` the
/// smallest pi for which it holds (infinity when no pi works).
struct ModelReduction {
  double grad_dot = 0.0;  // grad f' dx
  double curvature = 0.0; // dx' B dx / 2
  double c_l1 = 0.0;      // ||c||_1
  double lin_l1 = 0.0;    // ||c + G dx||_1
  double sigma = 0.0;

  double decrease(double pi) const { return -grad_dot - curvature + pi * (c_l1 - lin_l1); }
  double required(double pi) const {
    return std::max(curvature, 0.0) + sigma * pi * std::max(c_l1, lin_l1 - c_l1);
  }
  bool holds(double pi) const { return decrease(pi) >= required(pi); }
  double trial() const;
};

ModelReduction model_reduction(const Vec& grad_f, const Mat& b, const Mat& g, const Vec& c,
                               const Vec& dx, double sigma);

SolveReport solve_byrd(const Problem& problem, const Iterate& z0, const ByrdConfig& cfg);
SolveReport solve_byrd_adaptive(const Problem& problem, const Iterate& z0, const ByrdAdaptiveConfig& cfg);
SolveReport solve_auglag(const Problem& problem, const Iterate& z0, const AuglagConfig& cfg);

}  // namespace adasketch
