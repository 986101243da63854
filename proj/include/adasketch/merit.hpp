#pragma once

// Exact augmented Lagrangian merit
//
//   phi(z) = L(x, lambda) + eta1/2 ||c(x)||^2 + eta2/2 ||grad_x L(x, lambda)||^2
//
// and the step-acceptance pieces built on it.

#include <functional>

#include "adasketch/linalg.hpp"
#include "adasketch/problem.hpp"

namespace adasketch {

struct PenaltyState {
  double eta1 = 1.0;
  double eta2 = 0.1;
  double delta = 0.1;
  double nu = 1.5;
  double beta = 0.1;
};

/// Evaluates F, C, GRAD and JAC at z in one oracle call.
double merit_value(const Problem& problem, const Iterate& z, double eta1, double eta2);

/// Same from an existing bundle holding f, grad_f, c and jac.
double merit_value(const EvalBundle& eval, const Iterate& z, double eta1, double eta2);

/// ((I + eta2 H) grad_x L + eta1 G'c,  c + eta2 G grad_x L).
/// The problem overload evaluates C, GRAD, JAC and HESS in one call.
Vec merit_gradient(const Problem& problem, const Iterate& z, double eta1, double eta2);
Vec merit_gradient(const EvalBundle& eval, const Iterate& z, double eta1, double eta2);

/// merit_grad' dz <= -eta2 kkt_norm^2 / 2
bool descent_ok(const Vec& merit_grad, const Vec& dz, double eta2, double kkt_norm);

/// eta1 <- eta1 nu^2, eta2 <- eta2 / nu, delta <- min(delta / nu^4, trial(eta1, eta2)).
using DeltaTrialFn = std::function<double(double eta1, double eta2)>;
PenaltyState update_penalty(PenaltyState p, const DeltaTrialFn& delta_trial_fn);

struct LineSearchResult {
  double alpha = 0.0;
  double phi0 = 0.0;
  double phi_alpha = 0.0;
  int trials = 0;
};

inline constexpr double kDefaultAlphaMin = 1e-12;

/// Halves alpha from 1 until phi(z + alpha dz) <= phi(z) + alpha beta dir_deriv.
/// phi(z) is evaluated through the oracle as well. Throws LineSearchError
/// when alpha drops below alpha_min.
LineSearchResult armijo_backtrack(const Problem& problem, const Iterate& z, const Vec& dz,
                                  const PenaltyState& p, double dir_deriv,
                                  double alpha_min = kDefaultAlphaMin);

/// z + alpha dz on the stacked vector.
Iterate step(const Iterate& z, const Vec& dz, double alpha);

}  // namespace adasketch
