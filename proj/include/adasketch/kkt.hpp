#pragma once

// The Lagrangian Newton system
//
//   [ B  G' ] [dx]     [grad_x L]
//   [ G  0  ] [dl] = - [   c    ]
//
// and the scalars that bound how inexactly it may be solved.

#include "adasketch/linalg.hpp"
#include "adasketch/problem.hpp"

namespace adasketch {

struct KktSystem {
  Mat B;      // modified Lagrangian Hessian, n x n
  Mat G;      // constraint Jacobian, m x n
  Mat Gamma;  // (n+m) x (n+m)
  Vec rhs;    // (grad_x L, c)
  double gamma_norm_bound = 0.0;  // ||Gamma||_F >= ||Gamma||_2
  double sigma1 = 0.0;            // smallest singular value of G
  double psi = 0.0;
  double upsilon = 0.0;
  double delta_trial = 0.0;

  Index n() const { return B.rows(); }
  Index m() const { return G.rows(); }
  double kkt_norm() const { return rhs.norm(); }
};

/// Penalty inputs needed for delta_trial; supplied by the caller.
struct DeltaTrialInputs {
  double eta1;
  double eta2;
  double beta;
};

/// Orthonormal basis of null(G), n x (n - m). Throws RankError when the
/// smallest singular value of G is at most 1e-10.
Mat null_space_basis(const Mat& g);

double smallest_singular_value(const Mat& g);

/// B = H when Z'HZ has smallest eigenvalue > 1e-10 (or n == m), otherwise
/// B = H + (xi_B + ||H||_2) I.
Mat modify_hessian(const Mat& h, const Mat& g, double xi_b);

/// 20 (||B||^2 v 1) / ((xi_B ^ 1)(sigma1^2 ^ 1)) with the Frobenius norm of B.
double psi_bound(double b_norm, double xi_b, double sigma1);

/// (0.5 - beta) eta2 / ((1 + eta1 + eta2) Upsilon^2 Psi^2)
double delta_trial(double eta1, double eta2, double beta, double upsilon, double psi);

/// (grad f + G' lambda, c). Needs grad_f, c and jac in the bundle.
Vec lagrangian_gradient(const EvalBundle& eval, const Iterate& z);

/// [[B, G'], [G, 0]]
Mat kkt_matrix(const Mat& b, const Mat& g);

/// Builds the system from an evaluation holding grad_f, c, jac and hess.
KktSystem assemble(const EvalBundle& eval, const Iterate& z, double xi_b, const DeltaTrialInputs& penalty);

/// Evaluates f, grad f, c, G, H at z (one call) and assembles.
KktSystem assemble(const Problem& problem, const Iterate& z, double xi_b, const DeltaTrialInputs& penalty);

/// Gamma dz + rhs
Vec residual(const Mat& gamma, const Vec& dz, const Vec& rhs);

/// Solves Gamma dz = -rhs by LU with partial pivoting. Throws
/// SingularMatrixError when a pivot vanishes.
Vec exact_solve(const Mat& gamma, const Vec& rhs);

}  // namespace adasketch
