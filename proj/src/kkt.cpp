#include "adasketch/kkt.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "adasketch/errors.hpp"
#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"

namespace adasketch {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kCurvatureTol = 1e-10;

// Rough dense-factorization costs, charged so Eigen calls show up in the
// flop totals alongside the hand-written kernels.
std::uint64_t svd_cost(Index rows, Index cols) {
  const auto small = static_cast<std::uint64_t>(std::min(rows, cols));
  const auto large = static_cast<std::uint64_t>(std::max(rows, cols));
  return 4 * small * small * large + 8 * large * large * large;
}

std::uint64_t eig_cost(Index k) { return 9 * static_cast<std::uint64_t>(k * k * k); }

}  // namespace

double smallest_singular_value(const Mat& g) {
  // More rows than columns cannot have full row rank.
  if (g.rows() == 0 || g.rows() > g.cols()) return 0.0;
  flops::add(svd_cost(g.rows(), g.cols()) / 2);
  Eigen::JacobiSVD<Mat> svd(g);
  return svd.singularValues().minCoeff();
}

Mat null_space_basis(const Mat& g) {
  const Index m = g.rows();
  const Index n = g.cols();
  if (m > n) throw RankError("null_space_basis: more constraints than variables");
  flops::add(svd_cost(m, n));
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullV);
  if (m > 0 && !(svd.singularValues().minCoeff() > kRankTol))
    throw RankError("null_space_basis: Jacobian is rank deficient");
  return svd.matrixV().rightCols(n - m);
}

Mat modify_hessian(const Mat& h, const Mat& g, double xi_b) {
  if (h.rows() != h.cols() || h.rows() != g.cols()) throw DimensionError("modify_hessian: size mismatch");
  if (!(xi_b > 0.0)) throw InvalidArgument("modify_hessian: xi_B must be positive");
  const Mat z = null_space_basis(g);
  if (z.cols() == 0) return h;

  Mat hz;
  kernels::gemm_tn(h, z, hz);  // H symmetric, so H'Z = HZ
  Mat reduced;
  kernels::gemm_tn(z, hz, reduced);
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  flops::add(eig_cost(reduced.rows()) / 3);
  Eigen::SelfAdjointEigenSolver<Mat> reduced_eig(reduced, Eigen::EigenvaluesOnly);
  if (reduced_eig.eigenvalues().minCoeff() > kCurvatureTol) return h;

  flops::add(eig_cost(h.rows()) / 3);
  Eigen::SelfAdjointEigenSolver<Mat> full_eig(h, Eigen::EigenvaluesOnly);
  const double h_norm = full_eig.eigenvalues().cwiseAbs().maxCoeff();
  Mat b = h;
  b.diagonal().array() += xi_b + h_norm;
  return b;
}

double psi_bound(double b_norm, double xi_b, double sigma1) {
  return 20.0 * std::max(b_norm * b_norm, 1.0) / (std::min(xi_b, 1.0) * std::min(sigma1 * sigma1, 1.0));
}

double delta_trial(double eta1, double eta2, double beta, double upsilon, double psi) {
  return (0.5 - beta) * eta2 / ((1.0 + eta1 + eta2) * upsilon * upsilon * psi * psi);
}

Vec lagrangian_gradient(const EvalBundle& eval, const Iterate& z) {
  if (!eval.grad_f || !eval.c || !eval.jac) throw InvalidArgument("lagrangian_gradient: bundle lacks grad_f/c/jac");
  const Index n = z.n();
  const Index m = z.m();
  Vec out(n + m);
  Vec gt_lambda(n);
  kernels::gemv_t(*eval.jac, z.lambda, gt_lambda);
  out.head(n) = *eval.grad_f + gt_lambda;
  out.tail(m) = *eval.c;
  return out;
}

Mat kkt_matrix(const Mat& b, const Mat& g) {
  const Index n = b.rows();
  const Index m = g.rows();
  if (b.cols() != n || g.cols() != n) throw DimensionError("kkt_matrix: size mismatch");
  Mat gamma = Mat::Zero(n + m, n + m);
  gamma.topLeftCorner(n, n) = b;
  gamma.topRightCorner(n, m) = g.transpose();
  gamma.bottomLeftCorner(m, n) = g;
  return gamma;
}

KktSystem assemble(const EvalBundle& eval, const Iterate& z, double xi_b, const DeltaTrialInputs& penalty) {
  if (!eval.hess_lagrangian) throw InvalidArgument("assemble: bundle lacks the Hessian");
  KktSystem sys;
  sys.G = *eval.jac;
  sys.B = modify_hessian(*eval.hess_lagrangian, sys.G, xi_b);
  sys.Gamma = kkt_matrix(sys.B, sys.G);
  sys.rhs = lagrangian_gradient(eval, z);

  sys.gamma_norm_bound = kernels::frobenius(sys.Gamma);
  sys.sigma1 = smallest_singular_value(sys.G);
  if (!(sys.sigma1 > kRankTol)) throw RankError("assemble: Jacobian is rank deficient");
  sys.upsilon = std::max({kernels::frobenius(sys.G), kernels::frobenius(*eval.hess_lagrangian), 1.0});
  sys.psi = psi_bound(kernels::frobenius(sys.B), xi_b, sys.sigma1);
  sys.delta_trial = delta_trial(penalty.eta1, penalty.eta2, penalty.beta, sys.upsilon, sys.psi);
  return sys;
}

KktSystem assemble(const Problem& problem, const Iterate& z, double xi_b, const DeltaTrialInputs& penalty) {
  return assemble(problem.evaluate(z, Request::all()), z, xi_b, penalty);
}

Vec residual(const Mat& gamma, const Vec& dz, const Vec& rhs) {
  Vec r(rhs.size());
  kernels::gemv(gamma, dz, r);
  r += rhs;
  return r;
}

Vec exact_solve(const Mat& gamma, const Vec& rhs) {
  const kernels::LuFactorization lu(gamma);
  return -lu.solve(rhs);
}

}  // namespace adasketch
