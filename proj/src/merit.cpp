#include "adasketch/merit.hpp"

#include <cmath>

#include "adasketch/errors.hpp"
#include "adasketch/kernels.hpp"
#include "adasketch/kkt.hpp"

namespace adasketch {

double merit_value(const Problem& problem, const Iterate& z, double eta1, double eta2) {
  const auto eval = problem.evaluate(z, Field::F | Field::C | Field::Grad | Field::Jac);
  return merit_value(eval, z, eta1, eta2);
}

double merit_value(const EvalBundle& eval, const Iterate& z, double eta1, double eta2) {
  if (!eval.f) throw InvalidArgument("merit_value: bundle lacks f");
  const Vec grad_l = lagrangian_gradient(eval, z);
  const auto gx = grad_l.head(z.n());
  const Vec& c = *eval.c;
  const double cc = kernels::dot(c, c);
  return *eval.f + kernels::dot(z.lambda, c) + 0.5 * eta1 * cc + 0.5 * eta2 * kernels::dot(gx, gx);
}

Vec merit_gradient(const Problem& problem, const Iterate& z, double eta1, double eta2) {
  const auto eval = problem.evaluate(z, Field::C | Field::Grad | Field::Jac | Field::Hess);
  return merit_gradient(eval, z, eta1, eta2);
}

Vec merit_gradient(const EvalBundle& eval, const Iterate& z, double eta1, double eta2) {
  if (!eval.hess_lagrangian) throw InvalidArgument("merit_gradient: bundle lacks the Hessian");
  const Index n = z.n();
  const Index m = z.m();
  const Vec grad_l = lagrangian_gradient(eval, z);
  const Vec gx = grad_l.head(n);
  const Vec& c = *eval.c;
  const Mat& g = *eval.jac;

  Vec out(n + m);
  Vec h_gx(n);
  kernels::gemv(*eval.hess_lagrangian, gx, h_gx);
  Vec gt_c(n);
  kernels::gemv_t(g, c, gt_c);
  out.head(n) = gx + eta2 * h_gx + eta1 * gt_c;
  Vec g_gx(m);
  kernels::gemv(g, gx, g_gx);
  out.tail(m) = c + eta2 * g_gx;
  return out;
}

bool descent_ok(const Vec& merit_grad, const Vec& dz, double eta2, double kkt_norm) {
  if (merit_grad.size() != dz.size()) throw DimensionError("descent_ok: size mismatch");
  return kernels::dot(merit_grad, dz) <= -0.5 * eta2 * kkt_norm * kkt_norm;
}

PenaltyState update_penalty(PenaltyState p, const DeltaTrialFn& delta_trial_fn) {
  p.eta1 *= p.nu * p.nu;
  p.eta2 /= p.nu;
  const double nu4 = p.nu * p.nu * p.nu * p.nu;
  p.delta = std::min(p.delta / nu4, delta_trial_fn(p.eta1, p.eta2));
  return p;
}

Iterate step(const Iterate& z, const Vec& dz, double alpha) {
  const Index n = z.n();
  if (dz.size() != n + z.m()) throw DimensionError("step: size mismatch");
  return {z.x + alpha * dz.head(n), z.lambda + alpha * dz.tail(z.m())};
}

LineSearchResult armijo_backtrack(const Problem& problem, const Iterate& z, const Vec& dz,
                                  const PenaltyState& p, double dir_deriv, double alpha_min) {
  LineSearchResult out;
  out.phi0 = merit_value(problem, z, p.eta1, p.eta2);
  for (double alpha = 1.0; alpha >= alpha_min; alpha *= 0.5) {
    ++out.trials;
    const double phi = merit_value(problem, step(z, dz, alpha), p.eta1, p.eta2);
    if (phi <= out.phi0 + alpha * p.beta * dir_deriv) {
      out.alpha = alpha;
      out.phi_alpha = phi;
      return out;
    }
  }
  throw LineSearchError("armijo_backtrack: no acceptable step above alpha_min");
}

}  // namespace adasketch
