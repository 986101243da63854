#include "adasketch/problem.hpp"

#include <cmath>

#include "adasketch/errors.hpp"

namespace adasketch {

Vec Iterate::stacked() const {
  Vec z(x.size() + lambda.size());
  z << x, lambda;
  return z;
}

Iterate Iterate::from_stacked(const Vec& z, Index n) {
  if (n < 0 || n > z.size()) throw DimensionError("from_stacked: bad split");
  return {z.head(n), z.tail(z.size() - n)};
}

Iterate Iterate::constant(Index n, Index m, double value) {
  return {Vec::Constant(n, value), Vec::Constant(m, value)};
}

Problem::Problem(std::string name, Index n, Index m) : name_(std::move(name)), n_(n), m_(m) {
  if (n < 1 || m < 1 || m > n)
    throw InvalidArgument("problem '" + name_ + "' needs 1 <= m <= n (got n=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ")");
}

namespace {

void require_finite(const Vec& v, const char* field) {
  if (!v.allFinite()) throw EvalError(field);
}

void require_finite(const Mat& v, const char* field) {
  if (!v.allFinite()) throw EvalError(field);
}

}  // namespace

EvalBundle Problem::evaluate(const Iterate& z, Request request) const {
  if (z.n() != n_ || z.m() != m_)
    throw DimensionError("iterate (" + std::to_string(z.n()) + ", " + std::to_string(z.m()) +
                         ") does not match problem '" + name_ + "' (" + std::to_string(n_) + ", " +
                         std::to_string(m_) + ")");
  if (request.empty()) throw DimensionError("empty evaluation request");

  EvalBundle out;
  if (request.has(Field::F)) {
    out.f = objective(z.x);
    if (!std::isfinite(*out.f)) throw EvalError("f");
  }
  if (request.has(Field::C)) {
    out.c = constraints(z.x);
    require_finite(*out.c, "c");
  }
  if (request.has(Field::Grad)) {
    out.grad_f = gradient(z.x);
    require_finite(*out.grad_f, "grad_f");
  }
  if (request.has(Field::Jac)) {
    out.jac = jacobian(z.x);
    require_finite(*out.jac, "jac");
  }
  if (request.has(Field::Hess)) {
    out.hess_lagrangian = hessian_lagrangian(z.x, z.lambda);
    require_finite(*out.hess_lagrangian, "hess_lagrangian");
  }

  if (request.has(Field::F) || request.has(Field::C)) obj_cons_.fetch_add(1, std::memory_order_relaxed);
  if (request.has(Field::Grad) || request.has(Field::Jac)) grad_jac_.fetch_add(1, std::memory_order_relaxed);
  if (request.has(Field::Hess)) hess_.fetch_add(1, std::memory_order_relaxed);
  return out;
}

EvalCounters Problem::counters() const {
  return {obj_cons_.load(std::memory_order_relaxed), grad_jac_.load(std::memory_order_relaxed),
          hess_.load(std::memory_order_relaxed)};
}

void Problem::reset_counters() const {
  obj_cons_.store(0);
  grad_jac_.store(0);
  hess_.store(0);
}

}  // namespace adasketch
