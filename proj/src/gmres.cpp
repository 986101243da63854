#include <cmath>
#include <limits>

#include "adasketch/baselines.hpp"
#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"

namespace adasketch {

namespace {
constexpr double kBreakdownTol = 1e-14;
}

GmresIteration::GmresIteration(const Mat& a, const Vec& b) : a_(a), dim_(a.rows()) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw DimensionError("gmres: size mismatch");
  v_.resize(dim_, dim_ + 1);
  r_ = Mat::Zero(dim_ + 1, dim_);
  g_ = Vec::Zero(dim_ + 1);
  residual_ = kernels::nrm2(b);
  if (residual_ == 0.0 || dim_ == 0) {
    exhausted_ = true;
    return;
  }
  v_.col(0) = b / residual_;
  g_(0) = residual_;
}

bool GmresIteration::step() {
  if (exhausted_) return false;
  const Index j = k_;
  Vec w(dim_);
  kernels::gemv(a_, v_.col(j), w);
  const double w_norm0 = kernels::nrm2(w);
  for (Index i = 0; i <= j; ++i) {
    const double h = kernels::dot(w, v_.col(i));
    r_(i, j) = h;
    kernels::axpy(-h, v_.col(i), w);
  }
  const double h_next = kernels::nrm2(w);

  for (Index i = 0; i < j; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double t = cs_[iu] * r_(i, j) + sn_[iu] * r_(i + 1, j);
    r_(i + 1, j) = -sn_[iu] * r_(i, j) + cs_[iu] * r_(i + 1, j);
    r_(i, j) = t;
  }
  const double denom = std::hypot(r_(j, j), h_next);
  const double c = denom > 0.0 ? r_(j, j) / denom : 1.0;
  const double s = denom > 0.0 ? h_next / denom : 0.0;
  cs_.push_back(c);
  sn_.push_back(s);
  r_(j, j) = denom;
  g_(j + 1) = -s * g_(j);
  g_(j) = c * g_(j);
  flops::add(static_cast<std::uint64_t>(4 * j + 6));

  ++k_;
  residual_ = std::abs(g_(k_));
  if (h_next <= kBreakdownTol * std::max(w_norm0, 1.0) || k_ == dim_) {
    exhausted_ = true;
  } else {
    v_.col(k_) = w / h_next;
  }
  return true;
}

Vec GmresIteration::solution() const {
  Vec y = g_.head(k_);
  for (Index i = k_ - 1; i >= 0; --i) {
    for (Index l = i + 1; l < k_; ++l) y(i) -= r_(i, l) * y(l);
    y(i) /= r_(i, i);
  }
  flops::add(static_cast<std::uint64_t>(k_ * k_ / 2));
  Vec x = Vec::Zero(dim_);
  if (k_ > 0) kernels::gemv(v_.leftCols(k_), y, x);
  return x;
}

Vec gmres(const Mat& a, const Vec& b, double rel_tol, Index max_iter) {
  GmresIteration it(a, b);
  const double target = rel_tol * kernels::nrm2(b);
  Vec x = it.solution();
  auto true_residual = [&](const Vec& v) {
    Vec ax(a.rows());
    kernels::gemv(a, v, ax);
    return kernels::nrm2(ax - b);
  };
  if (true_residual(x) <= target) return x;
  while (it.iterations() < max_iter && it.step()) {
    if (it.residual_estimate() > target && !it.exhausted()) continue;
    x = it.solution();
    if (true_residual(x) <= target) return x;
    if (it.exhausted()) break;
  }
  throw GmresError("gmres: residual target not reached", it.solution());
}

}  // namespace adasketch
