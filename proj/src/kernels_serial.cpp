#include <cmath>
#include <vector>

#include "adasketch/errors.hpp"
#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"

// Straight-line reference versions. No OpenMP, no chunking.

namespace adasketch::kernels::serial {

double dot(ConstVecRef a, ConstVecRef b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  flops::add(static_cast<std::uint64_t>(a.size()));
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

void gemv(ConstMatRef a, ConstVecRef x, VecRef y) {
  if (a.cols() != x.size() || a.rows() != y.size()) throw DimensionError("gemv: size mismatch");
  flops::add(static_cast<std::uint64_t>(a.rows() * a.cols()));
  y.setZero();
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) y(i) += a(i, j) * x(j);
}

void gemv_t(ConstMatRef a, ConstVecRef x, VecRef y) {
  if (a.rows() != x.size() || a.cols() != y.size()) throw DimensionError("gemv_t: size mismatch");
  flops::add(static_cast<std::uint64_t>(a.rows() * a.cols()));
  for (Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Index i = 0; i < a.rows(); ++i) s += a(i, j) * x(i);
    y(j) = s;
  }
}

void gemm_tn(ConstMatRef a, ConstMatRef b, Mat& c) {
  if (a.rows() != b.rows()) throw DimensionError("gemm_tn: size mismatch");
  c.resize(a.cols(), b.cols());
  flops::add(static_cast<std::uint64_t>(a.rows() * a.cols() * b.cols()));
  for (Index j = 0; j < b.cols(); ++j)
    for (Index i = 0; i < a.cols(); ++i) {
      double s = 0.0;
      for (Index k = 0; k < a.rows(); ++k) s += a(k, i) * b(k, j);
      c(i, j) = s;
    }
}

Vec lu_solve(ConstMatRef a, ConstVecRef b, double pivot_tol) {
  const Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw DimensionError("lu_solve: size mismatch");
  Mat m = a;
  Vec x = b;
  const double scale = n > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
  const double tol = pivot_tol * (scale > 0.0 ? scale : 1.0);
  for (Index k = 0; k < n; ++k) {
    Index p = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (!(std::abs(m(p, k)) > tol)) throw SingularMatrixError("lu_solve: singular matrix");
    if (p != k) {
      m.row(k).swap(m.row(p));
      std::swap(x(k), x(p));
    }
    for (Index i = k + 1; i < n; ++i) {
      const double l = m(i, k) / m(k, k);
      for (Index j = k; j < n; ++j) m(i, j) -= l * m(k, j);
      x(i) -= l * x(k);
    }
  }
  flops::add(static_cast<std::uint64_t>(n * n * n / 3 + n * n));
  for (Index i = n - 1; i >= 0; --i) {
    double s = x(i);
    for (Index j = i + 1; j < n; ++j) s -= m(i, j) * x(j);
    x(i) = s / m(i, i);
  }
  return x;
}

}  // namespace adasketch::kernels::serial
