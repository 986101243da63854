#include "adasketch/kernels.hpp"

#include <cmath>

#include "adasketch/errors.hpp"
#include "adasketch/flops.hpp"

namespace adasketch::kernels {

namespace {

constexpr Index kDotChunk = 4096;
constexpr Index kGemvRowBlock = 256;

void check(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

// Entering a parallel region costs far more than a small kernel, even with
// an if clause that turns it off, so small calls take a plain loop.
template <class Body>
void for_range(Index count, Index work, Body&& body) {
  if (work >= kParallelThreshold) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < count; ++i) body(i);
  } else {
    for (Index i = 0; i < count; ++i) body(i);
  }
}

}  // namespace

double dot(ConstVecRef a, ConstVecRef b) {
  check(a.size() == b.size(), "dot: size mismatch");
  const Index n = a.size();
  flops::add(static_cast<std::uint64_t>(n));
  const double* pa = a.data();
  const double* pb = b.data();
  if (n <= kDotChunk) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += pa[i] * pb[i];
    return s;
  }
  // Fixed chunking keeps the summation order independent of thread count.
  const Index chunks = (n + kDotChunk - 1) / kDotChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  for_range(chunks, n, [&](Index c) {
    const Index lo = c * kDotChunk;
    const Index hi = std::min(n, lo + kDotChunk);
    double s = 0.0;
    for (Index i = lo; i < hi; ++i) s += pa[i] * pb[i];
    partial[static_cast<std::size_t>(c)] = s;
  });
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double nrm2(ConstVecRef a) { return std::sqrt(dot(a, a)); }

double frobenius(ConstMatRef a) {
  flops::add(static_cast<std::uint64_t>(a.size()));
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void axpy(double alpha, ConstVecRef x, VecRef y) {
  check(x.size() == y.size(), "axpy: size mismatch");
  const Index n = x.size();
  flops::add(static_cast<std::uint64_t>(n));
  const double* px = x.data();
  double* py = y.data();
  for_range(n, n, [&](Index i) { py[i] += alpha * px[i]; });
}

void gemv(ConstMatRef a, ConstVecRef x, VecRef y) {
  check(a.cols() == x.size() && a.rows() == y.size(), "gemv: size mismatch");
  const Index rows = a.rows();
  const Index cols = a.cols();
  flops::add(static_cast<std::uint64_t>(rows * cols));
  const double* pa = a.data();
  const Index ld = a.outerStride();
  const double* px = x.data();
  double* py = y.data();
  // Column sweeps over row blocks: contiguous, and each y_i still sums its
  // terms in column order, so blocking does not change the result.
  const Index blocks = (rows + kGemvRowBlock - 1) / kGemvRowBlock;
  for_range(blocks, rows * cols, [&](Index blk) {
    const Index lo = blk * kGemvRowBlock;
    const Index hi = std::min(rows, lo + kGemvRowBlock);
    for (Index i = lo; i < hi; ++i) py[i] = 0.0;
    Index j = 0;
    for (; j + 4 <= cols; j += 4) {
      const double x0 = px[j], x1 = px[j + 1], x2 = px[j + 2], x3 = px[j + 3];
      const double* c0 = pa + j * ld;
      const double* c1 = c0 + ld;
      const double* c2 = c1 + ld;
      const double* c3 = c2 + ld;
      for (Index i = lo; i < hi; ++i) py[i] = py[i] + c0[i] * x0 + c1[i] * x1 + c2[i] * x2 + c3[i] * x3;
    }
    for (; j < cols; ++j) {
      const double xj = px[j];
      const double* col = pa + j * ld;
      for (Index i = lo; i < hi; ++i) py[i] += col[i] * xj;
    }
  });
}

void gemv_t(ConstMatRef a, ConstVecRef x, VecRef y) {
  check(a.rows() == x.size() && a.cols() == y.size(), "gemv_t: size mismatch");
  const Index rows = a.rows();
  const Index cols = a.cols();
  flops::add(static_cast<std::uint64_t>(rows * cols));
  const double* pa = a.data();
  const Index ld = a.outerStride();
  const double* px = x.data();
  double* py = y.data();
  for_range(cols, rows * cols, [&](Index j) {
    const double* col = pa + j * ld;
    double s = 0.0;
    for (Index i = 0; i < rows; ++i) s += col[i] * px[i];
    py[j] = s;
  });
}

void gemm_tn(ConstMatRef a, ConstMatRef b, Mat& c) {
  check(a.rows() == b.rows(), "gemm_tn: size mismatch");
  const Index inner = a.rows();
  const Index m = a.cols();
  const Index n = b.cols();
  c.resize(m, n);
  flops::add(static_cast<std::uint64_t>(inner * m * n));
  for_range(n, inner * m * n, [&](Index j) {
    for (Index i = 0; i < m; ++i) {
      double s = 0.0;
      for (Index k = 0; k < inner; ++k) s += a(k, i) * b(k, j);
      c(i, j) = s;
    }
  });
}

LuFactorization::LuFactorization(ConstMatRef a, double pivot_tol) : lu_(a) {
  check(a.rows() == a.cols(), "lu: matrix must be square");
  const Index n = lu_.rows();
  perm_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
  const double scale = n > 0 ? lu_.cwiseAbs().maxCoeff() : 0.0;
  const double tol = pivot_tol * (scale > 0.0 ? scale : 1.0);

  for (Index k = 0; k < n; ++k) {
    Index p = k;
    double best = std::abs(lu_(k, k));
    for (Index i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (!(best > tol)) throw SingularMatrixError("lu: matrix is singular within pivot tolerance");
    if (p != k) {
      lu_.row(k).swap(lu_.row(p));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(p)]);
    }
    const double pivot = lu_(k, k);
    for (Index i = k + 1; i < n; ++i) lu_(i, k) /= pivot;
    const Index rest = n - k - 1;
    flops::add(static_cast<std::uint64_t>(rest * rest + rest));
    for_range(rest, rest * rest, [&](Index t) {
      const Index j = k + 1 + t;
      const double akj = lu_(k, j);
      for (Index i = k + 1; i < n; ++i) lu_(i, j) -= lu_(i, k) * akj;
    });
  }
}

Vec LuFactorization::solve(ConstVecRef b) const {
  const Index n = lu_.rows();
  check(b.size() == n, "lu solve: size mismatch");
  flops::add(static_cast<std::uint64_t>(n * n));
  Vec x(n);
  for (Index i = 0; i < n; ++i) x(i) = b(perm_[static_cast<std::size_t>(i)]);
  for (Index i = 0; i < n; ++i) {
    double s = x(i);
    for (Index j = 0; j < i; ++j) s -= lu_(i, j) * x(j);
    x(i) = s;
  }
  for (Index i = n - 1; i >= 0; --i) {
    double s = x(i);
    for (Index j = i + 1; j < n; ++j) s -= lu_(i, j) * x(j);
    x(i) = s / lu_(i, i);
  }
  return x;
}

}  // namespace adasketch::kernels
