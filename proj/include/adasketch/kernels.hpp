#pragma once

// Dense kernels used on every hot path of the solvers.
//
// The default namespace holds the OpenMP versions. `kernels::serial` holds
// plain-loop reference implementations that tests compare against and the
// benchmark target times side by side. Parallel versions only fork above a
// size threshold and never reorder a floating-point reduction in a way that
// depends on the thread count, so results are reproducible run to run.
//
// All kernels charge flops::add (one multiply-add = one flop).

#include <vector>

#include "adasketch/linalg.hpp"

namespace adasketch::kernels {

/// Problems smaller than this many multiply-adds stay on the calling thread.
inline constexpr Index kParallelThreshold = Index{1} << 15;

double dot(ConstVecRef a, ConstVecRef b);
double nrm2(ConstVecRef a);
double frobenius(ConstMatRef a);
/// y += alpha * x
void axpy(double alpha, ConstVecRef x, VecRef y);
/// y = A x
void gemv(ConstMatRef a, ConstVecRef x, VecRef y);
/// y = A^T x
void gemv_t(ConstMatRef a, ConstVecRef x, VecRef y);
/// C = A^T B
void gemm_tn(ConstMatRef a, ConstMatRef b, Mat& c);

/// LU with partial pivoting, P A = L U stored in place.
class LuFactorization {
 public:
  /// Throws SingularMatrixError if a pivot falls below `pivot_tol * max|A|`.
  explicit LuFactorization(ConstMatRef a, double pivot_tol = 1e-14);

  Vec solve(ConstVecRef b) const;
  Index size() const { return lu_.rows(); }

 private:
  Mat lu_;
  std::vector<Index> perm_;
};

namespace serial {

double dot(ConstVecRef a, ConstVecRef b);
void gemv(ConstMatRef a, ConstVecRef x, VecRef y);
void gemv_t(ConstMatRef a, ConstVecRef x, VecRef y);
void gemm_tn(ConstMatRef a, ConstMatRef b, Mat& c);
/// Factor-and-solve in one call; same pivoting rule as LuFactorization.
Vec lu_solve(ConstMatRef a, ConstVecRef b, double pivot_tol = 1e-14);

}  // namespace serial

}  // namespace adasketch::kernels
