#pragma once

#include <cmath>
#include <random>

#include "adasketch/linalg.hpp"
#include "adasketch/problem.hpp"

namespace testing {

using adasketch::Index;
using adasketch::Mat;
using adasketch::Vec;

// min x'x/2  s.t.  x1 + x2 = 1;  solution (0.5, 0.5), lambda = -0.5.
inline adasketch::ProblemPtr small_qp() {
  Mat a(1, 2);
  a << 1.0, 1.0;
  return adasketch::make_qp_problem(Mat::Identity(2, 2), Vec::Zero(2), a, Vec::Ones(1));
}

inline adasketch::ProblemPtr reference_pde() { return adasketch::make_pde_problem(3, 0.1, 0.1, std::sqrt(15.0)); }

inline Mat gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = normal(rng);
  return a;
}

inline Vec gaussian(Index n, std::mt19937_64& rng) { return gaussian(n, 1, rng); }

inline double rel_err(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// Random nonsingular symmetric KKT-shaped matrix with B positive definite
// and G full row rank.
inline Mat random_kkt(Index n, Index m, std::mt19937_64& rng) {
  const Mat r = gaussian(n, n, rng);
  Mat b = r.transpose() * r / static_cast<double>(n);
  b.diagonal().array() += 0.5;
  Mat g = gaussian(m, n, rng);
  g.leftCols(m) += 2.0 * Mat::Identity(m, m);
  Mat out = Mat::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = b;
  out.topRightCorner(n, m) = g.transpose();
  out.bottomLeftCorner(m, n) = g;
  return out;
}

}  // namespace testing
