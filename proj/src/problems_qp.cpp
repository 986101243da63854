#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "adasketch/errors.hpp"
#include "adasketch/kernels.hpp"
#include "adasketch/problem.hpp"

namespace adasketch {

namespace {

class QpProblem final : public Problem {
 public:
  QpProblem(std::string name, Mat q, Vec g, Mat a, Vec b)
      : Problem(std::move(name), q.rows(), a.rows()),
        q_(std::move(q)), g_(std::move(g)), a_(std::move(a)), b_(std::move(b)) {}

 protected:
  double objective(const Vec& x) const override {
    Vec qx(x.size());
    kernels::gemv(q_, x, qx);
    return 0.5 * kernels::dot(x, qx) + kernels::dot(g_, x);
  }
  Vec gradient(const Vec& x) const override {
    Vec qx(x.size());
    kernels::gemv(q_, x, qx);
    return qx + g_;
  }
  Vec constraints(const Vec& x) const override {
    Vec ax(a_.rows());
    kernels::gemv(a_, x, ax);
    return ax - b_;
  }
  Mat jacobian(const Vec&) const override { return a_; }
  Mat hessian_lagrangian(const Vec&, const Vec&) const override { return q_; }

 private:
  Mat q_;
  Vec g_;
  Mat a_;
  Vec b_;
};

}  // namespace

ProblemPtr make_qp_problem(const Mat& q, const Vec& g, const Mat& a, const Vec& b, std::string name) {
  const Index n = q.rows();
  if (q.cols() != n || g.size() != n || a.cols() != n || b.size() != a.rows())
    throw DimensionError("make_qp_problem: inconsistent dimensions");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument("make_qp_problem: Q is not symmetric");
  if (a.rows() < 1 || a.rows() > n) throw InvalidArgument("make_qp_problem: need 1 <= m <= n");
  Eigen::JacobiSVD<Mat> svd(a);
  if (!(svd.singularValues().minCoeff() > 1e-10))
    throw RankError("make_qp_problem: constraint matrix is rank deficient");
  return std::make_shared<QpProblem>(std::move(name), q, g, a, b);
}

ProblemPtr make_random_qp(Index n, Index m, std::uint64_t seed) {
  if (m < 1 || m > n) throw InvalidArgument("make_random_qp: need 1 <= m <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto draw = [&](Index rows, Index cols) {
    Mat out(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) out(i, j) = normal(rng);
    return out;
  };
  auto orthogonal = [&](Index k) {
    Eigen::HouseholderQR<Mat> qr(draw(k, k));
    return Mat(qr.householderQ());
  };
  // Unit Frobenius norm, eigenvalues spread over a factor of five.
  Vec eig(n);
  for (Index i = 0; i < n; ++i) eig(i) = 0.2 + 0.8 * uniform(rng);
  eig /= eig.norm();
  const Mat u = orthogonal(n);
  Mat q = u * eig.asDiagonal() * u.transpose();
  q = 0.5 * (q + q.transpose()).eval();
  // Singular values in [1, 2].
  Vec sv(m);
  for (Index i = 0; i < m; ++i) sv(i) = 1.0 + uniform(rng);
  const Mat a = orthogonal(m) * sv.asDiagonal() * orthogonal(n).topRows(m);
  const Vec g = draw(n, 1);
  const Vec b = draw(m, 1);
  return make_qp_problem(q, g, a, b, "random_qp_n" + std::to_string(n) + "_m" + std::to_string(m) +
                                         "_s" + std::to_string(seed));
}

}  // namespace adasketch
