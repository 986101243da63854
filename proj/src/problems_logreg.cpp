#include <cmath>
#include <random>

#include "adasketch/errors.hpp"
#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"
#include "adasketch/libsvm.hpp"
#include "adasketch/problem.hpp"

namespace adasketch {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

class LogRegProblem final : public Problem {
 public:
  LogRegProblem(std::shared_ptr<const Dataset> data, Mat a, Vec b)
      : Problem("logreg", data->n_features, a.rows() + 1),
        data_(std::move(data)), a_(std::move(a)), b_(std::move(b)) {}

 protected:
  double objective(const Vec& x) const override {
    double sum = 0.0;
    for (std::size_t i = 0; i < data_->size(); ++i)
      sum += softplus(-data_->labels[i] * margin(i, x));
    return sum / static_cast<double>(data_->size());
  }

  Vec gradient(const Vec& x) const override {
    Vec g = Vec::Zero(n());
    for (std::size_t i = 0; i < data_->size(); ++i) {
      const double y = data_->labels[i];
      const double w = -y * sigmoid(-y * margin(i, x));
      for (const auto& e : data_->rows[i]) g(e.index) += w * e.value;
      flops::add(data_->rows[i].size());
    }
    return g / static_cast<double>(data_->size());
  }

  Vec constraints(const Vec& x) const override {
    Vec c(m());
    const Index lin = a_.rows();
    if (lin > 0) {
      Vec ax(lin);
      kernels::gemv(a_, x, ax);
      c.head(lin) = ax - b_;
    }
    c(lin) = kernels::dot(x, x) - 1.0;
    return c;
  }

  Mat jacobian(const Vec& x) const override {
    Mat j(m(), n());
    j.topRows(a_.rows()) = a_;
    j.row(a_.rows()) = 2.0 * x.transpose();
    return j;
  }

  Mat hessian_lagrangian(const Vec& x, const Vec& lambda) const override {
    Mat h = Mat::Zero(n(), n());
    for (std::size_t i = 0; i < data_->size(); ++i) {
      const double s = sigmoid(margin(i, x));
      const double w = s * (1.0 - s);
      const auto& row = data_->rows[i];
      for (const auto& p : row)
        for (const auto& q : row) h(p.index, q.index) += w * p.value * q.value;
      flops::add(row.size() * row.size());
    }
    h /= static_cast<double>(data_->size());
    // The linear constraints have zero curvature; ||x||^2 - 1 contributes 2 lambda_last I.
    h.diagonal().array() += 2.0 * lambda(m() - 1);
    return h;
  }

 private:
  double margin(std::size_t i, const Vec& x) const {
    double t = 0.0;
    for (const auto& e : data_->rows[i]) t += e.value * x(e.index);
    flops::add(data_->rows[i].size());
    return t;
  }

  std::shared_ptr<const Dataset> data_;
  Mat a_;
  Vec b_;
};

}  // namespace

ProblemPtr make_logreg_problem(std::shared_ptr<const Dataset> data, Index m_lin, std::uint64_t seed) {
  if (!data || data->size() == 0) throw InvalidArgument("make_logreg_problem: empty dataset");
  if (m_lin < 0) throw InvalidArgument("make_logreg_problem: negative constraint count");
  if (m_lin + 1 > data->n_features)
    throw InvalidArgument("make_logreg_problem: need m_lin + 1 <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat a(m_lin, data->n_features);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  Vec b(m_lin);
  for (Index i = 0; i < m_lin; ++i) b(i) = normal(rng);
  return std::make_shared<LogRegProblem>(std::move(data), std::move(a), std::move(b));
}

}  // namespace adasketch
