#include <cmath>

#include "adasketch/errors.hpp"
#include "adasketch/flops.hpp"
#include "adasketch/problem.hpp"

namespace adasketch {

namespace {

class PdeProblem final : public Problem {
 public:
  PdeProblem(Index grid, double zeta, Vec reference, double spacing)
      : Problem("pde_N" + std::to_string(grid), 2 * grid * grid, grid * grid),
        grid_(grid), zeta_(zeta), weight_(spacing * spacing), inv_h2_(1.0 / (spacing * spacing)),
        u_(std::move(reference)) {}

 protected:
  double objective(const Vec& v) const override {
    const Index cells = grid_ * grid_;
    flops::add(static_cast<std::uint64_t>(2 * cells));
    return 0.5 * weight_ * (v.head(cells) - u_).squaredNorm() +
           0.5 * zeta_ * weight_ * v.tail(cells).squaredNorm();
  }

  Vec gradient(const Vec& v) const override {
    const Index cells = grid_ * grid_;
    Vec g(2 * cells);
    g.head(cells) = weight_ * (v.head(cells) - u_);
    g.tail(cells) = zeta_ * weight_ * v.tail(cells);
    return g;
  }

  // -Lap_h x - y with zero Dirichlet boundary.
  Vec constraints(const Vec& v) const override {
    const Index cells = grid_ * grid_;
    Vec c(cells);
    for (Index i = 0; i < grid_; ++i)
      for (Index j = 0; j < grid_; ++j) {
        double s = 4.0 * v(at(i, j));
        if (i > 0) s -= v(at(i - 1, j));
        if (i + 1 < grid_) s -= v(at(i + 1, j));
        if (j > 0) s -= v(at(i, j - 1));
        if (j + 1 < grid_) s -= v(at(i, j + 1));
        c(at(i, j)) = inv_h2_ * s - v(cells + at(i, j));
      }
    flops::add(static_cast<std::uint64_t>(6 * cells));
    return c;
  }

  Mat jacobian(const Vec&) const override {
    const Index cells = grid_ * grid_;
    Mat jac = Mat::Zero(cells, 2 * cells);
    for (Index i = 0; i < grid_; ++i)
      for (Index j = 0; j < grid_; ++j) {
        const Index p = at(i, j);
        jac(p, p) = 4.0 * inv_h2_;
        if (i > 0) jac(p, at(i - 1, j)) = -inv_h2_;
        if (i + 1 < grid_) jac(p, at(i + 1, j)) = -inv_h2_;
        if (j > 0) jac(p, at(i, j - 1)) = -inv_h2_;
        if (j + 1 < grid_) jac(p, at(i, j + 1)) = -inv_h2_;
        jac(p, cells + p) = -1.0;
      }
    return jac;
  }

  Mat hessian_lagrangian(const Vec&, const Vec&) const override {
    const Index cells = grid_ * grid_;
    Vec d(2 * cells);
    d.head(cells).setConstant(weight_);
    d.tail(cells).setConstant(zeta_ * weight_);
    return d.asDiagonal();
  }

 private:
  Index at(Index i, Index j) const { return i * grid_ + j; }

  Index grid_;
  double zeta_;
  double weight_;
  double inv_h2_;
  Vec u_;
};

}  // namespace

Vec pde_reference(Index grid, double eps_n, double eps_s) {
  Vec u(grid * grid);
  const double ratio = eps_n / eps_s;
  const double mid = static_cast<double>(grid + 1) / 2.0;
  for (Index i = 1; i <= grid; ++i)
    for (Index j = 1; j <= grid; ++j)
      u((i - 1) * grid + (j - 1)) = std::sin(4.0 + ratio * (static_cast<double>(i) - mid)) +
                                    std::cos(3.0 + ratio * (static_cast<double>(j) - mid));
  return u;
}

ProblemPtr make_pde_problem(Index grid, double zeta, double eps_n, double eps_s, double spacing) {
  if (grid < 1) throw InvalidArgument("make_pde_problem: grid size must be >= 1");
  if (!(zeta > 0.0)) throw InvalidArgument("make_pde_problem: zeta must be positive");
  if (!(eps_n > 0.0) || !(eps_s > 0.0)) throw InvalidArgument("make_pde_problem: eps_N, eps_S must be positive");
  if (!(spacing > 0.0)) throw InvalidArgument("make_pde_problem: spacing must be positive");
  return std::make_shared<PdeProblem>(grid, zeta, pde_reference(grid, eps_n, eps_s), spacing);
}

}  // namespace adasketch
