#include <random>

#include "doctest.h"
#include "support.hpp"

#include "adasketch/errors.hpp"
#include "adasketch/libsvm.hpp"
#include "adasketch/problem.hpp"

using namespace adasketch;
using testing::gaussian;

namespace {

std::shared_ptr<const Dataset> tiny_dataset() {
  return std::make_shared<const Dataset>(parse_libsvm(
      "+1 1:0.5 2:-1 4:0.25\n-1 2:2 3:1\n+1 1:-0.3 3:0.7 5:1.5\n-1 1:1 5:-0.5\n+1 2:0.1 4:-2\n"));
}

std::vector<ProblemPtr> builtins() {
  return {testing::small_qp(), make_random_qp(7, 3, 5), testing::reference_pde(),
          make_logreg_problem(tiny_dataset(), 2, 3)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("QP examples") {
  const auto p = testing::small_qp();
  const auto e = p->evaluate(Iterate(Vec::Zero(2), Vec::Zero(1)), Field::C);
  CHECK((*e.c)(0) == -1.0);
  const Iterate star(Vec::Constant(2, 0.5), Vec::Constant(1, -0.5));
  const auto s = p->evaluate(star, Request::all());
  CHECK((*s.grad_f + s.jac->transpose() * star.lambda).norm() == 0.0);
  CHECK(s.c->norm() == 0.0);

  Mat dup(2, 2);
  dup << 1, 1, 1, 1;
  CHECK_THROWS_AS(make_qp_problem(Mat::Identity(2, 2), Vec::Zero(2), dup, Vec::Ones(2)), RankError);
}

TEST_CASE("logistic problem examples") {
  const auto p = make_logreg_problem(tiny_dataset(), 2, 1);
  CHECK(p->m() == 3);
  const Vec x = Vec::LinSpaced(5, -1.0, 1.0);
  const auto e0 = p->evaluate(Iterate(Vec::Zero(5), Vec::Zero(3)), Field::C);
  CHECK((*e0.c)(2) == -1.0);
  const auto e = p->evaluate(Iterate(x, Vec::Zero(3)), Field::Jac);
  CHECK((e.jac->row(2).transpose() - 2.0 * x).norm() == 0.0);
  CHECK_THROWS_AS(make_logreg_problem(tiny_dataset(), 5, 0), InvalidArgument);
  CHECK_THROWS_AS(make_logreg_problem(std::make_shared<const Dataset>(), 1, 0), InvalidArgument);
}

TEST_CASE("PDE examples") {
  const Vec u = pde_reference(3, 0.1, std::sqrt(15.0));
  CHECK(u(4) == doctest::Approx(std::sin(4.0) + std::cos(3.0)).epsilon(1e-15));
  const auto p = testing::reference_pde();
  CHECK(p->n() == 18);
  CHECK(p->m() == 9);
  std::mt19937_64 rng(2);
  const auto j1 = *p->evaluate(Iterate(gaussian(18, rng), Vec::Zero(9)), Field::Jac).jac;
  const auto j2 = *p->evaluate(Iterate(gaussian(18, rng), Vec::Zero(9)), Field::Jac).jac;
  CHECK(j1 == j2);
  CHECK(j1.rightCols(9) == -Mat::Identity(9, 9));
  // Five-point -Laplacian: 4 on the diagonal, -1 to grid neighbours.
  CHECK(j1(4, 4) == 4.0);
  CHECK(j1(4, 1) == -1.0);
  CHECK(j1(3, 2) == 0.0);  // (row 1, col 0) and (row 0, col 2) are not neighbours
}

TEST_CASE("gradients and Jacobians match central differences") {
  std::mt19937_64 rng(3);
  for (const auto& p : builtins()) {
    CAPTURE(p->name());
    for (int trial = 0; trial < 10; ++trial) {
      const Iterate z(0.5 * gaussian(p->n(), rng), gaussian(p->m(), rng));
      const auto e = p->evaluate(z, Request::all());
      const double h = 1e-6;
      for (Index i = 0; i < p->n(); ++i) {
        Iterate zp = z, zm = z;
        zp.x(i) += h;
        zm.x(i) -= h;
        const auto ep = p->evaluate(zp, Field::F | Field::C | Field::Grad | Field::Jac);
        const auto em = p->evaluate(zm, Field::F | Field::C | Field::Grad | Field::Jac);
        CHECK(rel((*ep.f - *em.f) / (2 * h), (*e.grad_f)(i)) <= 1e-5);
        const Vec dc = (*ep.c - *em.c) / (2 * h);
        for (Index r = 0; r < p->m(); ++r) CHECK(rel(dc(r), (*e.jac)(r, i)) <= 1e-5);
        const Vec lp = *ep.grad_f + ep.jac->transpose() * z.lambda;
        const Vec lm = *em.grad_f + em.jac->transpose() * z.lambda;
        const Vec dh = (lp - lm) / (2 * h);
        for (Index r = 0; r < p->n(); ++r) CHECK(rel(dh(r), (*e.hess_lagrangian)(r, i)) <= 1e-4);
      }
    }
  }
}

TEST_CASE("one call counts once per field group") {
  const auto p = testing::small_qp();
  const Iterate z(Vec::Zero(2), Vec::Zero(1));
  p->evaluate(z, Field::F | Field::C);
  p->evaluate(z, Field::Grad | Field::Jac);
  p->evaluate(z, Request::all());
  p->evaluate(z, Field::Hess);
  const auto c = p->counters();
  CHECK(c.obj_cons_evals == 2);
  CHECK(c.grad_jac_evals == 2);
  CHECK(c.hess_evals == 2);
  p->reset_counters();
  CHECK(p->counters() == EvalCounters{});
}

TEST_CASE("LIBSVM parsing") {
  const Dataset d = parse_libsvm("1 1:0.5 3:-2\n");
  REQUIRE(d.size() == 1);
  CHECK(d.labels[0] == 1.0);
  CHECK(d.n_features == 3);
  CHECK(d.rows[0] == SparseRow{{0, 0.5}, {2, -2.0}});
  CHECK(parse_libsvm("0 2:1\n").labels[0] == -1.0);
  try {
    parse_libsvm("-1 1:x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_libsvm("+1 1:1\nabc 1:2\n"), ParseError);
  CHECK(parse_libsvm("# comment\n\n+1 2:3\n").size() == 1);
}

TEST_CASE("LIBSVM serialize then parse is the identity") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  Dataset d;
  for (int i = 0; i < 30; ++i) {
    d.labels.push_back(i % 3 ? 1.0 : -1.0);
    SparseRow row;
    for (Index j = 0; j < 12; ++j)
      if ((i + j) % 4 == 0) row.push_back({j, uni(rng)});
    d.rows.push_back(row);
  }
  d.n_features = 12;
  CHECK(parse_libsvm(serialize_libsvm(d)) == d);
}
