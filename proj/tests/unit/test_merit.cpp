#include <random>

#include "doctest.h"
#include "support.hpp"

#include "adasketch/errors.hpp"
#include "adasketch/libsvm.hpp"
#include "adasketch/merit.hpp"

using namespace adasketch;
using testing::gaussian;

namespace {

const Iterate kOrigin(Vec::Zero(2), Vec::Zero(1));
const Iterate kStar(Vec::Constant(2, 0.5), Vec::Constant(1, -0.5));

Vec newton_step() { return (Vec(3) << 0.5, 0.5, -0.5).finished(); }

}  // namespace

TEST_CASE("merit value examples") {
  const auto p = testing::small_qp();
  CHECK(merit_value(*p, kStar, 1.0, 0.1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(merit_value(*p, kStar, 7.0, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(merit_value(*p, kOrigin, 1.0, 0.1) == 0.5);
  const Iterate z(Vec((Vec(2) << 1.0, 2.0).finished()), Vec::Constant(1, 0.5));
  // L = (1 + 4)/2 + 0.5 (3 - 1)
  CHECK(merit_value(*p, z, 0.0, 0.0) == 3.5);
  const auto c = p->counters();
  CHECK(c.obj_cons_evals == 4);
  CHECK(c.grad_jac_evals == 4);
}

TEST_CASE("merit gradient examples") {
  const auto p = testing::small_qp();
  CHECK(merit_gradient(*p, kStar, 1.0, 0.1).norm() < 1e-15);
  CHECK(merit_gradient(*p, kOrigin, 1.0, 0.1) == -Vec::Ones(3));
  std::mt19937_64 rng(1);
  const Iterate z(gaussian(2, rng), gaussian(1, rng));
  const auto e = p->evaluate(z, Request::all());
  const Vec gl = *e.grad_f + e.jac->transpose() * z.lambda;
  Vec classical(3);
  classical << gl + 2.0 * e.jac->transpose() * *e.c, *e.c;
  CHECK((merit_gradient(*p, z, 2.0, 0.0) - classical).norm() < 1e-14);
}

TEST_CASE("descent test") {
  const auto p = testing::small_qp();
  const Vec g = merit_gradient(*p, kOrigin, 1.0, 0.1);
  CHECK(g.dot(newton_step()) == doctest::Approx(-0.5));
  CHECK(descent_ok(g, newton_step(), 0.1, 1.0));
  CHECK_FALSE(descent_ok(g, Vec::Zero(3), 0.1, 1.0));
  CHECK(descent_ok(g, -g, 1e-12, 1.0));
}

TEST_CASE("penalty update arithmetic") {
  PenaltyState p{1.0, 0.1, 0.01, 1.5, 0.1};
  const PenaltyState q = update_penalty(p, [](double, double) { return 0.5; });
  CHECK(q.eta1 == 2.25);
  CHECK(q.eta2 == doctest::Approx(0.1 / 1.5).epsilon(1e-15));
  CHECK(q.delta == doctest::Approx(0.01 / 5.0625).epsilon(1e-15));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(0.01, 2.0);
  for (int t = 0; t < 50; ++t) {
    const PenaltyState a{uni(rng), uni(rng), uni(rng) / 4, 1.0 + uni(rng), 0.1};
    double seen1 = 0, seen2 = 0;
    const PenaltyState b = update_penalty(a, [&](double e1, double e2) {
      seen1 = e1;
      seen2 = e2;
      return 1e-3 * e2;
    });
    CHECK(seen1 == b.eta1);
    CHECK(seen2 == b.eta2);
    CHECK(b.eta1 > a.eta1);
    CHECK(b.eta2 < a.eta2);
    CHECK(b.eta1 * b.eta2 == doctest::Approx(a.nu * a.eta1 * a.eta2).epsilon(1e-13));
    CHECK(b.delta * b.eta1 / b.eta2 <= a.delta * a.eta1 / a.eta2 / a.nu * (1 + 1e-13));
    CHECK(b.delta <= 1e-3 * b.eta2);
  }
}

TEST_CASE("Armijo on the QP takes the unit step") {
  const auto p = testing::small_qp();
  const PenaltyState pen{1.0, 0.1, 0.1, 1.5, 0.1};
  const Vec g = merit_gradient(*p, kOrigin, 1.0, 0.1);
  const auto ls = armijo_backtrack(*p, kOrigin, newton_step(), pen, g.dot(newton_step()));
  CHECK(ls.alpha == 1.0);
  CHECK(ls.trials == 1);
  CHECK(ls.phi0 == 0.5);
  CHECK(ls.phi_alpha == doctest::Approx(0.25));
  CHECK(ls.phi_alpha <= ls.phi0 + ls.alpha * pen.beta * g.dot(newton_step()));
}

TEST_CASE("Armijo halves on a long step and rejects an inconsistent one") {
  const auto p = testing::small_qp();
  const PenaltyState pen{1.0, 0.1, 0.1, 1.5, 0.1};
  const Vec dz = 8.0 * newton_step();
  const Vec g = merit_gradient(*p, kOrigin, 1.0, 0.1);
  const auto ls = armijo_backtrack(*p, kOrigin, dz, pen, g.dot(dz));
  CHECK(ls.alpha < 1.0);
  CHECK(ls.phi_alpha <= ls.phi0 + ls.alpha * pen.beta * g.dot(dz));
  CHECK(ls.alpha == std::ldexp(1.0, -(ls.trials - 1)));
  CHECK_THROWS_AS(armijo_backtrack(*p, kOrigin, Vec::Zero(3), pen, -1.0), LineSearchError);
}

TEST_CASE("merit gradient matches central differences of merit value") {
  auto data = std::make_shared<const Dataset>(
      parse_libsvm("+1 1:0.5 2:-1 4:0.25\n-1 2:2 3:1\n+1 1:-0.3 3:0.7 5:1.5\n-1 1:1 5:-0.5\n"));
  const std::vector<ProblemPtr> problems{testing::small_qp(), make_random_qp(6, 2, 1), testing::reference_pde(),
                                         make_logreg_problem(data, 2, 0)};
  std::mt19937_64 rng(3);
  for (const auto& p : problems) {
    CAPTURE(p->name());
    for (int t = 0; t < 10; ++t) {
      const Iterate z(0.5 * gaussian(p->n(), rng), gaussian(p->m(), rng));
      const Vec g = merit_gradient(*p, z, 1.0, 0.1);
      const Vec s = z.stacked();
      Vec fd(s.size());
      for (Index i = 0; i < s.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(s(i)));
        Vec sp = s, sm = s;
        sp(i) += h;
        sm(i) -= h;
        fd(i) = (merit_value(*p, Iterate::from_stacked(sp, p->n()), 1.0, 0.1) -
                 merit_value(*p, Iterate::from_stacked(sm, p->n()), 1.0, 0.1)) /
                (2 * h);
      }
      CHECK((fd - g).norm() / std::max(1.0, g.norm()) <= 1e-5);
    }
  }
}
