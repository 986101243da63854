#include <random>

#include "doctest.h"
#include "support.hpp"

#include "adasketch/errors.hpp"
#include "adasketch/kkt.hpp"
#include "adasketch/solver.hpp"

using namespace adasketch;

namespace {

const Iterate kOrigin(Vec::Zero(2), Vec::Zero(1));
const Vec kStar = (Vec(3) << 0.5, 0.5, -0.5).finished();

}  // namespace

TEST_CASE("theta schedules") {
  CHECK(theta(ThetaSchedule::constant(1.0), 7) == 1.0);
  CHECK(theta(ThetaSchedule::harmonic(), 3) == 0.25);
  CHECK(theta(ThetaSchedule::geometric(0.5), 4) == 0.0625);
  CHECK(theta(ThetaSchedule::geometric(0.5), 0) == 1.0);
}

TEST_CASE("configuration validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.beta = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.nu = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.delta_0 = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.theta_schedule = ThetaSchedule::constant(1.5);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK_THROWS_AS(solve(*testing::small_qp(), Iterate(Vec::Zero(3), Vec::Zero(1)), SolverConfig{}), DimensionError);
}

TEST_CASE("QP converges to the KKT point in one step") {
  for (auto kind : {SketchKind::GaussianVector, SketchKind::RandomizedKaczmarz}) {
    SolverConfig cfg;
    cfg.sketch = kind;
    cfg.verify = true;
    const auto rep = solve(*testing::small_qp(), kOrigin, cfg);
    REQUIRE(rep.status == SolveStatus::Converged);
    CHECK(rep.final_kkt <= 1e-4);
    CHECK(rep.iterations.size() == 1);
    CHECK((rep.z.stacked() - kStar).norm() < 1e-8);
    CHECK(rep.iterations[0].alpha == 1.0);
    CHECK(rep.iterations[0].direction_error <= rep.iterations[0].delta);
    CHECK(rep.counters.obj_cons_evals == 4);
    CHECK(rep.counters.grad_jac_evals == 4);
  }
}

TEST_CASE("start at the KKT point and zero budget") {
  const auto p = testing::small_qp();
  const auto at_star = solve(*p, Iterate::from_stacked(kStar, 2), SolverConfig{});
  CHECK(at_star.status == SolveStatus::Converged);
  CHECK(at_star.iterations.empty());
  SolverConfig cfg;
  cfg.max_outer = 0;
  CHECK(solve(*p, kOrigin, cfg).status == SolveStatus::MaxIter);
}

TEST_CASE("inner budget and evaluation failures end up in the status") {
  SolverConfig cfg;
  cfg.inner_cap = 3;
  const auto rep = solve(*testing::small_qp(), kOrigin, cfg);
  CHECK(rep.status == SolveStatus::InnerBudget);
  CHECK_FALSE(rep.message.empty());
}

TEST_CASE("same seed, same trace") {
  SolverConfig cfg;
  cfg.seed = 9;
  const auto p = make_random_qp(8, 3, 4);
  const Iterate z0 = Iterate::constant(8, 3, 1.0);
  const auto a = solve(*p, z0, cfg);
  const auto b = solve(*p, z0, cfg);
  REQUIRE(a.iterations.size() == b.iterations.size());
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    CHECK(a.iterations[k].kkt_norm == b.iterations[k].kkt_norm);
    CHECK(a.iterations[k].inner_iterations == b.iterations[k].inner_iterations);
    CHECK(a.iterations[k].flops == b.iterations[k].flops);
  }
  CHECK(a.z.stacked() == b.z.stacked());
  CHECK(a.total_flops == b.total_flops);
}

TEST_CASE("every accepted iteration satisfies the accuracy, descent and Armijo conditions") {
  for (auto kind : {SketchKind::GaussianVector, SketchKind::RandomizedKaczmarz}) {
    SolverConfig cfg;
    cfg.sketch = kind;
    cfg.verify = true;
    const auto rep = solve(*testing::reference_pde(), Iterate::constant(18, 9, 1.0), cfg);
    REQUIRE(rep.status == SolveStatus::Converged);
    std::uint64_t flops = 0;
    for (const auto& it : rep.iterations) {
      CHECK(it.residual_norm <= it.accuracy_threshold);
      CHECK(it.dir_deriv <= it.descent_bound);
      CHECK(it.merit_after <= it.merit_before + it.alpha * cfg.beta * it.dir_deriv);
      CHECK(it.direction_error <= it.theta * it.delta);
      CHECK(it.flops >= flops);
      flops = it.flops;
    }
    CHECK(rep.final_kkt <= 1e-4);
  }
}

TEST_CASE("estimate_solution") {
  const Iterate q = estimate_solution(*testing::small_qp(), kOrigin);
  CHECK((q.stacked() - kStar).norm() < 1e-12);
  const auto pde = testing::reference_pde();
  const Iterate z = estimate_solution(*pde, Iterate::constant(18, 9, 1.0));
  CHECK(lagrangian_gradient(pde->evaluate(z, Request::all()), z).norm() <= 1e-10);
}

TEST_CASE("random QPs converge with both sketches") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const Index n = 3 + static_cast<Index>(s), m = 1 + static_cast<Index>(s % 3);
    const auto p = make_random_qp(n, m, s);
    const Iterate z0(Vec::Zero(n), Vec::Zero(m));
    const Vec star = estimate_solution(*p, z0).stacked();
    for (auto kind : {SketchKind::GaussianVector, SketchKind::RandomizedKaczmarz}) {
      SolverConfig cfg;
      cfg.sketch = kind;
      cfg.kkt_tol = 1e-8;
      cfg.seed = s;
      const auto rep = solve(*p, z0, cfg);
      CHECK(rep.status == SolveStatus::Converged);
      CHECK((rep.z.stacked() - star).norm() <= 1e-6);
    }
  }
}

TEST_CASE("record_iterates stores z_k") {
  SolverConfig cfg;
  cfg.record_iterates = true;
  const auto rep = solve(*testing::small_qp(), kOrigin, cfg);
  REQUIRE(rep.iterations.size() == 1);
  REQUIRE(rep.iterations[0].z.has_value());
  CHECK(rep.iterations[0].z->norm() == 0.0);
}
