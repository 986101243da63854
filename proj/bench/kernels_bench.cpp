// Serial reference vs OpenMP kernels, plus one sketch-and-project inner
// solve on a PDE-sized system.

#include <random>

#include <benchmark/benchmark.h>

#include "adasketch/kernels.hpp"
#include "adasketch/kkt.hpp"
#include "adasketch/problem.hpp"
#include "adasketch/sketch.hpp"

namespace {

using namespace adasketch;

Mat random_mat(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Mat a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = normal(rng);
  return a;
}

Vec random_vec(Index n, std::uint64_t seed) { return random_mat(n, 1, seed); }

void BM_dot_serial(benchmark::State& st) {
  const Vec a = random_vec(st.range(0), 1), b = random_vec(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::dot(a, b));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_dot_omp(benchmark::State& st) {
  const Vec a = random_vec(st.range(0), 1), b = random_vec(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::dot(a, b));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_gemv_serial(benchmark::State& st) {
  const Index n = st.range(0);
  const Mat a = random_mat(n, n, 3);
  const Vec x = random_vec(n, 4);
  Vec y(n);
  for (auto _ : st) {
    kernels::serial::gemv(a, x, y);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

void BM_gemv_omp(benchmark::State& st) {
  const Index n = st.range(0);
  const Mat a = random_mat(n, n, 3);
  const Vec x = random_vec(n, 4);
  Vec y(n);
  for (auto _ : st) {
    kernels::gemv(a, x, y);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

void BM_gemv_t_serial(benchmark::State& st) {
  const Index n = st.range(0);
  const Mat a = random_mat(n, n, 5);
  const Vec x = random_vec(n, 6);
  Vec y(n);
  for (auto _ : st) {
    kernels::serial::gemv_t(a, x, y);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

void BM_gemv_t_omp(benchmark::State& st) {
  const Index n = st.range(0);
  const Mat a = random_mat(n, n, 5);
  const Vec x = random_vec(n, 6);
  Vec y(n);
  for (auto _ : st) {
    kernels::gemv_t(a, x, y);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

void BM_gemm_tn_serial(benchmark::State& st) {
  const Index n = st.range(0);
  const Mat a = random_mat(n, n, 7), b = random_mat(n, n, 8);
  Mat c;
  for (auto _ : st) {
    kernels::serial::gemm_tn(a, b, c);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * n * n * n);
}

void BM_gemm_tn_omp(benchmark::State& st) {
  const Index n = st.range(0);
  const Mat a = random_mat(n, n, 7), b = random_mat(n, n, 8);
  Mat c;
  for (auto _ : st) {
    kernels::gemm_tn(a, b, c);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * n * n * n);
}

void BM_lu_serial(benchmark::State& st) {
  const Index n = st.range(0);
  Mat a = random_mat(n, n, 9);
  a.diagonal().array() += static_cast<double>(n);
  const Vec b = random_vec(n, 10);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::lu_solve(a, b));
}

void BM_lu_omp(benchmark::State& st) {
  const Index n = st.range(0);
  Mat a = random_mat(n, n, 9);
  a.diagonal().array() += static_cast<double>(n);
  const Vec b = random_vec(n, 10);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::LuFactorization(a).solve(b));
}

// One full inner solve at the first PDE iterate.
void BM_inner_solve(benchmark::State& st) {
  const auto kind = static_cast<SketchKind>(st.range(0));
  const auto problem = make_pde_problem(3, 0.1, 0.1, 3.872983346207417);
  const Iterate z(Vec::Ones(problem->n()), Vec::Ones(problem->m()));
  const KktSystem sys = assemble(*problem, z, 0.1, {1.0, 0.1, 0.1});
  const double delta = std::min(0.1, sys.delta_trial);
  std::uint64_t seed = 0;
  for (auto _ : st) {
    const SketchProjector projector(sys.Gamma, sys.gamma_norm_bound, kind);
    InnerState state(sys.Gamma.rows(), seed++);
    state.restart(sys.rhs);
    run_inner_loop(projector, sys, state, 1.0, delta, default_inner_cap(sys.Gamma.rows()));
    benchmark::DoNotOptimize(state.dz.data());
  }
  st.SetLabel(std::string(to_string(kind)));
}

constexpr std::int64_t kVecLo = 1 << 10, kVecHi = 1 << 20;
constexpr std::int64_t kMatLo = 64, kMatHi = 1024;

}  // namespace

BENCHMARK(BM_dot_serial)->RangeMultiplier(8)->Range(kVecLo, kVecHi);
BENCHMARK(BM_dot_omp)->RangeMultiplier(8)->Range(kVecLo, kVecHi);
BENCHMARK(BM_gemv_serial)->RangeMultiplier(2)->Range(kMatLo, kMatHi);
BENCHMARK(BM_gemv_omp)->RangeMultiplier(2)->Range(kMatLo, kMatHi);
BENCHMARK(BM_gemv_t_serial)->RangeMultiplier(2)->Range(kMatLo, kMatHi);
BENCHMARK(BM_gemv_t_omp)->RangeMultiplier(2)->Range(kMatLo, kMatHi);
BENCHMARK(BM_gemm_tn_serial)->RangeMultiplier(2)->Range(kMatLo, 256);
BENCHMARK(BM_gemm_tn_omp)->RangeMultiplier(2)->Range(kMatLo, 256);
BENCHMARK(BM_lu_serial)->RangeMultiplier(2)->Range(kMatLo, 512);
BENCHMARK(BM_lu_omp)->RangeMultiplier(2)->Range(kMatLo, 512);
BENCHMARK(BM_inner_solve)
    ->Arg(static_cast<int>(SketchKind::GaussianVector))
    ->Arg(static_cast<int>(SketchKind::RandomizedKaczmarz))
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
