#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "adasketch/bench.hpp"
#include "adasketch/flops.hpp"

namespace adasketch::bench {

namespace {

SolveReport dispatch(const Problem& problem, const Iterate& z0, Method method, std::uint64_t seed,
                     const Manifest& manifest, const SolverConfig& solver, bool record_iterates) {
  switch (method) {
    case Method::AdaSketchGv:
    case Method::AdaSketchRk: {
      SolverConfig cfg = solver;
      cfg.sketch = method == Method::AdaSketchGv ? SketchKind::GaussianVector : SketchKind::RandomizedKaczmarz;
      cfg.seed = seed;
      cfg.kkt_tol = manifest.kkt_tol;
      cfg.max_outer = manifest.max_outer;
      cfg.record_iterates = record_iterates;
      return solve(problem, z0, cfg);
    }
    case Method::Byrd: {
      ByrdConfig cfg;
      cfg.kkt_tol = manifest.kkt_tol;
      cfg.max_outer = manifest.max_outer;
      cfg.record_iterates = record_iterates;
      return solve_byrd(problem, z0, cfg);
    }
    case Method::ByrdAdaptive: {
      ByrdAdaptiveConfig cfg;
      cfg.kkt_tol = manifest.kkt_tol;
      cfg.max_outer = manifest.max_outer;
      cfg.record_iterates = record_iterates;
      return solve_byrd_adaptive(problem, z0, cfg);
    }
    case Method::AugLag: {
      AuglagConfig cfg;
      cfg.kkt_tol = manifest.kkt_tol;
      cfg.max_outer = manifest.max_outer;
      cfg.record_iterates = record_iterates;
      return solve_auglag(problem, z0, cfg);
    }
  }
  throw InvalidArgument("unknown method");
}

std::optional<double> log_error(const Vec& z, const std::optional<Vec>& z_star) {
  if (!z_star) return std::nullopt;
  return std::log10((z - *z_star).norm());
}

RunRecord run_with(const ProblemSpec& spec, Method method, std::uint64_t seed, const Manifest& manifest,
                   const SolverConfig& solver, const std::optional<Vec>& z_star, std::string group) {
  RunRecord rec;
  rec.problem_id = spec.id;
  rec.method_id = std::string(to_string(method));
  rec.group = std::move(group);
  rec.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ProblemPtr problem = spec.build();
    const Iterate z0 = spec.start(*problem);
    const SolveReport report = dispatch(*problem, z0, method, seed, manifest, solver, manifest.trajectories);
    rec.status = std::string(to_string(report.status));
    rec.final_kkt = report.final_kkt;
    rec.iterations = report.iterations.size();
    rec.obj_cons_evals = report.counters.obj_cons_evals;
    rec.grad_jac_evals = report.counters.grad_jac_evals;
    rec.total_flops = report.total_flops;
    if (manifest.trajectories) {
      for (const auto& it : report.iterations)
        rec.trajectory.push_back({it.k, it.kkt_norm, it.z ? log_error(*it.z, z_star) : std::nullopt});
      rec.trajectory.push_back({report.iterations.size(), report.final_kkt, log_error(report.z.stacked(), z_star)});
    }
  } catch (const std::exception&) {
    rec.status = "ERROR";
    rec.final_kkt = std::nan("");
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

struct Cell {
  std::size_t problem;
  Method method;
  std::uint64_t seed;
  std::size_t config;  // index into the sweep configurations, 0 otherwise
};

std::vector<std::optional<Vec>> reference_points(const Manifest& manifest) {
  std::vector<std::optional<Vec>> out(manifest.problems.size());
  if (!manifest.trajectories) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    try {
      const ProblemPtr problem = manifest.problems[i].build();
      out[i] = estimate_solution(*problem, manifest.problems[i].start(*problem)).stacked();
    } catch (const std::exception&) {
      out[i].reset();  // no reference: trajectories carry kkt only
    }
  }
  return out;
}

std::vector<RunRecord> run_cells(const Manifest& manifest, const std::vector<Cell>& cells,
                                 const std::vector<SweepConfig>& configs) {
  const auto z_star = reference_points(manifest);
  std::vector<RunRecord> out(cells.size());
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Cell& c = cells[static_cast<std::size_t>(i)];
    const SolverConfig& solver = configs.empty() ? manifest.solver : configs[c.config].cfg;
    std::string group = configs.empty() ? std::string() : configs[c.config].label();
    out[static_cast<std::size_t>(i)] =
        run_with(manifest.problems[c.problem], c.method, c.seed, manifest, solver, z_star[c.problem], std::move(group));
  }
  return out;
}

}  // namespace

RunRecord run_cell(const ProblemSpec& spec, Method method, std::uint64_t seed, const Manifest& manifest,
                   const std::optional<Vec>& z_star, std::string group) {
  return run_with(spec, method, seed, manifest, manifest.solver, z_star, std::move(group));
}

std::vector<RunRecord> run_suite(const Manifest& manifest) {
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < manifest.problems.size(); ++p) {
    for (Method m : manifest.methods) {
      if (is_randomized(m)) {
        for (std::uint64_t s : manifest.seeds) cells.push_back({p, m, s, 0});
      } else {
        cells.push_back({p, m, manifest.seeds.front(), 0});
      }
    }
  }
  return run_cells(manifest, cells, {});
}

std::string SweepConfig::label() const { return fmt::format("{}={}", parameter, value); }

std::vector<SweepConfig> sweep_configs(const SolverConfig& base) {
  struct Axis {
    const char* name;
    double SolverConfig::*field;
    double values[3];
  };
  const Axis axes[] = {
      {"eta1_0", &SolverConfig::eta1_0, {0.1, 1.0, 10.0}},
      {"eta2_0", &SolverConfig::eta2_0, {0.01, 0.1, 1.0}},
      {"delta_0", &SolverConfig::delta_0, {0.01, 0.1, 0.9}},
      {"beta", &SolverConfig::beta, {1e-7, 1e-3, 0.1}},
  };
  std::vector<SweepConfig> out;
  for (const Axis& axis : axes) {
    for (double v : axis.values) {
      SweepConfig sc;
      sc.parameter = axis.name;
      sc.value = v;
      sc.cfg = base;
      sc.cfg.*axis.field = v;
      out.push_back(std::move(sc));
    }
  }
  return out;
}

std::vector<RunRecord> sensitivity_sweep(const Manifest& manifest) {
  const auto configs = sweep_configs(manifest.solver);
  std::vector<Method> methods;
  for (Method m : manifest.methods)
    if (is_randomized(m)) methods.push_back(m);
  if (methods.empty()) methods.push_back(Method::AdaSketchGv);

  std::vector<Cell> cells;
  for (std::size_t c = 0; c < configs.size(); ++c)
    for (std::size_t p = 0; p < manifest.problems.size(); ++p)
      for (Method m : methods)
        for (std::uint64_t s : manifest.seeds) cells.push_back({p, m, s, c});
  return run_cells(manifest, cells, configs);
}

}  // namespace adasketch::bench
