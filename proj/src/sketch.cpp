#include "adasketch/sketch.hpp"

#include "adasketch/flops.hpp"
#include "adasketch/kernels.hpp"

namespace adasketch {

namespace {
constexpr double kDegenerateTol = 1e-14;
}

std::string_view to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::GaussianVector: return "gaussian";
    case SketchKind::RandomizedKaczmarz: return "kaczmarz";
  }
  return "unknown";
}

SketchKind sketch_kind_from_string(std::string_view name) {
  if (name == "gaussian" || name == "gv") return SketchKind::GaussianVector;
  if (name == "kaczmarz" || name == "rk") return SketchKind::RandomizedKaczmarz;
  throw InvalidArgument("unknown sketch '" + std::string(name) + "'");
}

InnerState::InnerState(Index dim, std::uint64_t seed)
    : dz(Vec::Zero(dim)), r(Vec::Zero(dim)), rng(seed) {}

void InnerState::restart(const Vec& rhs) {
  dz.setZero(rhs.size());
  r = rhs;
  j = 0;
}

Vec draw_sketch(SketchKind kind, Index dim, InnerState& state) {
  if (dim < 1) throw InvalidArgument("draw_sketch: dimension must be positive");
  if (kind == SketchKind::RandomizedKaczmarz) {
    std::uniform_int_distribution<Index> pick(0, dim - 1);
    Vec s = Vec::Zero(dim);
    s(pick(state.rng)) = 1.0;
    return s;
  }
  Vec s(dim);
  for (Index i = 0; i < dim; ++i) s(i) = state.normal(state.rng);
  return s;
}

bool project_step(const Mat& gamma, double gamma_norm_bound, InnerState& state, const Vec& s) {
  const Index dim = gamma.rows();
  ++state.j;
  Vec w(dim);
  kernels::gemv(gamma, s, w);
  const double ww = kernels::dot(w, w);
  const double ss = kernels::dot(s, s);
  if (ww <= kDegenerateTol * ss * gamma_norm_bound * gamma_norm_bound) return false;
  const double q = kernels::dot(s, state.r);
  if (q == 0.0) return true;
  Vec gw(dim);
  kernels::gemv(gamma, w, gw);
  const double step = q / ww;
  kernels::axpy(-step, w, state.dz);
  kernels::axpy(-step, gw, state.r);
  return true;
}

SketchProjector::SketchProjector(const Mat& gamma, double gamma_norm_bound, SketchKind kind)
    : gamma_(gamma), bound_(gamma_norm_bound), kind_(kind) {
  if (kind_ == SketchKind::RandomizedKaczmarz) {
    kernels::gemm_tn(gamma_, gamma_, gamma_sq_);  // Gamma symmetric: Gamma'Gamma = Gamma^2
    column_sq_ = gamma_sq_.diagonal();
  }
}

bool SketchProjector::step(InnerState& state) const {
  if (kind_ == SketchKind::GaussianVector)
    return project_step(gamma_, bound_, state, draw_sketch(kind_, gamma_.rows(), state));

  std::uniform_int_distribution<Index> pick(0, gamma_.rows() - 1);
  const Index i = pick(state.rng);
  ++state.j;
  const double ww = column_sq_(i);
  if (ww <= kDegenerateTol * bound_ * bound_) return false;
  const double q = state.r(i);
  if (q == 0.0) return true;
  const double step = q / ww;
  kernels::axpy(-step, gamma_.col(i), state.dz);
  kernels::axpy(-step, gamma_sq_.col(i), state.r);
  return true;
}

std::size_t default_inner_cap(Index dim) {
  const auto d = static_cast<std::size_t>(dim);
  return 2000 * d * d;
}

double accuracy_threshold(const KktSystem& sys, double theta, double delta) {
  return theta * delta * sys.kkt_norm() / (sys.gamma_norm_bound * sys.psi);
}

void run_inner_loop(const SketchProjector& projector, const KktSystem& sys, InnerState& state,
                    double theta, double delta, std::size_t cap) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("run_inner_loop: theta must lie in (0, 1]");
  if (!(delta > 0.0)) throw InvalidArgument("run_inner_loop: delta must be positive");
  if (sys.kkt_norm() == 0.0) return;
  const double threshold = accuracy_threshold(sys, theta, delta);
  std::size_t since_refresh = 0;
  for (;;) {
    if (kernels::nrm2(state.r) <= threshold) {
      if (since_refresh == 0) return;
      state.r = residual(sys.Gamma, state.dz, sys.rhs);
      since_refresh = 0;
      continue;
    }
    if (state.j >= cap) throw InnerBudgetError(state);
    projector.step(state);
    if (++since_refresh == kResidualRefreshInterval) {
      state.r = residual(sys.Gamma, state.dz, sys.rhs);
      since_refresh = 0;
    }
  }
}

void run_inner_loop(const KktSystem& sys, InnerState& state, double theta, double delta,
                    std::size_t cap, SketchKind kind) {
  const SketchProjector projector(sys.Gamma, sys.gamma_norm_bound, kind);
  run_inner_loop(projector, sys, state, theta, delta, cap);
}

}  // namespace adasketch
