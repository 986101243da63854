#pragma once

// Sketch-and-project iterations for Gamma dz = -rhs with one-dimensional
// sketches s:
//
//   w = Gamma s,  q = s'r,  dz <- dz - w q / (w'w),  r <- r - (Gamma w) q / (w'w)
//
// which is the projection of dz onto {u : s'(Gamma u + rhs) = 0}.

#include <cstdint>
#include <random>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

#include "adasketch/errors.hpp"
#include "adasketch/kkt.hpp"
#include "adasketch/linalg.hpp"

namespace adasketch {

enum class SketchKind {
  GaussianVector,      // s ~ N(0, I)
  RandomizedKaczmarz,  // s = e_i, i uniform
};

std::string_view to_string(SketchKind kind);
SketchKind sketch_kind_from_string(std::string_view name);

using Rng = std::mt19937_64;

/// Inexact direction, its residual Gamma dz + rhs, the inner-iteration
/// count, and the random stream that drives the sketches.
struct InnerState {
  Vec dz;
  Vec r;
  std::size_t j = 0;
  Rng rng;
  boost::random::normal_distribution<double> normal{0.0, 1.0};

  InnerState(Index dim, std::uint64_t seed);

  /// dz = 0, r = rhs, j = 0. The random stream carries on.
  void restart(const Vec& rhs);
};

/// One fresh dense sample of dimension `dim`.
Vec draw_sketch(SketchKind kind, Index dim, InnerState& state);

/// Projection step for an explicit sketch vector. Returns false (and leaves
/// dz, r untouched) when w'w <= 1e-14 ||s||^2 bound^2. Always increments j.
bool project_step(const Mat& gamma, double gamma_norm_bound, InnerState& state, const Vec& s);

/// Draw-and-project driver for one fixed Gamma. For Kaczmarz sketches it
/// caches Gamma^2 so a step costs O(n + m) instead of two matrix-vector
/// products.
class SketchProjector {
 public:
  SketchProjector(const Mat& gamma, double gamma_norm_bound, SketchKind kind);
  SketchProjector(Mat&&, double, SketchKind) = delete;  // keeps a reference to `gamma`

  bool step(InnerState& state) const;
  SketchKind kind() const { return kind_; }

 private:
  const Mat& gamma_;
  double bound_;
  SketchKind kind_;
  Mat gamma_sq_;     // Kaczmarz only
  Vec column_sq_;    // ||Gamma e_i||^2, Kaczmarz only
};

/// Residuals are recomputed from scratch this often to bound drift.
inline constexpr std::size_t kResidualRefreshInterval = 200;

/// Default inner-iteration budget for a system of dimension n + m.
std::size_t default_inner_cap(Index dim);

/// theta delta ||rhs|| / (gamma_norm_bound psi)
double accuracy_threshold(const KktSystem& sys, double theta, double delta);

class InnerBudgetError : public Error {
 public:
  explicit InnerBudgetError(InnerState state)
      : Error("inner sketch loop exceeded its iteration budget"), state_(std::move(state)) {}
  const InnerState& state() const noexcept { return state_; }

 private:
  InnerState state_;
};

/// Iterates until ||r|| <= accuracy_threshold (checked on a freshly
/// recomputed residual before returning). Resumable: dz and r are taken from
/// `state` as is. Throws InnerBudgetError once j reaches `cap`.
void run_inner_loop(const SketchProjector& projector, const KktSystem& sys, InnerState& state,
                    double theta, double delta, std::size_t cap);

void run_inner_loop(const KktSystem& sys, InnerState& state, double theta, double delta,
                    std::size_t cap, SketchKind kind);

}  // namespace adasketch
