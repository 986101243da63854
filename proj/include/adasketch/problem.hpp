#pragma once

// Problem oracles for  min f(x)  s.t.  c(x) = 0,  c : R^n -> R^m.
//
// A Problem is immutable after construction except for its evaluation
// counters, which are atomic so that concurrent solves may share one oracle.
// Counting is per call: any request containing F or C is one objective /
// constraint evaluation, any request containing GRAD or JAC is one gradient /
// Jacobian evaluation, and HESS is one Hessian evaluation.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "adasketch/linalg.hpp"

namespace adasketch {

/// Primal-dual point z = (x, lambda).
struct Iterate {
  Vec x;
  Vec lambda;

  Index n() const { return x.size(); }
  Index m() const { return lambda.size(); }

  /// (x, lambda) stacked into one vector of length n + m.
  Vec stacked() const;
  static Iterate from_stacked(const Vec& z, Index n);
  static Iterate constant(Index n, Index m, double value);
};

enum class Field : unsigned { F = 1u, C = 2u, Grad = 4u, Jac = 8u, Hess = 16u };

/// Bit set of requested fields.
class Request {
 public:
  constexpr Request() = default;
  constexpr Request(Field f) : bits_(static_cast<unsigned>(f)) {}  // NOLINT(implicit)

  constexpr bool has(Field f) const { return (bits_ & static_cast<unsigned>(f)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned bits() const { return bits_; }

  friend constexpr Request operator|(Request a, Request b) {
    Request r;
    r.bits_ = a.bits_ | b.bits_;
    return r;
  }

  static constexpr Request all();
  static constexpr Request values() { return Request(Field::F) | Field::C; }
  static constexpr Request first_order() { return Request(Field::Grad) | Field::Jac; }

 private:
  unsigned bits_ = 0;
};

constexpr Request operator|(Field a, Field b) { return Request(a) | Request(b); }
constexpr Request Request::all() { return values() | first_order() | Field::Hess; }

/// Output of one oracle call; exactly the requested fields are set.
struct EvalBundle {
  std::optional<double> f;
  std::optional<Vec> grad_f;
  std::optional<Vec> c;
  std::optional<Mat> jac;              // m x n
  std::optional<Mat> hess_lagrangian;  // n x n, H = grad^2 f + sum_i lambda_i grad^2 c_i
};

struct EvalCounters {
  std::uint64_t obj_cons_evals = 0;
  std::uint64_t grad_jac_evals = 0;
  std::uint64_t hess_evals = 0;

  friend EvalCounters operator-(const EvalCounters& a, const EvalCounters& b) {
    return {a.obj_cons_evals - b.obj_cons_evals, a.grad_jac_evals - b.grad_jac_evals,
            a.hess_evals - b.hess_evals};
  }
  friend bool operator==(const EvalCounters&, const EvalCounters&) = default;
};

class Problem {
 public:
  Problem(std::string name, Index n, Index m);
  virtual ~Problem() = default;

  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  const std::string& name() const { return name_; }
  Index n() const { return n_; }
  Index m() const { return m_; }

  /// Throws DimensionError on a size mismatch or an empty request, and
  /// EvalError if any produced value is NaN or Inf.
  EvalBundle evaluate(const Iterate& z, Request request) const;

  EvalCounters counters() const;
  void reset_counters() const;

 protected:
  virtual double objective(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual Vec constraints(const Vec& x) const = 0;
  virtual Mat jacobian(const Vec& x) const = 0;
  virtual Mat hessian_lagrangian(const Vec& x, const Vec& lambda) const = 0;

 private:
  std::string name_;
  Index n_;
  Index m_;
  mutable std::atomic<std::uint64_t> obj_cons_{0};
  mutable std::atomic<std::uint64_t> grad_jac_{0};
  mutable std::atomic<std::uint64_t> hess_{0};
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// f(x) = x'Qx/2 + g'x,  c(x) = A x - b.  Throws InvalidArgument if Q is not
/// symmetric to 1e-12 and RankError if the smallest singular value of A is
/// at most 1e-10.
ProblemPtr make_qp_problem(const Mat& q, const Vec& g, const Mat& a, const Vec& b,
                           std::string name = "qp");

/// Random well-scaled strictly convex QP: ||Q||_F = 1 with eigenvalues
/// spread over a factor of five, A with singular values in [1, 2], Gaussian
/// g and b. Draws come from std::mt19937_64 seeded with `seed`.
ProblemPtr make_random_qp(Index n, Index m, std::uint64_t seed);

struct Dataset;

/// Constrained logistic regression
///   f(x) = (1/N) sum_i log(1 + exp(-y_i d_i'x)),  A x = b,  ||x||^2 = 1,
/// with A, b drawn i.i.d. standard normal from std::mt19937_64(seed).
ProblemPtr make_logreg_problem(std::shared_ptr<const Dataset> data, Index m_lin,
                               std::uint64_t seed);

/// Discretized optimal control with Dirichlet boundary on an N x N interior
/// grid of spacing `spacing`:
///   min  w/2 ||x - u||^2 + zeta w/2 ||y||^2   s.t.  -Lap_h x - y = 0,
/// where w = spacing^2 is the quadrature weight and Lap_h the 5-point
/// stencil divided by spacing^2. Variables are ordered (x, y), each grid
/// vector row-major in (i, j).
ProblemPtr make_pde_problem(Index grid, double zeta, double eps_n, double eps_s,
                            double spacing = 1.0);

/// Reference field u_ij, i, j = 1..N, flattened row-major.
Vec pde_reference(Index grid, double eps_n, double eps_s);

}  // namespace adasketch
