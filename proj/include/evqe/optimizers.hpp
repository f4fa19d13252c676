#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "evqe/rng.hpp"

namespace evqe {

/// Cost function with an evaluation counter; every evaluate() call
/// increments the counter by exactly one.
class Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Objective(std::size_t arity, Fn fn) : arity_(arity), fn_(std::move(fn)) {}

  double evaluate(std::span<const double> x) {
    ++evaluations_;
    return fn_(x);
  }

  std::size_t arity() const { return arity_; }
  std::uint64_t evaluations() const { return evaluations_; }

 private:
  std::size_t arity_;
  Fn fn_;
  std::uint64_t evaluations_ = 0;
};

struct OptResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex (reflection 1, expansion 2, contraction 0.5, shrink
/// 0.5). The initial simplex is x0 plus a 0.1 offset per coordinate. Stops
/// when the simplex value spread drops below `tol` or after `max_iter`
/// iterations; returns the best point ever evaluated. Evaluations are at
/// most (arity + 1) + max_iter * (arity + 2).
/// Throws std::runtime_error on a non-finite objective value.
OptResult nelder_mead(Objective& obj, std::span<const double> x0,
                      int max_iter, double tol = 1e-10);

/// SPSA gain schedule: a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma.
struct SpsaGains {
  double a = 0.2;
  double c = 0.1;
  double big_a = 0.0;  // 0 selects max_iter / 10
  double alpha = 0.602;
  double gamma = 0.101;
};

/// Simultaneous perturbation stochastic approximation. Each iteration draws
/// a Rademacher perturbation and estimates the gradient from two objective
/// evaluations at x +- c_k * delta; after max_iter iterations the final
/// iterate is evaluated once more, for exactly 2 * max_iter + 1 evaluations.
/// Returns the best point among everything evaluated.
OptResult spsa(Objective& obj, std::span<const double> x0, int max_iter,
               Rng& rng, const SpsaGains& gains = {});

enum class OptimizerKind { NelderMead, Spsa };

/// Dispatches on `kind`; rng is only consumed by SPSA.
OptResult minimize(OptimizerKind kind, Objective& obj,
                   std::span<const double> x0, int max_iter, Rng& rng,
                   const SpsaGains& gains = {});

}  // namespace evqe
