#include "evqe/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evqe {

namespace {

double checked_eval(Objective& obj, std::span<const double> x) {
  double v = obj.evaluate(x);
  if (!std::isfinite(v)) {
    throw std::runtime_error("objective returned a non-finite value");
  }
  return v;
}

}  // namespace

OptResult nelder_mead(Objective& obj, std::span<const double> x0,
                      int max_iter, double tol) {
  std::size_t n = obj.arity();
  if (n < 1) throw std::invalid_argument("nelder_mead needs arity >= 1");
  if (x0.size() != n) {
    throw std::invalid_argument("x0 size does not match objective arity");
  }

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;
  constexpr double kInitialStep = 0.1;

  std::uint64_t evals_before = obj.evaluations();
  std::vector<std::vector<double>> simplex(n + 1,
                                           std::vector<double>(x0.begin(),
                                                               x0.end()));
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += kInitialStep;

  std::vector<double> values(n + 1);
  OptResult result;
  auto track = [&](const std::vector<double>& x, double v) {
    if (result.best_params.empty() || v < result.best_value) {
      result.best_params = x;
      result.best_value = v;
    }
  };
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = checked_eval(obj, simplex[i]);
    track(simplex[i], values[i]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), candidate(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::size_t best = order[0];
    std::size_t worst = order[n];
    std::size_t second_worst = order[n - 1];

    if (values[worst] - values[best] < tol) {
      result.converged = true;
      break;
    }

    // Centroid of every vertex but the worst.
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coeff) {
      for (std::size_t d = 0; d < n; ++d) {
        candidate[d] = centroid[d] + coeff * (centroid[d] - simplex[worst][d]);
      }
    };

    blend(kReflect);
    double reflected = checked_eval(obj, candidate);
    track(candidate, reflected);

    if (reflected < values[best]) {
      std::vector<double> reflected_point = candidate;
      blend(kExpand);
      double expanded = checked_eval(obj, candidate);
      track(candidate, expanded);
      if (expanded < reflected) {
        simplex[worst] = candidate;
        values[worst] = expanded;
      } else {
        simplex[worst] = std::move(reflected_point);
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = candidate;
      values[worst] = reflected;
      continue;
    }

    // Contraction, outside or inside of the worst vertex.
    bool outside = reflected < values[worst];
    blend(outside ? kContract : -kContract);
    double contracted = checked_eval(obj, candidate);
    track(candidate, contracted);
    if (contracted < std::min(reflected, values[worst])) {
      simplex[worst] = candidate;
      values[worst] = contracted;
      continue;
    }

    // Shrink every vertex toward the best.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) {
        simplex[i][d] =
            simplex[best][d] + kShrink * (simplex[i][d] - simplex[best][d]);
      }
      values[i] = checked_eval(obj, simplex[i]);
      track(simplex[i], values[i]);
    }
  }

  result.evaluations = obj.evaluations() - evals_before;
  return result;
}

OptResult spsa(Objective& obj, std::span<const double> x0, int max_iter,
               Rng& rng, const SpsaGains& gains) {
  std::size_t n = obj.arity();
  if (n < 1) throw std::invalid_argument("spsa needs arity >= 1");
  if (x0.size() != n) {
    throw std::invalid_argument("x0 size does not match objective arity");
  }

  double big_a = gains.big_a > 0.0 ? gains.big_a : max_iter / 10.0;
  std::uint64_t evals_before = obj.evaluations();

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> plus(n), minus(n);
  std::vector<int> delta(n);
  OptResult result;
  auto track = [&](const std::vector<double>& point, double v) {
    if (result.best_params.empty() || v < result.best_value) {
      result.best_params = point;
      result.best_value = v;
    }
  };

  for (int k = 0; k < max_iter; ++k) {
    double ak = gains.a / std::pow(k + 1.0 + big_a, gains.alpha);
    double ck = gains.c / std::pow(k + 1.0, gains.gamma);
    for (std::size_t d = 0; d < n; ++d) delta[d] = rng.rademacher();
    for (std::size_t d = 0; d < n; ++d) {
      plus[d] = x[d] + ck * delta[d];
      minus[d] = x[d] - ck * delta[d];
    }
    double f_plus = checked_eval(obj, plus);
    track(plus, f_plus);
    double f_minus = checked_eval(obj, minus);
    track(minus, f_minus);
    double diff = (f_plus - f_minus) / (2.0 * ck);
    for (std::size_t d = 0; d < n; ++d) {
      x[d] -= ak * diff / delta[d];
    }
  }

  double f_final = checked_eval(obj, x);
  track(x, f_final);

  result.converged = true;
  result.evaluations = obj.evaluations() - evals_before;
  return result;
}

OptResult minimize(OptimizerKind kind, Objective& obj,
                   std::span<const double> x0, int max_iter, Rng& rng,
                   const SpsaGains& gains) {
  switch (kind) {
    case OptimizerKind::NelderMead:
      return nelder_mead(obj, x0, max_iter);
    case OptimizerKind::Spsa:
      return spsa(obj, x0, max_iter, rng, gains);
  }
  throw std::logic_error("unknown optimizer kind");
}

}  // namespace evqe
