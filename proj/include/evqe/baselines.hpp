#pragma once

#include <cstdint>
#include <vector>

#include "evqe/evolution.hpp"
#include "evqe/optimizers.hpp"
#include "evqe/simulator.hpp"

namespace evqe {

enum class AnsatzFamily { Ry, RyRz };
enum class Entanglement { Linear, Full };

/// Fixed-form heuristic ansatz: an initial rotation layer (Ry per qubit;
/// RyRz adds an Rz per qubit) followed by `depth` blocks of entangler layer
/// plus rotation layer. Linear entanglement couples neighbours (k, k+1);
/// full couples every ordered pair k < j. Rotations are U3 specializations:
/// Ry(t) = U3(t, 0, 0), Rz(l) = U3(0, 0, l).
struct AnsatzSpec {
  AnsatzFamily family = AnsatzFamily::Ry;
  Entanglement entanglement = Entanglement::Linear;
  int depth = 0;
  int n_qubits = 1;

  /// n(d+1) for Ry, 2n(d+1) for RyRz.
  std::size_t parameter_count() const;
  /// d(n-1) for linear, d n(n-1)/2 for full.
  std::size_t entangler_count() const;

  void validate() const;
};

/// Binds a parameter vector to the ansatz template.
/// Throws std::invalid_argument when params.size() != parameter_count().
Circuit build_ansatz(const AnsatzSpec& spec, std::span<const double> params);

struct VqeResult {
  double energy = 0.0;
  std::vector<double> params;
  std::uint64_t evaluations = 0;
};

/// Joint optimization of all ansatz parameters from a seeded uniform
/// initialization in [-pi, pi]; returns the best energy ever evaluated.
VqeResult run_vqe(const AnsatzSpec& spec, const Evaluator& evaluator,
                  OptimizerKind optimizer, int max_iter, std::uint64_t seed,
                  const SpsaGains& gains = {});

/// The no-entanglement floor: minimum expectation over a single layer of
/// one U3 per qubit, taken over `restarts` multistart Nelder-Mead runs.
double optimal_separable_energy(const Evaluator& evaluator, int restarts,
                                std::uint64_t seed);

}  // namespace evqe
