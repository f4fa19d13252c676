#pragma once

#include <cstdint>

#include "evqe/hamiltonian.hpp"
#include "evqe/rng.hpp"
#include "evqe/simulator.hpp"

namespace evqe {

/// Shot-based evaluation settings plus the parametric depolarizing model:
/// p1 is the per-U3 and p2 the per-CU3 depolarizing probability.
struct NoiseConfig {
  std::uint64_t shots = 1300;
  double p1 = 0.0;
  double p2 = 0.0;
  int trajectories = 1;

  void validate() const;
};

/// Finite-shot estimate of <psi|H|psi>: every Pauli term is measured
/// independently with `shots` samples after the appropriate basis change,
/// and the parity means are combined with the term coefficients. Terms with
/// empty support contribute their coefficient exactly.
double shot_expectation(const Circuit& circuit, const PauliSum& h,
                        std::uint64_t shots, Rng& rng);

/// One stochastic Pauli-insertion realization of the depolarizing channel:
/// after each U3, with probability p1 a uniformly chosen non-identity Pauli
/// (as its U3 equivalent) lands on the acted qubit; after each CU3 the same
/// happens independently on control and target with probability p2.
/// Insertions triggered by one layer share a following layer.
Circuit depolarize_trajectory(const Circuit& circuit, double p1, double p2,
                              Rng& rng);

}  // namespace evqe
