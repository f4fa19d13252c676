#include "evqe/noise.hpp"

#include <numbers>
#include <stdexcept>

namespace evqe {

void NoiseConfig::validate() const {
  if (shots < 1) throw std::invalid_argument("noise.shots must be >= 1");
  if (p1 < 0.0 || p1 > 1.0) throw std::invalid_argument("noise.p1 must be in [0, 1]");
  if (p2 < 0.0 || p2 > 1.0) throw std::invalid_argument("noise.p2 must be in [0, 1]");
  if (trajectories < 1) {
    throw std::invalid_argument("noise.trajectories must be >= 1");
  }
}

double shot_expectation(const Circuit& circuit, const PauliSum& h,
                        std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  StateVector state = run_circuit(circuit);
  double total = 0.0;
  for (const auto& term : h.terms()) {
    if (pauli_mask(term.paulis).support == 0) {
      total += term.coefficient;
      continue;
    }
    auto counts = sample_counts(state, term.paulis, shots, rng);
    total += term.coefficient * parity_mean(counts, term.paulis);
  }
  return total;
}

Circuit depolarize_trajectory(const Circuit& circuit, double p1, double p2,
                              Rng& rng) {
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
    throw std::invalid_argument("depolarizing probabilities must be in [0, 1]");
  }

  constexpr double pi = std::numbers::pi;
  auto random_pauli = [&rng, pi](int qubit) {
    switch (rng.index(3)) {
      case 0:
        return GateSpec::u3(qubit, pi, 0.0, pi);  // X
      case 1:
        return GateSpec::u3(qubit, pi, pi / 2.0, pi / 2.0);  // Y
      default:
        return GateSpec::u3(qubit, 0.0, 0.0, pi);  // Z
    }
  };

  Circuit noisy;
  noisy.n_qubits = circuit.n_qubits;
  for (const auto& layer : circuit.layers) {
    noisy.layers.push_back(layer);
    std::vector<GateSpec> insertions;
    for (const auto& gate : layer) {
      if (gate.kind == GateKind::U3) {
        if (rng.bernoulli(p1)) insertions.push_back(random_pauli(gate.target));
      } else if (gate.kind == GateKind::CU3) {
        if (rng.bernoulli(p2)) insertions.push_back(random_pauli(gate.control));
        if (rng.bernoulli(p2)) insertions.push_back(random_pauli(gate.target));
      }
    }
    if (!insertions.empty()) noisy.layers.push_back(std::move(insertions));
  }
  return noisy;
}

}  // namespace evqe
