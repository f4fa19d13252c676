#include "evqe/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace evqe {

namespace {

void check_qubit(const StateVector& state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) +
                            " out of range for " +
                            std::to_string(state.n_qubits()) + " qubits");
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("n_qubits must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(n_qubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, 0.0);
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(int n_qubits,
                                         std::vector<Complex> amps) {
  StateVector s(n_qubits);
  if (amps.size() != s.dim()) {
    throw std::invalid_argument("amplitude count " +
                                std::to_string(amps.size()) +
                                " does not match 2^" +
                                std::to_string(n_qubits));
  }
  s.amps_ = std::move(amps);
  return s;
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void u3_matrix(double theta, double phi, double lambda, Complex out[4]) {
  double c = std::cos(theta / 2.0);
  double s = std::sin(theta / 2.0);
  out[0] = c;
  out[1] = -std::polar(s, lambda);
  out[2] = std::polar(s, phi);
  out[3] = std::polar(c, phi + lambda);
}

void apply_single_qubit_matrix(StateVector& state, int qubit,
                               const Complex m[4]) {
  check_qubit(state, qubit);
  auto& amps = state.amplitudes();
  std::uint64_t mask = std::uint64_t{1} << qubit;
  std::uint64_t lo = mask - 1;
  std::uint64_t hi = ~lo;
  std::uint64_t half = state.dim() >> 1;
  for (std::uint64_t i = 0; i < half; ++i) {
    std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
    std::uint64_t i1 = i0 | mask;
    Complex a0 = amps[i0];
    Complex a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_gate(StateVector& state, const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::Identity:
      check_qubit(state, gate.target);
      return;
    case GateKind::U3: {
      Complex m[4];
      u3_matrix(gate.theta, gate.phi, gate.lambda, m);
      apply_single_qubit_matrix(state, gate.target, m);
      return;
    }
    case GateKind::CU3: {
      check_qubit(state, gate.target);
      check_qubit(state, gate.control);
      if (gate.control == gate.target) {
        throw std::invalid_argument("CU3 control equals target (" +
                                    std::to_string(gate.target) + ")");
      }
      Complex m[4];
      u3_matrix(gate.theta, gate.phi, gate.lambda, m);
      auto& amps = state.amplitudes();
      std::uint64_t cmask = std::uint64_t{1} << gate.control;
      std::uint64_t tmask = std::uint64_t{1} << gate.target;
      std::uint64_t dim = state.dim();
      for (std::uint64_t i0 = 0; i0 < dim; ++i0) {
        if ((i0 & cmask) == 0 || (i0 & tmask) != 0) continue;
        std::uint64_t i1 = i0 | tmask;
        Complex a0 = amps[i0];
        Complex a1 = amps[i1];
        amps[i0] = m[0] * a0 + m[1] * a1;
        amps[i1] = m[2] * a0 + m[3] * a1;
      }
      return;
    }
  }
}

void apply_circuit(StateVector& state, const Circuit& circuit) {
  if (circuit.n_qubits != state.n_qubits()) {
    throw std::invalid_argument("circuit is on " +
                                std::to_string(circuit.n_qubits) +
                                " qubits, state on " +
                                std::to_string(state.n_qubits()));
  }
  for (const auto& layer : circuit.layers) {
    for (const auto& gate : layer) apply_gate(state, gate);
  }
}

StateVector run_circuit(const Circuit& circuit) {
  StateVector state(circuit.n_qubits);
  apply_circuit(state, circuit);
  return state;
}

double expectation(const StateVector& state, const PauliSum& h) {
  if (h.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Hamiltonian on " +
                                std::to_string(h.n_qubits()) +
                                " qubits, state on " +
                                std::to_string(state.n_qubits()));
  }
  const auto& amps = state.amplitudes();
  std::uint64_t dim = state.dim();
  Complex total = 0.0;
  for (const auto& term : h.terms()) {
    PauliMask mask = pauli_mask(term.paulis);
    Complex acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
      acc += std::conj(amps[b ^ mask.x_mask]) * mask.phase(b) * amps[b];
    }
    total += term.coefficient * acc;
  }
  return total.real();
}

double expectation(const StateVector& state, const DenseHermitian& h) {
  if (h.dim != state.dim()) {
    throw std::invalid_argument("matrix dim " + std::to_string(h.dim) +
                                " does not match state dim " +
                                std::to_string(state.dim()));
  }
  const auto& amps = state.amplitudes();
  Complex total = 0.0;
  for (std::size_t i = 0; i < h.dim; ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < h.dim; ++j) row += h.at(i, j) * amps[j];
    total += std::conj(amps[i]) * row;
  }
  return total.real();
}

std::map<std::uint64_t, std::uint64_t> sample_counts(
    const StateVector& state, const std::string& measured_pauli,
    std::uint64_t shots, Rng& rng) {
  if (static_cast<int>(measured_pauli.size()) != state.n_qubits()) {
    throw std::invalid_argument("Pauli string length " +
                                std::to_string(measured_pauli.size()) +
                                " does not match " +
                                std::to_string(state.n_qubits()) + " qubits");
  }
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  pauli_mask(measured_pauli);  // validates characters

  // Rotate X and Y onto the computational basis: H for X, H S^dagger for Y.
  static const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  static const Complex h_mat[4] = {
      {inv_sqrt2, 0}, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {-inv_sqrt2, 0}};
  static const Complex hsdg_mat[4] = {
      {inv_sqrt2, 0}, {0, -inv_sqrt2}, {inv_sqrt2, 0}, {0, inv_sqrt2}};

  StateVector rotated = state;
  for (std::size_t k = 0; k < measured_pauli.size(); ++k) {
    if (measured_pauli[k] == 'X') {
      apply_single_qubit_matrix(rotated, static_cast<int>(k), h_mat);
    } else if (measured_pauli[k] == 'Y') {
      apply_single_qubit_matrix(rotated, static_cast<int>(k), hsdg_mat);
    }
  }

  std::vector<double> cumulative(rotated.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < rotated.dim(); ++i) {
    acc += std::norm(rotated.amp(i));
    cumulative[i] = acc;
  }
  double total = cumulative.back();

  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    double r = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    std::uint64_t outcome = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 cumulative.size() - 1));
    ++counts[outcome];
  }
  return counts;
}

double parity_mean(const std::map<std::uint64_t, std::uint64_t>& counts,
                   const std::string& measured_pauli) {
  PauliMask mask = pauli_mask(measured_pauli);
  double sum = 0.0;
  std::uint64_t total = 0;
  for (const auto& [outcome, count] : counts) {
    int sign = (std::popcount(outcome & mask.support) & 1) ? -1 : 1;
    sum += sign * static_cast<double>(count);
    total += count;
  }
  return total == 0 ? 0.0 : sum / static_cast<double>(total);
}

}  // namespace evqe
