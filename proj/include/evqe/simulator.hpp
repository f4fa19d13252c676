#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evqe/hamiltonian.hpp"
#include "evqe/rng.hpp"

namespace evqe {

/// Dense state vector over n qubits, little-endian: qubit 0 is the
/// least-significant index bit. Gate application is linear and does not
/// renormalize, so arbitrary (non-unit) vectors can be pushed through for
/// testing; unit inputs stay unit to 1e-10.
class StateVector {
 public:
  static constexpr int kMaxQubits = 16;

  /// |0...0> on n qubits. Throws std::invalid_argument outside [1, 16].
  explicit StateVector(int n_qubits);

  /// Wraps an explicit amplitude vector (length must be 2^n_qubits).
  static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amps);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::vector<Complex>& amplitudes() { return amps_; }
  Complex amp(std::uint64_t basis) const { return amps_[basis]; }

  double norm_sq() const;

 private:
  int n_qubits_;
  std::vector<Complex> amps_;
};

enum class GateKind { Identity, U3, CU3 };

/// A gate drawn from the set {I, U3, CU3}. The U3 convention is
///   [[cos(t/2),            -e^{i l} sin(t/2)],
///    [e^{i p} sin(t/2),     e^{i(p+l)} cos(t/2)]]
/// so U3(0,0,0) = I; CU3 applies that matrix on the target when the control
/// qubit is 1, with no extra control phase.
struct GateSpec {
  GateKind kind = GateKind::Identity;
  int target = 0;
  int control = -1;  // CU3 only
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;

  static GateSpec identity(int qubit) {
    return {GateKind::Identity, qubit, -1, 0.0, 0.0, 0.0};
  }
  static GateSpec u3(int qubit, double theta, double phi, double lambda) {
    return {GateKind::U3, qubit, -1, theta, phi, lambda};
  }
  static GateSpec cu3(int control, int target, double theta, double phi,
                      double lambda) {
    return {GateKind::CU3, target, control, theta, phi, lambda};
  }
};

/// Layered circuit; within a layer each qubit appears in at most one gate
/// (a CU3 consumes its control and its target).
struct Circuit {
  int n_qubits = 0;
  std::vector<std::vector<GateSpec>> layers;
};

/// The 2x2 U3 matrix, row-major.
void u3_matrix(double theta, double phi, double lambda, Complex out[4]);

/// Applies the gate in place; norm is preserved.
/// Throws std::out_of_range on invalid qubit indices and
/// std::invalid_argument when a CU3 control equals its target.
void apply_gate(StateVector& state, const GateSpec& gate);

/// Applies a raw 2x2 matrix to one qubit; basis-change helper for
/// measurement sampling.
void apply_single_qubit_matrix(StateVector& state, int qubit,
                               const Complex m[4]);

/// Applies all layers left to right. Throws std::invalid_argument on a
/// qubit-count mismatch.
void apply_circuit(StateVector& state, const Circuit& circuit);

/// Convenience: |0...0> pushed through the circuit.
StateVector run_circuit(const Circuit& circuit);

/// <psi|H|psi>. The imaginary residue is below 1e-10 for Hermitian input
/// and is discarded. Throws std::invalid_argument on dimension mismatch.
double expectation(const StateVector& state, const PauliSum& h);
double expectation(const StateVector& state, const DenseHermitian& h);

/// Measures every qubit in the basis given by `measured_pauli` (I/Z keep the
/// computational basis, X and Y rotate first) and returns a histogram of
/// basis-state outcomes summing to `shots`.
std::map<std::uint64_t, std::uint64_t> sample_counts(
    const StateVector& state, const std::string& measured_pauli,
    std::uint64_t shots, Rng& rng);

/// Mean Pauli eigenvalue (+1/-1 parity over the string's support) of a
/// sampled histogram.
double parity_mean(const std::map<std::uint64_t, std::uint64_t>& counts,
                   const std::string& measured_pauli);

}  // namespace evqe
