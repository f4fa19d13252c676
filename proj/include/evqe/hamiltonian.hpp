#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace evqe {

using Complex = std::complex<double>;

/// One weighted Pauli string. Character k of `paulis` acts on qubit k
/// (little-endian, consistent with StateVector indexing).
struct PauliTerm {
  double coefficient = 0.0;
  std::string paulis;
};

/// Hamiltonian as a sum of Pauli strings. Construction validates string
/// lengths and characters and merges duplicate strings.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits);
  static PauliSum from_terms(int n_qubits, std::vector<PauliTerm> terms);

  /// Adds coefficient * paulis, merging into an existing identical string.
  void add_term(double coefficient, const std::string& paulis);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// Dense Hermitian matrix, row-major, dim x dim.
struct DenseHermitian {
  std::size_t dim = 0;
  std::vector<Complex> entries;

  DenseHermitian() = default;
  explicit DenseHermitian(std::size_t d) : dim(d), entries(d * d, 0.0) {}

  Complex& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
  const Complex& at(std::size_t i, std::size_t j) const {
    return entries[i * dim + j];
  }

  /// Largest |H[i][j] - conj(H[j][i])| over all entries.
  double hermiticity_defect() const;
};

/// Undirected weighted graph; edges are stored with u < v.
struct Graph {
  struct Edge {
    int u = 0;
    int v = 0;
    double weight = 1.0;
  };

  int n_vertices = 0;
  std::vector<Edge> edges;

  /// Throws on self-loops, duplicate edges, or out-of-range endpoints.
  void validate() const;
};

/// Bitmask form of a Pauli string used by expectation, sampling and dense
/// conversion. P|b> = phase(b) |b ^ x_mask> with
/// phase(b) = i^y_count * (-1)^popcount(b & sign_mask).
struct PauliMask {
  std::uint64_t x_mask = 0;     // qubits with X or Y (bit flip)
  std::uint64_t sign_mask = 0;  // qubits with Y or Z (sign from input bit)
  std::uint64_t support = 0;    // qubits with X, Y or Z (eigenvalue parity)
  int y_count = 0;

  Complex phase(std::uint64_t b) const;
};

/// Parses a Pauli string; throws std::invalid_argument on characters
/// outside {I, X, Y, Z}.
PauliMask pauli_mask(const std::string& paulis);

/// Expands the Pauli sum into a dense matrix. Capped at 10 qubits.
DenseHermitian to_dense(const PauliSum& h);

/// GUE-style random Hermitian: (B + B^dagger) / 2 with B having independent
/// standard-normal real and imaginary parts. Deterministic in the seed.
/// n_qubits must be in [1, 10].
DenseHermitian random_hermitian(int n_qubits, std::uint64_t seed);

/// Ising encoding of Max-Cut: sum over edges of (w/2) Z_u Z_v - (w/2) I.
/// The ground-state energy equals minus the maximum cut value.
PauliSum maxcut_ising(const Graph& g);

/// All eigenvalues of a dense Hermitian matrix (ascending), computed by
/// embedding into a 2n x 2n real symmetric matrix and running cyclic Jacobi
/// rotations to convergence. Each eigenvalue of the input appears once.
/// Throws std::invalid_argument if the input fails the Hermiticity check
/// or dim exceeds 1024.
std::vector<double> hermitian_eigenvalues(const DenseHermitian& h);

/// Minimum eigenvalue of h; the exact-diagonalization oracle.
double exact_ground_energy(const DenseHermitian& h);

/// Loads a Pauli sum from a text file: one `coefficient pauli_string` pair
/// per line, '#' starts a comment, blank lines ignored. All strings must
/// share one length. Errors carry 1-based line numbers.
PauliSum load_pauli_file(const std::string& path);

/// Pauli-basis coefficients of a dense Hermitian: c_P = Tr(P H) / 2^n.
/// Used to run shot-based evaluation on densely specified problems.
/// Capped at 6 qubits; terms below 1e-12 in magnitude are dropped.
PauliSum pauli_decompose(const DenseHermitian& h);

}  // namespace evqe
