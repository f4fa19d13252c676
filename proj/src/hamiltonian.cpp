#include "evqe/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "evqe/rng.hpp"

namespace evqe {

namespace {

constexpr int kMaxDenseQubits = 10;
constexpr std::size_t kMaxEigDim = 1024;

void check_pauli_chars(const std::string& s) {
  for (char c : s) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument(std::string("invalid Pauli character '") +
                                  c + "' in \"" + s + "\"");
    }
  }
}

std::size_t dim_for(int n_qubits) { return std::size_t{1} << n_qubits; }

}  // namespace

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("PauliSum needs n_qubits >= 1");
}

PauliSum PauliSum::from_terms(int n_qubits, std::vector<PauliTerm> terms) {
  PauliSum h(n_qubits);
  for (auto& t : terms) h.add_term(t.coefficient, t.paulis);
  return h;
}

void PauliSum::add_term(double coefficient, const std::string& paulis) {
  if (static_cast<int>(paulis.size()) != n_qubits_) {
    throw std::invalid_argument("Pauli string \"" + paulis + "\" has length " +
                                std::to_string(paulis.size()) + ", expected " +
                                std::to_string(n_qubits_));
  }
  check_pauli_chars(paulis);
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("non-finite coefficient for \"" + paulis +
                                "\"");
  }
  for (auto& t : terms_) {
    if (t.paulis == paulis) {
      t.coefficient += coefficient;
      return;
    }
  }
  terms_.push_back({coefficient, paulis});
}

double DenseHermitian::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    }
  }
  return worst;
}

void Graph::validate() const {
  if (n_vertices < 1) throw std::invalid_argument("graph needs n_vertices >= 1");
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n_vertices || e.v >= n_vertices) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) +
                                  ") outside vertex range");
    }
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    }
    auto key = std::minmax(e.u, e.v);
    if (seen[key]) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) +
                                  ", " + std::to_string(e.v) + ")");
    }
    seen[key] = true;
  }
}

Complex PauliMask::phase(std::uint64_t b) const {
  static const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex p = i_pow[y_count & 3];
  if (std::popcount(b & sign_mask) & 1) p = -p;
  return p;
}

PauliMask pauli_mask(const std::string& paulis) {
  check_pauli_chars(paulis);
  PauliMask m;
  for (std::size_t k = 0; k < paulis.size(); ++k) {
    std::uint64_t bit = std::uint64_t{1} << k;
    switch (paulis[k]) {
      case 'X':
        m.x_mask |= bit;
        m.support |= bit;
        break;
      case 'Y':
        m.x_mask |= bit;
        m.sign_mask |= bit;
        m.support |= bit;
        ++m.y_count;
        break;
      case 'Z':
        m.sign_mask |= bit;
        m.support |= bit;
        break;
      default:
        break;
    }
  }
  return m;
}

DenseHermitian to_dense(const PauliSum& h) {
  if (h.n_qubits() > kMaxDenseQubits) {
    throw std::invalid_argument("to_dense capped at " +
                                std::to_string(kMaxDenseQubits) + " qubits");
  }
  std::size_t dim = dim_for(h.n_qubits());
  DenseHermitian m(dim);
  for (const auto& term : h.terms()) {
    PauliMask mask = pauli_mask(term.paulis);
    for (std::uint64_t col = 0; col < dim; ++col) {
      std::uint64_t row = col ^ mask.x_mask;
      m.at(row, col) += term.coefficient * mask.phase(col);
    }
  }
  return m;
}

DenseHermitian random_hermitian(int n_qubits, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > kMaxDenseQubits) {
    throw std::invalid_argument("random_hermitian needs n_qubits in [1, " +
                                std::to_string(kMaxDenseQubits) + "]");
  }
  std::size_t dim = dim_for(n_qubits);
  Rng rng(seed);
  DenseHermitian b(dim);
  for (auto& entry : b.entries) {
    double re = rng.normal();
    double im = rng.normal();
    entry = Complex(re, im);
  }
  DenseHermitian h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      h.at(i, j) = 0.5 * (b.at(i, j) + std::conj(b.at(j, i)));
    }
  }
  return h;
}

PauliSum maxcut_ising(const Graph& g) {
  g.validate();
  PauliSum h(g.n_vertices);
  const std::string identity(g.n_vertices, 'I');
  for (const auto& e : g.edges) {
    std::string zz = identity;
    zz[e.u] = 'Z';
    zz[e.v] = 'Z';
    h.add_term(0.5 * e.weight, zz);
    h.add_term(-0.5 * e.weight, identity);
  }
  return h;
}

namespace {

// Cyclic Jacobi on a real symmetric matrix, in place. Returns the diagonal.
std::vector<double> jacobi_eigenvalues(std::vector<double>& a, std::size_t n) {
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        s += 2.0 * a[p * n + q] * a[p * n + q];
      }
    }
    return std::sqrt(s);
  };
  double frob = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) frob += a[i] * a[i];
  frob = std::sqrt(frob);
  const double tol = 1e-12 * std::max(frob, 1e-300);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::abs(apq) <= tol / (2.0 * n)) continue;
        double app = a[p * n + p];
        double aqq = a[q * n + q];
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k * n + p];
          double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p * n + k];
          double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
  return diag;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const DenseHermitian& h) {
  if (h.dim == 0 || h.dim > kMaxEigDim) {
    throw std::invalid_argument("eigensolver capped at dim " +
                                std::to_string(kMaxEigDim));
  }
  if (h.entries.size() != h.dim * h.dim) {
    throw std::invalid_argument("DenseHermitian entry count does not match dim");
  }
  double scale = 0.0;
  for (const auto& e : h.entries) scale = std::max(scale, std::abs(e));
  if (h.hermiticity_defect() > 1e-9 * std::max(scale, 1.0)) {
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  }

  // Embed H = A + iB as [[A, -B], [B, A]]; the embedding is symmetric and
  // carries each eigenvalue of H twice.
  std::size_t n = h.dim;
  std::size_t m = 2 * n;
  std::vector<double> real_sym(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re = h.at(i, j).real();
      double im = h.at(i, j).imag();
      real_sym[i * m + j] = re;
      real_sym[(i + n) * m + (j + n)] = re;
      real_sym[i * m + (j + n)] = -im;
      real_sym[(i + n) * m + j] = im;
    }
  }
  std::vector<double> doubled = jacobi_eigenvalues(real_sym, m);
  std::sort(doubled.begin(), doubled.end());
  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = doubled[2 * i];
  return eigs;
}

double exact_ground_energy(const DenseHermitian& h) {
  return hermitian_eigenvalues(h).front();
}

PauliSum load_pauli_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Pauli file: " + path);

  std::vector<PauliTerm> terms;
  std::string line;
  int line_no = 0;
  int length = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ss(line);
    double coeff;
    std::string paulis;
    if (!(ss >> coeff)) {
      // Blank (or comment-only) line.
      std::string leftover;
      if (ss.clear(), ss >> leftover) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected `coefficient pauli_string`");
      }
      continue;
    }
    if (!(ss >> paulis)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": missing Pauli string");
    }
    std::string extra;
    if (ss >> extra) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": trailing content \"" + extra + "\"");
    }
    try {
      check_pauli_chars(paulis);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
    if (length < 0) {
      length = static_cast<int>(paulis.size());
    } else if (static_cast<int>(paulis.size()) != length) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": Pauli string length " +
                               std::to_string(paulis.size()) +
                               " does not match earlier length " +
                               std::to_string(length));
    }
    terms.push_back({coeff, paulis});
  }
  if (length < 0) {
    throw std::runtime_error(path + ": no terms found");
  }
  return PauliSum::from_terms(length, std::move(terms));
}

PauliSum pauli_decompose(const DenseHermitian& h) {
  int n_qubits = 1;
  while (dim_for(n_qubits) < h.dim) ++n_qubits;
  if (h.dim < 2 || dim_for(n_qubits) != h.dim) {
    throw std::invalid_argument("matrix dim is not a power of two >= 2");
  }
  if (n_qubits > 6) {
    throw std::invalid_argument("pauli_decompose capped at 6 qubits");
  }

  const char alphabet[4] = {'I', 'X', 'Y', 'Z'};
  std::size_t dim = h.dim;
  PauliSum result(n_qubits);
  std::size_t n_strings = 1;
  for (int k = 0; k < n_qubits; ++k) n_strings *= 4;
  for (std::size_t code = 0; code < n_strings; ++code) {
    std::string s(n_qubits, 'I');
    std::size_t c = code;
    for (int k = 0; k < n_qubits; ++k) {
      s[k] = alphabet[c & 3];
      c >>= 2;
    }
    PauliMask mask = pauli_mask(s);
    Complex trace = 0.0;
    for (std::uint64_t col = 0; col < dim; ++col) {
      // (P H)[col][col] = P[col][col ^ x] H[col ^ x][col]
      trace += mask.phase(col ^ mask.x_mask) * h.at(col ^ mask.x_mask, col);
    }
    double coeff = (trace / static_cast<double>(dim)).real();
    if (std::abs(coeff) > 1e-12) result.add_term(coeff, s);
  }
  return result;
}

}  // namespace evqe
