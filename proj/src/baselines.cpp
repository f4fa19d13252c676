#include "evqe/baselines.hpp"

#include <numbers>
#include <stdexcept>

namespace evqe {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::size_t AnsatzSpec::parameter_count() const {
  std::size_t per_layer = static_cast<std::size_t>(n_qubits) *
                          (family == AnsatzFamily::RyRz ? 2 : 1);
  return per_layer * static_cast<std::size_t>(depth + 1);
}

std::size_t AnsatzSpec::entangler_count() const {
  std::size_t per_block =
      entanglement == Entanglement::Linear
          ? static_cast<std::size_t>(n_qubits - 1)
          : static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2;
  return per_block * static_cast<std::size_t>(depth);
}

void AnsatzSpec::validate() const {
  if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits) {
    throw std::invalid_argument("ansatz n_qubits out of range");
  }
  if (depth < 0) throw std::invalid_argument("ansatz depth must be >= 0");
}

Circuit build_ansatz(const AnsatzSpec& spec, std::span<const double> params) {
  spec.validate();
  if (params.size() != spec.parameter_count()) {
    throw std::invalid_argument("expected " +
                                std::to_string(spec.parameter_count()) +
                                " ansatz parameters, got " +
                                std::to_string(params.size()));
  }

  Circuit circuit;
  circuit.n_qubits = spec.n_qubits;
  std::size_t next = 0;

  auto rotation_layers = [&] {
    std::vector<GateSpec> ry_layer;
    for (int q = 0; q < spec.n_qubits; ++q) {
      ry_layer.push_back(GateSpec::u3(q, params[next++], 0.0, 0.0));
    }
    circuit.layers.push_back(std::move(ry_layer));
    if (spec.family == AnsatzFamily::RyRz) {
      std::vector<GateSpec> rz_layer;
      for (int q = 0; q < spec.n_qubits; ++q) {
        rz_layer.push_back(GateSpec::u3(q, 0.0, 0.0, params[next++]));
      }
      circuit.layers.push_back(std::move(rz_layer));
    }
  };

  rotation_layers();
  for (int block = 0; block < spec.depth; ++block) {
    std::vector<GateSpec> entangler;
    if (spec.entanglement == Entanglement::Linear) {
      for (int q = 0; q + 1 < spec.n_qubits; ++q) {
        entangler.push_back(GateSpec::cu3(q, q + 1, kPi, 0.0, kPi));
      }
    } else {
      for (int c = 0; c < spec.n_qubits; ++c) {
        for (int t = c + 1; t < spec.n_qubits; ++t) {
          entangler.push_back(GateSpec::cu3(c, t, kPi, 0.0, kPi));
        }
      }
    }
    circuit.layers.push_back(std::move(entangler));
    rotation_layers();
  }
  return circuit;
}

VqeResult run_vqe(const AnsatzSpec& spec, const Evaluator& evaluator,
                  OptimizerKind optimizer, int max_iter, std::uint64_t seed,
                  const SpsaGains& gains) {
  spec.validate();
  if (spec.n_qubits != evaluator.n_qubits()) {
    throw std::invalid_argument("ansatz and Hamiltonian qubit counts differ");
  }

  Rng rng(seed);
  std::vector<double> x0(spec.parameter_count());
  for (double& x : x0) x = rng.uniform(-kPi, kPi);

  Objective objective(x0.size(), [&](std::span<const double> x) {
    return evaluator.energy(build_ansatz(spec, x), rng);
  });
  OptResult result = minimize(optimizer, objective, x0, max_iter, rng, gains);

  return {result.best_value, std::move(result.best_params),
          result.evaluations};
}

double optimal_separable_energy(const Evaluator& evaluator, int restarts,
                                std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  int n = evaluator.n_qubits();

  Rng rng(seed);
  double best = 0.0;
  bool first = true;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0(3 * static_cast<std::size_t>(n));
    for (double& x : x0) x = rng.uniform(-kPi, kPi);

    Objective objective(x0.size(), [&](std::span<const double> x) {
      Circuit circuit;
      circuit.n_qubits = n;
      std::vector<GateSpec> layer;
      for (int q = 0; q < n; ++q) {
        layer.push_back(
            GateSpec::u3(q, x[3 * q], x[3 * q + 1], x[3 * q + 2]));
      }
      circuit.layers.push_back(std::move(layer));
      return evaluator.energy(circuit, rng);
    });
    OptResult result = nelder_mead(objective, x0, 2000, 1e-12);
    if (first || result.best_value < best) {
      best = result.best_value;
      first = false;
    }
  }
  return best;
}

}  // namespace evqe
