#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "evqe/baselines.hpp"
#include "evqe/evolution.hpp"
#include "evqe/hamiltonian.hpp"
#include "evqe/noise.hpp"

namespace evqe {

/// Invalid or inconsistent experiment configuration; the message names the
/// offending field. Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  enum class Kind { RandomHermitian, MaxCut, PauliFile };
  Kind kind = Kind::RandomHermitian;
  int n_qubits = 2;          // random_hermitian
  std::uint64_t seed = 0;    // random_hermitian
  std::string graph_file;    // maxcut
  std::string pauli_file;    // pauli_file
};

struct AlgorithmSpec {
  enum class Kind { Evqe, Vqe, SeparableBaseline };
  Kind kind = Kind::Evqe;
  EvqeConfig evqe;
  bool optimizer_given = false;  // explicit optimizer overrides the
                                 // evaluator-based default
  AnsatzSpec ansatz;             // vqe
  int vqe_max_iter = 400;        // vqe
  int restarts = 32;             // separable baseline
};

struct EvaluatorSpec {
  enum class Kind { Statevector, Shots };
  Kind kind = Kind::Statevector;
  NoiseConfig noise;
};

struct ExperimentConfig {
  ProblemSpec problem;
  AlgorithmSpec algorithm;
  EvaluatorSpec evaluator;
  std::uint64_t seed = 0;
  int ablate_seeds = 5;
  std::string out_dir = "out";
};

/// Parses the JSON config file. Throws ConfigError naming the offending
/// field; referenced files must exist at load time.
ExperimentConfig load_config(const std::string& path);

/// Graph file format: first line `n m`, then m lines `u v w`.
Graph load_graph_file(const std::string& path);

/// A problem instance resolved to concrete operators. The exact ground
/// energy is present whenever the oracle cap (dim <= 1024) allows it.
struct Problem {
  int n_qubits = 0;
  std::optional<PauliSum> pauli;
  std::optional<DenseHermitian> dense;
  std::optional<double> exact_ground;
  std::optional<Graph> graph;
};

Problem resolve_problem(const ProblemSpec& spec);

double cut_value(const Graph& g, std::uint64_t partition_mask);

struct MaxCutSolution {
  double value = 0.0;
  std::uint64_t partition_mask = 0;
};

/// Exhaustive scan over the 2^n partitions (vertex k = bit k).
MaxCutSolution brute_force_max_cut(const Graph& g);

/// `run` subcommand: executes the configured experiment, writes
/// <out_dir>/run.csv (EVQE runs) and <out_dir>/summary.json. State-vector
/// runs are byte-identical under a fixed seed for any worker count.
void run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                    int workers);

/// `oracle` subcommand: prints the exact ground energy and, for Max-Cut
/// problems, the brute-force cut value and one optimal partition.
void oracle_report(const ExperimentConfig& config, std::ostream& out);

struct AblationResult {
  std::vector<std::uint64_t> seeds;
  // [seed][generation] best-energy error against the exact ground energy.
  std::vector<std::vector<double>> standard_error;
  std::vector<std::vector<double>> cx_error;
};

/// `ablate` subcommand: EVQE-Standard versus EVQE-CX on identical seeds;
/// writes <out_dir>/ablate.csv with one error-column pair per seed.
AblationResult run_ablation(const ExperimentConfig& config,
                            const std::string& out_dir, int workers);

/// Shared fixed-point double formatting for CSV/JSON payloads (%.17g).
std::string format_double(double value);

}  // namespace evqe
