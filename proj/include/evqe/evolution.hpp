#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "evqe/genome.hpp"
#include "evqe/hamiltonian.hpp"
#include "evqe/noise.hpp"
#include "evqe/optimizers.hpp"
#include "evqe/rng.hpp"
#include "evqe/simulator.hpp"

namespace evqe {

/// Energy of a circuit under the target Hamiltonian; the two concrete
/// evaluators are exact state-vector simulation and finite-shot sampling
/// through the depolarizing surrogate. The rng argument is only consumed by
/// stochastic evaluators.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual double energy(const Circuit& circuit, Rng& rng) const = 0;
  virtual bool stochastic() const = 0;
  virtual int n_qubits() const = 0;
};

class StatevectorEvaluator final : public Evaluator {
 public:
  explicit StatevectorEvaluator(PauliSum h);
  explicit StatevectorEvaluator(DenseHermitian h);

  double energy(const Circuit& circuit, Rng& rng) const override;
  bool stochastic() const override { return false; }
  int n_qubits() const override { return n_qubits_; }

 private:
  int n_qubits_;
  std::unique_ptr<PauliSum> pauli_;
  std::unique_ptr<DenseHermitian> dense_;
};

/// Averages shot_expectation over `noise.trajectories` depolarizing
/// trajectories; with p1 = p2 = 0 this is plain shot noise.
class ShotEvaluator final : public Evaluator {
 public:
  ShotEvaluator(PauliSum h, NoiseConfig noise);

  double energy(const Circuit& circuit, Rng& rng) const override;
  bool stochastic() const override { return true; }
  int n_qubits() const override { return h_.n_qubits(); }

 private:
  PauliSum h_;
  NoiseConfig noise_;
};

struct MutationProbs {
  double topological = 0.8;  // tau
  double parameter = 0.3;    // pi
  double removal = 0.1;      // rho
};

/// IdentityInit appends new genes with all parameters zero; FixedCx is the
/// ablation variant whose grown CU3s are fixed CX-like gates, excluded from
/// optimization. Initial genes are identity-initialized in both modes so
/// ablation runs share their first generation exactly.
enum class GrowthMode { IdentityInit, FixedCx };

struct EvqeConfig {
  int population = 50;
  int generations = 20;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t distance_threshold = 2;
  int opt_iterations = 100;
  MutationProbs mutation_probs;
  std::uint64_t seed = 0;
  GrowthMode growth = GrowthMode::IdentityInit;
  OptimizerKind optimizer = OptimizerKind::NelderMead;
  SpsaGains spsa_gains;
  int workers = 1;

  void validate() const;
};

struct Individual {
  Genome genome;
  double energy = 0.0;
  bool energy_valid = false;
  double fitness = 0.0;
  double adjusted_fitness = 0.0;
  int species = -1;
};

/// Species representatives for distance tests, in species-id order. A
/// genome joins the first representative within the distance threshold;
/// otherwise it is appended here, founding a new species. Species ids are
/// never reused.
struct SpeciesSet {
  struct Rep {
    Genome genome;
    int species = 0;
  };
  std::vector<Rep> representatives;
  int next_species = 0;
};

struct GenerationRow {
  int generation = 0;
  double best_energy = 0.0;
  double best_fitness = 0.0;
  std::size_t best_depth = 0;
  std::size_t best_cu3 = 0;
  std::size_t species_count = 0;
  double mean_energy = 0.0;
  std::uint64_t cumulative_evaluations = 0;
};

struct RunRecord {
  std::vector<GenerationRow> rows;
  Genome best_genome;
  double best_energy = 0.0;
  double best_fitness = 0.0;
  GenomeMetrics best_metrics;
  std::uint64_t total_evaluations = 0;
};

/// fitness = energy + alpha * depth + beta * cu3_count.
double fitness(double energy, const GenomeMetrics& m, double alpha,
               double beta);
double fitness(double energy, const Genome& genome,
               const GeneRegistry& registry, double alpha, double beta);

/// f / |S|. Throws std::logic_error when species_size is 0.
double adjusted_fitness(double f, std::size_t species_size);

/// First-fit species assignment against the representative list; genomes
/// beyond the threshold of every representative found a new species.
void assign_species(std::vector<Individual>& population, SpeciesSet& species,
                    std::size_t distance_threshold);

/// P draws with replacement. Weights are (worst - f_i^a) + 0.01 * spread
/// over the adjusted fitnesses, so the minimizer always carries the largest
/// weight; a spread of zero degrades to uniform selection.
std::vector<std::size_t> select_parents(const std::vector<Individual>& population,
                                        std::size_t draws, Rng& rng);
std::vector<std::size_t> select_parents(const std::vector<double>& adjusted,
                                        std::size_t draws, Rng& rng);

/// tau: appends a fresh random gene (pruning rules against the current last
/// gene). IdentityInit leaves the energy of the built circuit unchanged.
Genome mutate_topological(const Genome& genome, int n_qubits,
                          GeneRegistry& registry, Rng& rng,
                          GrowthMode growth = GrowthMode::IdentityInit);

/// rho: keeps the first p gene instances, p uniform on {1, ..., m}.
/// A no-op on the empty genome.
Genome mutate_removal(const Genome& genome, Rng& rng);

/// Optimizes the parameters of one layer while every other layer stays
/// fixed; the result is kept only if it does not worsen `current_energy`.
/// Returns the updated energy estimate. Layers without optimizable
/// parameters are left untouched.
double optimize_layer(Genome& genome, std::size_t layer,
                      const GeneRegistry& registry, const Evaluator& evaluator,
                      OptimizerKind optimizer, int max_iter,
                      const SpsaGains& gains, double current_energy, Rng& rng,
                      std::uint64_t& evaluations);

/// pi: optimizes every layer once, in a random order. `visited_order`, when
/// given, receives the realized permutation. Returns the updated energy.
double mutate_parameter(Genome& genome, const GeneRegistry& registry,
                        const Evaluator& evaluator, OptimizerKind optimizer,
                        int max_iter, const SpsaGains& gains,
                        double current_energy, Rng& rng,
                        std::uint64_t& evaluations,
                        std::vector<std::size_t>* visited_order = nullptr);

struct GenerationView {
  int generation;
  const std::vector<Individual>& population;
  const GeneRegistry& registry;
};
using GenerationObserver = std::function<void(const GenerationView&)>;

/// The generational loop: P genomes seeded with one random layer each, then
/// per generation representative selection, last-gene optimization, fitness
/// and fitness sharing, proportional parent selection, mutation (rho, tau,
/// pi) and speciation. Returns the per-generation statistics stream and the
/// fittest genome encountered anywhere in the run (its raw energy is the
/// reported value). Identical (config, registry-empty) inputs give
/// identical records for any worker count.
RunRecord run_evqe(const EvqeConfig& config, const Evaluator& evaluator,
                   GeneRegistry& registry,
                   const GenerationObserver& observer = {});

}  // namespace evqe
