#include "evqe/evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "evqe/parallel.hpp"

namespace evqe {

StatevectorEvaluator::StatevectorEvaluator(PauliSum h)
    : n_qubits_(h.n_qubits()),
      pauli_(std::make_unique<PauliSum>(std::move(h))) {}

StatevectorEvaluator::StatevectorEvaluator(DenseHermitian h) {
  if (h.dim < 2 || !std::has_single_bit(h.dim)) {
    throw std::invalid_argument("dense Hamiltonian dim must be a power of two");
  }
  n_qubits_ = std::countr_zero(h.dim);
  dense_ = std::make_unique<DenseHermitian>(std::move(h));
}

double StatevectorEvaluator::energy(const Circuit& circuit, Rng&) const {
  StateVector state = run_circuit(circuit);
  return pauli_ ? expectation(state, *pauli_) : expectation(state, *dense_);
}

ShotEvaluator::ShotEvaluator(PauliSum h, NoiseConfig noise)
    : h_(std::move(h)), noise_(noise) {
  noise_.validate();
}

double ShotEvaluator::energy(const Circuit& circuit, Rng& rng) const {
  double sum = 0.0;
  for (int t = 0; t < noise_.trajectories; ++t) {
    Circuit trajectory =
        depolarize_trajectory(circuit, noise_.p1, noise_.p2, rng);
    sum += shot_expectation(trajectory, h_, noise_.shots, rng);
  }
  return sum / noise_.trajectories;
}

void EvqeConfig::validate() const {
  if (population < 2) throw std::invalid_argument("population must be >= 2");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  if (distance_threshold < 1) {
    throw std::invalid_argument("distance_threshold must be >= 1");
  }
  if (opt_iterations < 1) {
    throw std::invalid_argument("opt_iterations must be >= 1");
  }
  auto check_prob = [](double p, const char* name) {
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    }
  };
  check_prob(mutation_probs.topological, "mutation_probs.topological");
  check_prob(mutation_probs.parameter, "mutation_probs.parameter");
  check_prob(mutation_probs.removal, "mutation_probs.removal");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

double fitness(double energy, const GenomeMetrics& m, double alpha,
               double beta) {
  return energy + alpha * static_cast<double>(m.depth) +
         beta * static_cast<double>(m.cu3_count);
}

double fitness(double energy, const Genome& genome,
               const GeneRegistry& registry, double alpha, double beta) {
  return fitness(energy, metrics(genome, registry), alpha, beta);
}

double adjusted_fitness(double f, std::size_t species_size) {
  if (species_size == 0) {
    throw std::logic_error("adjusted fitness of an empty species");
  }
  return f / static_cast<double>(species_size);
}

void assign_species(std::vector<Individual>& population, SpeciesSet& species,
                    std::size_t distance_threshold) {
  for (auto& individual : population) {
    int assigned = -1;
    for (const auto& rep : species.representatives) {
      if (genetic_distance(individual.genome, rep.genome) <
          distance_threshold) {
        assigned = rep.species;
        break;
      }
    }
    if (assigned < 0) {
      assigned = species.next_species++;
      species.representatives.push_back({individual.genome, assigned});
    }
    individual.species = assigned;
  }
}

std::vector<std::size_t> select_parents(const std::vector<double>& adjusted,
                                        std::size_t draws, Rng& rng) {
  if (adjusted.empty()) {
    throw std::invalid_argument("selection over an empty population");
  }
  double worst = *std::max_element(adjusted.begin(), adjusted.end());
  double best = *std::min_element(adjusted.begin(), adjusted.end());
  double spread = worst - best;

  std::vector<double> cumulative(adjusted.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < adjusted.size(); ++i) {
    double w = spread == 0.0 ? 1.0 : (worst - adjusted[i]) + 0.01 * spread;
    acc += w;
    cumulative[i] = acc;
  }

  std::vector<std::size_t> picks(draws);
  for (std::size_t d = 0; d < draws; ++d) {
    double r = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    picks[d] = std::min<std::size_t>(it - cumulative.begin(),
                                     cumulative.size() - 1);
  }
  return picks;
}

std::vector<std::size_t> select_parents(const std::vector<Individual>& population,
                                        std::size_t draws, Rng& rng) {
  std::vector<double> adjusted(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    adjusted[i] = population[i].adjusted_fitness;
  }
  return select_parents(adjusted, draws, rng);
}

Genome mutate_topological(const Genome& genome, int n_qubits,
                          GeneRegistry& registry, Rng& rng,
                          GrowthMode growth) {
  const Gene* predecessor =
      genome.empty() ? nullptr : &registry.get(genome.genes.back().gene);
  const Gene& gene = random_gene(n_qubits, predecessor, rng, registry);

  GeneInstance instance;
  instance.gene = gene.id;
  instance.params.assign(gene.param_count(), 0.0);
  if (growth == GrowthMode::FixedCx) {
    constexpr double pi = std::numbers::pi;
    auto slots = gene.build_order();
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (slots[k].is_cu3) {
        instance.params[3 * k] = pi;
        instance.params[3 * k + 2] = pi;
      }
    }
    instance.cu3_frozen = true;
  }

  Genome child = genome;
  child.genes.push_back(std::move(instance));
  return child;
}

Genome mutate_removal(const Genome& genome, Rng& rng) {
  if (genome.empty()) return genome;
  std::size_t keep = 1 + rng.index(genome.depth());
  Genome child;
  child.genes.assign(genome.genes.begin(), genome.genes.begin() + keep);
  return child;
}

namespace {

// Gate slots of `layer` open to optimization: everything, except CU3 slots
// of frozen (CX-grown) instances.
std::vector<std::size_t> optimizable_slots(const Gene& gene,
                                           const GeneInstance& instance) {
  auto slots = gene.build_order();
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!(instance.cu3_frozen && slots[k].is_cu3)) open.push_back(k);
  }
  return open;
}

}  // namespace

double optimize_layer(Genome& genome, std::size_t layer,
                      const GeneRegistry& registry, const Evaluator& evaluator,
                      OptimizerKind optimizer, int max_iter,
                      const SpsaGains& gains, double current_energy, Rng& rng,
                      std::uint64_t& evaluations) {
  if (layer >= genome.depth()) {
    throw std::out_of_range("layer index beyond genome depth");
  }
  GeneInstance& instance = genome.genes[layer];
  const Gene& gene = registry.get(instance.gene);
  std::vector<std::size_t> open = optimizable_slots(gene, instance);
  if (open.empty()) return current_energy;

  Circuit circuit = build_circuit(genome, registry);
  std::vector<GateSpec>& gates = circuit.layers[layer];

  std::vector<double> x0(open.size() * 3);
  for (std::size_t t = 0; t < open.size(); ++t) {
    x0[3 * t] = instance.params[3 * open[t]];
    x0[3 * t + 1] = instance.params[3 * open[t] + 1];
    x0[3 * t + 2] = instance.params[3 * open[t] + 2];
  }

  Objective objective(x0.size(), [&](std::span<const double> x) {
    for (std::size_t t = 0; t < open.size(); ++t) {
      GateSpec& g = gates[open[t]];
      g.theta = x[3 * t];
      g.phi = x[3 * t + 1];
      g.lambda = x[3 * t + 2];
    }
    return evaluator.energy(circuit, rng);
  });

  OptResult result = minimize(optimizer, objective, x0, max_iter, rng, gains);
  evaluations += result.evaluations;

  if (result.best_value <= current_energy) {
    for (std::size_t t = 0; t < open.size(); ++t) {
      instance.params[3 * open[t]] = result.best_params[3 * t];
      instance.params[3 * open[t] + 1] = result.best_params[3 * t + 1];
      instance.params[3 * open[t] + 2] = result.best_params[3 * t + 2];
    }
    return result.best_value;
  }
  return current_energy;
}

double mutate_parameter(Genome& genome, const GeneRegistry& registry,
                        const Evaluator& evaluator, OptimizerKind optimizer,
                        int max_iter, const SpsaGains& gains,
                        double current_energy, Rng& rng,
                        std::uint64_t& evaluations,
                        std::vector<std::size_t>* visited_order) {
  if (genome.empty()) {
    throw std::invalid_argument("parameter mutation of an empty genome");
  }
  std::vector<std::size_t> order = rng.permutation(genome.depth());
  if (visited_order != nullptr) *visited_order = order;
  for (std::size_t layer : order) {
    current_energy =
        optimize_layer(genome, layer, registry, evaluator, optimizer, max_iter,
                       gains, current_energy, rng, evaluations);
  }
  return current_energy;
}

namespace {

struct BestTracker {
  bool set = false;
  Genome genome;
  double energy = 0.0;
  double fitness_value = 0.0;
  GenomeMetrics genome_metrics;

  void offer(const Individual& candidate, const GeneRegistry& registry) {
    if (!set || candidate.fitness < fitness_value) {
      set = true;
      genome = candidate.genome;
      energy = candidate.energy;
      fitness_value = candidate.fitness;
      genome_metrics = metrics(candidate.genome, registry);
    }
  }
};

}  // namespace

RunRecord run_evqe(const EvqeConfig& config, const Evaluator& evaluator,
                   GeneRegistry& registry,
                   const GenerationObserver& observer) {
  config.validate();
  const int n_qubits = evaluator.n_qubits();
  const std::size_t pop_size = static_cast<std::size_t>(config.population);
  Rng master(config.seed);

  // Step 1: P genomes, each grown once. Initial genes are
  // identity-initialized regardless of growth mode (see GrowthMode).
  std::vector<Individual> population(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    Rng stream = master.derive(0, i, 0);
    population[i].genome = mutate_topological(Genome{}, n_qubits, registry,
                                              stream, GrowthMode::IdentityInit);
  }

  SpeciesSet species;
  assign_species(population, species, config.distance_threshold);

  BestTracker best;
  std::uint64_t total_evaluations = 0;
  RunRecord record;

  for (int gen = 1; gen <= config.generations; ++gen) {
    // Step 2: one random representative per live species, id order.
    SpeciesSet generation_species;
    generation_species.next_species = species.next_species;
    {
      std::vector<int> ids;
      for (const auto& individual : population) {
        if (std::find(ids.begin(), ids.end(), individual.species) ==
            ids.end()) {
          ids.push_back(individual.species);
        }
      }
      std::sort(ids.begin(), ids.end());
      for (int id : ids) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pop_size; ++i) {
          if (population[i].species == id) members.push_back(i);
        }
        std::size_t pick = members[master.index(members.size())];
        generation_species.representatives.push_back(
            {population[pick].genome, id});
      }
    }

    // Step 3: refresh stale energies and optimize each genome's last gene.
    std::vector<std::uint64_t> step_evals(pop_size, 0);
    {
      std::vector<Rng> streams;
      streams.reserve(pop_size);
      for (std::size_t i = 0; i < pop_size; ++i) {
        streams.push_back(master.derive(gen, i, 1));
      }
      parallel_for(pop_size, config.workers, [&](std::size_t i) {
        Individual& ind = population[i];
        Rng& stream = streams[i];
        if (!ind.energy_valid) {
          ind.energy = evaluator.energy(build_circuit(ind.genome, registry),
                                        stream);
          ind.energy_valid = true;
          ++step_evals[i];
        }
        ind.energy = optimize_layer(
            ind.genome, ind.genome.depth() - 1, registry, evaluator,
            config.optimizer, config.opt_iterations, config.spsa_gains,
            ind.energy, stream, step_evals[i]);
      });
    }
    for (std::size_t i = 0; i < pop_size; ++i) total_evaluations += step_evals[i];

    // Step 4: fitness and fitness sharing.
    std::vector<std::size_t> species_size;
    for (const auto& ind : population) {
      std::size_t id = static_cast<std::size_t>(ind.species);
      if (id >= species_size.size()) species_size.resize(id + 1, 0);
      ++species_size[id];
    }
    for (auto& ind : population) {
      ind.fitness = fitness(ind.energy, ind.genome, registry, config.alpha,
                            config.beta);
      ind.adjusted_fitness =
          adjusted_fitness(ind.fitness, species_size[ind.species]);
    }

    // In shot-based mode the tracked best is re-measured each generation so
    // a single lucky reading cannot lock in.
    if (evaluator.stochastic() && best.set) {
      Rng stream = master.derive(gen, 0, 2);
      best.energy =
          evaluator.energy(build_circuit(best.genome, registry), stream);
      best.fitness_value =
          fitness(best.energy, best.genome_metrics, config.alpha, config.beta);
      ++total_evaluations;
    }
    for (const auto& ind : population) best.offer(ind, registry);

    double mean_energy = 0.0;
    for (const auto& ind : population) mean_energy += ind.energy;
    mean_energy /= static_cast<double>(pop_size);

    std::size_t live_species = 0;
    for (std::size_t count : species_size) live_species += count > 0;

    record.rows.push_back({gen, best.energy, best.fitness_value,
                           best.genome_metrics.depth,
                           best.genome_metrics.cu3_count, live_species,
                           mean_energy, total_evaluations});
    if (observer) observer({gen, population, registry});
    if (gen == config.generations) break;

    // Step 5: parent selection proportional to adjusted fitness.
    std::vector<std::size_t> parents =
        select_parents(population, pop_size, master);

    // Step 6: mutate each parent. Structural operators (rho, tau) run
    // serially so gene ids stay deterministic; pi runs in parallel.
    std::vector<Individual> children(pop_size);
    std::vector<Rng> streams;
    std::vector<char> wants_parameter(pop_size, 0);
    streams.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
      streams.push_back(master.derive(gen, i, 3));
      Rng& stream = streams[i];
      const Individual& parent = population[parents[i]];
      Individual& child = children[i];
      child.genome = parent.genome;
      child.energy = parent.energy;
      child.energy_valid = parent.energy_valid;

      bool do_removal = stream.bernoulli(config.mutation_probs.removal);
      bool do_topological = stream.bernoulli(config.mutation_probs.topological);
      wants_parameter[i] = stream.bernoulli(config.mutation_probs.parameter);

      if (do_removal) {
        std::size_t before = child.genome.depth();
        child.genome = mutate_removal(child.genome, stream);
        if (child.genome.depth() != before) child.energy_valid = false;
      }
      if (do_topological) {
        child.genome = mutate_topological(child.genome, n_qubits, registry,
                                          stream, config.growth);
        // Identity-initialized growth preserves the cached energy; a fixed
        // CX insertion does not.
        if (config.growth == GrowthMode::FixedCx) child.energy_valid = false;
      }
    }
    std::fill(step_evals.begin(), step_evals.end(), 0);
    parallel_for(pop_size, config.workers, [&](std::size_t i) {
      if (!wants_parameter[i]) return;
      Individual& child = children[i];
      Rng& stream = streams[i];
      if (!child.energy_valid) {
        child.energy = evaluator.energy(build_circuit(child.genome, registry),
                                        stream);
        child.energy_valid = true;
        ++step_evals[i];
      }
      child.energy = mutate_parameter(
          child.genome, registry, evaluator, config.optimizer,
          config.opt_iterations, config.spsa_gains, child.energy, stream,
          step_evals[i]);
    });
    for (std::size_t i = 0; i < pop_size; ++i) total_evaluations += step_evals[i];

    // Step 7: species assignment against this generation's representatives.
    assign_species(children, generation_species, config.distance_threshold);
    population = std::move(children);
    species = std::move(generation_species);
  }

  record.best_genome = best.genome;
  record.best_energy = best.energy;
  record.best_fitness = best.fitness_value;
  record.best_metrics = best.genome_metrics;
  record.total_evaluations = total_evaluations;
  return record;
}

}  // namespace evqe
