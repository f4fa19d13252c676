#include "evqe/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace evqe {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
  throw ConfigError("config field `" + field + "`: " + why);
}

const json& require(const json& node, const std::string& path,
                    const std::string& key) {
  if (!node.contains(key)) fail_field(path + key, "missing");
  return node.at(key);
}

double get_number(const json& node, const std::string& path,
                  const std::string& key, double fallback,
                  bool required = false) {
  if (!node.contains(key)) {
    if (required) fail_field(path + key, "missing");
    return fallback;
  }
  if (!node.at(key).is_number()) fail_field(path + key, "expected a number");
  return node.at(key).get<double>();
}

std::int64_t get_int(const json& node, const std::string& path,
                     const std::string& key, std::int64_t fallback,
                     bool required = false) {
  if (!node.contains(key)) {
    if (required) fail_field(path + key, "missing");
    return fallback;
  }
  if (!node.at(key).is_number_integer()) {
    fail_field(path + key, "expected an integer");
  }
  return node.at(key).get<std::int64_t>();
}

std::string get_string(const json& node, const std::string& path,
                       const std::string& key, const std::string& fallback,
                       bool required = false) {
  if (!node.contains(key)) {
    if (required) fail_field(path + key, "missing");
    return fallback;
  }
  if (!node.at(key).is_string()) fail_field(path + key, "expected a string");
  return node.at(key).get<std::string>();
}

void check_file_exists(const std::string& path, const std::string& field) {
  if (!std::filesystem::exists(path)) {
    fail_field(field, "file does not exist: " + path);
  }
}

ProblemSpec parse_problem(const json& node) {
  ProblemSpec spec;
  std::string type = get_string(node, "problem.", "type", "", true);
  if (type == "random_hermitian") {
    spec.kind = ProblemSpec::Kind::RandomHermitian;
    spec.n_qubits =
        static_cast<int>(get_int(node, "problem.", "n_qubits", 0, true));
    if (spec.n_qubits < 1 || spec.n_qubits > 10) {
      fail_field("problem.n_qubits", "must be in [1, 10]");
    }
    spec.seed = static_cast<std::uint64_t>(
        get_int(node, "problem.", "seed", 0, true));
  } else if (type == "maxcut") {
    spec.kind = ProblemSpec::Kind::MaxCut;
    spec.graph_file = get_string(node, "problem.", "graph_file", "", true);
    check_file_exists(spec.graph_file, "problem.graph_file");
  } else if (type == "pauli_file") {
    spec.kind = ProblemSpec::Kind::PauliFile;
    spec.pauli_file = get_string(node, "problem.", "path", "", true);
    check_file_exists(spec.pauli_file, "problem.path");
  } else {
    fail_field("problem.type", "unknown type \"" + type + "\"");
  }
  return spec;
}

OptimizerKind parse_optimizer(const std::string& name,
                              const std::string& field) {
  if (name == "nelder_mead") return OptimizerKind::NelderMead;
  if (name == "spsa") return OptimizerKind::Spsa;
  fail_field(field, "unknown optimizer \"" + name + "\"");
}

AlgorithmSpec parse_algorithm(const json& node) {
  AlgorithmSpec spec;
  std::string type = get_string(node, "algorithm.", "type", "", true);
  if (type == "evqe") {
    spec.kind = AlgorithmSpec::Kind::Evqe;
    EvqeConfig& c = spec.evqe;
    c.population =
        static_cast<int>(get_int(node, "algorithm.", "population", 50));
    c.generations =
        static_cast<int>(get_int(node, "algorithm.", "generations", 20));
    c.alpha = get_number(node, "algorithm.", "alpha", 0.0);
    c.beta = get_number(node, "algorithm.", "beta", 0.0);
    c.distance_threshold = static_cast<std::size_t>(
        get_int(node, "algorithm.", "distance_threshold", 2));
    c.opt_iterations =
        static_cast<int>(get_int(node, "algorithm.", "opt_iterations", 100));
    if (node.contains("mutation_probs")) {
      const json& probs = node.at("mutation_probs");
      c.mutation_probs.topological =
          get_number(probs, "algorithm.mutation_probs.", "topological", 0.8);
      c.mutation_probs.parameter =
          get_number(probs, "algorithm.mutation_probs.", "parameter", 0.3);
      c.mutation_probs.removal =
          get_number(probs, "algorithm.mutation_probs.", "removal", 0.1);
    }
    std::string growth = get_string(node, "algorithm.", "growth", "identity");
    if (growth == "identity") {
      c.growth = GrowthMode::IdentityInit;
    } else if (growth == "cx") {
      c.growth = GrowthMode::FixedCx;
    } else {
      fail_field("algorithm.growth", "expected \"identity\" or \"cx\"");
    }
    if (node.contains("optimizer")) {
      c.optimizer = parse_optimizer(
          get_string(node, "algorithm.", "optimizer", "", true),
          "algorithm.optimizer");
      spec.optimizer_given = true;
    }
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      fail_field("algorithm", e.what());
    }
  } else if (type == "vqe") {
    spec.kind = AlgorithmSpec::Kind::Vqe;
    const json& ansatz = require(node, "algorithm.", "ansatz");
    std::string family =
        get_string(ansatz, "algorithm.ansatz.", "family", "", true);
    if (family == "ry") {
      spec.ansatz.family = AnsatzFamily::Ry;
    } else if (family == "ryrz") {
      spec.ansatz.family = AnsatzFamily::RyRz;
    } else {
      fail_field("algorithm.ansatz.family", "expected \"ry\" or \"ryrz\"");
    }
    std::string ent = get_string(ansatz, "algorithm.ansatz.", "entanglement",
                                 "linear");
    if (ent == "linear") {
      spec.ansatz.entanglement = Entanglement::Linear;
    } else if (ent == "full") {
      spec.ansatz.entanglement = Entanglement::Full;
    } else {
      fail_field("algorithm.ansatz.entanglement",
                 "expected \"linear\" or \"full\"");
    }
    spec.ansatz.depth =
        static_cast<int>(get_int(ansatz, "algorithm.ansatz.", "depth", 1));
    if (spec.ansatz.depth < 0) {
      fail_field("algorithm.ansatz.depth", "must be >= 0");
    }
    spec.vqe_max_iter =
        static_cast<int>(get_int(node, "algorithm.", "max_iter", 400));
    if (spec.vqe_max_iter < 1) fail_field("algorithm.max_iter", "must be >= 1");
    if (node.contains("optimizer")) {
      spec.evqe.optimizer = parse_optimizer(
          get_string(node, "algorithm.", "optimizer", "", true),
          "algorithm.optimizer");
      spec.optimizer_given = true;
    }
  } else if (type == "separable_baseline") {
    spec.kind = AlgorithmSpec::Kind::SeparableBaseline;
    spec.restarts =
        static_cast<int>(get_int(node, "algorithm.", "restarts", 32));
    if (spec.restarts < 1) fail_field("algorithm.restarts", "must be >= 1");
  } else {
    fail_field("algorithm.type", "unknown type \"" + type + "\"");
  }
  return spec;
}

EvaluatorSpec parse_evaluator(const json& node) {
  EvaluatorSpec spec;
  std::string type = get_string(node, "evaluator.", "type", "", true);
  if (type == "statevector") {
    spec.kind = EvaluatorSpec::Kind::Statevector;
  } else if (type == "shots") {
    spec.kind = EvaluatorSpec::Kind::Shots;
    spec.noise.shots = static_cast<std::uint64_t>(
        get_int(node, "evaluator.", "shots", 1300));
    spec.noise.p1 = get_number(node, "evaluator.", "p1", 0.0);
    spec.noise.p2 = get_number(node, "evaluator.", "p2", 0.0);
    spec.noise.trajectories =
        static_cast<int>(get_int(node, "evaluator.", "trajectories", 1));
    try {
      spec.noise.validate();
    } catch (const std::invalid_argument& e) {
      fail_field("evaluator", e.what());
    }
  } else {
    fail_field("evaluator.type", "unknown type \"" + type + "\"");
  }
  return spec;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig config;
  config.problem = parse_problem(require(root, "", "problem"));
  config.algorithm = parse_algorithm(require(root, "", "algorithm"));
  if (root.contains("evaluator")) {
    config.evaluator = parse_evaluator(root.at("evaluator"));
  }
  config.seed =
      static_cast<std::uint64_t>(get_int(root, "", "seed", 0));
  config.out_dir = get_string(root, "", "out_dir", "out");
  if (root.contains("ablate")) {
    config.ablate_seeds = static_cast<int>(
        get_int(root.at("ablate"), "ablate.", "seeds", 5));
    if (config.ablate_seeds < 1) fail_field("ablate.seeds", "must be >= 1");
  }
  return config;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  Graph g;
  std::size_t m = 0;
  if (!(in >> g.n_vertices >> m)) {
    throw std::runtime_error(path + ": expected header `n m`");
  }
  for (std::size_t i = 0; i < m; ++i) {
    Graph::Edge e;
    if (!(in >> e.u >> e.v >> e.weight)) {
      throw std::runtime_error(path + ": expected edge line `u v w` (" +
                               std::to_string(i + 1) + " of " +
                               std::to_string(m) + ")");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    g.edges.push_back(e);
  }
  g.validate();
  return g;
}

Problem resolve_problem(const ProblemSpec& spec) {
  Problem problem;
  switch (spec.kind) {
    case ProblemSpec::Kind::RandomHermitian: {
      problem.n_qubits = spec.n_qubits;
      problem.dense = random_hermitian(spec.n_qubits, spec.seed);
      break;
    }
    case ProblemSpec::Kind::MaxCut: {
      Graph g = load_graph_file(spec.graph_file);
      problem.n_qubits = g.n_vertices;
      problem.pauli = maxcut_ising(g);
      problem.graph = std::move(g);
      break;
    }
    case ProblemSpec::Kind::PauliFile: {
      problem.pauli = load_pauli_file(spec.pauli_file);
      problem.n_qubits = problem.pauli->n_qubits();
      break;
    }
  }
  if (!problem.dense && problem.n_qubits <= 10) {
    problem.dense = to_dense(*problem.pauli);
  }
  if (problem.dense && problem.dense->dim <= 1024) {
    problem.exact_ground = exact_ground_energy(*problem.dense);
  }
  return problem;
}

double cut_value(const Graph& g, std::uint64_t partition_mask) {
  double value = 0.0;
  for (const auto& e : g.edges) {
    bool u_side = (partition_mask >> e.u) & 1;
    bool v_side = (partition_mask >> e.v) & 1;
    if (u_side != v_side) value += e.weight;
  }
  return value;
}

MaxCutSolution brute_force_max_cut(const Graph& g) {
  if (g.n_vertices > 24) {
    throw std::invalid_argument("brute-force cut capped at 24 vertices");
  }
  MaxCutSolution best;
  std::uint64_t count = std::uint64_t{1} << g.n_vertices;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double value = cut_value(g, mask);
    if (mask == 0 || value > best.value) {
      best.value = value;
      best.partition_mask = mask;
    }
  }
  return best;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::unique_ptr<Evaluator> make_evaluator(const ExperimentConfig& config,
                                          const Problem& problem) {
  if (config.evaluator.kind == EvaluatorSpec::Kind::Statevector) {
    if (problem.pauli) {
      return std::make_unique<StatevectorEvaluator>(*problem.pauli);
    }
    return std::make_unique<StatevectorEvaluator>(*problem.dense);
  }
  PauliSum h = problem.pauli ? *problem.pauli : pauli_decompose(*problem.dense);
  return std::make_unique<ShotEvaluator>(std::move(h), config.evaluator.noise);
}

OptimizerKind default_optimizer(const ExperimentConfig& config) {
  return config.evaluator.kind == EvaluatorSpec::Kind::Shots
             ? OptimizerKind::Spsa
             : OptimizerKind::NelderMead;
}

std::string bitstring(std::uint64_t mask, int bits) {
  std::string s(bits, '0');
  for (int k = 0; k < bits; ++k) {
    if ((mask >> k) & 1) s[k] = '1';
  }
  return s;
}

void write_run_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "generation,best_energy,best_fitness,best_depth,best_cu3,"
         "species_count,mean_energy,cumulative_evaluations\n";
  for (const auto& row : record.rows) {
    out << row.generation << ',' << format_double(row.best_energy) << ','
        << format_double(row.best_fitness) << ',' << row.best_depth << ','
        << row.best_cu3 << ',' << row.species_count << ','
        << format_double(row.mean_energy) << ',' << row.cumulative_evaluations
        << '\n';
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                    int workers) {
  Problem problem = resolve_problem(config.problem);
  std::unique_ptr<Evaluator> evaluator = make_evaluator(config, problem);
  std::filesystem::create_directories(out_dir);

  json summary;
  switch (config.algorithm.kind) {
    case AlgorithmSpec::Kind::Evqe: {
      EvqeConfig evqe_config = config.algorithm.evqe;
      evqe_config.seed = config.seed;
      evqe_config.workers = workers;
      if (!config.algorithm.optimizer_given) {
        evqe_config.optimizer = default_optimizer(config);
      }
      GeneRegistry registry;
      RunRecord record = run_evqe(evqe_config, *evaluator, registry);
      write_run_csv(out_dir + "/run.csv", record);

      summary["algorithm"] = "evqe";
      summary["best_energy"] = record.best_energy;
      summary["exact_available"] = problem.exact_ground.has_value();
      if (problem.exact_ground) {
        summary["exact_ground_energy"] = *problem.exact_ground;
        summary["error"] = record.best_energy - *problem.exact_ground;
      }
      summary["depth"] = record.best_metrics.depth;
      summary["cu3_count"] = record.best_metrics.cu3_count;
      summary["cx_estimate"] = record.best_metrics.cx_estimate;
      summary["total_evaluations"] = record.total_evaluations;
      if (problem.graph) {
        StateVector state =
            run_circuit(build_circuit(record.best_genome, registry));
        std::uint64_t most_probable = 0;
        double best_prob = -1.0;
        for (std::uint64_t b = 0; b < state.dim(); ++b) {
          double p = std::norm(state.amp(b));
          if (p > best_prob) {
            best_prob = p;
            most_probable = b;
          }
        }
        MaxCutSolution opt = brute_force_max_cut(*problem.graph);
        summary["most_probable_bitstring"] =
            bitstring(most_probable, problem.n_qubits);
        summary["most_probable_cut_value"] = cut_value(*problem.graph,
                                                       most_probable);
        summary["optimal_cut_value"] = opt.value;
      }
      summary["best_genome"] = serialize_genome(record.best_genome, registry);
      break;
    }
    case AlgorithmSpec::Kind::Vqe: {
      AnsatzSpec ansatz = config.algorithm.ansatz;
      ansatz.n_qubits = problem.n_qubits;
      OptimizerKind optimizer = config.algorithm.optimizer_given
                                    ? config.algorithm.evqe.optimizer
                                    : default_optimizer(config);
      VqeResult result = run_vqe(ansatz, *evaluator, optimizer,
                                 config.algorithm.vqe_max_iter, config.seed);
      summary["algorithm"] = "vqe";
      summary["best_energy"] = result.energy;
      summary["exact_available"] = problem.exact_ground.has_value();
      if (problem.exact_ground) {
        summary["exact_ground_energy"] = *problem.exact_ground;
        summary["error"] = result.energy - *problem.exact_ground;
      }
      summary["parameter_count"] = ansatz.parameter_count();
      summary["entangler_count"] = ansatz.entangler_count();
      summary["total_evaluations"] = result.evaluations;
      break;
    }
    case AlgorithmSpec::Kind::SeparableBaseline: {
      double energy = optimal_separable_energy(
          *evaluator, config.algorithm.restarts, config.seed);
      summary["algorithm"] = "separable_baseline";
      summary["best_energy"] = energy;
      summary["exact_available"] = problem.exact_ground.has_value();
      if (problem.exact_ground) {
        summary["exact_ground_energy"] = *problem.exact_ground;
        summary["error"] = energy - *problem.exact_ground;
      }
      break;
    }
  }

  std::ofstream out(out_dir + "/summary.json");
  if (!out) throw std::runtime_error("cannot write " + out_dir + "/summary.json");
  out << summary.dump(2) << '\n';
}

void oracle_report(const ExperimentConfig& config, std::ostream& out) {
  Problem problem = resolve_problem(config.problem);
  if (!problem.exact_ground) {
    throw ConfigError("problem exceeds the exact-diagonalization cap");
  }
  out << "exact_ground_energy " << format_double(*problem.exact_ground)
      << '\n';
  if (problem.graph) {
    MaxCutSolution opt = brute_force_max_cut(*problem.graph);
    out << "max_cut_value " << format_double(opt.value) << '\n';
    out << "optimal_bitstring "
        << bitstring(opt.partition_mask, problem.n_qubits) << '\n';
  }
}

AblationResult run_ablation(const ExperimentConfig& config,
                            const std::string& out_dir, int workers) {
  if (config.algorithm.kind != AlgorithmSpec::Kind::Evqe) {
    throw ConfigError("ablate requires algorithm.type = evqe");
  }
  Problem problem = resolve_problem(config.problem);
  if (!problem.exact_ground) {
    throw ConfigError("ablate requires an oracle-computable problem");
  }
  std::unique_ptr<Evaluator> evaluator = make_evaluator(config, problem);

  AblationResult result;
  for (int k = 0; k < config.ablate_seeds; ++k) {
    std::uint64_t seed = config.seed + static_cast<std::uint64_t>(k);
    result.seeds.push_back(seed);
    for (GrowthMode growth : {GrowthMode::IdentityInit, GrowthMode::FixedCx}) {
      EvqeConfig evqe_config = config.algorithm.evqe;
      evqe_config.seed = seed;
      evqe_config.workers = workers;
      evqe_config.growth = growth;
      if (!config.algorithm.optimizer_given) {
        evqe_config.optimizer = default_optimizer(config);
      }
      GeneRegistry registry;
      RunRecord record = run_evqe(evqe_config, *evaluator, registry);
      std::vector<double> errors;
      errors.reserve(record.rows.size());
      for (const auto& row : record.rows) {
        errors.push_back(row.best_energy - *problem.exact_ground);
      }
      if (growth == GrowthMode::IdentityInit) {
        result.standard_error.push_back(std::move(errors));
      } else {
        result.cx_error.push_back(std::move(errors));
      }
    }
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/ablate.csv");
  if (!out) throw std::runtime_error("cannot write " + out_dir + "/ablate.csv");
  out << "generation";
  for (std::size_t k = 0; k < result.seeds.size(); ++k) {
    out << ",standard_err_seed" << k << ",cx_err_seed" << k;
  }
  out << '\n';
  std::size_t generations = result.standard_error.front().size();
  for (std::size_t g = 0; g < generations; ++g) {
    out << (g + 1);
    for (std::size_t k = 0; k < result.seeds.size(); ++k) {
      out << ',' << format_double(result.standard_error[k][g]) << ','
          << format_double(result.cx_error[k][g]);
    }
    out << '\n';
  }
  return result;
}

}  // namespace evqe
