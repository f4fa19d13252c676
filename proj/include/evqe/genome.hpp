#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "evqe/rng.hpp"
#include "evqe/simulator.hpp"

namespace evqe {

/// Globally unique, monotonically increasing gene identifier. Ids are never
/// reused; two structurally identical layers created independently are
/// distinct genes (ancestry, not structure, defines identity).
using GeneId = std::uint64_t;

enum class QubitRole : std::uint8_t { Identity, U3, Cu3Control, Cu3Target };

/// One circuit layer: a gate role for every qubit. CU3 roles come in
/// control/target pairs referencing each other through `partner`.
struct Gene {
  struct Slot {
    QubitRole role = QubitRole::Identity;
    int partner = -1;  // the other qubit of a CU3 pair
  };

  GeneId id = 0;
  int n_qubits = 0;
  std::vector<Slot> layout;

  int u3_count() const;
  int cu3_pair_count() const;
  /// 3 angles per U3 role plus 3 per CU3 pair.
  int param_count() const { return 3 * (u3_count() + cu3_pair_count()); }

  /// Gate slots in build order: qubits scanned in ascending order, a U3
  /// emitted at its qubit, a CU3 emitted at the lower-indexed qubit of its
  /// pair. Parameter triple k of a GeneInstance belongs to slot k.
  struct BuildSlot {
    bool is_cu3 = false;
    int control = -1;
    int target = -1;  // also the U3 qubit
  };
  std::vector<BuildSlot> build_order() const;

  /// Checks internal consistency: every qubit covered once, CU3 references
  /// mutually consistent and pairwise disjoint.
  void validate() const;
};

/// A parameter-bound occurrence of a gene inside a genome. `cu3_frozen`
/// marks instances grown as fixed CX-like gates (ablation variant): their
/// CU3 triples stay at (pi, 0, pi) and are excluded from optimization.
struct GeneInstance {
  GeneId gene = 0;
  std::vector<double> params;
  bool cu3_frozen = false;
};

/// Ordered list of gene instances; the genome's length is the circuit depth.
struct Genome {
  std::vector<GeneInstance> genes;

  std::size_t depth() const { return genes.size(); }
  bool empty() const { return genes.empty(); }
};

/// Append-only table of every gene ever created. Insertions must be
/// serialized (the evolution loop allocates between parallel phases);
/// lookups are safe from concurrent readers once inserted.
class GeneRegistry {
 public:
  /// Assigns the next id, stores the gene, and returns a stable reference.
  const Gene& add(Gene gene);

  /// Throws std::out_of_range on a dangling id.
  const Gene& get(GeneId id) const;

  GeneId next_id() const { return static_cast<GeneId>(genes_.size()); }
  std::size_t size() const { return genes_.size(); }

 private:
  std::deque<Gene> genes_;  // id == index
};

/// Samples a fresh gene layout subject to the pruning rules relative to
/// `predecessor` (the genome's current last gene, or null for an empty
/// genome):
///   1. no qubit takes a U3 if its predecessor role was U3;
///   2. no qubit pair repeats its predecessor CU3 orientation (reversing
///      control and target is allowed);
///   3. Identity is assigned only where neither a U3 nor a CU3 is possible.
/// Qubits are scanned in random order; each picks uniformly between U3 and
/// CU3-with-a-random-unassigned-partner where legal. The gene is registered
/// and a stable reference returned.
const Gene& random_gene(int n_qubits, const Gene* predecessor, Rng& rng,
                        GeneRegistry& registry);

/// Re-validates the pruning rules for `gene` following `predecessor`.
bool satisfies_pruning_rules(const Gene& gene, const Gene* predecessor);

/// Genetic distance: ceil((|a| + |b|) / 2) minus the number of positions
/// whose GeneIds match. Symmetric, zero for identical gene sequences.
std::size_t genetic_distance(const Genome& a, const Genome& b);

/// Expands the genome into a circuit, one layer per gene instance in genome
/// order with the instance's parameters bound. Identity roles emit no gate.
/// Throws std::out_of_range on a dangling GeneId.
Circuit build_circuit(const Genome& genome, const GeneRegistry& registry);

struct GenomeMetrics {
  std::size_t depth = 0;
  std::size_t cu3_count = 0;
  std::size_t cx_estimate = 0;  // 2 CX per CU3 (controlled-unitary decomposition)
};

GenomeMetrics metrics(const Genome& genome, const GeneRegistry& registry);

/// One line per gene: `gene <id> roles <r0> <r1> ... params <p0> <p1> ...`
/// where a role is I, U3, C<target> or T<control>. Used in run summaries.
std::string serialize_genome(const Genome& genome,
                             const GeneRegistry& registry);

}  // namespace evqe
