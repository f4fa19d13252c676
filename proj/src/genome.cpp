#include "evqe/genome.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace evqe {

int Gene::u3_count() const {
  int n = 0;
  for (const auto& slot : layout) n += slot.role == QubitRole::U3;
  return n;
}

int Gene::cu3_pair_count() const {
  int n = 0;
  for (const auto& slot : layout) n += slot.role == QubitRole::Cu3Control;
  return n;
}

std::vector<Gene::BuildSlot> Gene::build_order() const {
  std::vector<BuildSlot> slots;
  for (int q = 0; q < n_qubits; ++q) {
    const Slot& s = layout[q];
    if (s.role == QubitRole::U3) {
      slots.push_back({false, -1, q});
    } else if (s.role == QubitRole::Cu3Control && s.partner > q) {
      slots.push_back({true, q, s.partner});
    } else if (s.role == QubitRole::Cu3Target && s.partner > q) {
      slots.push_back({true, s.partner, q});
    }
  }
  return slots;
}

void Gene::validate() const {
  if (static_cast<int>(layout.size()) != n_qubits) {
    throw std::invalid_argument("gene layout does not cover every qubit");
  }
  for (int q = 0; q < n_qubits; ++q) {
    const Slot& s = layout[q];
    if (s.role == QubitRole::Cu3Control || s.role == QubitRole::Cu3Target) {
      if (s.partner < 0 || s.partner >= n_qubits || s.partner == q) {
        throw std::invalid_argument("CU3 partner out of range");
      }
      const Slot& other = layout[s.partner];
      QubitRole expected = s.role == QubitRole::Cu3Control
                               ? QubitRole::Cu3Target
                               : QubitRole::Cu3Control;
      if (other.role != expected || other.partner != q) {
        throw std::invalid_argument("CU3 control/target references disagree");
      }
    }
  }
}

const Gene& GeneRegistry::add(Gene gene) {
  gene.id = next_id();
  gene.validate();
  genes_.push_back(std::move(gene));
  return genes_.back();
}

const Gene& GeneRegistry::get(GeneId id) const {
  if (id >= genes_.size()) {
    throw std::out_of_range("dangling GeneId " + std::to_string(id));
  }
  return genes_[id];
}

namespace {

bool u3_legal(int qubit, const Gene* predecessor) {
  return predecessor == nullptr ||
         predecessor->layout[qubit].role != QubitRole::U3;
}

// True when `control -> target` repeats the predecessor's orientation on
// the same pair.
bool cu3_orientation_blocked(int control, int target,
                             const Gene* predecessor) {
  if (predecessor == nullptr) return false;
  const Gene::Slot& s = predecessor->layout[control];
  return s.role == QubitRole::Cu3Control && s.partner == target;
}

}  // namespace

const Gene& random_gene(int n_qubits, const Gene* predecessor, Rng& rng,
                        GeneRegistry& registry) {
  if (n_qubits < 1) throw std::invalid_argument("random_gene needs n_qubits >= 1");
  if (predecessor != nullptr && predecessor->n_qubits != n_qubits) {
    throw std::invalid_argument("predecessor gene has a different qubit count");
  }

  Gene gene;
  gene.n_qubits = n_qubits;
  gene.layout.assign(n_qubits, {});
  std::vector<bool> assigned(n_qubits, false);

  for (std::size_t pos : rng.permutation(n_qubits)) {
    int q = static_cast<int>(pos);
    if (assigned[q]) continue;

    std::vector<int> partners;
    for (int p = 0; p < n_qubits; ++p) {
      if (p != q && !assigned[p]) partners.push_back(p);
    }
    bool can_u3 = u3_legal(q, predecessor);
    bool can_cu3 = !partners.empty();

    if (!can_u3 && !can_cu3) {
      gene.layout[q] = {QubitRole::Identity, -1};
      assigned[q] = true;
      continue;
    }

    bool pick_cu3 = can_cu3 && (!can_u3 || rng.index(2) == 1);
    if (!pick_cu3) {
      gene.layout[q] = {QubitRole::U3, -1};
      assigned[q] = true;
      continue;
    }

    int partner = partners[rng.index(partners.size())];
    // At most one orientation can be blocked by rule 2.
    bool fwd_ok = !cu3_orientation_blocked(q, partner, predecessor);
    bool rev_ok = !cu3_orientation_blocked(partner, q, predecessor);
    int control, target;
    if (fwd_ok && rev_ok) {
      bool forward = rng.index(2) == 0;
      control = forward ? q : partner;
      target = forward ? partner : q;
    } else if (fwd_ok) {
      control = q;
      target = partner;
    } else {
      control = partner;
      target = q;
    }
    gene.layout[control] = {QubitRole::Cu3Control, target};
    gene.layout[target] = {QubitRole::Cu3Target, control};
    assigned[control] = true;
    assigned[target] = true;
  }

  return registry.add(std::move(gene));
}

bool satisfies_pruning_rules(const Gene& gene, const Gene* predecessor) {
  gene.validate();
  int identity_count = 0;
  for (int q = 0; q < gene.n_qubits; ++q) {
    switch (gene.layout[q].role) {
      case QubitRole::U3:
        if (!u3_legal(q, predecessor)) return false;  // rule 1
        break;
      case QubitRole::Cu3Control:
        if (cu3_orientation_blocked(q, gene.layout[q].partner, predecessor)) {
          return false;  // rule 2
        }
        break;
      case QubitRole::Identity:
        ++identity_count;
        // Rule 3: identity only where a U3 is illegal...
        if (u3_legal(q, predecessor)) return false;
        break;
      default:
        break;
    }
  }
  // ...and where no CU3 partner was available: two identity slots in one
  // layer could always have paired with each other instead.
  if (gene.n_qubits >= 2 && identity_count >= 2) return false;
  return true;
}

std::size_t genetic_distance(const Genome& a, const Genome& b) {
  std::size_t total = a.depth() + b.depth();
  std::size_t half_up = (total + 1) / 2;
  std::size_t matches = 0;
  std::size_t overlap = std::min(a.depth(), b.depth());
  for (std::size_t k = 0; k < overlap; ++k) {
    matches += a.genes[k].gene == b.genes[k].gene;
  }
  return half_up - matches;
}

Circuit build_circuit(const Genome& genome, const GeneRegistry& registry) {
  Circuit circuit;
  circuit.n_qubits = 0;
  for (const auto& instance : genome.genes) {
    const Gene& gene = registry.get(instance.gene);
    if (circuit.n_qubits != 0 && circuit.n_qubits != gene.n_qubits) {
      throw std::invalid_argument("genome mixes genes of different widths");
    }
    circuit.n_qubits = gene.n_qubits;
    auto slots = gene.build_order();
    if (instance.params.size() != slots.size() * 3) {
      throw std::invalid_argument(
          "gene instance for gene " + std::to_string(instance.gene) +
          " carries " + std::to_string(instance.params.size()) +
          " params, expected " + std::to_string(slots.size() * 3));
    }
    std::vector<GateSpec> layer;
    layer.reserve(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
      double theta = instance.params[3 * k];
      double phi = instance.params[3 * k + 1];
      double lambda = instance.params[3 * k + 2];
      if (slots[k].is_cu3) {
        layer.push_back(
            GateSpec::cu3(slots[k].control, slots[k].target, theta, phi,
                          lambda));
      } else {
        layer.push_back(GateSpec::u3(slots[k].target, theta, phi, lambda));
      }
    }
    circuit.layers.push_back(std::move(layer));
  }
  return circuit;
}

GenomeMetrics metrics(const Genome& genome, const GeneRegistry& registry) {
  GenomeMetrics m;
  m.depth = genome.depth();
  for (const auto& instance : genome.genes) {
    m.cu3_count += registry.get(instance.gene).cu3_pair_count();
  }
  m.cx_estimate = 2 * m.cu3_count;
  return m;
}

std::string serialize_genome(const Genome& genome,
                             const GeneRegistry& registry) {
  std::ostringstream out;
  for (const auto& instance : genome.genes) {
    const Gene& gene = registry.get(instance.gene);
    out << "gene " << gene.id << " roles";
    for (int q = 0; q < gene.n_qubits; ++q) {
      const Gene::Slot& s = gene.layout[q];
      switch (s.role) {
        case QubitRole::Identity:
          out << " I";
          break;
        case QubitRole::U3:
          out << " U3";
          break;
        case QubitRole::Cu3Control:
          out << " C" << s.partner;
          break;
        case QubitRole::Cu3Target:
          out << " T" << s.partner;
          break;
      }
    }
    out << " params";
    char buf[32];
    for (double p : instance.params) {
      std::snprintf(buf, sizeof(buf), "%.17g", p);
      out << ' ' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace evqe
