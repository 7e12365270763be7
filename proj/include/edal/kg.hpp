#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "edal/rng.hpp"

namespace edal {

enum class Kg : int { L1 = 0, L2 = 1 };

inline const char* kg_name(Kg kg) { return kg == Kg::L1 ? "L1" : "L2"; }

struct EntityRef {
  Kg kg;
  std::int32_t index;
  friend auto operator<=>(const EntityRef&, const EntityRef&) = default;
};

struct RelationRef {
  Kg kg;
  std::int32_t index;
  friend auto operator<=>(const RelationRef&, const RelationRef&) = default;
};

struct TypeRef {
  std::int32_t index;  // global across both KGs
  friend auto operator<=>(const TypeRef&, const TypeRef&) = default;
};

// Relation plus ordered arguments; arity >= 1, all refs from one KG.
// Standard KG triples are the arity-2 case with args = {head, tail}.
struct Triple {
  RelationRef relation;
  std::vector<EntityRef> args;

  Kg kg() const { return relation.kg; }
  int arity() const { return static_cast<int>(args.size()); }
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct AlignmentSeed {
  Triple left;   // from L1
  Triple right;  // from L2
};

// String <-> dense index interning, injective per vocabulary.
class Vocab {
 public:
  std::int32_t intern(const std::string& surface);
  std::optional<std::int32_t> find(const std::string& surface) const;
  const std::string& lookup(std::int32_t index) const { return names_.at(index); }
  std::int32_t size() const { return static_cast<std::int32_t>(names_.size()); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

struct CatalogPaths {
  std::string triples_l1;
  std::string triples_l2;
  std::string types;
  std::string seeds_train;
  std::string seeds_valid;  // optional, empty = none
  std::string seeds_test;   // optional, empty = none
};

struct LoadStats {
  std::int64_t duplicate_triples[2] = {0, 0};
};

enum class SeedSplit { train, valid, test };

class KgCatalog {
 public:
  const Vocab& entities(Kg kg) const { return entities_[idx(kg)]; }
  const Vocab& relations(Kg kg) const { return relations_[idx(kg)]; }
  const Vocab& types() const { return types_; }

  const std::vector<Triple>& triples(Kg kg) const { return triples_[idx(kg)]; }
  const std::vector<AlignmentSeed>& seeds(SeedSplit split) const;

  TypeRef type_of(EntityRef e) const;
  bool contains(const Triple& t) const;

  std::int32_t total_entities() const { return entities_[0].size() + entities_[1].size(); }
  std::int32_t total_relations() const { return relations_[0].size() + relations_[1].size(); }

  // Global parameter-row index: L1 vocabulary first, then L2.
  std::int32_t entity_row(EntityRef e) const {
    return (e.kg == Kg::L2 ? entities_[0].size() : 0) + e.index;
  }
  std::int32_t relation_row(RelationRef r) const {
    return (r.kg == Kg::L2 ? relations_[0].size() : 0) + r.index;
  }

  const LoadStats& load_stats() const { return stats_; }

  // Test/synthetic construction hooks: interning follows first-appearance order.
  EntityRef add_entity(Kg kg, const std::string& name);
  RelationRef add_relation(Kg kg, const std::string& name);
  TypeRef add_type(const std::string& name);
  void assign_type(EntityRef e, TypeRef t);
  void add_triple(Triple t);
  void add_seed(SeedSplit split, AlignmentSeed seed);

  // Validation used by load_catalog: every triple entity typed, every seed
  // references stored triples. Throws on violation.
  void validate() const;

 private:
  static int idx(Kg kg) { return static_cast<int>(kg); }

  Vocab entities_[2];
  Vocab relations_[2];
  Vocab types_;
  std::vector<std::int32_t> type_assignment_[2];  // entity index -> type index or -1
  std::vector<Triple> triples_[2];
  std::set<std::pair<std::int32_t, std::vector<std::int32_t>>> triple_keys_[2];
  std::vector<AlignmentSeed> seeds_train_, seeds_valid_, seeds_test_;
  LoadStats stats_;
};

// Loads and interns both KGs, the type map, and the seed splits.
// Index assignment is deterministic in file order of first appearance.
// Throws std::runtime_error with file:line context on malformed input,
// missing type assignments, or seeds referencing unknown triples.
KgCatalog load_catalog(const CatalogPaths& paths);

// All single-slot corruptions of a binary L2 triple, excluding the triple
// itself from each slot: relation swaps first (index order), then head
// swaps, then tail swaps. Size is (|R2|-1) + 2*(|E2|-1).
std::vector<Triple> corruption_set(const Triple& t2, const KgCatalog& catalog);

enum class NegativeSampling { mode_uniform, global_uniform };

// Draws one corruption without materializing the set. mode_uniform picks
// uniformly among the non-empty slots (relation/head/tail) and then
// uniformly within the slot; global_uniform is uniform over the whole set.
Triple sample_negative(const Triple& t2, const KgCatalog& catalog, rng::Stream& rng,
                       NegativeSampling mode = NegativeSampling::mode_uniform);

// Serialization of an atom as rel(arg1,...,argN); parse_atom resolves the
// symbols against one KG's vocabularies and requires the textual form
// name(a,b,...). Throws naming the unknown symbol.
std::string format_atom(const Triple& t, const KgCatalog& catalog);
Triple parse_atom(const std::string& text, Kg kg, const KgCatalog& catalog);

}  // namespace edal
