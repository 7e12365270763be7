#include "edal/kg.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edal {

namespace {

std::string location(const std::string& path, std::int64_t line_no) {
  return path + ":" + std::to_string(line_no);
}

// Splits on single tab characters; fields may contain spaces.
std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Line reader that strips trailing \r and skips blank and comment lines.
// The exact line "#nary" is surfaced to the caller as a directive.
class TsvReader {
 public:
  explicit TsvReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw std::runtime_error("cannot open " + path);
  }

  bool next(std::vector<std::string>& fields, bool* nary_directive = nullptr) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line == "#nary") {
        if (nary_directive) *nary_directive = true;
        continue;
      }
      if (line[0] == '#') continue;
      fields = split_tabs(line);
      return true;
    }
    return false;
  }

  std::string where() const { return location(path_, line_no_); }

 private:
  std::string path_;
  std::ifstream in_;
  std::int64_t line_no_ = 0;
};

std::pair<std::int32_t, std::vector<std::int32_t>> triple_key(const Triple& t) {
  std::vector<std::int32_t> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(a.index);
  return {t.relation.index, std::move(args)};
}

}  // namespace

std::int32_t Vocab::intern(const std::string& surface) {
  auto it = ids_.find(surface);
  if (it != ids_.end()) return it->second;
  const std::int32_t id = static_cast<std::int32_t>(names_.size());
  names_.push_back(surface);
  ids_.emplace(surface, id);
  return id;
}

std::optional<std::int32_t> Vocab::find(const std::string& surface) const {
  auto it = ids_.find(surface);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::vector<AlignmentSeed>& KgCatalog::seeds(SeedSplit split) const {
  switch (split) {
    case SeedSplit::train: return seeds_train_;
    case SeedSplit::valid: return seeds_valid_;
    default: return seeds_test_;
  }
}

TypeRef KgCatalog::type_of(EntityRef e) const {
  const auto& assignment = type_assignment_[idx(e.kg)];
  if (e.index < 0 || e.index >= static_cast<std::int32_t>(assignment.size()) ||
      assignment[e.index] < 0) {
    throw std::runtime_error("entity " + entities_[idx(e.kg)].lookup(e.index) + " (" +
                             kg_name(e.kg) + ") has no type assignment");
  }
  return TypeRef{assignment[e.index]};
}

bool KgCatalog::contains(const Triple& t) const {
  return triple_keys_[idx(t.kg())].count(triple_key(t)) > 0;
}

EntityRef KgCatalog::add_entity(Kg kg, const std::string& name) {
  const std::int32_t id = entities_[idx(kg)].intern(name);
  if (id >= static_cast<std::int32_t>(type_assignment_[idx(kg)].size()))
    type_assignment_[idx(kg)].resize(id + 1, -1);
  return EntityRef{kg, id};
}

RelationRef KgCatalog::add_relation(Kg kg, const std::string& name) {
  return RelationRef{kg, relations_[idx(kg)].intern(name)};
}

TypeRef KgCatalog::add_type(const std::string& name) { return TypeRef{types_.intern(name)}; }

void KgCatalog::assign_type(EntityRef e, TypeRef t) {
  auto& assignment = type_assignment_[idx(e.kg)];
  if (e.index >= static_cast<std::int32_t>(assignment.size())) assignment.resize(e.index + 1, -1);
  assignment[e.index] = t.index;
}

void KgCatalog::add_triple(Triple t) {
  const int k = idx(t.kg());
  if (!triple_keys_[k].insert(triple_key(t)).second) {
    ++stats_.duplicate_triples[k];
    return;
  }
  triples_[k].push_back(std::move(t));
}

void KgCatalog::add_seed(SeedSplit split, AlignmentSeed seed) {
  switch (split) {
    case SeedSplit::train: seeds_train_.push_back(std::move(seed)); break;
    case SeedSplit::valid: seeds_valid_.push_back(std::move(seed)); break;
    case SeedSplit::test: seeds_test_.push_back(std::move(seed)); break;
  }
}

void KgCatalog::validate() const {
  for (Kg kg : {Kg::L1, Kg::L2}) {
    for (const Triple& t : triples_[idx(kg)])
      for (const EntityRef& e : t.args) type_of(e);  // throws when unassigned
  }
  auto check_seed = [this](const AlignmentSeed& s) {
    if (s.left.kg() != Kg::L1 || s.right.kg() != Kg::L2)
      throw std::runtime_error("seed sides must come from L1 and L2 respectively");
    for (const Triple* t : {&s.left, &s.right}) {
      if (!contains(*t))
        throw std::runtime_error("seed references unknown triple " + format_atom(*t, *this) +
                                 " in " + kg_name(t->kg()));
    }
  };
  for (const auto* seeds : {&seeds_train_, &seeds_valid_, &seeds_test_})
    for (const AlignmentSeed& s : *seeds) check_seed(s);
}

namespace {

void load_triples(KgCatalog& catalog, Kg kg, const std::string& path) {
  TsvReader reader(path);
  bool nary = false;
  std::vector<std::string> fields;
  while (reader.next(fields, &nary)) {
    Triple t;
    if (nary) {
      if (fields.size() < 2)
        throw std::runtime_error(reader.where() + ": n-ary line needs relation and >= 1 argument");
      t.relation = catalog.add_relation(kg, fields[0]);
      for (std::size_t i = 1; i < fields.size(); ++i)
        t.args.push_back(catalog.add_entity(kg, fields[i]));
    } else {
      if (fields.size() != 3)
        throw std::runtime_error(reader.where() + ": expected 3 tab-separated columns, got " +
                                 std::to_string(fields.size()));
      const EntityRef head = catalog.add_entity(kg, fields[0]);
      t.relation = catalog.add_relation(kg, fields[1]);
      t.args = {head, catalog.add_entity(kg, fields[2])};
    }
    catalog.add_triple(std::move(t));
  }
}

void load_types(KgCatalog& catalog, const std::string& path) {
  TsvReader reader(path);
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != 2)
      throw std::runtime_error(reader.where() + ": expected 2 tab-separated columns, got " +
                               std::to_string(fields.size()));
    const TypeRef type = catalog.add_type(fields[1]);
    // A surface form may exist in either KG (vocabularies are disjoint);
    // type lines for entities absent from both are ignored.
    for (Kg kg : {Kg::L1, Kg::L2}) {
      if (auto id = catalog.entities(kg).find(fields[0]))
        catalog.assign_type(EntityRef{kg, *id}, type);
    }
  }
}

void load_seeds(KgCatalog& catalog, SeedSplit split, const std::string& path) {
  TsvReader reader(path);
  std::vector<std::string> fields;
  auto resolve_entity = [&](Kg kg, const std::string& name) {
    auto id = catalog.entities(kg).find(name);
    if (!id)
      throw std::runtime_error(reader.where() + ": unknown entity '" + name + "' in " +
                               kg_name(kg));
    return EntityRef{kg, *id};
  };
  auto resolve_relation = [&](Kg kg, const std::string& name) {
    auto id = catalog.relations(kg).find(name);
    if (!id)
      throw std::runtime_error(reader.where() + ": unknown relation '" + name + "' in " +
                               kg_name(kg));
    return RelationRef{kg, *id};
  };
  while (reader.next(fields)) {
    if (fields.size() != 6)
      throw std::runtime_error(reader.where() + ": expected 6 tab-separated columns, got " +
                               std::to_string(fields.size()));
    AlignmentSeed seed;
    seed.left.relation = resolve_relation(Kg::L1, fields[1]);
    seed.left.args = {resolve_entity(Kg::L1, fields[0]), resolve_entity(Kg::L1, fields[2])};
    seed.right.relation = resolve_relation(Kg::L2, fields[4]);
    seed.right.args = {resolve_entity(Kg::L2, fields[3]), resolve_entity(Kg::L2, fields[5])};
    for (const Triple* t : {&seed.left, &seed.right}) {
      if (!catalog.contains(*t))
        throw std::runtime_error(reader.where() + ": seed references unknown triple " +
                                 format_atom(*t, catalog) + " in " + kg_name(t->kg()));
    }
    catalog.add_seed(split, std::move(seed));
  }
}

}  // namespace

KgCatalog load_catalog(const CatalogPaths& paths) {
  KgCatalog catalog;
  load_triples(catalog, Kg::L1, paths.triples_l1);
  load_triples(catalog, Kg::L2, paths.triples_l2);
  load_types(catalog, paths.types);
  for (Kg kg : {Kg::L1, Kg::L2}) {
    for (const Triple& t : catalog.triples(kg))
      for (const EntityRef& e : t.args) catalog.type_of(e);  // surfaces missing types
  }
  load_seeds(catalog, SeedSplit::train, paths.seeds_train);
  if (!paths.seeds_valid.empty()) load_seeds(catalog, SeedSplit::valid, paths.seeds_valid);
  if (!paths.seeds_test.empty()) load_seeds(catalog, SeedSplit::test, paths.seeds_test);
  return catalog;
}

std::vector<Triple> corruption_set(const Triple& t2, const KgCatalog& catalog) {
  if (t2.kg() != Kg::L2) throw std::runtime_error("corruption_set expects an L2 triple");
  if (t2.arity() != 2)
    throw std::runtime_error("corruption_set is defined for binary triples only (arity " +
                             std::to_string(t2.arity()) + ")");
  const std::int32_t n_rel = catalog.relations(Kg::L2).size();
  const std::int32_t n_ent = catalog.entities(Kg::L2).size();
  std::vector<Triple> out;
  out.reserve((n_rel - 1) + 2 * (n_ent - 1));
  for (std::int32_t r = 0; r < n_rel; ++r) {
    if (r == t2.relation.index) continue;
    out.push_back(Triple{RelationRef{Kg::L2, r}, t2.args});
  }
  for (std::int32_t e = 0; e < n_ent; ++e) {
    if (e == t2.args[0].index) continue;
    out.push_back(Triple{t2.relation, {EntityRef{Kg::L2, e}, t2.args[1]}});
  }
  for (std::int32_t e = 0; e < n_ent; ++e) {
    if (e == t2.args[1].index) continue;
    out.push_back(Triple{t2.relation, {t2.args[0], EntityRef{Kg::L2, e}}});
  }
  return out;
}

Triple sample_negative(const Triple& t2, const KgCatalog& catalog, rng::Stream& rng,
                       NegativeSampling mode) {
  if (t2.kg() != Kg::L2 || t2.arity() != 2)
    throw std::runtime_error("sample_negative expects a binary L2 triple");
  const std::int64_t n_rel = catalog.relations(Kg::L2).size();
  const std::int64_t n_ent = catalog.entities(Kg::L2).size();
  const std::int64_t slot_sizes[3] = {n_rel - 1, n_ent - 1, n_ent - 1};
  const std::int64_t total = slot_sizes[0] + slot_sizes[1] + slot_sizes[2];
  if (total <= 0) throw std::runtime_error("degenerate catalog: corruption set is empty");

  int slot;
  std::int64_t offset;
  if (mode == NegativeSampling::global_uniform) {
    std::int64_t u = static_cast<std::int64_t>(rng.next_below(total));
    slot = 0;
    while (u >= slot_sizes[slot]) u -= slot_sizes[slot++];
    offset = u;
  } else {
    std::vector<int> nonempty;
    for (int s = 0; s < 3; ++s)
      if (slot_sizes[s] > 0) nonempty.push_back(s);
    slot = nonempty[rng.next_below(nonempty.size())];
    offset = static_cast<std::int64_t>(rng.next_below(slot_sizes[slot]));
  }

  // Map the offset over the candidate range with the original index removed.
  auto skip = [](std::int64_t off, std::int32_t original) {
    return static_cast<std::int32_t>(off < original ? off : off + 1);
  };
  Triple neg = t2;
  switch (slot) {
    case 0: neg.relation.index = skip(offset, t2.relation.index); break;
    case 1: neg.args[0].index = skip(offset, t2.args[0].index); break;
    default: neg.args[1].index = skip(offset, t2.args[1].index); break;
  }
  return neg;
}

std::string format_atom(const Triple& t, const KgCatalog& catalog) {
  std::string out = catalog.relations(t.kg()).lookup(t.relation.index);
  out += '(';
  for (int i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    out += catalog.entities(t.kg()).lookup(t.args[i].index);
  }
  out += ')';
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Triple parse_atom(const std::string& text, Kg kg, const KgCatalog& catalog) {
  const std::size_t open = text.find('(');
  if (open == std::string::npos || text.empty() || text.back() != ')')
    throw std::runtime_error("malformed atom '" + text + "', expected rel(arg1,...,argN)");
  const std::string rel_name = trim(text.substr(0, open));
  const std::string body = text.substr(open + 1, text.size() - open - 2);
  if (rel_name.empty()) throw std::runtime_error("malformed atom '" + text + "': empty relation");

  Triple t;
  auto rel = catalog.relations(kg).find(rel_name);
  if (!rel)
    throw std::runtime_error("unknown relation '" + rel_name + "' in " + kg_name(kg));
  t.relation = RelationRef{kg, *rel};

  std::size_t start = 0;
  for (;;) {
    std::size_t comma = body.find(',', start);
    const std::string arg = trim(comma == std::string::npos ? body.substr(start)
                                                            : body.substr(start, comma - start));
    if (arg.empty()) throw std::runtime_error("malformed atom '" + text + "': empty argument");
    auto ent = catalog.entities(kg).find(arg);
    if (!ent) throw std::runtime_error("unknown entity '" + arg + "' in " + kg_name(kg));
    t.args.push_back(EntityRef{kg, *ent});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return t;
}

}  // namespace edal
