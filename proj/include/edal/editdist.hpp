#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edal/kg.hpp"
#include "edal/params.hpp"

namespace edal {

enum class EditOpKind { substitution, deletion, insertion };

// One edit operation rendered as a string-space vector:
//   substitution  a - b
//   deletion      a - eps
//   insertion     eps - b
struct EditOpVector {
  EditOpKind kind;
  std::vector<double> vec;
};

enum class CharKind { relation, entity };

// Where a projected character came from, for mapping gradients back onto
// parameter rows and matrices.
struct CharProvenance {
  CharKind kind;
  std::int32_t emb_row;       // global entity or relation row
  std::int32_t matrix_index;  // relation row for M_r, type index otherwise
};

// A triple rendered as the character sequence [relation, arg1, ..., argN]
// in string space. Characters are stored contiguously, k_s doubles each.
struct ProjectedString {
  int k_s = 0;
  std::vector<double> chars;  // length * k_s
  std::vector<CharProvenance> provenance;  // empty for detached test fixtures

  int length() const { return k_s > 0 ? static_cast<int>(chars.size()) / k_s : 0; }
  std::span<const double> at(int i) const {
    return {chars.data() + static_cast<std::size_t>(i) * k_s, static_cast<std::size_t>(k_s)};
  }
};

// Per-coordinate DP over the (m+1) x (n+1) alignment grid. cell(p,q)[i]
// accumulates, over every monotone path from (0,0) to (p,q), the product of
// squared op-vector components along the path. The squared op vectors for
// every grid transition are cached for the backward pass.
struct EditLattice {
  int m = 0, n = 0, k_s = 0;
  std::vector<double> cells;  // (m+1)*(n+1)*k_s
  std::vector<double> sub2;   // m*n*k_s, transition into (p,q), 1-based p,q
  std::vector<double> del2;   // m*k_s, consuming x_p
  std::vector<double> ins2;   // n*k_s, consuming y_q
  std::vector<double> x, y;   // projected characters, copied
  std::vector<double> eps;

  std::span<double> cell(int p, int q) {
    return {cells.data() + (static_cast<std::size_t>(p) * (n + 1) + q) * k_s,
            static_cast<std::size_t>(k_s)};
  }
  std::span<const double> cell(int p, int q) const {
    return {cells.data() + (static_cast<std::size_t>(p) * (n + 1) + q) * k_s,
            static_cast<std::size_t>(k_s)};
  }
  std::span<const double> sub2_at(int p, int q) const {  // p in 1..m, q in 1..n
    return {sub2.data() + (static_cast<std::size_t>(p - 1) * n + (q - 1)) * k_s,
            static_cast<std::size_t>(k_s)};
  }
  std::span<const double> del2_at(int p) const {  // p in 1..m
    return {del2.data() + static_cast<std::size_t>(p - 1) * k_s, static_cast<std::size_t>(k_s)};
  }
  std::span<const double> ins2_at(int q) const {  // q in 1..n
    return {ins2.data() + static_cast<std::size_t>(q - 1) * k_s, static_cast<std::size_t>(k_s)};
  }
  std::span<const double> x_at(int p) const {  // p in 1..m
    return {x.data() + static_cast<std::size_t>(p - 1) * k_s, static_cast<std::size_t>(k_s)};
  }
  std::span<const double> y_at(int q) const {  // q in 1..n
    return {y.data() + static_cast<std::size_t>(q - 1) * k_s, static_cast<std::size_t>(k_s)};
  }
};

struct DistanceResult {
  double value = 0.0;       // average over all edit sequences
  std::uint64_t path_count = 0;
  EditLattice lattice;  // populated only when requested
  bool has_lattice = false;

  // Un-averaged total over all edit sequences.
  double sequence_sum() const { return value * static_cast<double>(path_count); }
};

// Number of monotone paths (diagonal/down/right) across an m x n grid.
// Throws on u64 overflow, which only happens far beyond practical arity.
std::uint64_t delannoy(int m, int n);

// Projects a triple into string space: the relation through its own M_r,
// each entity through the matrix of its type.
ProjectedString project_triple(const Triple& t, const ParamStore& store,
                               const KgCatalog& catalog);

EditOpVector edit_op(EditOpKind kind, std::span<const double> a, std::span<const double> b,
                     std::span<const double> eps);

// All monotone paths through the (m+1) x (n+1) grid, depth-first with
// diagonal/down/right priority. Sizes are capped by the brute-force oracle.
std::vector<std::vector<EditOpKind>> enumerate_paths(int m, int n);

// Squared norm of the element-wise product of the op vectors:
// sum_i (prod_k op_k[i])^2.
double edq_of_path(const std::vector<EditOpVector>& ops);

// Oracle: explicit enumeration and averaging of every edit sequence.
// Serial by construction; lengths capped at 6 to bound cost.
DistanceResult distance_bruteforce(const ProjectedString& x, const ProjectedString& y,
                                   std::span<const double> eps);

// Equivalent lattice dynamic program, O(m*n*k_s). keep_lattice retains the
// grid and cached squared ops for reverse-mode differentiation.
DistanceResult distance_dp(const ProjectedString& x, const ProjectedString& y,
                           std::span<const double> eps, bool keep_lattice = false);

// Projects both atoms (any arity >= 1) and runs the lattice DP on the
// resulting, possibly unequal-length, strings.
DistanceResult distance_general_arity(const Triple& atom1, const Triple& atom2,
                                      const ParamStore& store, const KgCatalog& catalog,
                                      bool keep_lattice = false);

}  // namespace edal
