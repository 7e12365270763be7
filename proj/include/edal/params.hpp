#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edal/kg.hpp"

namespace edal {

struct Dims {
  int k_e = 16;  // entity space
  int k_r = 16;  // relation space
  int k_s = 16;  // string space
  friend bool operator==(const Dims&, const Dims&) = default;
};

// Every learnable tensor. Entity and relation rows are kept inside the unit
// ball after each optimizer step; the projected-vector constraints are soft
// (see trainer::composite_penalty). Storage is row-major 64-bit throughout.
struct ParamStore {
  Dims dims;
  std::int32_t n_entities = 0;
  std::int32_t n_relations = 0;
  std::int32_t n_types = 0;

  std::vector<double> entity_emb;    // n_entities x k_e
  std::vector<double> relation_emb;  // n_relations x k_r
  std::vector<double> rel_proj;      // n_relations x (k_r x k_s)
  std::vector<double> type_proj;     // n_types x (k_e x k_s)
  std::vector<double> null_vec;      // k_s

  std::span<double> entity_row(std::int32_t i) {
    return {entity_emb.data() + static_cast<std::size_t>(i) * dims.k_e,
            static_cast<std::size_t>(dims.k_e)};
  }
  std::span<const double> entity_row(std::int32_t i) const {
    return {entity_emb.data() + static_cast<std::size_t>(i) * dims.k_e,
            static_cast<std::size_t>(dims.k_e)};
  }
  std::span<double> relation_row(std::int32_t i) {
    return {relation_emb.data() + static_cast<std::size_t>(i) * dims.k_r,
            static_cast<std::size_t>(dims.k_r)};
  }
  std::span<const double> relation_row(std::int32_t i) const {
    return {relation_emb.data() + static_cast<std::size_t>(i) * dims.k_r,
            static_cast<std::size_t>(dims.k_r)};
  }
  std::span<double> rel_proj_mat(std::int32_t i) {
    const std::size_t sz = static_cast<std::size_t>(dims.k_r) * dims.k_s;
    return {rel_proj.data() + i * sz, sz};
  }
  std::span<const double> rel_proj_mat(std::int32_t i) const {
    const std::size_t sz = static_cast<std::size_t>(dims.k_r) * dims.k_s;
    return {rel_proj.data() + i * sz, sz};
  }
  std::span<double> type_proj_mat(std::int32_t i) {
    const std::size_t sz = static_cast<std::size_t>(dims.k_e) * dims.k_s;
    return {type_proj.data() + i * sz, sz};
  }
  std::span<const double> type_proj_mat(std::int32_t i) const {
    const std::size_t sz = static_cast<std::size_t>(dims.k_e) * dims.k_s;
    return {type_proj.data() + i * sz, sz};
  }

  friend bool operator==(const ParamStore&, const ParamStore&) = default;
};

// Deterministic initialization: entity/relation rows uniform in
// [-6/sqrt(k), 6/sqrt(k)] per coordinate (k the row's own dimension) and
// scaled back onto the unit ball; projection matrices are a truncated
// identity plus uniform noise in [-proj_noise, proj_noise]; the null vector
// starts at zero. Throws when the catalog has no entities or relations.
ParamStore init_params(const KgCatalog& catalog, const Dims& dims, std::uint64_t seed,
                       double proj_noise = 0.01);

// Scales every entity/relation row with L2 norm > 1 back to norm 1.
// Returns the number of rows clamped; throws naming the row on non-finite
// values.
std::int64_t clamp_to_unit_ball(ParamStore& store);

// Binary checkpoint: magic "EDAL", u32 version, dims, counts, tensors as
// row-major little-endian f64 in fixed order, then a u64 byte-sum checksum
// over everything before it. Round-trip is bit-exact.
void save_checkpoint(const ParamStore& store, const std::string& path);
ParamStore load_checkpoint(const std::string& path);

// Guards a loaded checkpoint against the run it is used in.
void require_compatible(const ParamStore& store, const Dims& dims, const KgCatalog& catalog);

}  // namespace edal
