#include "edal/params.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace edal {

namespace {

constexpr char kMagic[4] = {'E', 'D', 'A', 'L'};
constexpr std::uint32_t kVersion = 1;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void fill_uniform(rng::Stream& rng, std::span<double> v, double lo, double hi) {
  for (double& x : v) x = rng.next_uniform(lo, hi);
}

// Unit-ball projection of a freshly drawn row.
void scale_into_ball(std::span<double> v) {
  const double n = norm2(v);
  if (n > 1.0)
    for (double& x : v) x /= n;
}

void init_projection(rng::Stream& rng, std::span<double> mat, int rows, int cols, double noise) {
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double v = (r == c) ? 1.0 : 0.0;
      if (noise != 0.0) v += rng.next_uniform(-noise, noise);
      mat[static_cast<std::size_t>(r) * cols + c] = v;
    }
}

}  // namespace

ParamStore init_params(const KgCatalog& catalog, const Dims& dims, std::uint64_t seed,
                       double proj_noise) {
  if (dims.k_e < 1 || dims.k_r < 1 || dims.k_s < 1)
    throw std::runtime_error("dimensions must be >= 1");
  ParamStore store;
  store.dims = dims;
  store.n_entities = catalog.total_entities();
  store.n_relations = catalog.total_relations();
  store.n_types = catalog.types().size();
  if (store.n_entities == 0 || store.n_relations == 0)
    throw std::runtime_error("catalog has no entities or no relations");

  store.entity_emb.resize(static_cast<std::size_t>(store.n_entities) * dims.k_e);
  store.relation_emb.resize(static_cast<std::size_t>(store.n_relations) * dims.k_r);
  store.rel_proj.resize(static_cast<std::size_t>(store.n_relations) * dims.k_r * dims.k_s);
  store.type_proj.resize(static_cast<std::size_t>(store.n_types) * dims.k_e * dims.k_s);
  store.null_vec.assign(dims.k_s, 0.0);

  auto rng = rng::substream(seed, rng::Substream::init);
  const double be = 6.0 / std::sqrt(static_cast<double>(dims.k_e));
  const double br = 6.0 / std::sqrt(static_cast<double>(dims.k_r));
  for (std::int32_t i = 0; i < store.n_entities; ++i) {
    fill_uniform(rng, store.entity_row(i), -be, be);
    scale_into_ball(store.entity_row(i));
  }
  for (std::int32_t i = 0; i < store.n_relations; ++i) {
    fill_uniform(rng, store.relation_row(i), -br, br);
    scale_into_ball(store.relation_row(i));
  }
  for (std::int32_t i = 0; i < store.n_relations; ++i)
    init_projection(rng, store.rel_proj_mat(i), dims.k_r, dims.k_s, proj_noise);
  for (std::int32_t i = 0; i < store.n_types; ++i)
    init_projection(rng, store.type_proj_mat(i), dims.k_e, dims.k_s, proj_noise);
  return store;
}

std::int64_t clamp_to_unit_ball(ParamStore& store) {
  // Rows renormalized to the sphere land within one ulp of norm 1; the
  // slack keeps them from being re-counted as violations forever after.
  constexpr double kSlack = 1e-12;
  std::int64_t clamped = 0;
  auto clamp_rows = [&](std::int32_t count, auto row_of, const char* kind) {
    for (std::int32_t i = 0; i < count; ++i) {
      std::span<double> row = row_of(i);
      double s = 0.0;
      for (double x : row) s += x * x;
      if (!std::isfinite(s))
        throw std::runtime_error(std::string("non-finite ") + kind + " row " + std::to_string(i));
      if (s > 1.0 + kSlack) {
        const double inv = 1.0 / std::sqrt(s);
        for (double& x : row) x *= inv;
        ++clamped;
      }
    }
  };
  clamp_rows(store.n_entities, [&](std::int32_t i) { return store.entity_row(i); }, "entity");
  clamp_rows(store.n_relations, [&](std::int32_t i) { return store.relation_row(i); }, "relation");
  return clamped;
}

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  }

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) checksum_ += p[i];
    out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 4);
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64_array(const std::vector<double>& v) {
    for (double x : v) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, 8);
      u64(bits);
    }
  }
  void finish() {
    const std::uint64_t sum = checksum_;
    u64(sum);
    out_.flush();
    if (!out_) throw std::runtime_error("checkpoint write failed");
  }

 private:
  std::ofstream out_;
  std::uint64_t checksum_ = 0;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open " + path);
  }

  void bytes(void* data, std::size_t n) {
    in_.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n))
      throw std::runtime_error("truncated checkpoint " + path_);
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) checksum_ += p[i];
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  void f64_array(std::vector<double>& v) {
    for (double& x : v) {
      const std::uint64_t bits = u64();
      std::memcpy(&x, &bits, 8);
    }
  }
  void verify_checksum() {
    const std::uint64_t expected = checksum_;
    unsigned char b[8];
    in_.read(reinterpret_cast<char*>(b), 8);
    if (in_.gcount() != 8) throw std::runtime_error("truncated checkpoint " + path_);
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    if (stored != expected)
      throw std::runtime_error("checkpoint checksum mismatch in " + path_);
    in_.peek();
    if (!in_.eof()) throw std::runtime_error("trailing bytes after checksum in " + path_);
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t checksum_ = 0;
};

}  // namespace

void save_checkpoint(const ParamStore& store, const std::string& path) {
  ByteWriter w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(store.dims.k_e));
  w.u32(static_cast<std::uint32_t>(store.dims.k_r));
  w.u32(static_cast<std::uint32_t>(store.dims.k_s));
  w.u32(static_cast<std::uint32_t>(store.n_entities));
  w.u32(static_cast<std::uint32_t>(store.n_relations));
  w.u32(static_cast<std::uint32_t>(store.n_types));
  w.f64_array(store.entity_emb);
  w.f64_array(store.relation_emb);
  w.f64_array(store.rel_proj);
  w.f64_array(store.type_proj);
  w.f64_array(store.null_vec);
  w.finish();
}

ParamStore load_checkpoint(const std::string& path) {
  ByteReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("bad magic bytes in " + path);
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version) +
                             " in " + path);
  ParamStore store;
  store.dims.k_e = static_cast<int>(r.u32());
  store.dims.k_r = static_cast<int>(r.u32());
  store.dims.k_s = static_cast<int>(r.u32());
  store.n_entities = static_cast<std::int32_t>(r.u32());
  store.n_relations = static_cast<std::int32_t>(r.u32());
  store.n_types = static_cast<std::int32_t>(r.u32());
  if (store.dims.k_e < 1 || store.dims.k_r < 1 || store.dims.k_s < 1)
    throw std::runtime_error("invalid dimensions in checkpoint header of " + path);

  store.entity_emb.resize(static_cast<std::size_t>(store.n_entities) * store.dims.k_e);
  store.relation_emb.resize(static_cast<std::size_t>(store.n_relations) * store.dims.k_r);
  store.rel_proj.resize(static_cast<std::size_t>(store.n_relations) * store.dims.k_r *
                        store.dims.k_s);
  store.type_proj.resize(static_cast<std::size_t>(store.n_types) * store.dims.k_e *
                         store.dims.k_s);
  store.null_vec.resize(store.dims.k_s);
  r.f64_array(store.entity_emb);
  r.f64_array(store.relation_emb);
  r.f64_array(store.rel_proj);
  r.f64_array(store.type_proj);
  r.f64_array(store.null_vec);
  r.verify_checksum();
  return store;
}

void require_compatible(const ParamStore& store, const Dims& dims, const KgCatalog& catalog) {
  if (!(store.dims == dims))
    throw std::runtime_error(
        "checkpoint dimensions (k_e=" + std::to_string(store.dims.k_e) +
        ", k_r=" + std::to_string(store.dims.k_r) + ", k_s=" + std::to_string(store.dims.k_s) +
        ") do not match the run (k_e=" + std::to_string(dims.k_e) +
        ", k_r=" + std::to_string(dims.k_r) + ", k_s=" + std::to_string(dims.k_s) + ")");
  if (store.n_entities != catalog.total_entities() ||
      store.n_relations != catalog.total_relations() || store.n_types != catalog.types().size())
    throw std::runtime_error("checkpoint entity/relation/type counts do not match the catalog");
}

}  // namespace edal
