#include <doctest.h>

#include <cmath>
#include <limits>

#include "edal/editdist.hpp"
#include "edal/params.hpp"
#include "test_util.hpp"

using namespace edal;
using test::TempDir;

namespace {

double row_norm(std::span<const double> row) {
  double s = 0;
  for (double x : row) s += x * x;
  return std::sqrt(s);
}

ParamStore random_store(const KgCatalog& catalog, const Dims& dims, std::uint64_t seed) {
  ParamStore s = init_params(catalog, dims, seed);
  rng::Stream rng(seed ^ 0xabcdef);
  for (auto* v : {&s.entity_emb, &s.relation_emb, &s.rel_proj, &s.type_proj, &s.null_vec})
    for (double& x : *v) x = rng.next_uniform(-1.0, 1.0);
  return s;
}

}  // namespace

TEST_CASE("init is deterministic given the seed") {
  const KgCatalog c = test::toy_catalog();
  const ParamStore a = init_params(c, {4, 3, 5}, 99);
  const ParamStore b = init_params(c, {4, 3, 5}, 99);
  CHECK(a == b);
  const ParamStore other = init_params(c, {4, 3, 5}, 100);
  CHECK_FALSE(a == other);
}

TEST_CASE("init keeps every embedding row inside the unit ball") {
  const KgCatalog c = test::toy_catalog();
  const ParamStore s = init_params(c, {8, 8, 8}, 1);
  for (std::int32_t i = 0; i < s.n_entities; ++i) CHECK(row_norm(s.entity_row(i)) <= 1.0 + 1e-9);
  for (std::int32_t i = 0; i < s.n_relations; ++i)
    CHECK(row_norm(s.relation_row(i)) <= 1.0 + 1e-9);
  for (double x : s.null_vec) CHECK(x == 0.0);
}

TEST_CASE("init rejects an empty catalog") {
  KgCatalog empty;
  CHECK_THROWS_AS(init_params(empty, {4, 4, 4}, 0), std::runtime_error);
}

TEST_CASE("noise-free projections are the exact identity map") {
  const KgCatalog c = test::toy_catalog();
  const ParamStore s = init_params(c, {5, 5, 5}, 7, /*proj_noise=*/0.0);
  // With k_e = k_r = k_s and identity matrices, projecting a triple returns
  // the raw embedding rows.
  const Triple& t = c.triples(Kg::L1)[0];
  const ProjectedString ps = project_triple(t, s, c);
  REQUIRE(ps.length() == 3);
  const auto rel = s.relation_row(c.relation_row(t.relation));
  for (int i = 0; i < 5; ++i) CHECK(ps.at(0)[i] == rel[i]);
  for (int a = 0; a < 2; ++a) {
    const auto ent = s.entity_row(c.entity_row(t.args[a]));
    for (int i = 0; i < 5; ++i) CHECK(ps.at(a + 1)[i] == ent[i]);
  }
}

TEST_CASE("clamp_to_unit_ball rescales offending rows and reports the count") {
  const KgCatalog c = test::toy_catalog();
  ParamStore s = init_params(c, {2, 2, 2}, 3);
  CHECK(clamp_to_unit_ball(s) == 0);  // feasible after init

  s.entity_row(0)[0] = 3.0;
  s.entity_row(0)[1] = 4.0;
  CHECK(clamp_to_unit_ball(s) == 1);
  CHECK(s.entity_row(0)[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.entity_row(0)[1] == doctest::Approx(0.8).epsilon(1e-12));

  s.entity_row(1)[0] = 0.5;
  s.entity_row(1)[1] = 0.0;
  CHECK(clamp_to_unit_ball(s) == 0);
  CHECK(s.entity_row(1)[0] == 0.5);  // already feasible, untouched
}

TEST_CASE("clamp_to_unit_ball names non-finite rows") {
  const KgCatalog c = test::toy_catalog();
  ParamStore s = init_params(c, {2, 2, 2}, 3);
  s.relation_row(2)[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(clamp_to_unit_ball(s), doctest::Contains("relation row 2"),
                       std::runtime_error);
}

TEST_CASE("init then clamp keeps norms feasible under random overwrites") {
  const KgCatalog c = test::toy_catalog();
  rng::Stream rng(17);
  for (int round = 0; round < 10; ++round) {
    ParamStore s = init_params(c, {3, 3, 3}, round);
    for (double& x : s.entity_emb) x = rng.next_uniform(-2.0, 2.0);
    for (double& x : s.relation_emb) x = rng.next_uniform(-2.0, 2.0);
    clamp_to_unit_ball(s);
    for (std::int32_t i = 0; i < s.n_entities; ++i)
      CHECK(row_norm(s.entity_row(i)) <= 1.0 + 1e-9);
    for (std::int32_t i = 0; i < s.n_relations; ++i)
      CHECK(row_norm(s.relation_row(i)) <= 1.0 + 1e-9);
  }
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  TempDir dir("ckpt");
  const KgCatalog c = test::toy_catalog();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ParamStore s = random_store(c, {3, 4, 5}, seed);
    const std::string path = dir.file("s" + std::to_string(seed) + ".edal");
    save_checkpoint(s, path);
    const ParamStore loaded = load_checkpoint(path);
    CHECK(loaded == s);
  }
}

TEST_CASE("checkpoint loading rejects corruption") {
  TempDir dir("ckpt");
  const KgCatalog c = test::toy_catalog();
  const ParamStore s = init_params(c, {3, 3, 3}, 5);
  const std::string path = dir.file("s.edal");
  save_checkpoint(s, path);
  std::string bytes = test::read_file(path);

  SUBCASE("truncated by one byte") {
    test::write_file(path, bytes.substr(0, bytes.size() - 1));
    CHECK_THROWS_WITH_AS(load_checkpoint(path), doctest::Contains("truncated"),
                         std::runtime_error);
  }
  SUBCASE("bad magic") {
    bytes[0] = 'X';
    test::write_file(path, bytes);
    CHECK_THROWS_WITH_AS(load_checkpoint(path), doctest::Contains("magic"), std::runtime_error);
  }
  SUBCASE("flipped payload byte fails the checksum") {
    bytes[40] = static_cast<char>(bytes[40] ^ 0x08);
    test::write_file(path, bytes);
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
  }
  SUBCASE("trailing garbage") {
    test::write_file(path, bytes + "zz");
    CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
  }
}

TEST_CASE("checkpoints with mismatched dimensions are rejected against a run") {
  TempDir dir("ckpt");
  const KgCatalog c = test::toy_catalog();
  const ParamStore s = init_params(c, {4, 4, 8}, 5);
  const std::string path = dir.file("s.edal");
  save_checkpoint(s, path);
  const ParamStore loaded = load_checkpoint(path);
  CHECK_THROWS_WITH_AS(require_compatible(loaded, Dims{4, 4, 16}, c),
                       doctest::Contains("k_s=16"), std::runtime_error);
  CHECK_NOTHROW(require_compatible(loaded, Dims{4, 4, 8}, c));
}
