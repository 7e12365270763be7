#pragma once

#include <cstdint>
#include <string>

namespace edal {

struct SynthSpec {
  std::int64_t entities = 50;
  std::int64_t relations = 5;
  std::int64_t triples = 300;
  std::int64_t types = 3;
  std::uint64_t seed = 0;
};

struct SynthOutput {
  std::string triples_l1;
  std::string triples_l2;
  std::string types;
  std::string seeds_train;
  std::string seeds_valid;
  std::string seeds_test;
  std::string config;  // ready-to-run key=value file pointing at the above
  std::int64_t n_train = 0, n_valid = 0, n_test = 0;
};

// Random L1 graph of distinct binary triples, cloned into L2 under renamed
// identifiers (e17 -> f17, r3 -> s3), entity types assigned round-robin,
// ground-truth alignments split 80/10/10 by triple index. Byte-identical
// output for a fixed spec. Throws on inconsistent counts
// (triples < 1 or triples > entities^2 * relations).
SynthOutput generate_synth(const SynthSpec& spec, const std::string& out_dir);

}  // namespace edal
