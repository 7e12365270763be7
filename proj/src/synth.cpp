#include "edal/synth.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "edal/rng.hpp"

namespace edal {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // fixed \n line endings everywhere
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

SynthOutput generate_synth(const SynthSpec& spec, const std::string& out_dir) {
  if (spec.entities < 1 || spec.relations < 1 || spec.types < 1)
    throw std::runtime_error("gen-synth: entity, relation and type counts must be >= 1");
  if (spec.triples < 1) throw std::runtime_error("gen-synth: triple count must be >= 1");
  const std::int64_t cap = spec.entities * spec.entities * spec.relations;
  if (spec.triples > cap)
    throw std::runtime_error("gen-synth: " + std::to_string(spec.triples) +
                             " distinct triples requested but only " + std::to_string(cap) +
                             " exist for these counts");

  auto rng = rng::substream(spec.seed, rng::Substream::synth);
  using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;  // (r, h, t)
  std::vector<Key> triples;
  triples.reserve(spec.triples);
  if (spec.triples * 2 >= cap) {
    // Dense request: enumerate and take a shuffled prefix.
    std::vector<Key> all;
    all.reserve(cap);
    for (std::int64_t r = 0; r < spec.relations; ++r)
      for (std::int64_t h = 0; h < spec.entities; ++h)
        for (std::int64_t t = 0; t < spec.entities; ++t) all.emplace_back(r, h, t);
    rng.shuffle(all);
    triples.assign(all.begin(), all.begin() + spec.triples);
  } else {
    std::set<Key> seen;
    while (static_cast<std::int64_t>(triples.size()) < spec.triples) {
      Key k{static_cast<std::int64_t>(rng.next_below(spec.relations)),
            static_cast<std::int64_t>(rng.next_below(spec.entities)),
            static_cast<std::int64_t>(rng.next_below(spec.entities))};
      if (seen.insert(k).second) triples.push_back(k);
    }
  }

  std::filesystem::create_directories(out_dir);
  const std::string dir = out_dir + "/";
  SynthOutput out;
  out.triples_l1 = dir + "triples_l1.tsv";
  out.triples_l2 = dir + "triples_l2.tsv";
  out.types = dir + "types.tsv";
  out.seeds_train = dir + "seeds_train.tsv";
  out.seeds_valid = dir + "seeds_valid.tsv";
  out.seeds_test = dir + "seeds_test.tsv";
  out.config = dir + "edal.config";

  {
    auto f1 = open_out(out.triples_l1);
    auto f2 = open_out(out.triples_l2);
    for (const auto& [r, h, t] : triples) {
      f1 << 'e' << h << "\tr" << r << "\te" << t << '\n';
      f2 << 'f' << h << "\ts" << r << "\tf" << t << '\n';
    }
  }
  {
    auto f = open_out(out.types);
    for (std::int64_t e = 0; e < spec.entities; ++e)
      f << 'e' << e << "\tt" << (e % spec.types) << '\n';
    for (std::int64_t e = 0; e < spec.entities; ++e)
      f << 'f' << e << "\tt" << (e % spec.types) << '\n';
  }
  {
    auto train = open_out(out.seeds_train);
    auto valid = open_out(out.seeds_valid);
    auto test = open_out(out.seeds_test);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const auto& [r, h, t] = triples[i];
      // 80/10/10 by triple index.
      std::ofstream& f = (i % 10 < 8) ? train : (i % 10 == 8) ? valid : test;
      f << 'e' << h << "\tr" << r << "\te" << t << "\tf" << h << "\ts" << r << "\tf" << t
        << '\n';
      (i % 10 < 8 ? out.n_train : i % 10 == 8 ? out.n_valid : out.n_test) += 1;
    }
  }
  {
    auto f = open_out(out.config);
    f << "triples_l1 = " << out.triples_l1 << '\n';
    f << "triples_l2 = " << out.triples_l2 << '\n';
    f << "types = " << out.types << '\n';
    f << "seeds_train = " << out.seeds_train << '\n';
    f << "seeds_valid = " << out.seeds_valid << '\n';
    f << "seeds_test = " << out.seeds_test << '\n';
    f << "seed = " << spec.seed << '\n';
  }
  return out;
}

}  // namespace edal
