// Compares the serial reference kernels against their OpenMP versions:
// candidate scoring (evaluation) and per-pair gradient batches (training).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include <CLI11.hpp>

#include "edal/evaluator.hpp"
#include "edal/synth.hpp"
#include "edal/trainer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace edal;

namespace {

double now_sec() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Timing {
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
};

void print_row(const char* name, const Timing& t, bool identical) {
  std::printf("%-24s %10.2f ms %10.2f ms %8.2fx   results %s\n", name, t.serial_ms,
              t.parallel_ms, t.serial_ms / t.parallel_ms, identical ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel comparison"};
  std::int64_t entities = 400, relations = 8, triples = 1500;
  int k = 16, iters = 3, workers = 0, batch = 512;
  std::uint64_t seed = 1;
  app.add_option("--entities", entities)->capture_default_str();
  app.add_option("--relations", relations)->capture_default_str();
  app.add_option("--triples", triples)->capture_default_str();
  app.add_option("--k", k, "embedding dimensions")->capture_default_str();
  app.add_option("--iters", iters)->capture_default_str();
  app.add_option("--batch", batch, "pair jobs per gradient batch")->capture_default_str();
  app.add_option("--workers", workers, "0 = all hardware threads")->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (workers <= 0) workers = omp_get_max_threads();
#else
  workers = 1;
  std::printf("built without OpenMP: parallel kernels fall back to serial\n");
#endif

  const auto tmp = std::filesystem::temp_directory_path() / "edal-bench";
  const SynthSpec spec{.entities = entities, .relations = relations, .triples = triples,
                       .types = 4, .seed = seed};
  const SynthOutput files = generate_synth(spec, tmp.string());
  const KgCatalog catalog = load_catalog({files.triples_l1, files.triples_l2, files.types,
                                          files.seeds_train, files.seeds_valid,
                                          files.seeds_test});
  const Dims dims{k, k, k};
  const ParamStore store = init_params(catalog, dims, seed);

  const auto& seeds = catalog.seeds(SeedSplit::train);
  const Triple& query = seeds[0].left;
  const std::vector<Triple> candidates = corruption_set(seeds[0].right, catalog);

  std::printf("entities=%lld relations=%lld triples=%lld k=%d candidates=%zu workers=%d\n\n",
              static_cast<long long>(entities), static_cast<long long>(relations),
              static_cast<long long>(triples), k, candidates.size(), workers);
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "OpenMP", "speedup");

  // Candidate scoring: one query against the full corruption set.
  {
    Timing t;
    std::vector<double> ref, par;
    for (int i = 0; i < iters; ++i) {
      double t0 = now_sec();
      ref = score_candidates_serial(query, candidates, store, catalog);
      t.serial_ms += (now_sec() - t0) * 1e3;
      t0 = now_sec();
      par = score_candidates(query, candidates, store, catalog, workers);
      t.parallel_ms += (now_sec() - t0) * 1e3;
    }
    print_row("score_candidates", t, ref == par);
  }

  // Ranking evaluation over the validation seeds.
  {
    Timing t;
    const auto& queries = catalog.seeds(SeedSplit::valid);
    RankingMetrics ref, par;
    for (int i = 0; i < iters; ++i) {
      double t0 = now_sec();
      ref = evaluate_serial(queries, store, catalog);
      t.serial_ms += (now_sec() - t0) * 1e3;
      t0 = now_sec();
      par = evaluate(queries, store, catalog, RankCandidates::corruptions, workers);
      t.parallel_ms += (now_sec() - t0) * 1e3;
    }
    print_row("evaluate", t, ref.mrr == par.mrr && ref.mean_rank == par.mean_rank);
  }

  // Pair-loss gradients for one training batch.
  {
    Timing t;
    rng::Stream rng(seed);
    std::vector<std::pair<const AlignmentSeed*, Triple>> jobs;
    for (int j = 0; j < batch; ++j) {
      const AlignmentSeed& s = seeds[rng.next_below(seeds.size())];
      jobs.emplace_back(&s, sample_negative(s.right, catalog, rng));
    }
    std::vector<double> ref(jobs.size()), par(jobs.size());
    for (int i = 0; i < iters; ++i) {
      double t0 = now_sec();
      for (std::size_t j = 0; j < jobs.size(); ++j)
        ref[j] = pair_loss(*jobs[j].first, jobs[j].second, store, catalog, 1.0).loss;
      t.serial_ms += (now_sec() - t0) * 1e3;
      t0 = now_sec();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
      for (std::size_t j = 0; j < jobs.size(); ++j)
        par[j] = pair_loss(*jobs[j].first, jobs[j].second, store, catalog, 1.0).loss;
      t.parallel_ms += (now_sec() - t0) * 1e3;
    }
    print_row("pair_loss batch", t, ref == par);
  }

  std::filesystem::remove_all(tmp);
  return 0;
}
