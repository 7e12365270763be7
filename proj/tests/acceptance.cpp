// Acceptance suite: one self-contained check per shipped guarantee, one
// pass/fail line each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "edal/evaluator.hpp"
#include "edal/synth.hpp"
#include "edal/trainer.hpp"
#include "test_util.hpp"

using namespace edal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void expect(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::string format(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// |a-b| relative to the larger magnitude. The absolute guard is the finite
// difference oracle's own resolution: differencing an O(1) hinge at
// h = 1e-6 leaves ~1e-8 of rounding noise, below which only absolute
// agreement is meaningful.
bool grad_close(double analytic, double numeric, double rel_tol) {
  const double mag = std::max(std::abs(analytic), std::abs(numeric));
  return std::abs(analytic - numeric) <= std::max(rel_tol * mag, 2e-8);
}

// --- 1. distance_dp equals the brute-force oracle -------------------------

std::string oracle_equivalence() {
  const auto t0 = Clock::now();
  rng::Stream rng(0x0acce55);
  const int k_choices[3] = {1, 2, 8};
  double worst = 0.0;
  for (int round = 0; round < 200; ++round) {
    const int k_s = k_choices[rng.next_below(3)];
    const ProjectedString x = test::random_string(rng, 1 + rng.next_below(4), k_s);
    const ProjectedString y = test::random_string(rng, 1 + rng.next_below(4), k_s);
    const std::vector<double> eps = test::random_vec(rng, k_s, -1.0, 1.0);
    const double oracle = distance_bruteforce(x, y, eps).value;
    const double dp = distance_dp(x, y, eps).value;
    const double rel = std::abs(dp - oracle) / std::max({1e-300, std::abs(oracle),
                                                         std::abs(dp)});
    worst = std::max(worst, rel);
    expect(rel <= 1e-9, "relative difference " + format(rel) + " at round " +
                            std::to_string(round));
  }
  const double elapsed = seconds_since(t0);
  expect(elapsed < 5.0, "runtime " + format(elapsed) + "s exceeds 5s");
  return "200 instances, worst rel diff " + format(worst) + ", " + format(elapsed) + "s";
}

// --- 2. delannoy counts the enumerated paths ------------------------------

std::string path_count_correctness() {
  expect(delannoy(1, 1) == 3, "delannoy(1,1) != 3");
  expect(delannoy(3, 3) == 63, "delannoy(3,3) != 63");
  expect(delannoy(3, 4) == 129, "delannoy(3,4) != 129");
  for (int m = 1; m <= 5; ++m)
    for (int n = 1; n <= 5; ++n)
      expect(delannoy(m, n) == enumerate_paths(m, n).size(),
             "mismatch at (" + std::to_string(m) + "," + std::to_string(n) + ")");
  return "all m,n <= 5 verified against enumeration";
}

// --- 3. analytic gradients match finite differences -----------------------

std::string gradient_correctness() {
  const auto t0 = Clock::now();
  const KgCatalog catalog = test::toy_catalog();
  rng::Stream rng(0x97adc3);
  const double h = 1e-6, tol = 1e-5;
  std::int64_t coords_checked = 0;

  for (int config = 0; config < 50; ++config) {
    const Dims dims{2 + static_cast<int>(rng.next_below(3)),
                    2 + static_cast<int>(rng.next_below(3)),
                    2 + static_cast<int>(rng.next_below(3))};
    ParamStore store = init_params(catalog, dims, 1000 + config);
    for (double& v : store.entity_emb) v = rng.next_uniform(-0.8, 0.8);
    for (double& v : store.relation_emb) v = rng.next_uniform(-0.8, 0.8);
    for (double& v : store.rel_proj) v = rng.next_uniform(-0.7, 0.7);
    for (double& v : store.type_proj) v = rng.next_uniform(-0.7, 0.7);
    for (double& v : store.null_vec) v = rng.next_uniform(-0.5, 0.5);

    const AlignmentSeed& seed = catalog.seeds(SeedSplit::train)[config % 2];
    const Triple negative = sample_negative(seed.right, catalog, rng);
    const double d_pos = distance_general_arity(seed.left, seed.right, store, catalog).value;
    const double d_neg = distance_general_arity(seed.left, negative, store, catalog).value;
    const double gamma = 1.0 + std::max(0.0, d_neg - d_pos);  // hinge stays active

    const PairLossResult analytic = pair_loss(seed, negative, store, catalog, gamma);
    expect(analytic.loss > 0.0, "hinge unexpectedly inactive");
    expect(!analytic.grads.entity_rows.empty() && !analytic.grads.relation_rows.empty() &&
               !analytic.grads.rel_proj.empty() && !analytic.grads.type_proj.empty() &&
               !analytic.grads.eps.empty(),
           "gradient buffer does not touch every parameter kind");

    const GradientBuffer numeric = finite_diff_grad(
        store, analytic.grads,
        [&] { return pair_loss(seed, negative, store, catalog, gamma).loss; }, h);

    auto compare = [&](const std::map<std::int32_t, std::vector<double>>& a,
                       const std::map<std::int32_t, std::vector<double>>& n,
                       const char* kind) {
      for (const auto& [row, g] : a) {
        const auto& f = n.at(row);
        for (std::size_t i = 0; i < g.size(); ++i) {
          ++coords_checked;
          expect(grad_close(g[i], f[i], tol),
                 std::string(kind) + " row " + std::to_string(row) + " coord " +
                     std::to_string(i) + ": analytic " + format(g[i]) + " vs fd " +
                     format(f[i]));
        }
      }
    };
    compare(analytic.grads.entity_rows, numeric.entity_rows, "entity");
    compare(analytic.grads.relation_rows, numeric.relation_rows, "relation");
    compare(analytic.grads.rel_proj, numeric.rel_proj, "rel_proj");
    compare(analytic.grads.type_proj, numeric.type_proj, "type_proj");
    for (std::size_t i = 0; i < analytic.grads.eps.size(); ++i) {
      ++coords_checked;
      expect(grad_close(analytic.grads.eps[i], numeric.eps[i], tol),
             "eps coord " + std::to_string(i));
    }
  }
  const double elapsed = seconds_since(t0);
  expect(elapsed < 30.0, "runtime " + format(elapsed) + "s exceeds 30s");
  return "50 configurations, " + std::to_string(coords_checked) + " coordinates, " +
         format(elapsed) + "s";
}

// --- 4. distance symmetry --------------------------------------------------

std::string symmetry() {
  rng::Stream rng(0x5f3759df);
  double worst = 0.0;
  for (int round = 0; round < 100; ++round) {
    const int k_s = 1 + static_cast<int>(rng.next_below(8));
    const ProjectedString x = test::random_string(rng, 1 + rng.next_below(4), k_s);
    const ProjectedString y = test::random_string(rng, 1 + rng.next_below(4), k_s);
    const std::vector<double> eps = test::random_vec(rng, k_s, -1.0, 1.0);
    const double diff = std::abs(distance_dp(x, y, eps).value - distance_dp(y, x, eps).value);
    worst = std::max(worst, diff);
    expect(diff <= 1e-12, "asymmetry " + format(diff) + " at round " + std::to_string(round));
  }
  return "100 instances, worst |d(x,y)-d(y,x)| = " + format(worst);
}

// --- 5. constraints hold after every optimizer step ------------------------

std::string constraint_maintenance() {
  test::TempDir dir("accept5");
  const SynthSpec spec{.entities = 50, .relations = 5, .triples = 300, .types = 3, .seed = 5};
  const SynthOutput files = generate_synth(spec, dir.path().string());
  const KgCatalog catalog = load_catalog({files.triples_l1, files.triples_l2, files.types,
                                          files.seeds_train, files.seeds_valid,
                                          files.seeds_test});
  TrainConfig config;
  config.dims = {8, 8, 8};
  config.epochs = 50;
  config.seed = 5;

  std::int64_t steps = 0;
  double worst_norm = 0.0;
  const TrainResult result = train(catalog, config, [&](const ParamStore& s) {
    ++steps;
    auto scan = [&](std::int32_t count, auto row_of) {
      for (std::int32_t i = 0; i < count; ++i) {
        double n2 = 0.0;
        for (double v : row_of(i)) n2 += v * v;
        worst_norm = std::max(worst_norm, std::sqrt(n2));
      }
    };
    scan(s.n_entities, [&](std::int32_t i) { return s.entity_row(i); });
    scan(s.n_relations, [&](std::int32_t i) { return s.relation_row(i); });
  });
  expect(steps > 0, "no optimizer steps observed");
  expect(worst_norm <= 1.0 + 1e-9, "row norm " + format(worst_norm) + " escaped the ball");
  for (const EpochStats& e : result.report.epochs)
    expect(std::isfinite(e.penalty) && e.penalty >= 0.0,
           "penalty invalid at epoch " + std::to_string(e.epoch));
  return std::to_string(steps) + " steps over 50 epochs, max row norm " + format(worst_norm);
}

// --- 6. synthetic alignment recovery ---------------------------------------

std::string synthetic_recovery() {
  const auto t0 = Clock::now();
  std::vector<double> hits1, mrr;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    test::TempDir dir("accept6");
    const SynthSpec spec{.entities = 50, .relations = 5, .triples = 300, .types = 3,
                         .seed = seed};
    const SynthOutput files = generate_synth(spec, dir.path().string());
    const KgCatalog catalog = load_catalog({files.triples_l1, files.triples_l2, files.types,
                                            files.seeds_train, files.seeds_valid,
                                            files.seeds_test});
    TrainConfig config;  // defaults: gamma 1.0, lr 0.01, 200 epochs, batch 64
    config.dims = {16, 16, 16};
    config.seed = seed;
    const TrainResult result = train(catalog, config);
    const RankingMetrics m = evaluate(catalog.seeds(SeedSplit::test), result.store, catalog);
    hits1.push_back(m.hits_at_1);
    mrr.push_back(m.mrr);
  }
  std::sort(hits1.begin(), hits1.end());
  std::sort(mrr.begin(), mrr.end());
  const double med_hits1 = hits1[2], med_mrr = mrr[2];
  const double elapsed = seconds_since(t0);
  const std::string measured = "median Hits@1 " + format(med_hits1) + ", median MRR " +
                               format(med_mrr) + " over 5 seeds, " + format(elapsed) + "s";
  expect(med_hits1 >= 0.9 && med_mrr >= 0.93,
         measured + " (targets 0.9 / 0.93; the ranking premise fails even for the exact "
                    "aligned solution, which scores mean rank ~36 of 103 here)");
  expect(elapsed < 300.0, "runtime " + format(elapsed) + "s exceeds 5 minutes");
  return measured;
}

// --- 7. hinge semantics -----------------------------------------------------

std::string hinge_semantics() {
  const KgCatalog catalog = test::toy_catalog();
  rng::Stream rng(0xb1a9e);

  // All-zero parameters: both distances vanish, loss is exactly the margin.
  {
    ParamStore store = init_params(catalog, {3, 3, 3}, 0);
    for (double& v : store.entity_emb) v = 0.0;
    for (double& v : store.relation_emb) v = 0.0;
    const AlignmentSeed& seed = catalog.seeds(SeedSplit::train)[0];
    const Triple neg = sample_negative(seed.right, catalog, rng);
    const PairLossResult r = pair_loss(seed, neg, store, catalog, 0.75);
    expect(r.loss == 0.75, "tied distances must give exactly the margin");
  }

  // Satisfied margin: loss exactly zero, no gradients.
  {
    ParamStore store = init_params(catalog, {3, 3, 3}, 1);
    const AlignmentSeed& seed = catalog.seeds(SeedSplit::train)[0];
    const EntityRef far{Kg::L2, 2};
    const Triple neg{seed.right.relation, {far, seed.right.args[1]}};
    for (double& v : store.entity_row(catalog.entity_row(far))) v = 50.0;
    const PairLossResult r = pair_loss(seed, neg, store, catalog, 1e-6);
    expect(r.loss == 0.0, "satisfied margin must give exactly zero loss");
    expect(r.grads.empty(), "satisfied margin must give exactly zero gradients");
  }

  // Active hinge equals margin + oracle distance difference.
  for (int round = 0; round < 10; ++round) {
    ParamStore store = init_params(catalog, {3, 3, 3}, 100 + round);
    for (double& v : store.entity_emb) v = rng.next_uniform(-0.9, 0.9);
    for (double& v : store.relation_emb) v = rng.next_uniform(-0.9, 0.9);
    for (double& v : store.null_vec) v = rng.next_uniform(-0.4, 0.4);
    const AlignmentSeed& seed = catalog.seeds(SeedSplit::train)[round % 2];
    const Triple neg = sample_negative(seed.right, catalog, rng);
    const double d_pos =
        distance_bruteforce(project_triple(seed.left, store, catalog),
                            project_triple(seed.right, store, catalog), store.null_vec)
            .value;
    const double d_neg = distance_bruteforce(project_triple(seed.left, store, catalog),
                                             project_triple(neg, store, catalog),
                                             store.null_vec)
                             .value;
    const double gamma = 1.0 + std::max(0.0, d_neg - d_pos);
    const PairLossResult r = pair_loss(seed, neg, store, catalog, gamma);
    const double expected = gamma + d_pos - d_neg;
    expect(std::abs(r.loss - expected) <= 1e-12 * std::max(1.0, std::abs(expected)),
           "hinge " + format(r.loss) + " != gamma + d_pos - d_neg = " + format(expected));
  }
  return "tied, satisfied, and active hinges all exact";
}

// --- 8. bit-exact reproducibility -------------------------------------------

std::string reproducibility() {
  test::TempDir dir("accept8");
  const SynthSpec spec{.entities = 50, .relations = 5, .triples = 300, .types = 3, .seed = 21};
  const SynthOutput files = generate_synth(spec, dir.path().string());
  const KgCatalog catalog = load_catalog({files.triples_l1, files.triples_l2, files.types,
                                          files.seeds_train, files.seeds_valid,
                                          files.seeds_test});
  TrainConfig config;
  config.dims = {8, 8, 8};
  config.epochs = 12;
  config.seed = 777;
  config.workers = 1;

  const TrainResult a = train(catalog, config);
  const TrainResult b = train(catalog, config);
  expect(a.store == b.store, "parameter stores differ between identical runs");
  expect(a.report.epochs.size() == b.report.epochs.size(), "epoch counts differ");
  for (std::size_t i = 0; i < a.report.epochs.size(); ++i)
    expect(a.report.epochs[i].mean_loss == b.report.epochs[i].mean_loss &&
               a.report.epochs[i].active_fraction == b.report.epochs[i].active_fraction,
           "loss sequences differ at epoch " + std::to_string(i + 1));

  save_checkpoint(a.store, dir.file("a.edal"));
  save_checkpoint(b.store, dir.file("b.edal"));
  expect(test::read_file(dir.file("a.edal")) == test::read_file(dir.file("b.edal")),
         "checkpoint files are not byte-identical");
  return "12-epoch run repeated: checkpoints and loss sequences bit-identical";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1. oracle equivalence (dp vs brute force, rel 1e-9)", oracle_equivalence},
      {"2. path-count correctness (delannoy vs enumeration)", path_count_correctness},
      {"3. gradient correctness (finite differences, rel 1e-5)", gradient_correctness},
      {"4. symmetry (|d(x,y)-d(y,x)| <= 1e-12)", symmetry},
      {"5. constraint maintenance (unit ball after every step)", constraint_maintenance},
      {"6. synthetic recovery (Hits@1 >= 0.9, MRR >= 0.93)", synthetic_recovery},
      {"7. hinge semantics (exact margin arithmetic)", hinge_semantics},
      {"8. reproducibility (bit-identical runs)", reproducibility},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      const std::string detail = c.run();
      std::cout << "[PASS] " << c.name << " — " << detail << "\n";
    } catch (const std::exception& err) {
      std::cout << "[FAIL] " << c.name << " — " << err.what() << "\n";
      ++failures;
    }
  }
  return failures;
}
