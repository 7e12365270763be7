#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edal/config.hpp"
#include "edal/evaluator.hpp"
#include "edal/synth.hpp"
#include "edal/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using namespace edal;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "key = value configuration file");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "master seed, overrides the config file");
  cmd->add_option("--out", args.out, "output directory, overrides the config file");
  cmd->add_option("--workers", args.workers, "worker threads for distance/evaluation reads");
}

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig config =
      args.config_path.empty() ? RunConfig{} : parse_config_file(args.config_path);
  if (args.seed) config.train.seed = *args.seed;
  if (args.out) config.out_dir = *args.out;
  if (args.workers) config.train.workers = *args.workers;
  return config;
}

void require_file(const std::string& path, const char* role) {
  if (path.empty())
    throw std::runtime_error(std::string("missing required path for ") + role +
                             " (set it in the config file)");
  if (!fs::exists(path))
    throw std::runtime_error(std::string(role) + " file not found: " + path);
}

void validate_catalog_paths(const RunConfig& config) {
  require_file(config.paths.triples_l1, "triples_l1");
  require_file(config.paths.triples_l2, "triples_l2");
  require_file(config.paths.types, "types");
  require_file(config.paths.seeds_train, "seeds_train");
  if (!config.paths.seeds_valid.empty()) require_file(config.paths.seeds_valid, "seeds_valid");
  if (!config.paths.seeds_test.empty()) require_file(config.paths.seeds_test, "seeds_test");
}

nlohmann::json metrics_json(const RankingMetrics& m) {
  return {{"mrr", m.mrr},
          {"hits_at_1", m.hits_at_1},
          {"hits_at_10", m.hits_at_10},
          {"mean_rank", m.mean_rank},
          {"n_queries", m.n_queries}};
}

int cmd_train(const CommonArgs& args) {
  RunConfig config = resolve_config(args);
  validate_catalog_paths(config);
  const KgCatalog catalog = load_catalog(config.paths);

  const TrainResult result = train(catalog, config.train);

  fs::create_directories(config.out_dir);
  if (config.checkpoint.empty()) config.checkpoint = config.out_dir + "/checkpoint.edal";
  save_checkpoint(result.store, config.checkpoint);
  {
    std::ofstream tsv(config.out_dir + "/report.tsv", std::ios::binary);
    write_report_tsv(result.report, tsv);
  }
  {
    std::ofstream json(config.out_dir + "/report.json", std::ios::binary);
    json << report_to_json(result.report, config.train) << '\n';
  }
  {
    std::ofstream echo(config.out_dir + "/config.resolved", std::ios::binary);
    write_config(config, echo);
  }

  const EpochStats& last = result.report.epochs.back();
  std::cout << "trained " << config.train.epochs << " epochs, final mean loss "
            << last.mean_loss << ", checkpoint " << config.checkpoint << "\n";
  if (!catalog.seeds(SeedSplit::test).empty()) {
    const RankingMetrics m = evaluate(catalog.seeds(SeedSplit::test), result.store, catalog,
                                      config.rank_candidates, config.train.workers);
    std::cout << "test: " << metrics_json(m).dump() << "\n";
  }
  return 0;
}

int cmd_eval(const CommonArgs& args) {
  RunConfig config = resolve_config(args);
  validate_catalog_paths(config);
  require_file(config.checkpoint, "checkpoint");
  const KgCatalog catalog = load_catalog(config.paths);
  const ParamStore store = load_checkpoint(config.checkpoint);
  require_compatible(store, config.train.dims, catalog);

  const auto& test_seeds = catalog.seeds(SeedSplit::test);
  if (test_seeds.empty()) throw std::runtime_error("no test seeds configured (seeds_test)");
  const RankingMetrics m =
      evaluate(test_seeds, store, catalog, config.rank_candidates, config.train.workers);
  nlohmann::json out = metrics_json(m);
  if (!config.pairs_file.empty()) {
    require_file(config.pairs_file, "pairs");
    if (!config.theta)
      throw std::runtime_error("labeled pairs given but no theta threshold configured");
    const auto pairs = load_labeled_pairs(config.pairs_file, catalog);
    const ThresholdReport r = classify_at_threshold(pairs, *config.theta, store, catalog);
    out["threshold"] = {{"theta", r.theta},
                        {"accuracy", r.accuracy},
                        {"precision", r.precision},
                        {"recall", r.recall},
                        {"n_pairs", r.n_pairs}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_dist(const CommonArgs& args, const std::string& atom_l, const std::string& atom_r) {
  RunConfig config = resolve_config(args);
  validate_catalog_paths(config);
  require_file(config.checkpoint, "checkpoint");
  const KgCatalog catalog = load_catalog(config.paths);
  const ParamStore store = load_checkpoint(config.checkpoint);
  require_compatible(store, config.train.dims, catalog);

  const Triple left = parse_atom(atom_l, Kg::L1, catalog);
  const Triple right = parse_atom(atom_r, Kg::L2, catalog);
  const DistanceResult d = distance_general_arity(left, right, store, catalog);
  std::cout.precision(17);
  std::cout << "distance " << d.value << "\n";
  std::cout << "paths " << d.path_count << "\n";
  return 0;
}

int cmd_gen_synth(const CommonArgs& args, const SynthSpec& spec_in) {
  RunConfig config = resolve_config(args);
  SynthSpec spec = spec_in;
  spec.seed = config.train.seed;
  const SynthOutput out = generate_synth(spec, config.out_dir);
  std::cout << "generated " << spec.triples << " triples over " << spec.entities
            << " entities, " << spec.relations << " relations, " << spec.types << " types\n";
  std::cout << "seeds: " << out.n_train << " train / " << out.n_valid << " valid / "
            << out.n_test << " test\n";
  std::cout << "config: " << out.config << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knowledge-graph triple alignment by learned string edit distance"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, dist_args, synth_args;
  std::string atom_l, atom_r;
  SynthSpec spec;

  auto* train_cmd = app.add_subcommand("train", "train alignment parameters");
  add_common(train_cmd, train_args, /*config_required=*/true);

  auto* eval_cmd = app.add_subcommand("eval", "rank test seeds against corruption candidates");
  add_common(eval_cmd, eval_args, /*config_required=*/true);

  auto* dist_cmd = app.add_subcommand("dist", "distance between two atoms rel(a,b,...)");
  add_common(dist_cmd, dist_args, /*config_required=*/true);
  dist_cmd->add_option("atomL", atom_l, "left atom, from L1")->required();
  dist_cmd->add_option("atomR", atom_r, "right atom, from L2")->required();

  auto* synth_cmd = app.add_subcommand("gen-synth", "generate a synthetic aligned KG pair");
  add_common(synth_cmd, synth_args, /*config_required=*/false);
  synth_cmd->add_option("--entities", spec.entities, "entity count")->capture_default_str();
  synth_cmd->add_option("--relations", spec.relations, "relation count")->capture_default_str();
  synth_cmd->add_option("--triples", spec.triples, "distinct triple count")
      ->capture_default_str();
  synth_cmd->add_option("--types", spec.types, "entity type count")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (dist_cmd->parsed()) return cmd_dist(dist_args, atom_l, atom_r);
    if (synth_cmd->parsed()) return cmd_gen_synth(synth_args, spec);
  } catch (const DivergenceError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
