#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "edal/evaluator.hpp"
#include "edal/kg.hpp"
#include "edal/trainer.hpp"

namespace edal {

// Everything a command run needs: hyperparameters, file paths, and the
// evaluation/sampling flags. Parsed from a line-oriented `key = value` file;
// unknown keys are rejected.
struct RunConfig {
  CatalogPaths paths;
  std::string checkpoint;  // output of train, input of eval/dist
  std::string out_dir = ".";
  TrainConfig train;
  RankCandidates rank_candidates = RankCandidates::corruptions;
  std::string pairs_file;             // optional labeled pairs for eval
  std::optional<double> theta;        // threshold for the pairs file

  // Applies one `key = value` assignment; throws on unknown keys or
  // unparseable values.
  void set(const std::string& key, const std::string& value);
};

RunConfig parse_config_file(const std::string& path);

// The resolved configuration, echoed as a reloadable key=value file.
void write_config(const RunConfig& config, std::ostream& out);

}  // namespace edal
