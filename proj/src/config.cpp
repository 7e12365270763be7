#include "edal/config.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace edal {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': cannot parse number '" + value + "'");
  }
  if (pos != value.size())
    throw std::runtime_error("config key '" + key + "': cannot parse number '" + value + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  std::int64_t v;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': cannot parse integer '" + value + "'");
  }
  if (pos != value.size())
    throw std::runtime_error("config key '" + key + "': cannot parse integer '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::runtime_error("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "triples_l1") paths.triples_l1 = value;
  else if (key == "triples_l2") paths.triples_l2 = value;
  else if (key == "types") paths.types = value;
  else if (key == "seeds_train") paths.seeds_train = value;
  else if (key == "seeds_valid") paths.seeds_valid = value;
  else if (key == "seeds_test") paths.seeds_test = value;
  else if (key == "checkpoint") checkpoint = value;
  else if (key == "out") out_dir = value;
  else if (key == "gamma_a") train.gamma_a = parse_double(key, value);
  else if (key == "lr") train.lr = parse_double(key, value);
  else if (key == "epochs") train.epochs = static_cast<int>(parse_int(key, value));
  else if (key == "batch_size") train.batch_size = static_cast<int>(parse_int(key, value));
  else if (key == "negatives_per_positive")
    train.negatives_per_positive = static_cast<int>(parse_int(key, value));
  else if (key == "lambda_c") train.lambda_c = parse_double(key, value);
  else if (key == "k_e") train.dims.k_e = static_cast<int>(parse_int(key, value));
  else if (key == "k_r") train.dims.k_r = static_cast<int>(parse_int(key, value));
  else if (key == "k_s") train.dims.k_s = static_cast<int>(parse_int(key, value));
  else if (key == "seed") train.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "eval_every") train.eval_every = static_cast<int>(parse_int(key, value));
  else if (key == "workers") train.workers = static_cast<int>(parse_int(key, value));
  else if (key == "update_epsilon") train.update_epsilon = parse_bool(key, value);
  else if (key == "negative_sampling") {
    if (value == "mode-uniform") train.negative_sampling = NegativeSampling::mode_uniform;
    else if (value == "global-uniform") train.negative_sampling = NegativeSampling::global_uniform;
    else
      throw std::runtime_error(
          "config key 'negative_sampling': expected mode-uniform or global-uniform, got '" +
          value + "'");
  } else if (key == "rank_candidates") {
    if (value == "corruptions") rank_candidates = RankCandidates::corruptions;
    else if (value == "all-triples") rank_candidates = RankCandidates::all_triples;
    else
      throw std::runtime_error(
          "config key 'rank_candidates': expected corruptions or all-triples, got '" + value +
          "'");
  } else if (key == "pairs") pairs_file = value;
  else if (key == "theta") theta = parse_double(key, value);
  else
    throw std::runtime_error("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  RunConfig config;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      config.set(key, value);
    } catch (const std::exception& err) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
  return config;
}

void write_config(const RunConfig& config, std::ostream& out) {
  out << std::setprecision(17);  // numbers must survive the round trip
  auto path_line = [&](const char* key, const std::string& value) {
    if (!value.empty()) out << key << " = " << value << '\n';
  };
  path_line("triples_l1", config.paths.triples_l1);
  path_line("triples_l2", config.paths.triples_l2);
  path_line("types", config.paths.types);
  path_line("seeds_train", config.paths.seeds_train);
  path_line("seeds_valid", config.paths.seeds_valid);
  path_line("seeds_test", config.paths.seeds_test);
  path_line("checkpoint", config.checkpoint);
  path_line("out", config.out_dir);
  out << "gamma_a = " << config.train.gamma_a << '\n';
  out << "lr = " << config.train.lr << '\n';
  out << "epochs = " << config.train.epochs << '\n';
  out << "batch_size = " << config.train.batch_size << '\n';
  out << "negatives_per_positive = " << config.train.negatives_per_positive << '\n';
  out << "lambda_c = " << config.train.lambda_c << '\n';
  out << "k_e = " << config.train.dims.k_e << '\n';
  out << "k_r = " << config.train.dims.k_r << '\n';
  out << "k_s = " << config.train.dims.k_s << '\n';
  out << "seed = " << config.train.seed << '\n';
  out << "eval_every = " << config.train.eval_every << '\n';
  out << "workers = " << config.train.workers << '\n';
  out << "update_epsilon = " << (config.train.update_epsilon ? "true" : "false") << '\n';
  out << "negative_sampling = "
      << (config.train.negative_sampling == NegativeSampling::mode_uniform ? "mode-uniform"
                                                                           : "global-uniform")
      << '\n';
  out << "rank_candidates = "
      << (config.rank_candidates == RankCandidates::corruptions ? "corruptions" : "all-triples")
      << '\n';
  path_line("pairs", config.pairs_file);
  if (config.theta) out << "theta = " << *config.theta << '\n';
}

}  // namespace edal
