#include "edal/evaluator.hpp"

#include <cmath>

#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edal {

std::vector<double> score_candidates_serial(const Triple& left,
                                            std::span<const Triple> candidates,
                                            const ParamStore& store, const KgCatalog& catalog) {
  const ProjectedString x = project_triple(left, store, catalog);
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const ProjectedString y = project_triple(candidates[i], store, catalog);
    scores[i] = distance_dp(x, y, store.null_vec).value;
  }
  return scores;
}

std::vector<double> score_candidates(const Triple& left, std::span<const Triple> candidates,
                                     const ParamStore& store, const KgCatalog& catalog,
                                     int workers) {
#ifdef _OPENMP
  if (workers > 1) {
    const ProjectedString x = project_triple(left, store, catalog);
    std::vector<double> scores(candidates.size());
    const std::int64_t count = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t i = 0; i < count; ++i) {
      const ProjectedString y = project_triple(candidates[i], store, catalog);
      scores[i] = distance_dp(x, y, store.null_vec).value;
    }
    return scores;
  }
#else
  (void)workers;
#endif
  return score_candidates_serial(left, candidates, store, catalog);
}

namespace {

std::vector<Triple> candidate_set(const AlignmentSeed& seed, const KgCatalog& catalog,
                                  RankCandidates mode) {
  if (mode == RankCandidates::corruptions) return corruption_set(seed.right, catalog);
  std::vector<Triple> out;
  for (const Triple& t : catalog.triples(Kg::L2))
    if (t != seed.right) out.push_back(t);
  return out;
}

std::int64_t rank_from_scores(double true_dist, std::span<const double> candidate_dists) {
  // Pessimistic ties; non-finite distances (degenerate parameter states)
  // also count against the true triple rather than silently ranking first.
  std::int64_t rank = 1;
  for (double d : candidate_dists)
    if (!(d > true_dist) || !std::isfinite(d)) ++rank;
  return rank;
}

}  // namespace

RankingMetrics metrics_from_ranks(std::span<const std::int64_t> ranks) {
  if (ranks.empty()) throw std::runtime_error("evaluate: empty query set");
  RankingMetrics m;
  m.n_queries = static_cast<std::int64_t>(ranks.size());
  double rr = 0.0, mean = 0.0;
  std::int64_t h1 = 0, h10 = 0;
  for (std::int64_t r : ranks) {
    rr += 1.0 / static_cast<double>(r);
    mean += static_cast<double>(r);
    h1 += (r <= 1);
    h10 += (r <= 10);
  }
  m.mrr = rr / static_cast<double>(m.n_queries);
  m.mean_rank = mean / static_cast<double>(m.n_queries);
  m.hits_at_1 = static_cast<double>(h1) / static_cast<double>(m.n_queries);
  m.hits_at_10 = static_cast<double>(h10) / static_cast<double>(m.n_queries);
  return m;
}

namespace {

std::int64_t rank_one(const AlignmentSeed& seed, const ParamStore& store,
                      const KgCatalog& catalog, RankCandidates mode) {
  const std::vector<Triple> candidates = candidate_set(seed, catalog, mode);
  const ProjectedString x = project_triple(seed.left, store, catalog);
  const ProjectedString y = project_triple(seed.right, store, catalog);
  const double true_dist = distance_dp(x, y, store.null_vec).value;
  const std::vector<double> scores = score_candidates_serial(seed.left, candidates, store,
                                                             catalog);
  return rank_from_scores(true_dist, scores);
}

}  // namespace

std::int64_t rank_true_triple(const AlignmentSeed& seed, const ParamStore& store,
                              const KgCatalog& catalog, RankCandidates mode) {
  return rank_one(seed, store, catalog, mode);
}

RankingMetrics evaluate_serial(std::span<const AlignmentSeed> seeds, const ParamStore& store,
                               const KgCatalog& catalog, RankCandidates mode) {
  if (seeds.empty()) throw std::runtime_error("evaluate: empty query set");
  std::vector<std::int64_t> ranks(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) ranks[i] = rank_one(seeds[i], store, catalog, mode);
  return metrics_from_ranks(ranks);
}

RankingMetrics evaluate(std::span<const AlignmentSeed> seeds, const ParamStore& store,
                        const KgCatalog& catalog, RankCandidates mode, int workers) {
#ifdef _OPENMP
  if (workers > 1) {
    if (seeds.empty()) throw std::runtime_error("evaluate: empty query set");
    std::vector<std::int64_t> ranks(seeds.size());
    const std::int64_t count = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::int64_t i = 0; i < count; ++i) ranks[i] = rank_one(seeds[i], store, catalog, mode);
    return metrics_from_ranks(ranks);
  }
#else
  (void)workers;
#endif
  return evaluate_serial(seeds, store, catalog, mode);
}

std::vector<LabeledPair> load_labeled_pairs(const std::string& path, const KgCatalog& catalog) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<LabeledPair> pairs;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string atom_l, atom_r, label;
    if (!std::getline(ss, atom_l, '\t') || !std::getline(ss, atom_r, '\t') ||
        !std::getline(ss, label, '\t'))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected atomL<TAB>atomR<TAB>label");
    if (label != "0" && label != "1")
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    pairs.push_back({parse_atom(atom_l, Kg::L1, catalog), parse_atom(atom_r, Kg::L2, catalog),
                     label == "1"});
  }
  return pairs;
}

ThresholdReport classify_at_threshold(std::span<const LabeledPair> pairs, double theta,
                                      const ParamStore& store, const KgCatalog& catalog) {
  if (pairs.empty()) throw std::runtime_error("classify_at_threshold: empty pair set");
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const LabeledPair& p : pairs) {
    const double d = distance_general_arity(p.left, p.right, store, catalog).value;
    const bool predicted = d < theta;
    if (predicted && p.label) ++tp;
    else if (predicted && !p.label) ++fp;
    else if (!predicted && !p.label) ++tn;
    else ++fn;
  }
  ThresholdReport r;
  r.theta = theta;
  r.n_pairs = static_cast<std::int64_t>(pairs.size());
  r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(r.n_pairs);
  r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  return r;
}

}  // namespace edal
