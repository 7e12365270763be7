#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edal/editdist.hpp"
#include "edal/kg.hpp"
#include "edal/params.hpp"

namespace edal {

struct RankingMetrics {
  double mrr = 0.0;
  double hits_at_1 = 0.0;
  double hits_at_10 = 0.0;
  double mean_rank = 0.0;
  std::int64_t n_queries = 0;
};

enum class RankCandidates {
  corruptions,  // the corruption set of the true right-hand triple
  all_triples,  // every L2 triple except the true one
};

// Distance of one left-hand triple to each candidate, in candidate order.
// The plain loop is the reference; score_candidates runs the same loop under
// OpenMP when workers > 1 and must produce identical values.
std::vector<double> score_candidates_serial(const Triple& left,
                                            std::span<const Triple> candidates,
                                            const ParamStore& store, const KgCatalog& catalog);
std::vector<double> score_candidates(const Triple& left, std::span<const Triple> candidates,
                                     const ParamStore& store, const KgCatalog& catalog,
                                     int workers);

// Rank of the true triple among its candidates, ties resolved
// pessimistically: rank = 1 + |{c : dist(c) <= dist(true)}|.
std::int64_t rank_true_triple(const AlignmentSeed& seed, const ParamStore& store,
                              const KgCatalog& catalog,
                              RankCandidates mode = RankCandidates::corruptions);

// MRR = mean(1/rank), hits@k = fraction(rank <= k), mean_rank = mean(rank).
RankingMetrics metrics_from_ranks(std::span<const std::int64_t> ranks);

RankingMetrics evaluate_serial(std::span<const AlignmentSeed> seeds, const ParamStore& store,
                               const KgCatalog& catalog,
                               RankCandidates mode = RankCandidates::corruptions);
RankingMetrics evaluate(std::span<const AlignmentSeed> seeds, const ParamStore& store,
                        const KgCatalog& catalog,
                        RankCandidates mode = RankCandidates::corruptions, int workers = 1);

struct LabeledPair {
  Triple left;   // L1 atom, any arity
  Triple right;  // L2 atom, any arity
  bool label;
};

struct ThresholdReport {
  double theta = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::int64_t n_pairs = 0;
};

// TSV: atomL<TAB>atomR<TAB>label{0,1}, atoms as rel(arg1,...,argN).
std::vector<LabeledPair> load_labeled_pairs(const std::string& path, const KgCatalog& catalog);

// Predicts aligned iff dist < theta. Precision/recall fall back to 0 when
// their denominator is empty.
ThresholdReport classify_at_threshold(std::span<const LabeledPair> pairs, double theta,
                                      const ParamStore& store, const KgCatalog& catalog);

}  // namespace edal
