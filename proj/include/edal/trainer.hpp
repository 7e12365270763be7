#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "edal/editdist.hpp"
#include "edal/kg.hpp"
#include "edal/params.hpp"

namespace edal {

struct TrainConfig {
  double gamma_a = 1.0;  // ranking margin
  double lr = 0.01;
  int epochs = 200;
  int batch_size = 64;
  int negatives_per_positive = 1;
  double lambda_c = 0.25;  // composite-constraint penalty weight
  Dims dims;
  std::uint64_t seed = 0;
  int eval_every = 10;
  NegativeSampling negative_sampling = NegativeSampling::mode_uniform;
  bool update_epsilon = true;
  int workers = 1;
};

// Sparse gradient accumulator keyed by parameter row. std::map keeps the
// apply order deterministic.
struct GradientBuffer {
  std::map<std::int32_t, std::vector<double>> entity_rows;    // row -> k_e
  std::map<std::int32_t, std::vector<double>> relation_rows;  // row -> k_r
  std::map<std::int32_t, std::vector<double>> rel_proj;       // row -> k_r*k_s
  std::map<std::int32_t, std::vector<double>> type_proj;      // type -> k_e*k_s
  std::vector<double> eps;                                    // k_s, empty if untouched

  bool empty() const;
  bool all_finite() const;
  void add(const GradientBuffer& other);
  void scale(double c);
};

// Gradients of one lattice distance with respect to its inputs; already
// includes the 1/N averaging factor and the upstream multiplier.
struct LatticeGrads {
  std::vector<double> x;    // m * k_s
  std::vector<double> y;    // n * k_s
  std::vector<double> eps;  // k_s
};

// Reverse accumulation of the lattice recurrence. Requires the lattice
// retained with intermediates (keep_lattice at distance time).
LatticeGrads backward_through_lattice(const EditLattice& lattice, double upstream);

// Chains string-space character gradients through the projection onto the
// embedding rows and matrices named by the string's provenance.
void accumulate_projection_grads(const ProjectedString& ps,
                                 const std::vector<double>& char_grads, const ParamStore& store,
                                 const KgCatalog& catalog, GradientBuffer& out);

struct PairLossResult {
  double loss = 0.0;
  GradientBuffer grads;  // empty when the hinge is inactive
};

// Margin ranking hinge for one aligned pair and one corruption:
// max(0, gamma_a + dist(T1,T2) - dist(T1,T2')) with gradients w.r.t. every
// touched parameter.
PairLossResult pair_loss(const AlignmentSeed& seed, const Triple& negative,
                         const ParamStore& store, const KgCatalog& catalog, double gamma_a);

// Identifies one projected vector (an embedding row through its matrix).
struct ProjRef {
  CharKind kind;
  std::int32_t emb_row;
  std::int32_t matrix_index;
  friend auto operator<=>(const ProjRef&, const ProjRef&) = default;
};

void collect_proj_refs(const Triple& t, const KgCatalog& catalog, std::set<ProjRef>& out);

// Soft enforcement of the projected-vector unit-ball constraints:
// lambda_c * sum over refs of max(0, ||proj||^2 - 1), with gradients added
// into `grads`.
double composite_penalty(const std::set<ProjRef>& touched, const ParamStore& store,
                         double lambda_c, GradientBuffer& grads);

// Central finite differences over every coordinate present in `pattern`;
// `f` is re-evaluated with single coordinates of `store` perturbed by +/-h.
// Verification oracle only.
GradientBuffer finite_diff_grad(ParamStore& store, const GradientBuffer& pattern,
                                const std::function<double()>& f, double h);

// One SGD step: theta -= lr * grad, skipping eps when update_epsilon is off.
void apply_sgd(ParamStore& store, const GradientBuffer& grads, double lr,
               bool update_epsilon = true);

// Renormalizes every embedding row named in `touched` onto the unit sphere.
// Ball-only clamping lets rows drift inward until every distance collapses
// and ranking signal dies; pinning updated rows to norm 1 keeps the
// constraint satisfied and the geometry alive. Returns how many rows had
// escaped the ball before projection.
std::int64_t project_rows_to_sphere(ParamStore& store, const GradientBuffer& touched);

// Rescales every projection matrix named in `touched` whose spectral norm
// exceeds 1 back to spectral norm 1. With embedding rows inside the unit
// ball this makes every projected character feasible outright; without a
// hard cap the corrupted-pair term inflates matrices without bound (the
// soft penalty grows linearly in the matrix scale, the reward
// polynomially) and training eventually overflows. Returns the number of
// matrices rescaled.
std::int64_t cap_matrix_spectral_norms(ParamStore& store, const GradientBuffer& touched);

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;        // mean hinge loss over pair terms
  double active_fraction = 0.0;  // hinge > 0
  std::int64_t violations = 0;   // embedding rows clamped this epoch
  double penalty = 0.0;          // summed composite penalty this epoch
  std::int64_t skipped = 0;      // pairs with empty corruption sets
  bool has_val = false;
  double val_mrr = 0.0, val_hits1 = 0.0, val_hits10 = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int workers = 1;
  double wall_clock_sec = 0.0;  // excluded from reproducibility guarantees
};

struct TrainResult {
  ParamStore store;
  TrainReport report;
};

// Raised when an epoch mean loss stops being finite.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full margin-ranking training loop: shuffled minibatches, fresh negatives
// per epoch, summed pair hinges plus the composite penalty per batch, SGD,
// unit-ball clamping after every step. Deterministic for workers <= 1.
// step_observer, when set, sees the store after every optimizer step.
TrainResult train(const KgCatalog& catalog, const TrainConfig& config,
                  const std::function<void(const ParamStore&)>& step_observer = {});

// epoch, mean_loss, active_fraction, violations, val_mrr, val_hits1,
// val_hits10 as tab-separated lines; '-' for epochs without validation.
void write_report_tsv(const TrainReport& report, std::ostream& out);
std::string report_to_json(const TrainReport& report, const TrainConfig& config);

}  // namespace edal
