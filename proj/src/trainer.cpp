#include "edal/trainer.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "edal/evaluator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edal {

bool GradientBuffer::empty() const {
  return entity_rows.empty() && relation_rows.empty() && rel_proj.empty() && type_proj.empty() &&
         eps.empty();
}

bool GradientBuffer::all_finite() const {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  for (const auto* m : {&entity_rows, &relation_rows, &rel_proj, &type_proj})
    for (const auto& [row, g] : *m)
      if (!ok(g)) return false;
  return ok(eps);
}

namespace {

void add_into(std::map<std::int32_t, std::vector<double>>& dst,
              const std::map<std::int32_t, std::vector<double>>& src) {
  for (const auto& [row, g] : src) {
    auto& d = dst[row];
    if (d.empty()) d = g;
    else
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
  }
}

}  // namespace

void GradientBuffer::add(const GradientBuffer& other) {
  add_into(entity_rows, other.entity_rows);
  add_into(relation_rows, other.relation_rows);
  add_into(rel_proj, other.rel_proj);
  add_into(type_proj, other.type_proj);
  if (!other.eps.empty()) {
    if (eps.empty()) eps = other.eps;
    else
      for (std::size_t i = 0; i < eps.size(); ++i) eps[i] += other.eps[i];
  }
}

void GradientBuffer::scale(double c) {
  for (auto* m : {&entity_rows, &relation_rows, &rel_proj, &type_proj})
    for (auto& [row, g] : *m)
      for (double& x : g) x *= c;
  for (double& x : eps) x *= c;
}

LatticeGrads backward_through_lattice(const EditLattice& lat, double upstream) {
  const int m = lat.m, n = lat.n, k = lat.k_s;
  if (m < 1 || n < 1 || lat.cells.empty() || lat.sub2.empty())
    throw std::runtime_error("backward_through_lattice: lattice intermediates missing");

  // Adjoint grid: A[p][q][i] = d(sum cell(m,n)) / d(cell(p,q)[i]), the
  // weighted path count from (p,q) to (m,n).
  std::vector<double> adj(static_cast<std::size_t>(m + 1) * (n + 1) * k, 0.0);
  auto adj_at = [&](int p, int q) {
    return adj.data() + (static_cast<std::size_t>(p) * (n + 1) + q) * k;
  };
  for (int i = 0; i < k; ++i) adj_at(m, n)[i] = 1.0;
  for (int p = m; p >= 0; --p) {
    for (int q = n; q >= 0; --q) {
      if (p == m && q == n) continue;
      double* a = adj_at(p, q);
      if (p < m && q < n) {
        const double* nxt = adj_at(p + 1, q + 1);
        const auto s = lat.sub2_at(p + 1, q + 1);
        for (int i = 0; i < k; ++i) a[i] += nxt[i] * s[i];
      }
      if (p < m) {
        const double* nxt = adj_at(p + 1, q);
        const auto d = lat.del2_at(p + 1);
        for (int i = 0; i < k; ++i) a[i] += nxt[i] * d[i];
      }
      if (q < n) {
        const double* nxt = adj_at(p, q + 1);
        const auto ins = lat.ins2_at(q + 1);
        for (int i = 0; i < k; ++i) a[i] += nxt[i] * ins[i];
      }
    }
  }

  const double scale = upstream / static_cast<double>(delannoy(m, n));
  LatticeGrads g;
  g.x.assign(static_cast<std::size_t>(m) * k, 0.0);
  g.y.assign(static_cast<std::size_t>(n) * k, 0.0);
  g.eps.assign(k, 0.0);

  // Substitutions: transition (p-1,q-1) -> (p,q) carries (x_p - y_q)^2.
  for (int p = 1; p <= m; ++p) {
    const auto xc = lat.x_at(p);
    double* gx = g.x.data() + static_cast<std::size_t>(p - 1) * k;
    for (int q = 1; q <= n; ++q) {
      const auto yc = lat.y_at(q);
      const auto diag = lat.cell(p - 1, q - 1);
      const double* a = adj_at(p, q);
      double* gy = g.y.data() + static_cast<std::size_t>(q - 1) * k;
      for (int i = 0; i < k; ++i) {
        const double t = scale * 2.0 * (xc[i] - yc[i]) * diag[i] * a[i];
        gx[i] += t;
        gy[i] -= t;
      }
    }
  }
  // Deletions: every transition (p-1,q) -> (p,q) shares the op (x_p - eps).
  for (int p = 1; p <= m; ++p) {
    const auto xc = lat.x_at(p);
    double* gx = g.x.data() + static_cast<std::size_t>(p - 1) * k;
    for (int q = 0; q <= n; ++q) {
      const auto up = lat.cell(p - 1, q);
      const double* a = adj_at(p, q);
      for (int i = 0; i < k; ++i) {
        const double t = scale * 2.0 * (xc[i] - lat.eps[i]) * up[i] * a[i];
        gx[i] += t;
        g.eps[i] -= t;
      }
    }
  }
  // Insertions: every transition (p,q-1) -> (p,q) shares the op (eps - y_q).
  for (int q = 1; q <= n; ++q) {
    const auto yc = lat.y_at(q);
    double* gy = g.y.data() + static_cast<std::size_t>(q - 1) * k;
    for (int p = 0; p <= m; ++p) {
      const auto left = lat.cell(p, q - 1);
      const double* a = adj_at(p, q);
      for (int i = 0; i < k; ++i) {
        const double t = scale * 2.0 * (lat.eps[i] - yc[i]) * left[i] * a[i];
        g.eps[i] += t;
        gy[i] -= t;
      }
    }
  }
  return g;
}

namespace {

// g_row[j] += sum_c M[j][c] * g_char[c];  g_M[j][c] += row[j] * g_char[c]
void chain_char_grad(const CharProvenance& prov, const double* g_char, const ParamStore& store,
                     GradientBuffer& out) {
  const int k_s = store.dims.k_s;
  const bool is_rel = prov.kind == CharKind::relation;
  const int k_in = is_rel ? store.dims.k_r : store.dims.k_e;
  const std::span<const double> row =
      is_rel ? store.relation_row(prov.emb_row) : store.entity_row(prov.emb_row);
  const std::span<const double> mat =
      is_rel ? store.rel_proj_mat(prov.matrix_index) : store.type_proj_mat(prov.matrix_index);

  auto& g_row = is_rel ? out.relation_rows[prov.emb_row] : out.entity_rows[prov.emb_row];
  if (g_row.empty()) g_row.assign(k_in, 0.0);
  auto& g_mat = is_rel ? out.rel_proj[prov.matrix_index] : out.type_proj[prov.matrix_index];
  if (g_mat.empty()) g_mat.assign(static_cast<std::size_t>(k_in) * k_s, 0.0);

  for (int j = 0; j < k_in; ++j) {
    const double* mrow = mat.data() + static_cast<std::size_t>(j) * k_s;
    double acc = 0.0;
    double* gm = g_mat.data() + static_cast<std::size_t>(j) * k_s;
    const double v = row[j];
    for (int c = 0; c < k_s; ++c) {
      acc += mrow[c] * g_char[c];
      gm[c] += v * g_char[c];
    }
    g_row[j] += acc;
  }
}

}  // namespace

void accumulate_projection_grads(const ProjectedString& ps,
                                 const std::vector<double>& char_grads, const ParamStore& store,
                                 const KgCatalog& catalog, GradientBuffer& out) {
  (void)catalog;  // provenance already carries the resolved rows
  const int k_s = ps.k_s;
  if (char_grads.size() != ps.chars.size())
    throw std::runtime_error("accumulate_projection_grads: gradient length mismatch");
  if (ps.provenance.size() != static_cast<std::size_t>(ps.length()))
    throw std::runtime_error("accumulate_projection_grads: string has no provenance");
  for (int s = 0; s < ps.length(); ++s)
    chain_char_grad(ps.provenance[s], char_grads.data() + static_cast<std::size_t>(s) * k_s,
                    store, out);
}

PairLossResult pair_loss(const AlignmentSeed& seed, const Triple& negative,
                         const ParamStore& store, const KgCatalog& catalog, double gamma_a) {
  const ProjectedString left = project_triple(seed.left, store, catalog);
  const ProjectedString pos = project_triple(seed.right, store, catalog);
  const ProjectedString neg = project_triple(negative, store, catalog);

  const DistanceResult d_pos = distance_dp(left, pos, store.null_vec, /*keep_lattice=*/true);
  const DistanceResult d_neg = distance_dp(left, neg, store.null_vec, /*keep_lattice=*/true);

  PairLossResult result;
  const double hinge = gamma_a + d_pos.value - d_neg.value;
  if (hinge <= 0.0) return result;  // inactive: loss 0, gradients exactly zero
  result.loss = hinge;

  const LatticeGrads gp = backward_through_lattice(d_pos.lattice, 1.0);
  const LatticeGrads gn = backward_through_lattice(d_neg.lattice, -1.0);
  accumulate_projection_grads(left, gp.x, store, catalog, result.grads);
  accumulate_projection_grads(pos, gp.y, store, catalog, result.grads);
  accumulate_projection_grads(left, gn.x, store, catalog, result.grads);
  accumulate_projection_grads(neg, gn.y, store, catalog, result.grads);
  result.grads.eps.assign(store.dims.k_s, 0.0);
  for (int i = 0; i < store.dims.k_s; ++i) result.grads.eps[i] = gp.eps[i] + gn.eps[i];
  return result;
}

void collect_proj_refs(const Triple& t, const KgCatalog& catalog, std::set<ProjRef>& out) {
  const std::int32_t rel_row = catalog.relation_row(t.relation);
  out.insert({CharKind::relation, rel_row, rel_row});
  for (const EntityRef& e : t.args)
    out.insert({CharKind::entity, catalog.entity_row(e), catalog.type_of(e).index});
}

double composite_penalty(const std::set<ProjRef>& touched, const ParamStore& store,
                         double lambda_c, GradientBuffer& grads) {
  if (lambda_c == 0.0) return 0.0;
  const int k_s = store.dims.k_s;
  std::vector<double> proj(k_s);
  std::vector<double> g_char(k_s);
  double value = 0.0;
  for (const ProjRef& ref : touched) {
    const bool is_rel = ref.kind == CharKind::relation;
    const int k_in = is_rel ? store.dims.k_r : store.dims.k_e;
    const std::span<const double> row =
        is_rel ? store.relation_row(ref.emb_row) : store.entity_row(ref.emb_row);
    const std::span<const double> mat =
        is_rel ? store.rel_proj_mat(ref.matrix_index) : store.type_proj_mat(ref.matrix_index);
    std::fill(proj.begin(), proj.end(), 0.0);
    for (int j = 0; j < k_in; ++j) {
      const double v = row[j];
      if (v == 0.0) continue;
      const double* mrow = mat.data() + static_cast<std::size_t>(j) * k_s;
      for (int c = 0; c < k_s; ++c) proj[c] += v * mrow[c];
    }
    double n2 = 0.0;
    for (double x : proj) n2 += x * x;
    if (n2 <= 1.0) continue;
    value += lambda_c * (n2 - 1.0);
    for (int c = 0; c < k_s; ++c) g_char[c] = 2.0 * lambda_c * proj[c];
    chain_char_grad({ref.kind, ref.emb_row, ref.matrix_index}, g_char.data(), store, grads);
  }
  return value;
}

GradientBuffer finite_diff_grad(ParamStore& store, const GradientBuffer& pattern,
                                const std::function<double()>& f, double h) {
  if (h <= 0.0) throw std::runtime_error("finite_diff_grad: h must be positive");
  GradientBuffer out;
  auto probe = [&](double& coord) {
    const double saved = coord;
    coord = saved + h;
    const double fp = f();
    coord = saved - h;
    const double fm = f();
    coord = saved;
    return (fp - fm) / (2.0 * h);
  };
  auto sweep = [&](const std::map<std::int32_t, std::vector<double>>& src,
                   std::map<std::int32_t, std::vector<double>>& dst, auto coords_of) {
    for (const auto& [row, g] : src) {
      auto coords = coords_of(row);
      auto& d = dst[row];
      d.resize(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) d[i] = probe(coords[i]);
    }
  };
  sweep(pattern.entity_rows, out.entity_rows,
        [&](std::int32_t r) { return store.entity_row(r); });
  sweep(pattern.relation_rows, out.relation_rows,
        [&](std::int32_t r) { return store.relation_row(r); });
  sweep(pattern.rel_proj, out.rel_proj, [&](std::int32_t r) { return store.rel_proj_mat(r); });
  sweep(pattern.type_proj, out.type_proj,
        [&](std::int32_t r) { return store.type_proj_mat(r); });
  if (!pattern.eps.empty()) {
    out.eps.resize(pattern.eps.size());
    for (std::size_t i = 0; i < pattern.eps.size(); ++i) out.eps[i] = probe(store.null_vec[i]);
  }
  return out;
}

std::int64_t project_rows_to_sphere(ParamStore& store, const GradientBuffer& touched) {
  std::int64_t escaped = 0;
  auto project = [&](std::span<double> row, const char* kind, std::int32_t index) {
    double n2 = 0.0;
    for (double v : row) n2 += v * v;
    if (!std::isfinite(n2))
      throw std::runtime_error(std::string("non-finite ") + kind + " row " +
                               std::to_string(index));
    if (n2 > 1.0 + 1e-12) ++escaped;
    if (n2 > 0.0) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& v : row) v *= inv;
    }
  };
  for (const auto& [row, g] : touched.entity_rows) project(store.entity_row(row), "entity", row);
  for (const auto& [row, g] : touched.relation_rows)
    project(store.relation_row(row), "relation", row);
  return escaped;
}

namespace {

// Largest singular value by power iteration on M^T M; deterministic fixed
// start vector, enough sweeps for a rescale decision.
double spectral_norm(std::span<const double> mat, int rows, int cols) {
  std::vector<double> v(cols, 1.0 / std::sqrt(static_cast<double>(cols)));
  std::vector<double> mv(rows), back(cols);
  double sigma = 0.0;
  for (int iter = 0; iter < 16; ++iter) {
    for (int r = 0; r < rows; ++r) {
      const double* row = mat.data() + static_cast<std::size_t>(r) * cols;
      double s = 0.0;
      for (int c = 0; c < cols; ++c) s += row[c] * v[c];
      mv[r] = s;
    }
    double mv_norm = 0.0;
    for (double x : mv) mv_norm += x * x;
    sigma = std::sqrt(mv_norm);
    if (sigma == 0.0 || !std::isfinite(sigma)) return sigma;

    std::fill(back.begin(), back.end(), 0.0);
    for (int r = 0; r < rows; ++r) {
      const double* row = mat.data() + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) back[c] += row[c] * mv[r];
    }
    double n = 0.0;
    for (double x : back) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) return sigma;
    for (double& x : back) x /= n;
    v.swap(back);
  }
  return sigma;
}

// The null vector is a string-space ingredient like every projected
// character; leaving it unconstrained makes the corrupted-pair term
// unbounded below (inflate eps, inflate every deletion/insertion op).
std::int64_t clamp_null_vec(ParamStore& store) {
  double n2 = 0.0;
  for (double v : store.null_vec) n2 += v * v;
  if (!std::isfinite(n2)) throw std::runtime_error("non-finite null vector");
  if (n2 <= 1.0 + 1e-12) return 0;
  const double inv = 1.0 / std::sqrt(n2);
  for (double& v : store.null_vec) v *= inv;
  return 1;
}

}  // namespace

std::int64_t cap_matrix_spectral_norms(ParamStore& store, const GradientBuffer& touched) {
  std::int64_t rescaled = 0;
  auto cap = [&](std::span<double> mat, int rows, const char* kind, std::int32_t index) {
    const double sigma = spectral_norm(mat, rows, store.dims.k_s);
    if (!std::isfinite(sigma))
      throw std::runtime_error(std::string("non-finite ") + kind + " matrix " +
                               std::to_string(index));
    if (sigma > 1.0 + 1e-9) {
      const double inv = 1.0 / sigma;
      for (double& x : mat) x *= inv;
      ++rescaled;
    }
  };
  for (const auto& [index, g] : touched.rel_proj)
    cap(store.rel_proj_mat(index), store.dims.k_r, "relation projection", index);
  for (const auto& [index, g] : touched.type_proj)
    cap(store.type_proj_mat(index), store.dims.k_e, "type projection", index);
  return rescaled;
}

void apply_sgd(ParamStore& store, const GradientBuffer& grads, double lr, bool update_epsilon) {
  for (const auto& [row, g] : grads.entity_rows) {
    auto r = store.entity_row(row);
    for (std::size_t i = 0; i < g.size(); ++i) r[i] -= lr * g[i];
  }
  for (const auto& [row, g] : grads.relation_rows) {
    auto r = store.relation_row(row);
    for (std::size_t i = 0; i < g.size(); ++i) r[i] -= lr * g[i];
  }
  for (const auto& [row, g] : grads.rel_proj) {
    auto m = store.rel_proj_mat(row);
    for (std::size_t i = 0; i < g.size(); ++i) m[i] -= lr * g[i];
  }
  for (const auto& [row, g] : grads.type_proj) {
    auto m = store.type_proj_mat(row);
    for (std::size_t i = 0; i < g.size(); ++i) m[i] -= lr * g[i];
  }
  if (update_epsilon)
    for (std::size_t i = 0; i < grads.eps.size(); ++i) store.null_vec[i] -= lr * grads.eps[i];
}

namespace {

struct PairJob {
  const AlignmentSeed* seed;
  Triple negative;
};

void compute_pair_results(std::span<const PairJob> jobs, const ParamStore& store,
                          const KgCatalog& catalog, double gamma_a, int workers,
                          std::vector<PairLossResult>& results) {
  results.resize(jobs.size());
#ifdef _OPENMP
  if (workers > 1) {
    const std::int64_t count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::int64_t j = 0; j < count; ++j)
      results[j] = pair_loss(*jobs[j].seed, jobs[j].negative, store, catalog, gamma_a);
    return;
  }
#else
  (void)workers;
#endif
  for (std::size_t j = 0; j < jobs.size(); ++j)
    results[j] = pair_loss(*jobs[j].seed, jobs[j].negative, store, catalog, gamma_a);
}

}  // namespace

TrainResult train(const KgCatalog& catalog, const TrainConfig& config,
                  const std::function<void(const ParamStore&)>& step_observer) {
  const auto& train_seeds = catalog.seeds(SeedSplit::train);
  if (train_seeds.empty()) throw std::runtime_error("training requires at least one seed pair");
  if (config.gamma_a <= 0 || config.lr < 0 || config.epochs < 1 || config.batch_size < 1 ||
      config.negatives_per_positive < 1 || config.lambda_c < 0 || config.eval_every < 1)
    throw std::runtime_error("invalid training configuration");

  const auto t0 = std::chrono::steady_clock::now();
  TrainResult result;
  result.store = init_params(catalog, config.dims, config.seed);
  result.report.workers = config.workers;

  auto shuffle_rng = rng::substream(config.seed, rng::Substream::shuffle);
  auto neg_rng = rng::substream(config.seed, rng::Substream::negatives);

  const std::int64_t corruption_size =
      (catalog.relations(Kg::L2).size() - 1) + 2ll * (catalog.entities(Kg::L2).size() - 1);
  const auto& valid_seeds = catalog.seeds(SeedSplit::valid);

  std::vector<std::int32_t> order(train_seeds.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<PairJob> jobs;
  std::vector<PairLossResult> results;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    EpochStats stats;
    stats.epoch = epoch;
    double loss_sum = 0.0;
    std::int64_t n_terms = 0, active = 0;

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      jobs.clear();
      std::set<ProjRef> batch_refs;
      for (std::size_t i = start; i < stop; ++i) {
        const AlignmentSeed& seed = train_seeds[order[i]];
        if (seed.right.arity() != 2 || corruption_size <= 0) {
          ++stats.skipped;
          continue;
        }
        for (int k = 0; k < config.negatives_per_positive; ++k) {
          jobs.push_back(
              {&seed, sample_negative(seed.right, catalog, neg_rng, config.negative_sampling)});
          collect_proj_refs(jobs.back().negative, catalog, batch_refs);
        }
        collect_proj_refs(seed.left, catalog, batch_refs);
        collect_proj_refs(seed.right, catalog, batch_refs);
      }
      if (jobs.empty()) continue;

      compute_pair_results(jobs, result.store, catalog, config.gamma_a, config.workers, results);

      GradientBuffer batch_grad;
      for (const PairLossResult& r : results) {
        loss_sum += r.loss;
        ++n_terms;
        if (r.loss > 0.0) {
          ++active;
          batch_grad.add(r.grads);
        }
      }
      stats.penalty +=
          composite_penalty(batch_refs, result.store, config.lambda_c, batch_grad);

      if (config.lr != 0.0) {
        apply_sgd(result.store, batch_grad, config.lr, config.update_epsilon);
        try {
          stats.violations += project_rows_to_sphere(result.store, batch_grad);
          stats.violations += cap_matrix_spectral_norms(result.store, batch_grad);
          if (config.update_epsilon) stats.violations += clamp_null_vec(result.store);
          stats.violations += clamp_to_unit_ball(result.store);
        } catch (const std::runtime_error& err) {
          throw DivergenceError("training diverged at epoch " + std::to_string(epoch) + ": " +
                                err.what());
        }
      }
      if (step_observer) step_observer(result.store);
    }

    stats.mean_loss = n_terms > 0 ? loss_sum / static_cast<double>(n_terms) : 0.0;
    stats.active_fraction = n_terms > 0 ? static_cast<double>(active) / n_terms : 0.0;
    if (!std::isfinite(stats.mean_loss) || !std::isfinite(stats.penalty))
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch) +
                            " (non-finite loss)");

    if (!valid_seeds.empty() &&
        (epoch % config.eval_every == 0 || epoch == config.epochs)) {
      const RankingMetrics m = evaluate(valid_seeds, result.store, catalog,
                                        RankCandidates::corruptions, config.workers);
      stats.has_val = true;
      stats.val_mrr = m.mrr;
      stats.val_hits1 = m.hits_at_1;
      stats.val_hits10 = m.hits_at_10;
    }
    result.report.epochs.push_back(stats);
  }

  result.report.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void write_report_tsv(const TrainReport& report, std::ostream& out) {
  out << "# edal train report\n";
  if (report.workers > 1)
    out << "# workers = " << report.workers
        << " (bit-exact loss-sequence reproducibility not guaranteed)\n";
  out << "epoch\tmean_loss\tactive_fraction\tviolations\tval_mrr\tval_hits1\tval_hits10\n";
  out << std::setprecision(17);
  for (const EpochStats& e : report.epochs) {
    out << e.epoch << '\t' << e.mean_loss << '\t' << e.active_fraction << '\t' << e.violations
        << '\t';
    if (e.has_val)
      out << e.val_mrr << '\t' << e.val_hits1 << '\t' << e.val_hits10 << '\n';
    else
      out << "-\t-\t-\n";
  }
}

std::string report_to_json(const TrainReport& report, const TrainConfig& config) {
  nlohmann::json j;
  j["config"] = {
      {"gamma_a", config.gamma_a},
      {"lr", config.lr},
      {"epochs", config.epochs},
      {"batch_size", config.batch_size},
      {"negatives_per_positive", config.negatives_per_positive},
      {"lambda_c", config.lambda_c},
      {"k_e", config.dims.k_e},
      {"k_r", config.dims.k_r},
      {"k_s", config.dims.k_s},
      {"seed", config.seed},
      {"eval_every", config.eval_every},
      {"negative_sampling",
       config.negative_sampling == NegativeSampling::mode_uniform ? "mode-uniform"
                                                                  : "global-uniform"},
      {"update_epsilon", config.update_epsilon},
      {"workers", config.workers},
  };
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochStats& e : report.epochs) {
    nlohmann::json je = {
        {"epoch", e.epoch},
        {"mean_loss", e.mean_loss},
        {"active_fraction", e.active_fraction},
        {"violations", e.violations},
        {"penalty", e.penalty},
        {"skipped", e.skipped},
    };
    if (e.has_val) {
      je["val_mrr"] = e.val_mrr;
      je["val_hits1"] = e.val_hits1;
      je["val_hits10"] = e.val_hits10;
    }
    epochs.push_back(je);
  }
  j["epochs"] = epochs;
  j["wall_clock_sec"] = report.wall_clock_sec;
  return j.dump(2);
}

}  // namespace edal
