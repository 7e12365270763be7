#include "edal/editdist.hpp"

#include <cmath>
#include <stdexcept>

namespace edal {

namespace {

constexpr int kBruteForceCap = 6;

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::runtime_error(std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                             " vs " + std::to_string(want) + ")");
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > UINT64_MAX - b) throw std::runtime_error("delannoy overflow");
  return a + b;
}

}  // namespace

std::uint64_t delannoy(int m, int n) {
  if (m < 0 || n < 0) throw std::runtime_error("delannoy: negative length");
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 1);  // D(0, q) = 1
  for (int p = 1; p <= m; ++p) {
    std::uint64_t diag = row[0];  // D(p-1, q-1)
    for (int q = 1; q <= n; ++q) {
      const std::uint64_t up = row[q];
      row[q] = checked_add(checked_add(row[q - 1], up), diag);
      diag = up;
    }
  }
  return row[n];
}

ProjectedString project_triple(const Triple& t, const ParamStore& store,
                               const KgCatalog& catalog) {
  const int k_s = store.dims.k_s;
  ProjectedString out;
  out.k_s = k_s;
  out.chars.assign(static_cast<std::size_t>(t.arity() + 1) * k_s, 0.0);
  out.provenance.reserve(t.arity() + 1);

  auto project = [&](std::span<const double> row, std::span<const double> mat, int k_in,
                     std::span<double> dst) {
    for (int j = 0; j < k_in; ++j) {
      const double v = row[j];
      if (v == 0.0) continue;
      const double* mrow = mat.data() + static_cast<std::size_t>(j) * k_s;
      for (int c = 0; c < k_s; ++c) dst[c] += v * mrow[c];
    }
  };

  const std::int32_t rel_row = catalog.relation_row(t.relation);
  project(store.relation_row(rel_row), store.rel_proj_mat(rel_row), store.dims.k_r,
          {out.chars.data(), static_cast<std::size_t>(k_s)});
  out.provenance.push_back({CharKind::relation, rel_row, rel_row});

  for (int i = 0; i < t.arity(); ++i) {
    const std::int32_t ent_row = catalog.entity_row(t.args[i]);
    const std::int32_t type_idx = catalog.type_of(t.args[i]).index;
    project(store.entity_row(ent_row), store.type_proj_mat(type_idx), store.dims.k_e,
            {out.chars.data() + static_cast<std::size_t>(i + 1) * k_s,
             static_cast<std::size_t>(k_s)});
    out.provenance.push_back({CharKind::entity, ent_row, type_idx});
  }
  return out;
}

EditOpVector edit_op(EditOpKind kind, std::span<const double> a, std::span<const double> b,
                     std::span<const double> eps) {
  EditOpVector op;
  op.kind = kind;
  switch (kind) {
    case EditOpKind::substitution:
      check_dim(a.size(), b.size(), "substitution");
      op.vec.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) op.vec[i] = a[i] - b[i];
      break;
    case EditOpKind::deletion:
      check_dim(a.size(), eps.size(), "deletion");
      op.vec.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) op.vec[i] = a[i] - eps[i];
      break;
    case EditOpKind::insertion:
      check_dim(b.size(), eps.size(), "insertion");
      op.vec.resize(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) op.vec[i] = eps[i] - b[i];
      break;
  }
  return op;
}

namespace {

void walk_paths(int p, int q, int m, int n, std::vector<EditOpKind>& prefix,
                std::vector<std::vector<EditOpKind>>& out) {
  if (p == m && q == n) {
    out.push_back(prefix);
    return;
  }
  if (p < m && q < n) {
    prefix.push_back(EditOpKind::substitution);
    walk_paths(p + 1, q + 1, m, n, prefix, out);
    prefix.pop_back();
  }
  if (p < m) {
    prefix.push_back(EditOpKind::deletion);
    walk_paths(p + 1, q, m, n, prefix, out);
    prefix.pop_back();
  }
  if (q < n) {
    prefix.push_back(EditOpKind::insertion);
    walk_paths(p, q + 1, m, n, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<EditOpKind>> enumerate_paths(int m, int n) {
  if (m < 1 || n < 1) throw std::runtime_error("enumerate_paths: lengths must be >= 1");
  std::vector<std::vector<EditOpKind>> out;
  std::vector<EditOpKind> prefix;
  walk_paths(0, 0, m, n, prefix, out);
  return out;
}

double edq_of_path(const std::vector<EditOpVector>& ops) {
  if (ops.empty()) throw std::runtime_error("edq_of_path: empty path");
  const std::size_t k = ops[0].vec.size();
  double result = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double prod = 1.0;
    for (const EditOpVector& op : ops) {
      check_dim(op.vec.size(), k, "edq_of_path");
      prod *= op.vec[i];
    }
    result += prod * prod;
  }
  return result;
}

DistanceResult distance_bruteforce(const ProjectedString& x, const ProjectedString& y,
                                   std::span<const double> eps) {
  const int m = x.length(), n = y.length();
  if (m < 1 || n < 1) throw std::runtime_error("distance_bruteforce: empty string");
  if (m > kBruteForceCap || n > kBruteForceCap)
    throw std::runtime_error("distance_bruteforce: length cap " +
                             std::to_string(kBruteForceCap) + " exceeded");
  check_dim(y.k_s, x.k_s, "distance_bruteforce");
  check_dim(eps.size(), static_cast<std::size_t>(x.k_s), "distance_bruteforce eps");

  const auto paths = enumerate_paths(m, n);
  double total = 0.0;
  for (const auto& path : paths) {
    std::vector<EditOpVector> ops;
    ops.reserve(path.size());
    int p = 0, q = 0;
    for (EditOpKind kind : path) {
      switch (kind) {
        case EditOpKind::substitution:
          ops.push_back(edit_op(kind, x.at(p), y.at(q), eps));
          ++p, ++q;
          break;
        case EditOpKind::deletion:
          ops.push_back(edit_op(kind, x.at(p), {}, eps));
          ++p;
          break;
        case EditOpKind::insertion:
          ops.push_back(edit_op(kind, {}, y.at(q), eps));
          ++q;
          break;
      }
    }
    total += edq_of_path(ops);
  }
  DistanceResult result;
  result.path_count = paths.size();
  result.value = total / static_cast<double>(result.path_count);
  return result;
}

DistanceResult distance_dp(const ProjectedString& x, const ProjectedString& y,
                           std::span<const double> eps, bool keep_lattice) {
  const int m = x.length(), n = y.length();
  if (m < 1 || n < 1) throw std::runtime_error("distance_dp: empty string");
  check_dim(y.k_s, x.k_s, "distance_dp");
  const int k = x.k_s;
  check_dim(eps.size(), static_cast<std::size_t>(k), "distance_dp eps");

  EditLattice lat;
  lat.m = m;
  lat.n = n;
  lat.k_s = k;
  lat.cells.assign(static_cast<std::size_t>(m + 1) * (n + 1) * k, 0.0);
  lat.sub2.resize(static_cast<std::size_t>(m) * n * k);
  lat.del2.resize(static_cast<std::size_t>(m) * k);
  lat.ins2.resize(static_cast<std::size_t>(n) * k);
  lat.x = x.chars;
  lat.y = y.chars;
  lat.eps.assign(eps.begin(), eps.end());

  for (int p = 1; p <= m; ++p) {
    const auto xc = x.at(p - 1);
    double* d = lat.del2.data() + static_cast<std::size_t>(p - 1) * k;
    for (int i = 0; i < k; ++i) {
      const double v = xc[i] - eps[i];
      d[i] = v * v;
    }
  }
  for (int q = 1; q <= n; ++q) {
    const auto yc = y.at(q - 1);
    double* d = lat.ins2.data() + static_cast<std::size_t>(q - 1) * k;
    for (int i = 0; i < k; ++i) {
      const double v = eps[i] - yc[i];
      d[i] = v * v;
    }
  }
  for (int p = 1; p <= m; ++p) {
    const auto xc = x.at(p - 1);
    for (int q = 1; q <= n; ++q) {
      const auto yc = y.at(q - 1);
      double* d = lat.sub2.data() + (static_cast<std::size_t>(p - 1) * n + (q - 1)) * k;
      for (int i = 0; i < k; ++i) {
        const double v = xc[i] - yc[i];
        d[i] = v * v;
      }
    }
  }

  // D[0][0] = 1; borders are pure deletion/insertion chains.
  {
    auto c00 = lat.cell(0, 0);
    for (int i = 0; i < k; ++i) c00[i] = 1.0;
  }
  for (int p = 1; p <= m; ++p) {
    auto prev = lat.cell(p - 1, 0);
    auto cur = lat.cell(p, 0);
    const auto d = lat.del2_at(p);
    for (int i = 0; i < k; ++i) cur[i] = prev[i] * d[i];
  }
  for (int q = 1; q <= n; ++q) {
    auto prev = lat.cell(0, q - 1);
    auto cur = lat.cell(0, q);
    const auto d = lat.ins2_at(q);
    for (int i = 0; i < k; ++i) cur[i] = prev[i] * d[i];
  }
  for (int p = 1; p <= m; ++p) {
    const auto del = lat.del2_at(p);
    for (int q = 1; q <= n; ++q) {
      const auto sub = lat.sub2_at(p, q);
      const auto ins = lat.ins2_at(q);
      const auto diag = lat.cell(p - 1, q - 1);
      const auto up = lat.cell(p - 1, q);
      const auto left = lat.cell(p, q - 1);
      auto cur = lat.cell(p, q);
      for (int i = 0; i < k; ++i)
        cur[i] = diag[i] * sub[i] + up[i] * del[i] + left[i] * ins[i];
    }
  }

  DistanceResult result;
  result.path_count = delannoy(m, n);
  double total = 0.0;
  for (double v : lat.cell(m, n)) total += v;
  result.value = total / static_cast<double>(result.path_count);
  if (keep_lattice) {
    result.lattice = std::move(lat);
    result.has_lattice = true;
  }
  return result;
}

DistanceResult distance_general_arity(const Triple& atom1, const Triple& atom2,
                                      const ParamStore& store, const KgCatalog& catalog,
                                      bool keep_lattice) {
  const ProjectedString x = project_triple(atom1, store, catalog);
  const ProjectedString y = project_triple(atom2, store, catalog);
  return distance_dp(x, y, store.null_vec, keep_lattice);
}

}  // namespace edal
