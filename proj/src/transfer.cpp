#include "blocc/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <random>
#include <tuple>

#include "blocc/error.hpp"
#include "blocc/summation.hpp"

namespace blocc {

// ---------------------------------------------------------------- WorkGrid

WorkGrid::WorkGrid(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("work grid values must be finite");
  std::sort(values.begin(), values.end());
  for (double v : values)
    if (values_.empty() || v - values_.back() > kGridTol) values_.push_back(v);
}

std::optional<std::size_t> WorkGrid::find(double w) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), w - kGridTol);
  if (it != values_.end() && std::abs(*it - w) <= kGridTol)
    return static_cast<std::size_t>(it - values_.begin());
  return std::nullopt;
}

std::size_t WorkGrid::index_of(double w) const {
  if (auto k = find(w)) return *k;
  throw ValidationError("work value " + std::to_string(w) + " is not on the grid");
}

WorkGrid WorkGrid::merged(const WorkGrid& other) const {
  std::vector<double> all = values_;
  all.insert(all.end(), other.values_.begin(), other.values_.end());
  return WorkGrid(std::move(all));
}

WorkGrid WorkGrid::negated() const {
  std::vector<double> neg(values_.rbegin(), values_.rend());
  for (double& v : neg) v = -v;
  return WorkGrid(std::move(neg));
}

// ---------------------------------------------------------- TransferMatrix

TransferMatrix::TransferMatrix(SchmidtVector p, SchmidtVector q, WorkGrid grid,
                               std::vector<TransferEntry> entries)
    : p_(std::move(p)), q_(std::move(q)), grid_(std::move(grid)) {
  if (grid_.empty()) throw ValidationError("work grid must be non-empty");
  for (const auto& e : entries) {
    if (e.i >= p_.size() || e.j >= q_.size() || e.k >= grid_.size())
      throw ValidationError("transfer entry index out of range");
    if (!std::isfinite(e.value) || e.value < 0.0)
      throw ValidationError("transfer entry is negative or not finite");
  }
  std::sort(entries.begin(), entries.end(), [](const TransferEntry& a, const TransferEntry& b) {
    return std::tie(a.j, a.i, a.k) < std::tie(b.j, b.i, b.k);
  });
  for (const auto& e : entries) {
    if (e.value == 0.0) continue;
    if (!entries_.empty()) {
      auto& last = entries_.back();
      if (last.i == e.i && last.j == e.j && last.k == e.k) {
        last.value += e.value;
        continue;
      }
    }
    entries_.push_back(e);
  }
  std::vector<CompensatedSum> col(q_.size());
  for (const auto& e : entries_) col[e.j] += e.value;
  for (std::size_t j = 0; j < q_.size(); ++j) {
    if (!q_.in_support(j)) continue;
    if (std::abs(col[j].value() - 1.0) > kStructuralTol)
      throw ValidationError("column " + std::to_string(j) +
                            " of the transfer matrix does not sum to 1");
  }
}

std::vector<std::size_t> TransferMatrix::active_grid_indices() const {
  std::vector<bool> used(grid_.size(), false);
  for (const auto& e : entries_) used[e.k] = true;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < used.size(); ++k)
    if (used[k]) out.push_back(k);
  return out;
}

double TransferMatrix::value(std::size_t i, std::size_t k, std::size_t j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::tuple{j, i, k},
                             [](const TransferEntry& e, const auto& key) {
                               return std::tie(e.j, e.i, e.k) < key;
                             });
  if (it != entries_.end() && it->i == i && it->j == j && it->k == k) return it->value;
  return 0.0;
}

// -------------------------------------------------------- WorkDistribution

WorkDistribution::WorkDistribution(std::vector<WorkPoint> points, double tol) {
  std::sort(points.begin(), points.end(),
            [](const WorkPoint& a, const WorkPoint& b) { return a.w < b.w; });
  CompensatedSum total;
  for (const auto& pt : points) {
    if (!std::isfinite(pt.w) || !std::isfinite(pt.prob) || pt.prob < 0.0)
      throw ValidationError("work distribution has a negative or non-finite entry");
    total += pt.prob;
    if (!points_.empty() && pt.w - points_.back().w <= kGridTol)
      points_.back().prob += pt.prob;
    else
      points_.push_back(pt);
  }
  if (points_.empty()) throw ValidationError("work distribution must be non-empty");
  if (std::abs(total.value() - 1.0) > tol)
    throw ValidationError("work distribution does not sum to 1");
}

double WorkDistribution::mean() const {
  CompensatedSum s;
  for (const auto& pt : points_) s += pt.w * pt.prob;
  return s.value();
}

double WorkDistribution::exp2_mean() const {
  CompensatedSum s;
  for (const auto& pt : points_) s += std::exp2(pt.w) * pt.prob;
  return s.value();
}

// ------------------------------------------------------------- conditions

ConditionReport verify_conditions(const TransferMatrix& t, double tol) {
  const auto& p = t.p();
  const auto& q = t.q();
  std::vector<CompensatedSum> c1(t.d_out()), c2(t.d()), c3(t.d());
  for (const auto& e : t.entries()) {
    c1[e.j] += e.value;
    c2[e.i] += e.value * std::exp2(t.grid()[e.k]);
    c3[e.i] += e.value * q[e.j];
  }
  ConditionReport r{0.0, 0.0, 0.0, tol, false};
  for (std::size_t j = 0; j < t.d_out(); ++j)
    if (q.in_support(j)) r.c1_residual = std::max(r.c1_residual, std::abs(c1[j].value() - 1.0));
  for (std::size_t i = 0; i < t.d(); ++i) {
    if (p.in_support(i))
      r.c2_residual = std::max(r.c2_residual, std::abs(c2[i].value() - 1.0));
    r.c3_residual = std::max(r.c3_residual, std::abs(c3[i].value() - p[i]));
  }
  r.pass = r.c1_residual <= tol && r.c2_residual <= tol && r.c3_residual <= tol;
  return r;
}

// -------------------------------------------------------------- canonical

namespace {
void require_full_support(const SchmidtVector& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v.in_support(i))
      throw DomainError(std::string(name) + " has a zero coefficient at index " +
                        std::to_string(i) + "; work values are undefined there");
}
}  // namespace

WorkGrid canonical_grid(const SchmidtVector& p, const SchmidtVector& q) {
  require_full_support(p, "p");
  require_full_support(q, "q");
  std::vector<double> w;
  w.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) w.push_back(std::log2(q[j]) - std::log2(p[i]));
  return WorkGrid(std::move(w));
}

TransferMatrix canonical_reversible(const SchmidtVector& p, const SchmidtVector& q) {
  WorkGrid grid = canonical_grid(p, q);
  std::vector<TransferEntry> entries;
  entries.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      entries.push_back({i, grid.index_of(std::log2(q[j]) - std::log2(p[i])), j, p[i]});
  return TransferMatrix(p, q, std::move(grid), std::move(entries));
}

// -------------------------------------------------------------- marginals

std::vector<JointEntry> joint_distribution(const TransferMatrix& t) {
  std::vector<JointEntry> out;
  out.reserve(t.entries().size());
  for (const auto& e : t.entries()) out.push_back({e.i, e.j, e.k, e.value * t.q()[e.j]});
  return out;
}

WorkDistribution work_marginal(const TransferMatrix& t) {
  std::vector<CompensatedSum> acc(t.grid().size());
  for (const auto& e : t.entries()) acc[e.k] += e.value * t.q()[e.j];
  std::vector<WorkPoint> pts;
  pts.reserve(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) pts.push_back({t.grid()[k], acc[k].value()});
  return WorkDistribution(std::move(pts));
}

double mean_work(const TransferMatrix& t) { return work_marginal(t).mean(); }

// ------------------------------------------------------------ feasibility

FeasibilityProgram build_feasibility_program(const SchmidtVector& p, const SchmidtVector& q,
                                             const WorkGrid& grid,
                                             const FeasibilityOptions& options) {
  if (grid.empty()) throw ValidationError("work grid must be non-empty");
  std::vector<std::size_t> rows_i, cols_j;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.in_support(i)) rows_i.push_back(i);
  for (std::size_t j = 0; j < q.size(); ++j)
    if (q.in_support(j)) cols_j.push_back(j);

  std::vector<TransferEntry> columns;
  for (std::size_t j : cols_j)
    for (std::size_t i : rows_i)
      for (std::size_t k = 0; k < grid.size(); ++k) columns.push_back({i, k, j, 0.0});

  const std::size_t n_c1 = cols_j.size();
  const std::size_t n_c2 = rows_i.size();
  const std::size_t n_rows = n_c1 + 2 * n_c2 + (options.mean_w_target ? 1 : 0);
  FeasibilityProgram prog{lp::Problem(n_rows, columns.size()), {}, std::move(columns)};

  std::vector<std::size_t> c1_row(q.size()), c2_row(p.size()), c3_row(p.size());
  std::size_t r = 0;
  for (std::size_t j : cols_j) {
    c1_row[j] = r;
    prog.row_labels.push_back("C1[j=" + std::to_string(j) + "]");
    prog.problem.b(r++) = 1.0;
  }
  for (std::size_t i : rows_i) {
    c2_row[i] = r;
    prog.row_labels.push_back("C2[i=" + std::to_string(i) + "]");
    prog.problem.b(r++) = 1.0;
  }
  for (std::size_t i : rows_i) {
    c3_row[i] = r;
    prog.row_labels.push_back("C3[i=" + std::to_string(i) + "]");
    prog.problem.b(r++) = p[i];
  }
  const std::size_t mean_row = r;
  if (options.mean_w_target) {
    prog.row_labels.push_back("mean_w");
    prog.problem.b(mean_row) = *options.mean_w_target;
  }

  for (std::size_t c = 0; c < prog.columns.size(); ++c) {
    const auto& v = prog.columns[c];
    const double w = grid[v.k];
    prog.problem.a(c1_row[v.j], c) = 1.0;
    prog.problem.a(c2_row[v.i], c) = std::exp2(w);
    prog.problem.a(c3_row[v.i], c) = q[v.j];
    if (options.mean_w_target) prog.problem.a(mean_row, c) = q[v.j] * w;
  }
  if (options.relax_c2) {
    for (std::size_t i : rows_i) {
      const std::size_t s = prog.problem.add_column();
      prog.problem.a(c2_row[i], s) = 1.0;
    }
  }
  return prog;
}

FeasibilityResult feasibility_lp(const SchmidtVector& p, const SchmidtVector& q,
                                 const WorkGrid& grid, const FeasibilityOptions& options) {
  FeasibilityProgram prog = build_feasibility_program(p, q, grid, options);
  const lp::Solution sol = lp::solve(prog.problem, options.solver);
  FeasibilityResult res;
  res.infeasibility = sol.infeasibility;
  if (sol.status == lp::Status::infeasible) {
    for (std::size_t r = 0; r < sol.farkas.size(); ++r)
      res.certificate.push_back({prog.row_labels[r], sol.farkas[r]});
    return res;
  }
  res.feasible = true;
  std::vector<TransferEntry> entries;
  for (std::size_t c = 0; c < prog.columns.size(); ++c) {
    if (sol.x[c] <= 0.0) continue;
    auto e = prog.columns[c];
    e.value = sol.x[c];
    entries.push_back(e);
  }
  res.witness.emplace(p, q, grid, std::move(entries));
  return res;
}

// --------------------------------------------------------------- sampling

namespace {

constexpr std::uint64_t kBlockSize = 1u << 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; portable unlike
// std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

struct ColumnSampler {
  std::vector<double> cumulative;
  std::vector<std::size_t> entry;  // indices into TransferMatrix::entries()
};

}  // namespace

EmpiricalTable sample_joint(const TransferMatrix& t, std::int64_t count, std::uint64_t seed,
                            const SamplingOptions& options) {
  if (count <= 0) throw ValidationError("count must be positive");
  if (!verify_conditions(t, kStructuralTol).pass)
    throw ValidationError("transfer matrix does not satisfy the feasibility conditions");

  std::vector<std::size_t> support_j;
  std::vector<double> q_cum;
  double acc = 0.0;
  for (std::size_t j = 0; j < t.d_out(); ++j) {
    if (!t.q().in_support(j)) continue;
    acc += t.q()[j];
    support_j.push_back(j);
    q_cum.push_back(acc);
  }
  std::vector<ColumnSampler> columns(t.d_out());
  const auto entries = t.entries();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    auto& col = columns[entries[e].j];
    const double prev = col.cumulative.empty() ? 0.0 : col.cumulative.back();
    col.cumulative.push_back(prev + entries[e].value);
    col.entry.push_back(e);
  }

  const auto total = static_cast<std::uint64_t>(count);
  const std::uint64_t blocks = (total + kBlockSize - 1) / kBlockSize;
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<std::uint64_t>> hits(workers,
                                               std::vector<std::uint64_t>(entries.size(), 0));

  auto run = [&](unsigned worker) {
    auto& local = hits[worker];
    for (std::uint64_t b = worker; b < blocks; b += workers) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b)));
      const std::uint64_t n = std::min(kBlockSize, total - b * kBlockSize);
      for (std::uint64_t s = 0; s < n; ++s) {
        const std::size_t j = support_j[pick(q_cum, unit(rng))];
        const auto& col = columns[j];
        ++local[col.entry[pick(col.cumulative, unit(rng))]];
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }

  EmpiricalTable table;
  table.count = total;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    std::uint64_t h = 0;
    for (const auto& local : hits) h += local[e];
    if (h > 0) table.cells.push_back({entries[e].i, entries[e].j, entries[e].k, h});
  }
  std::sort(table.cells.begin(), table.cells.end(),
            [](const EmpiricalCell& a, const EmpiricalCell& b) {
              return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
            });
  return table;
}

}  // namespace blocc
