#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blocc/schmidt.hpp"
#include "blocc/simplex.hpp"

namespace blocc {

/// Work values closer than this are the same grid point.
inline constexpr double kGridTol = 1e-12;
/// C1 tolerance enforced when a TransferMatrix is constructed.
inline constexpr double kStructuralTol = 1e-9;

/// Sorted, deduplicated set of work values in bits.
class WorkGrid {
 public:
  explicit WorkGrid(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t k) const { return values_[k]; }

  std::optional<std::size_t> find(double w) const;
  /// Like find, but throws ValidationError when w is not on the grid.
  std::size_t index_of(double w) const;
  WorkGrid merged(const WorkGrid& other) const;
  WorkGrid negated() const;

 private:
  std::vector<double> values_;
};

struct TransferEntry {
  std::size_t i;  // initial Schmidt index
  std::size_t k;  // grid index of w
  std::size_t j;  // final Schmidt index
  double value;   // P(i, w_k | j)
};

/// Conditional distribution P(i, w | j) linking the initial coefficients p,
/// the final coefficients q and the battery work w.
///
/// Entries are stored sparsely, sorted by (j, i, k) with duplicates summed
/// and zeros dropped. Construction checks indices, non-negativity and the
/// column normalization sum_{i,w} P(i,w|j) = 1 for every j on the support of
/// q (to `kStructuralTol`). The remaining two conditions are reported by
/// verify_conditions.
class TransferMatrix {
 public:
  TransferMatrix(SchmidtVector p, SchmidtVector q, WorkGrid grid,
                 std::vector<TransferEntry> entries);

  const SchmidtVector& p() const { return p_; }
  const SchmidtVector& q() const { return q_; }
  const WorkGrid& grid() const { return grid_; }
  std::size_t d() const { return p_.size(); }
  std::size_t d_out() const { return q_.size(); }
  std::span<const TransferEntry> entries() const { return entries_; }
  /// Grid indices carrying at least one nonzero entry.
  std::vector<std::size_t> active_grid_indices() const;

  double value(std::size_t i, std::size_t k, std::size_t j) const;

 private:
  SchmidtVector p_;
  SchmidtVector q_;
  WorkGrid grid_;
  std::vector<TransferEntry> entries_;
};

struct WorkPoint {
  double w;
  double prob;
};

/// Distribution {(w, P(w))} sorted by w.
class WorkDistribution {
 public:
  explicit WorkDistribution(std::vector<WorkPoint> points, double tol = kNormTol);

  std::span<const WorkPoint> points() const { return points_; }
  double mean() const;
  /// E[2^w].
  double exp2_mean() const;

 private:
  std::vector<WorkPoint> points_;
};

struct JointEntry {
  std::size_t i;
  std::size_t j;
  std::size_t k;
  double prob;  // P(i, j, w_k) = P(i, w_k | j) q_j
};

struct ConditionReport {
  double c1_residual;  // max_j |sum_{i,w} P - 1|
  double c2_residual;  // max_i |sum_{j,w} P 2^w - 1|
  double c3_residual;  // max_i |sum_{j,w} P q_j - p_i|
  double tolerance;
  bool pass;
};

/// Max-norm residuals of the three feasibility conditions. Rows i outside
/// the support of p and columns j outside the support of q are vacuous.
ConditionReport verify_conditions(const TransferMatrix& t, double tol);

/// The reversible construction P(i, log q_j - log p_i | j) = p_i.
/// Throws DomainError when p or q has a zero entry.
TransferMatrix canonical_reversible(const SchmidtVector& p, const SchmidtVector& q);

/// Grid {log2 q_j - log2 p_i} of the canonical construction.
WorkGrid canonical_grid(const SchmidtVector& p, const SchmidtVector& q);

std::vector<JointEntry> joint_distribution(const TransferMatrix& t);
WorkDistribution work_marginal(const TransferMatrix& t);
double mean_work(const TransferMatrix& t);

struct FeasibilityOptions {
  std::optional<double> mean_w_target;
  /// Replace the equality sum_{j,w} P 2^w = 1 by "<= 1".
  bool relax_c2 = false;
  lp::Options solver;
};

/// The linear program behind feasibility_lp, exposed for inspection.
struct FeasibilityProgram {
  lp::Problem problem;
  std::vector<std::string> row_labels;
  /// Column c is the variable P(i, w_k | j) for columns[c] = {i, k, j}.
  std::vector<TransferEntry> columns;
};

FeasibilityProgram build_feasibility_program(const SchmidtVector& p, const SchmidtVector& q,
                                             const WorkGrid& grid,
                                             const FeasibilityOptions& options);

struct CertificateRow {
  std::string constraint;
  double multiplier;
};

struct FeasibilityResult {
  bool feasible = false;
  std::optional<TransferMatrix> witness;
  /// Farkas multipliers y with A^T y <= 0 and b.y > 0, one per constraint.
  std::vector<CertificateRow> certificate;
  double infeasibility = 0.0;
};

/// Decides whether some P(i, w | j) >= 0 on `grid` satisfies the three
/// conditions (and the optional mean-work constraint). Throws
/// ValidationError on an empty grid.
FeasibilityResult feasibility_lp(const SchmidtVector& p, const SchmidtVector& q,
                                 const WorkGrid& grid, const FeasibilityOptions& options = {});

struct EmpiricalCell {
  std::size_t i;
  std::size_t j;
  std::size_t k;
  std::uint64_t hits;
};

struct EmpiricalTable {
  std::uint64_t count = 0;
  std::vector<EmpiricalCell> cells;  // sorted by (i, j, k)

  /// Sample mean of f(i, j, w_k) together with its standard error.
  template <class F>
  std::pair<double, double> mean_and_stderr(const WorkGrid& grid, F&& f) const;
};

struct SamplingOptions {
  unsigned workers = 1;
};

/// Draws j ~ q, then (i, w) ~ P(., . | j), `count` times. The stream is cut
/// into fixed blocks with seeds derived from (seed, block), so the result is
/// independent of the number of workers.
EmpiricalTable sample_joint(const TransferMatrix& t, std::int64_t count, std::uint64_t seed,
                            const SamplingOptions& options = {});

template <class F>
std::pair<double, double> EmpiricalTable::mean_and_stderr(const WorkGrid& grid, F&& f) const {
  double s1 = 0.0, s2 = 0.0;
  for (const auto& c : cells) {
    const double v = f(c.i, c.j, grid[c.k]);
    s1 += static_cast<double>(c.hits) * v;
    s2 += static_cast<double>(c.hits) * v * v;
  }
  const double n = static_cast<double>(count);
  const double mean = s1 / n;
  const double var = std::max(s2 / n - mean * mean, 0.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace blocc
