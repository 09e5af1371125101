#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "blocc/battery.hpp"
#include "blocc/transfer.hpp"

namespace blocc {

/// Largest d * M_T for which the completed matrix may be enumerated entrywise.
inline constexpr std::uint64_t kMaterializeLimit = 10000;

/// A transfer matrix quantized onto a battery:
///   P(i, x | j, x') = sum_w P(i, w | j) [x' - x = a_w],
/// stored as one D x D block per distinct shift a = x' - x. D = max(d, d')
/// so that the system part of the completed matrix is square; padded
/// indices carry zero weight.
class LiftedTransfer {
 public:
  struct Block {
    std::int64_t shift;
    std::vector<double> weight;  // row-major D x D, weight[i * D + j]
  };

  const TransferMatrix& base() const { return base_; }
  const BatteryConfig& config() const { return cfg_; }
  std::size_t dim() const { return dim_; }
  std::int64_t a_max() const { return a_max_; }
  /// a_w for every grid index of the base matrix.
  std::span<const std::int64_t> grid_shift() const { return grid_shift_; }
  std::span<const Block> blocks() const { return blocks_; }
  std::uint64_t id() const { return id_; }

  double value(std::size_t i, std::int64_t x, std::size_t j, std::int64_t xp) const;
  /// True iff column index j is on the support of the final state.
  bool support_column(std::size_t j) const { return base_.q().in_support(j); }
  /// p_{iw} summed over all w sharing the shift a: sum_j P_a(i, j) q_j.
  double shifted_mass(std::size_t i, const Block& b) const;

  friend LiftedTransfer lift(const TransferMatrix& t, const BatteryConfig& cfg);

 private:
  LiftedTransfer(TransferMatrix base, BatteryConfig cfg);

  TransferMatrix base_;
  BatteryConfig cfg_;
  std::size_t dim_ = 0;
  std::int64_t a_max_ = 0;
  std::vector<std::int64_t> grid_shift_;
  std::vector<Block> blocks_;
  std::uint64_t id_ = 0;
};

/// Throws ValidationError unless t satisfies the feasibility conditions at
/// kStructuralTol, and BatteryTooSmall when N > n - 2 a_max.
LiftedTransfer lift(const TransferMatrix& t, const BatteryConfig& cfg);

struct LiftInvariants {
  /// max over support j and window x' of |sum_{i, x in 0..n} P(i,x|j,x') - 1|.
  double column_residual;
  /// max_i sum_{j,x'} P(i,x|j,x') (u/(u-1))^(x'-x); at most 1.
  double gibbs_max;
};

LiftInvariants lift_invariants(const LiftedTransfer& l);

/// The doubly stochastic completion of the lifted matrix.
///
/// Rows are labelled (i, x, z) and columns (j, x', z') with z running over
/// the multiplicity(x) basis states of battery level x. Columns on the
/// support of the final state (q_j > 0, x' in the window) hold
/// R = P(i,x|j,x') / multiplicity(x); every other column receives the
/// row's deficit spread evenly, fill(i, x) = (1 - r(i, x)) / K, with K the
/// number of such columns. Everything is kept in block form.
class CompletedBistochastic {
 public:
  explicit CompletedBistochastic(LiftedTransfer lifted);

  const LiftedTransfer& lifted() const { return lifted_; }
  /// r(i, x): mass of row (i, x, z) inside the support columns.
  double window_mass(std::size_t i, int x) const { return r_[i * levels() + x]; }
  double fill(std::size_t i, int x) const;
  /// R entry for a support column, including any perturbation.
  double support_entry(std::size_t i, int x, std::size_t j, int xp) const;
  bool is_support_column(std::size_t j, int xp) const;

  const mpz_class& total_levels() const { return m_total_; }   // M_T
  const mpz_class& fill_columns() const { return k_fill_; }    // K
  /// Side length D * M_T of the materialized matrix.
  mpz_class side() const;
  bool materializable() const;

  /// Copy with every fill value and every nonzero support entry offset.
  /// Only meant for negative controls.
  CompletedBistochastic perturbed(double fill_offset, double support_offset) const;
  double fill_offset() const { return fill_offset_; }
  double support_offset() const { return support_offset_; }

 private:
  std::size_t levels() const { return static_cast<std::size_t>(lifted_.config().n()) + 1; }

  LiftedTransfer lifted_;
  std::vector<double> r_;
  mpz_class m_total_;
  mpz_class k_fill_;
  double fill_offset_ = 0.0;
  double support_offset_ = 0.0;
};

CompletedBistochastic complete(const LiftedTransfer& l);

/// Row and column sums evaluated in exact rational arithmetic over the block
/// structure; no entrywise materialization.
struct ExactAggregate {
  mpq_class row_max_deviation;
  mpq_class col_max_deviation;
  /// max over rows of r(i, x) - 1; non-positive for a sub-stochastic R.
  mpq_class max_window_excess;
  bool exact() const { return row_max_deviation == 0 && col_max_deviation == 0; }
};

ExactAggregate aggregate_sums_exact(const CompletedBistochastic& c);

struct AggregateSums {
  double row_max_residual;
  double col_max_residual;
};

/// Floating-point version of aggregate_sums_exact.
AggregateSums aggregate_sums(const CompletedBistochastic& c);

/// Weighted Schmidt tables of the battery-correlated initial state and the
/// product final state, indexed (i, x) and (j, x') over x = 0..n.
struct BoundaryStates {
  std::uint64_t lift_id;
  BatteryConfig cfg;
  std::size_t dim;
  std::vector<double> p;    // initial coefficients, zero-padded to dim
  std::vector<double> psi;  // psi_N(i, x), row-major dim x (n+1)
  std::vector<double> phi;  // phi_N(j, x')

  double psi_at(std::size_t i, int x) const { return psi[i * levels() + x]; }
  double phi_at(std::size_t j, int x) const { return phi[j * levels() + x]; }
  std::size_t levels() const { return static_cast<std::size_t>(cfg.n()) + 1; }
};

BoundaryStates boundary_states(const LiftedTransfer& l);

/// max over (i, z) of |sum_{j,z'} C(i,z|j,z') phi(j,z') - psi(i,z)| on
/// per-basis-state Schmidt coefficients, evaluated blockwise. Throws
/// ValidationError when c and b come from different lifts.
double verify_schmidt_mapping(const CompletedBistochastic& c, const BoundaryStates& b);

struct MaterializedReport {
  std::uint64_t side;
  double row_max_residual;
  double col_max_residual;
  double mapping_residual;
  double min_entry;
};

/// Enumerates every entry of the completed matrix. Throws DomainError when
/// the side exceeds kMaterializeLimit.
MaterializedReport verify_materialized(const CompletedBistochastic& c, const BoundaryStates& b);

/// Dense CSV dump with "(i,x,z)" row and column labels.
void write_matrix_csv(const CompletedBistochastic& c, std::ostream& out);

struct OverlapReport {
  double exact;  // <Psi~_N | Psi_N>
  double bound;  // (N + 1) / (n + 1)
};

/// Overlap between the correlated initial state and the product state with
/// the uniform battery over all n + 1 levels.
OverlapReport product_overlap(const BoundaryStates& b);

}  // namespace blocc
