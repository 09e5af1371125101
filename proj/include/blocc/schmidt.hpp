#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blocc {

/// Normalization tolerance for probability vectors.
inline constexpr double kNormTol = 1e-12;
/// Entries at or below this value are treated as structurally zero.
inline constexpr double kSupportThreshold = 1e-15;
/// Tolerance for comparing partial sums in majorization tests.
inline constexpr double kPartialSumTol = 1e-12;

/// Squared Schmidt coefficients of a bipartite pure state.
///
/// The constructor rejects negative or non-finite entries and vectors whose
/// sum differs from one by more than `kNormTol`. Entries keep the caller's
/// index order; `sorted()` gives the canonical non-increasing view.
class SchmidtVector {
 public:
  explicit SchmidtVector(std::vector<double> coeffs);

  static SchmidtVector uniform(std::size_t d);
  /// Point mass on index 0 of a length-d vector.
  static SchmidtVector product(std::size_t d);

  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  std::vector<double> sorted() const;
  /// Number of entries above `kSupportThreshold`.
  std::size_t support_dimension() const;
  bool full_support() const { return support_dimension() == size(); }
  /// Smallest entry on the support.
  double min_support() const;
  bool in_support(std::size_t i) const {
    return i < coeffs_.size() && coeffs_[i] > kSupportThreshold;
  }

  friend bool operator==(const SchmidtVector&, const SchmidtVector&) = default;

 private:
  std::vector<double> coeffs_;
};

struct EnsembleMember {
  double weight;
  SchmidtVector vector;
};

/// Weighted family of pure states sharing a Schmidt basis.
class PureEnsemble {
 public:
  explicit PureEnsemble(std::vector<EnsembleMember> members);

  std::span<const EnsembleMember> members() const { return members_; }
  /// Length of the longest member; shorter members are zero-padded to it.
  std::size_t common_dimension() const;

 private:
  std::vector<EnsembleMember> members_;
};

/// Entanglement entropy in bits, with 0 log 0 = 0.
double entanglement_entropy(const SchmidtVector& v);

/// True iff q majorizes p, comparing sorted partial sums after zero-padding.
bool majorizes(const SchmidtVector& q, const SchmidtVector& p);

/// log2 of max_i p_i / q_i over the support of p. Throws DomainError naming
/// the first index where p has support but q does not.
double renyi_inf_divergence(const SchmidtVector& p, const SchmidtVector& q);

/// Weighted average of the members' coefficient vectors.
SchmidtVector ensemble_average(const PureEnsemble& e);

}  // namespace blocc
