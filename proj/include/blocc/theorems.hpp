#pragma once

#include <string>
#include <vector>

#include "blocc/transfer.hpp"

namespace blocc {

enum class Relation {
  equal,       // |lhs - rhs| <= tolerance
  at_most,     // lhs <= rhs + tolerance
  at_least,    // lhs >= rhs - tolerance
};

struct TheoremReport {
  std::string name;
  double lhs;
  double rhs;
  double residual;  // signed violation for inequalities, |lhs - rhs| for equalities
  bool pass;
  double tolerance;
  Relation relation;
};

TheoremReport make_report(std::string name, double lhs, double rhs, double tol, Relation rel);

/// <2^(w - log q_j + log p_i)> = 1.
TheoremReport second_law_equality(const TransferMatrix& t, double tol = 1e-10);

/// <w> <= S(p) - S(q).
TheoremReport mean_work_bound(const TransferMatrix& t, double tol = 1e-9);

/// sum_{k=1..M} (ln 2)^k / k! <(w - log q_j + log p_i)^k> <= 0 for odd M.
TheoremReport moment_inequalities(const TransferMatrix& t, int order, double tol = 1e-9);

/// sum over active w of 2^w >= q_min / (d' p_min).
TheoremReport third_law_bound(const TransferMatrix& t, double tol = 1e-9);

/// <2^w> = d / d' for a maximally entangled final state of dimension d'.
/// Throws PreconditionError when q is not uniform on its support or p is
/// not of full support.
TheoremReport jarzynski(const TransferMatrix& t, double tol = 1e-10);

/// P(w >= log2(d/d') + x) <= 2^-x.
TheoremReport strong_converse_tail(const WorkDistribution& w, int d, int d_prime, double x,
                                   double tol = 1e-12);

/// The reverse protocol's matrix P_rev(j, -w | i) = 2^w P(i, w | j) on the
/// negated grid. Its final state is the forward initial state p and its
/// initial state p'_j = sum_{i,w} P_rev(j, -w | i) p_i.
TransferMatrix reverse_matrix(const TransferMatrix& t);

struct CrooksPoint {
  double w;          // forward work value
  double reverse_w;  // -w, the reverse protocol's grid value
  double forward_prob;
  double reverse_prob;
  double ratio;
  double expected;  // 2^-w d'/d
  double residual;
  bool pass;
};

struct CrooksReport {
  std::vector<CrooksPoint> points;
  TheoremReport summary;
  /// Jarzynski recovered from the ratio table, (d'/d) sum_w P_rev(-w),
  /// against the direct <2^w>.
  TheoremReport jarzynski_consistency;
};

/// Checks P(w) / P_rev(-w) = 2^-w d'/d at every grid point with P_rev(-w) > 0.
/// d is the dimension of the forward final state (q uniform on d entries)
/// and d' the number of forward initial indices, on which the reverse
/// protocol's maximally entangled final state lives.
CrooksReport crooks_check(const TransferMatrix& t, int d, int d_prime, double tol = 1e-10);

}  // namespace blocc
