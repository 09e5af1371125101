#include "blocc/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blocc/error.hpp"
#include "blocc/summation.hpp"

namespace blocc {

TheoremReport make_report(std::string name, double lhs, double rhs, double tol, Relation rel) {
  double residual = 0.0;
  switch (rel) {
    case Relation::equal: residual = std::abs(lhs - rhs); break;
    case Relation::at_most: residual = lhs - rhs; break;
    case Relation::at_least: residual = rhs - lhs; break;
  }
  return {std::move(name), lhs, rhs, residual, residual <= tol, tol, rel};
}

namespace {

double log_ratio(const TransferMatrix& t, const TransferEntry& e) {
  const double pi = t.p()[e.i];
  const double qj = t.q()[e.j];
  if (!(pi > 0.0) || !(qj > 0.0))
    throw DomainError("nonzero transfer entry on a zero Schmidt coefficient");
  return t.grid()[e.k] - std::log2(qj) + std::log2(pi);
}

void require_uniform(const SchmidtVector& q) {
  const double target = 1.0 / static_cast<double>(q.support_dimension());
  for (double c : q.coeffs())
    if (c > kSupportThreshold && std::abs(c - target) > kNormTol)
      throw PreconditionError("final state is not maximally entangled");
}

}  // namespace

TheoremReport second_law_equality(const TransferMatrix& t, double tol) {
  CompensatedSum s;
  for (const auto& e : t.entries()) {
    if (!t.q().in_support(e.j)) throw DomainError("second law needs q_j > 0 on the support");
    s += e.value * t.q()[e.j] * std::exp2(log_ratio(t, e));
  }
  return make_report("second_law_equality", s.value(), 1.0, tol, Relation::equal);
}

TheoremReport mean_work_bound(const TransferMatrix& t, double tol) {
  return make_report("mean_work_bound", mean_work(t),
                     entanglement_entropy(t.p()) - entanglement_entropy(t.q()), tol,
                     Relation::at_most);
}

TheoremReport moment_inequalities(const TransferMatrix& t, int order, double tol) {
  if (order < 1 || order % 2 == 0) throw DomainError("moment order must be odd and positive");
  std::vector<CompensatedSum> moments(static_cast<std::size_t>(order) + 1);
  for (const auto& e : t.entries()) {
    const double prob = e.value * t.q()[e.j];
    if (prob == 0.0) continue;
    const double sigma = log_ratio(t, e);
    double pw = 1.0;
    for (int k = 1; k <= order; ++k) {
      pw *= sigma;
      moments[k] += prob * pw;
    }
  }
  CompensatedSum lhs;
  double coef = 1.0;
  for (int k = 1; k <= order; ++k) {
    coef *= std::numbers::ln2 / k;
    lhs += coef * moments[k].value();
  }
  return make_report("moment_inequality_M" + std::to_string(order), lhs.value(), 0.0, tol,
                     Relation::at_most);
}

TheoremReport third_law_bound(const TransferMatrix& t, double tol) {
  CompensatedSum lhs;
  for (std::size_t k : t.active_grid_indices()) lhs += std::exp2(t.grid()[k]);
  const double d_prime = static_cast<double>(t.q().support_dimension());
  const double rhs = t.q().min_support() / (d_prime * t.p().min_support());
  return make_report("third_law_bound", lhs.value(), rhs, tol, Relation::at_least);
}

TheoremReport jarzynski(const TransferMatrix& t, double tol) {
  require_uniform(t.q());
  if (!t.p().full_support()) throw PreconditionError("initial state must have full support");
  CompensatedSum s;
  for (const auto& e : t.entries()) s += e.value * t.q()[e.j] * std::exp2(t.grid()[e.k]);
  const double rhs = static_cast<double>(t.d()) / static_cast<double>(t.q().support_dimension());
  return make_report("jarzynski", s.value(), rhs, tol, Relation::equal);
}

TheoremReport strong_converse_tail(const WorkDistribution& w, int d, int d_prime, double x,
                                   double tol) {
  if (d < 1 || d_prime < 1) throw DomainError("dimensions must be positive");
  const double threshold = std::log2(static_cast<double>(d) / d_prime) + x;
  CompensatedSum tail;
  for (const auto& pt : w.points())
    if (pt.w >= threshold - kGridTol) tail += pt.prob;
  return make_report("strong_converse_tail", tail.value(), std::exp2(-x), tol, Relation::at_most);
}

TransferMatrix reverse_matrix(const TransferMatrix& t) {
  const WorkGrid rev_grid = t.grid().negated();
  const std::size_t last = t.grid().size() - 1;
  std::vector<TransferEntry> entries;
  std::vector<CompensatedSum> p_rev(t.d_out());
  for (const auto& e : t.entries()) {
    const double v = std::exp2(t.grid()[e.k]) * e.value;
    entries.push_back({e.j, last - e.k, e.i, v});
    p_rev[e.j] += v * t.p()[e.i];
  }
  std::vector<double> p_new(t.d_out());
  for (std::size_t j = 0; j < t.d_out(); ++j) p_new[j] = p_rev[j].value();
  return TransferMatrix(SchmidtVector(std::move(p_new)), t.p(), rev_grid, std::move(entries));
}

CrooksReport crooks_check(const TransferMatrix& t, int d, int d_prime, double tol) {
  require_uniform(t.q());
  if (!t.q().full_support() || static_cast<int>(t.d_out()) != d)
    throw PreconditionError("forward final state must be maximally entangled of dimension d");
  if (!t.p().full_support() || static_cast<int>(t.d()) != d_prime)
    throw PreconditionError("reverse final state must live on the d' forward initial indices");

  const TransferMatrix rev = reverse_matrix(t);
  const std::size_t K = t.grid().size();
  std::vector<CompensatedSum> fwd(K), bwd(K);
  for (const auto& e : t.entries()) fwd[e.k] += e.value / d;
  // rev grid index K-1-k holds -w_k; the reverse final state is uniform on d' entries.
  for (const auto& e : rev.entries()) bwd[K - 1 - e.k] += e.value / d_prime;

  CrooksReport rep;
  double worst = 0.0;
  CompensatedSum rev_total;
  for (std::size_t k = 0; k < K; ++k) {
    const double pr = bwd[k].value();
    rev_total += pr;
    if (!(pr > 0.0)) continue;
    const double w = t.grid()[k];
    const double pf = fwd[k].value();
    const double expected = std::exp2(-w) * d_prime / d;
    const double ratio = pf / pr;
    const double res = std::abs(ratio - expected);
    worst = std::max(worst, res);
    rep.points.push_back({w, -w, pf, pr, ratio, expected, res, res <= tol});
  }
  rep.summary = make_report("crooks", worst, 0.0, tol, Relation::at_most);
  const double derived = static_cast<double>(d_prime) / d * rev_total.value();
  rep.jarzynski_consistency =
      make_report("crooks_jarzynski_consistency", derived, jarzynski(t).lhs, tol, Relation::equal);
  return rep;
}

}  // namespace blocc
