#include "blocc/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "blocc/error.hpp"
#include "blocc/summation.hpp"

namespace blocc {

SchmidtVector::SchmidtVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ValidationError("Schmidt vector must be non-empty");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i]) || coeffs_[i] < 0.0)
      throw ValidationError("Schmidt coefficient " + std::to_string(i) +
                            " is negative or not finite");
  }
  const double total = compensated_sum(coeffs_);
  if (std::abs(total - 1.0) > kNormTol)
    throw ValidationError("Schmidt coefficients sum to " + std::to_string(total) +
                          ", expected 1");
}

SchmidtVector SchmidtVector::uniform(std::size_t d) {
  if (d == 0) throw ValidationError("dimension must be positive");
  return SchmidtVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

SchmidtVector SchmidtVector::product(std::size_t d) {
  if (d == 0) throw ValidationError("dimension must be positive");
  std::vector<double> c(d, 0.0);
  c[0] = 1.0;
  return SchmidtVector(std::move(c));
}

std::vector<double> SchmidtVector::sorted() const {
  std::vector<double> s = coeffs_;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::size_t SchmidtVector::support_dimension() const {
  return static_cast<std::size_t>(std::count_if(
      coeffs_.begin(), coeffs_.end(), [](double c) { return c > kSupportThreshold; }));
}

double SchmidtVector::min_support() const {
  double m = 1.0;
  for (double c : coeffs_)
    if (c > kSupportThreshold) m = std::min(m, c);
  return m;
}

PureEnsemble::PureEnsemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw ValidationError("ensemble must have at least one member");
  CompensatedSum total;
  for (const auto& m : members_) {
    if (!std::isfinite(m.weight) || m.weight < 0.0)
      throw ValidationError("ensemble weight is negative or not finite");
    total += m.weight;
  }
  if (std::abs(total.value() - 1.0) > kNormTol)
    throw ValidationError("ensemble weights do not sum to 1");
}

std::size_t PureEnsemble::common_dimension() const {
  std::size_t d = 0;
  for (const auto& m : members_) d = std::max(d, m.vector.size());
  return d;
}

double entanglement_entropy(const SchmidtVector& v) {
  CompensatedSum s;
  for (double c : v.coeffs())
    if (c > 0.0) s += -c * std::log2(c);
  const double h = s.value();
  const double hi = std::log2(static_cast<double>(v.support_dimension()));
  return std::clamp(h, 0.0, hi);
}

bool majorizes(const SchmidtVector& q, const SchmidtVector& p) {
  std::vector<double> qs = q.sorted();
  std::vector<double> ps = p.sorted();
  const std::size_t len = std::max(qs.size(), ps.size());
  qs.resize(len, 0.0);
  ps.resize(len, 0.0);
  CompensatedSum sq, sp;
  for (std::size_t k = 0; k < len; ++k) {
    sq += qs[k];
    sp += ps[k];
    if (sq.value() < sp.value() - kPartialSumTol) return false;
  }
  return true;
}

double renyi_inf_divergence(const SchmidtVector& p, const SchmidtVector& q) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.in_support(i)) continue;
    if (!q.in_support(i))
      throw DomainError("support of p is not contained in support of q at index " +
                        std::to_string(i));
    best = std::max(best, p[i] / q[i]);
  }
  return std::log2(best);
}

SchmidtVector ensemble_average(const PureEnsemble& e) {
  const std::size_t d = e.common_dimension();
  std::vector<CompensatedSum> acc(d);
  for (const auto& m : e.members())
    for (std::size_t j = 0; j < m.vector.size(); ++j) acc[j] += m.weight * m.vector[j];
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = acc[j].value();
  return SchmidtVector(std::move(out));
}

}  // namespace blocc
