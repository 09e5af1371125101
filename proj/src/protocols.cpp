#include "blocc/protocols.hpp"

#include <cmath>
#include <map>

#include "blocc/error.hpp"
#include "blocc/summation.hpp"

namespace blocc {

void validate(const ConcentrationSpec& spec) {
  if (spec.n_copies < 1) throw ValidationError("n_copies must be at least 1");
  if (!(spec.p > 0.0 && spec.p < 1.0)) throw ValidationError("p must lie in (0, 1)");
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<ExactConcentrationPoint> concentration_distribution_exact(int n_copies,
                                                                     const mpq_class& p) {
  if (n_copies < 1) throw ValidationError("n_copies must be at least 1");
  if (p <= 0 || p >= 1) throw ValidationError("p must lie in (0, 1)");
  const auto n = static_cast<unsigned>(n_copies);
  const mpq_class one_minus = 1 - p;
  std::map<mpz_class, mpq_class> merged;
  for (unsigned t = 0; t <= n; ++t) {
    const mpz_class c = binomial(n, t);
    mpq_class prob = c;
    for (unsigned k = 0; k < n - t; ++k) prob *= p;
    for (unsigned k = 0; k < t; ++k) prob *= one_minus;
    merged[c] += prob;
  }
  std::vector<ExactConcentrationPoint> out;
  for (auto& [c, prob] : merged) out.push_back({c, prob});
  return out;
}

namespace {
double log2_mpz(const mpz_class& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}
}  // namespace

WorkDistribution concentration_distribution(const ConcentrationSpec& spec) {
  validate(spec);
  std::vector<WorkPoint> pts;
  for (const auto& pt : concentration_distribution_exact(spec.n_copies, mpq_class(spec.p)))
    pts.push_back({log2_mpz(pt.binom), pt.prob.get_d()});
  return WorkDistribution(std::move(pts));
}

double concentration_mean(const ConcentrationSpec& spec) {
  validate(spec);
  CompensatedSum s;
  for (const auto& pt : concentration_distribution_exact(spec.n_copies, mpq_class(spec.p)))
    s += pt.prob.get_d() * log2_mpz(pt.binom);
  return s.value();
}

TransferMatrix dilution_canonical(const SchmidtVector& target, int m_ebits) {
  if (m_ebits < 0 || m_ebits > 30) throw DomainError("m_ebits must lie in {0,...,30}");
  const std::size_t dim = std::size_t{1} << m_ebits;
  if (dim < target.size())
    throw DomainError("2^m = " + std::to_string(dim) + " is smaller than the target dimension " +
                      std::to_string(target.size()));
  return canonical_reversible(SchmidtVector::uniform(dim), target);
}

double conversion_rate(const SchmidtVector& psi, const SchmidtVector& phi) {
  const double s_psi = entanglement_entropy(psi);
  const double s_phi = entanglement_entropy(phi);
  if (s_phi <= 0.0) throw DomainError("target state has zero entanglement");
  if (s_psi <= 0.0) throw DomainError("source state has zero entanglement");
  return s_psi / s_phi;
}

EnsembleReduction ensemble_reduce(const PureEnsemble& e, const SchmidtVector& p,
                                  const std::optional<WorkGrid>& grid) {
  SchmidtVector avg = ensemble_average(e);
  EnsembleReduction r{avg, majorizes(avg, p), std::nullopt};
  if (grid) r.blocc_feasible = feasibility_lp(p, avg, *grid).feasible;
  return r;
}

}  // namespace blocc
