#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "blocc/schmidt.hpp"
#include "blocc/transfer.hpp"

namespace blocc {

/// n copies of sqrt(p)|00> + sqrt(1-p)|11>.
struct ConcentrationSpec {
  int n_copies;
  double p;
};

void validate(const ConcentrationSpec& spec);

/// Exact binomial coefficient C(n, k).
mpz_class binomial(unsigned n, unsigned k);

/// One outcome of the type-class measurement, merged over classes with the
/// same yield: log2(binom) ebits with probability prob.
struct ExactConcentrationPoint {
  mpz_class binom;
  mpq_class prob;
};

/// Exact yield distribution for a rational p, sorted by increasing yield.
std::vector<ExactConcentrationPoint> concentration_distribution_exact(int n_copies,
                                                                     const mpq_class& p);

/// Yield distribution with w = log2 C(n, t). Probabilities are evaluated
/// exactly from the binary value of p and rounded once.
WorkDistribution concentration_distribution(const ConcentrationSpec& spec);

/// Mean yield sum_t P(t) log2 C(n, t).
double concentration_mean(const ConcentrationSpec& spec);

/// Canonical transfer matrix from a maximally entangled state of 2^m
/// levels to `target`. Throws DomainError when 2^m < target.size() or the
/// target has a zero coefficient.
TransferMatrix dilution_canonical(const SchmidtVector& target, int m_ebits);

/// S(psi) / S(phi). Throws DomainError when either entropy vanishes.
double conversion_rate(const SchmidtVector& psi, const SchmidtVector& phi);

struct EnsembleReduction {
  SchmidtVector average;
  /// Battery-free check: the average majorizes the initial coefficients.
  bool feasible_via_average;
  /// Battery-assisted check on the supplied grid, when one was given.
  std::optional<bool> blocc_feasible;
};

EnsembleReduction ensemble_reduce(const PureEnsemble& e, const SchmidtVector& p,
                                  const std::optional<WorkGrid>& grid = std::nullopt);

}  // namespace blocc
