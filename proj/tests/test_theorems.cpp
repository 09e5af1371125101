#include "doctest.h"

#include <random>

#include "blocc/error.hpp"
#include "blocc/theorems.hpp"
#include "oracles.hpp"

using namespace blocc;

namespace {

const SchmidtVector kP({0.5, 0.25, 0.125, 0.125});
const SchmidtVector kQ = SchmidtVector::uniform(4);

// Random LP witness for a random pair on a random grid containing the canonical one.
std::optional<TransferMatrix> random_witness(std::mt19937_64& rng) {
  const int d = 1 + static_cast<int>(rng() % 5), dp = 1 + static_cast<int>(rng() % 5);
  SchmidtVector p(oracle::random_prob(rng, d)), q(oracle::random_prob(rng, dp));
  const WorkGrid base = canonical_grid(p, q);
  std::vector<double> g(base.values().begin(), base.values().end());
  std::uniform_real_distribution<double> U(-3, 3);
  for (int k = 0; k < 4; ++k) g.push_back(U(rng));
  auto r = feasibility_lp(p, q, WorkGrid(g));
  return r.witness;
}

}  // namespace

TEST_CASE("report relations") {
  CHECK(make_report("x", 1.0, 1.0 + 1e-12, 1e-11, Relation::equal).pass);
  CHECK_FALSE(make_report("x", 1.0, 1.1, 1e-11, Relation::equal).pass);
  auto le = make_report("x", 0.5, 1.0, 0.0, Relation::at_most);
  CHECK(le.pass);
  CHECK(le.residual == -0.5);
  CHECK_FALSE(make_report("x", 0.5, 1.0, 0.0, Relation::at_least).pass);
}

TEST_CASE("identities on the reference instance") {
  auto t = canonical_reversible(kP, kQ);
  auto sl = second_law_equality(t);
  CHECK(sl.pass);
  CHECK(std::abs(sl.lhs - 1.0) < 1e-12);
  auto mb = mean_work_bound(t);
  CHECK(mb.pass);
  CHECK(mb.lhs == doctest::Approx(-0.25));
  CHECK(mb.rhs == doctest::Approx(-0.25));
  // the canonical matrix has sigma = 0 everywhere
  for (int m : {1, 3, 5, 7}) CHECK(std::abs(moment_inequalities(t, m).lhs) < 1e-15);
  CHECK_THROWS_AS(moment_inequalities(t, 2), DomainError);
  auto tl = third_law_bound(t);
  CHECK(tl.pass);
  CHECK(tl.lhs == doctest::Approx(0.5 + 1 + 2));
  CHECK(tl.rhs == doctest::Approx(0.25 / (4 * 0.125)));
  auto jz = jarzynski(t);
  CHECK(jz.pass);
  CHECK(jz.rhs == 1.0);
}

TEST_CASE("witness corpus satisfies every bound") {
  std::mt19937_64 rng(99);
  int seen = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto w = random_witness(rng);
    REQUIRE(w.has_value());
    ++seen;
    CHECK(second_law_equality(*w, 1e-9).pass);
    CHECK(mean_work_bound(*w).pass);
    CHECK(moment_inequalities(*w, 1).pass);
    CHECK(moment_inequalities(*w, 3).pass);
    CHECK(moment_inequalities(*w, 5).pass);
    CHECK(third_law_bound(*w).pass);
  }
  CHECK(seen == 150);
}

TEST_CASE("mean bound fails for an infeasible matrix") {
  // Non-witness: always stores one bit, so C2 fails and the mean exceeds S(p) - S(q).
  SchmidtVector u = SchmidtVector::uniform(2);
  TransferMatrix t(u, u, WorkGrid({1.0}), {{0, 0, 0, 1.0}, {1, 0, 1, 1.0}});
  CHECK_FALSE(mean_work_bound(t).pass);
  CHECK_FALSE(second_law_equality(t).pass);
}

TEST_CASE("jarzynski on canonical pairs") {
  std::mt19937_64 rng(3);
  for (auto [d, dp] : {std::pair{4, 2}, {2, 4}, {3, 3}, {5, 1}}) {
    auto p = oracle::random_prob(rng, d);
    auto t = canonical_reversible(SchmidtVector(p), SchmidtVector::uniform(dp));
    auto r = jarzynski(t);
    CHECK(r.rhs == doctest::Approx(static_cast<double>(d) / dp));
    CHECK(r.residual < 1e-12);
  }
  CHECK_THROWS_AS(jarzynski(canonical_reversible(kQ, kP)), PreconditionError);
  auto partial = feasibility_lp(SchmidtVector({0.5, 0.5, 0.0}), SchmidtVector({1.0}), WorkGrid({1.0}));
  REQUIRE(partial.feasible);
  CHECK_THROWS_AS(jarzynski(*partial.witness), PreconditionError);
}

TEST_CASE("strong converse tail") {
  auto t = canonical_reversible(SchmidtVector({0.7, 0.2, 0.1}), SchmidtVector::uniform(2));
  auto wm = work_marginal(t);
  for (double x : {0.0, 0.5, 1.0, 2.0}) CHECK(strong_converse_tail(wm, 3, 2, x).pass);
  // a distribution that violates it
  WorkDistribution bad({{0.0, 0.1}, {3.0, 0.9}});
  CHECK_FALSE(strong_converse_tail(bad, 1, 1, 2.0).pass);
  CHECK_THROWS_AS(strong_converse_tail(wm, 0, 1, 0.0), DomainError);
}

TEST_CASE("reverse matrix") {
  auto t = canonical_reversible(SchmidtVector({0.6, 0.4}), SchmidtVector({0.3, 0.3, 0.4}));
  auto r = reverse_matrix(t);
  CHECK(r.p() == SchmidtVector({0.3, 0.3, 0.4}));
  CHECK(r.q() == t.p());
  CHECK(verify_conditions(r, 1e-12).pass);
  CHECK(mean_work(r) == doctest::Approx(-mean_work(t)));
  auto rr = reverse_matrix(r);
  for (const auto& e : t.entries()) CHECK(rr.value(e.i, e.k, e.j) == doctest::Approx(e.value));
}

TEST_CASE("crooks on the (4, 2) instance") {
  auto t = canonical_reversible(SchmidtVector({0.75, 0.25}), SchmidtVector::uniform(4));
  auto rep = crooks_check(t, 4, 2);
  CHECK(rep.summary.pass);
  CHECK_FALSE(rep.points.empty());
  for (const auto& pt : rep.points) {
    CHECK(pt.pass);
    CHECK(pt.reverse_w == -pt.w);
    CHECK(pt.expected == doctest::Approx(std::exp2(-pt.w) * 2.0 / 4.0));
  }
  CHECK(rep.jarzynski_consistency.pass);
  CHECK(rep.jarzynski_consistency.rhs == doctest::Approx(0.5));
  CHECK_THROWS_AS(crooks_check(t, 3, 2), PreconditionError);
  CHECK_THROWS_AS(crooks_check(canonical_reversible(kQ, kP), 4, 4), PreconditionError);
}
