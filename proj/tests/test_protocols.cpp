#include "doctest.h"

#include "blocc/error.hpp"
#include "blocc/protocols.hpp"
#include "blocc/theorems.hpp"
#include "oracles.hpp"

using namespace blocc;

TEST_CASE("binomials") {
  for (int n = 0; n <= 60; ++n) {
    const auto row = oracle::pascal_row(n);
    for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == mpz_class(std::to_string(row[k])));
  }
}

TEST_CASE("exact concentration distribution") {
  auto two = concentration_distribution_exact(2, mpq_class(1, 2));
  REQUIRE(two.size() == 2);
  CHECK(two[0].binom == 1);
  CHECK(two[0].prob == mpq_class(1, 2));
  CHECK(two[1].binom == 2);
  CHECK(two[1].prob == mpq_class(1, 2));

  for (const mpq_class p : {mpq_class(1, 3), mpq_class(1, 2), mpq_class(2, 7)})
    for (int n = 1; n <= 16; ++n) {
      mpq_class total = 0;
      for (const auto& pt : concentration_distribution_exact(n, p)) total += pt.prob;
      CHECK(total == 1);
    }
  // p = 1/3, n = 3: yields C(3,0)=1 with (1/3)^3 + (2/3)^3, C(3,1)=3 with 3(1/3)^2(2/3) + 3(1/3)(2/3)^2
  auto three = concentration_distribution_exact(3, mpq_class(1, 3));
  REQUIRE(three.size() == 2);
  CHECK(three[0].prob == mpq_class(1, 3));
  CHECK(three[1].prob == mpq_class(2, 3));
  CHECK_THROWS_AS(concentration_distribution_exact(0, mpq_class(1, 2)), ValidationError);
  CHECK_THROWS_AS(concentration_distribution_exact(3, mpq_class(0)), ValidationError);
}

TEST_CASE("concentration mean rate") {
  for (double p : {1.0 / 3.0, 0.5}) {
    const double S = static_cast<double>(oracle::entropy({p, 1 - p}));
    double prev = 0;
    for (int n = 1; n <= 16; ++n) {
      const double rate = concentration_mean({n, p}) / n;
      CHECK(rate >= prev - 1e-15);
      CHECK(rate <= S);
      prev = rate;
    }
  }
  auto d = concentration_distribution({4, 0.5});
  CHECK(d.points().front().w == 0.0);
  CHECK(d.points().back().w == doctest::Approx(std::log2(6.0)));
  CHECK_THROWS_AS(validate({2, 1.0}), ValidationError);
}

TEST_CASE("dilution") {
  SchmidtVector target({0.5, 0.3, 0.2});
  for (int m : {2, 3}) {
    auto t = dilution_canonical(target, m);
    CHECK(verify_conditions(t, 1e-12).pass);
    auto mb = mean_work_bound(t);
    CHECK(std::abs(mb.lhs - mb.rhs) < 1e-12);
    CHECK(mean_work(t) == doctest::Approx(m - entanglement_entropy(target)));
    auto back = reverse_matrix(t);
    CHECK(verify_conditions(back, 1e-12).pass);
    CHECK(std::abs(mean_work(back) + (m - entanglement_entropy(target))) < 1e-12);
  }
  CHECK_THROWS_AS(dilution_canonical(target, 1), DomainError);
  CHECK_THROWS_AS(dilution_canonical(SchmidtVector({0.5, 0.5, 0.0}), 2), DomainError);
}

TEST_CASE("conversion rate") {
  CHECK(conversion_rate(SchmidtVector::uniform(4), SchmidtVector::uniform(2)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(conversion_rate(SchmidtVector::uniform(2), SchmidtVector::product(2)), DomainError);
}

TEST_CASE("ensemble reduction") {
  PureEnsemble e({{0.5, SchmidtVector({1.0, 0.0})}, {0.5, SchmidtVector({0.5, 0.5})}});
  auto r = ensemble_reduce(e, SchmidtVector({0.5, 0.5}));
  CHECK(r.feasible_via_average);
  CHECK_FALSE(r.blocc_feasible.has_value());
  // a product state reaches the average only by drawing from the battery
  const SchmidtVector product({1.0, 0.0});
  auto charged = ensemble_reduce(e, product, WorkGrid({std::log2(0.75), std::log2(0.25)}));
  CHECK_FALSE(charged.feasible_via_average);
  REQUIRE(charged.blocc_feasible.has_value());
  CHECK(*charged.blocc_feasible);
  CHECK_FALSE(*ensemble_reduce(e, product, WorkGrid({0.0, 1.0})).blocc_feasible);
}
