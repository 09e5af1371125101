#include "doctest.h"

#include <random>

#include "blocc/error.hpp"
#include "blocc/schmidt.hpp"
#include "oracles.hpp"

using namespace blocc;

TEST_CASE("schmidt vector validation") {
  CHECK_NOTHROW(SchmidtVector({0.5, 0.5}));
  CHECK_THROWS_AS(SchmidtVector({}), ValidationError);
  CHECK_THROWS_AS(SchmidtVector({0.6, 0.6}), ValidationError);
  CHECK_THROWS_AS(SchmidtVector({1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(SchmidtVector({std::nan(""), 1.0}), ValidationError);
  CHECK_NOTHROW(SchmidtVector({0.5, 0.5 + 5e-13}));
}

TEST_CASE("support and ordering") {
  SchmidtVector v({0.125, 0.0, 0.5, 0.375});
  CHECK(v.support_dimension() == 3);
  CHECK_FALSE(v.full_support());
  CHECK(v.min_support() == 0.125);
  CHECK(v.sorted() == std::vector<double>{0.5, 0.375, 0.125, 0.0});
  CHECK(SchmidtVector::product(3).support_dimension() == 1);
  CHECK(SchmidtVector::uniform(4)[2] == 0.25);
}

TEST_CASE("entanglement entropy") {
  CHECK(entanglement_entropy(SchmidtVector::uniform(8)) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(entanglement_entropy(SchmidtVector::product(5)) == 0.0);
  SchmidtVector h({0.5, 0.25, 0.125, 0.125});
  CHECK(entanglement_entropy(h) == doctest::Approx(1.75).epsilon(1e-15));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 7);
    auto p = oracle::random_prob(rng, d);
    const double s = entanglement_entropy(SchmidtVector(p));
    CHECK(std::abs(s - static_cast<double>(oracle::entropy(p))) < 1e-13);
    CHECK(s <= std::log2(d) + 1e-15);
  }
}

TEST_CASE("majorization") {
  SchmidtVector p({0.25, 0.25, 0.25, 0.25});
  SchmidtVector q({0.5, 0.25, 0.125, 0.125});
  CHECK(majorizes(q, p));
  CHECK_FALSE(majorizes(p, q));
  CHECK(majorizes(q, q));
  // zero padding across dimensions
  CHECK(majorizes(SchmidtVector({1.0}), SchmidtVector({0.5, 0.5})));
  // incomparable pair
  SchmidtVector a({0.5, 0.25, 0.25, 0.0});
  SchmidtVector b({0.4, 0.4, 0.1, 0.1});
  CHECK_FALSE(majorizes(a, b));
  CHECK_FALSE(majorizes(b, a));
}

TEST_CASE("renyi infinity divergence") {
  SchmidtVector p({0.5, 0.5});
  SchmidtVector q({0.25, 0.75});
  CHECK(renyi_inf_divergence(p, q) == doctest::Approx(1.0));
  CHECK(renyi_inf_divergence(q, q) == doctest::Approx(0.0));
  try {
    renyi_inf_divergence(p, SchmidtVector({1.0, 0.0}));
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("ensemble average") {
  PureEnsemble e({{0.5, SchmidtVector({1.0})}, {0.5, SchmidtVector({0.5, 0.5})}});
  CHECK(e.common_dimension() == 2);
  auto avg = ensemble_average(e);
  CHECK(avg[0] == doctest::Approx(0.75));
  CHECK(avg[1] == doctest::Approx(0.25));
  CHECK_THROWS(PureEnsemble({{0.3, SchmidtVector({1.0})}}));
}
