#include "doctest.h"

#include "blocc/battery.hpp"
#include "blocc/error.hpp"
#include "oracles.hpp"

using namespace blocc;

TEST_CASE("work quantum and quantization") {
  CHECK(work_quantum(2) == 1.0);
  CHECK(work_quantum(4) == doctest::Approx(std::log2(4.0 / 3.0)));
  CHECK(quantize_work(2, 1.0) == 1);
  CHECK(quantize_work(2, -1.0) == -1);
  CHECK(quantize_work(2, 0.999) == 0);
  CHECK(quantize_work(2, -0.5) == -1);
  CHECK(quantize_work(2, 0.0) == 0);
  const double dw = work_quantum(3);
  CHECK(quantize_work(3, 5 * dw) == 5);
  CHECK(quantize_work(3, -7 * dw) == -7);
  CHECK(quantize_work(3, 5 * dw - 1e-6) == 4);
}

TEST_CASE("battery config") {
  BatteryConfig c(2, 6, 4);
  CHECK(c.window_lo() == 1);
  CHECK(c.window_hi() == 5);
  CHECK(c.in_window(1));
  CHECK_FALSE(c.in_window(0));
  CHECK_THROWS_AS(BatteryConfig(1, 6, 4), DomainError);
  CHECK_THROWS_AS(BatteryConfig(2, 6, 3), DomainError);
  CHECK_THROWS_AS(BatteryConfig(2, 6, 8), DomainError);
  CHECK_THROWS_AS(BatteryConfig(2, 0, 0), DomainError);
  CHECK_NOTHROW(BatteryConfig(2, 13, 11));
}

TEST_CASE("multiplicities against closed forms") {
  for (int u = 2; u <= 5; ++u)
    for (int n = 1; n <= 12; ++n) {
      const int N = n % 2;
      BatteryConfig c(u, n, N);
      mpz_class sum = 0;
      for (int x = 0; x <= n; ++x) {
        const auto m = c.multiplicity(x);
        CHECK(m == mpz_class(std::to_string(oracle::ipow(u, x) * oracle::ipow(u - 1, n - x))));
        sum += m;
      }
      CHECK(sum == c.total_multiplicity());
      CHECK(c.total_multiplicity() == mpz_class(std::to_string(oracle::total_levels(u, n))));
    }
  CHECK(BatteryConfig(2, 6, 0).total_multiplicity() == 127);
  CHECK_THROWS_AS(multiplicity(2, 4, 5), DomainError);
}

TEST_CASE("uniformity cost") {
  // N equal entries of 1/N: shifting by y <= N costs 2y/N
  for (int N = 1; N <= 12; ++N) {
    auto a = BatteryAmplitudes::boxcar(40, 10, N);
    for (int y = 0; y <= N; ++y) CHECK(uniformity_cost(a, y) == doctest::Approx(2.0 * y / N));
    CHECK(uniformity_cost(a, N + 3) == doctest::Approx(2.0));
  }
  auto c = BatteryAmplitudes::canonical(BatteryConfig(2, 13, 11));
  CHECK(c.at(1) == doctest::Approx(1.0 / 12));
  CHECK(c.at(0) == 0.0);
  CHECK(c.at(-4) == 0.0);
  CHECK_THROWS(BatteryAmplitudes({0.5, 0.6}));
}

TEST_CASE("width for error") {
  CHECK(min_width_for_error(0.005) == 10);
  CHECK(min_width_for_error(0.5) == 1);
  for (double eps : {0.3, 0.1, 0.01, 1e-3, 1e-4}) {
    const int N = min_width_for_error(eps);
    CHECK(N >= 1.0 / std::sqrt(2 * eps) - 1e-9);
    CHECK(N - 1 < 1.0 / std::sqrt(2 * eps));
  }
  CHECK_THROWS(min_width_for_error(0.0));
  CHECK_THROWS(min_width_for_error(1.0));
}

TEST_CASE("battery for fidelity") {
  CHECK(fidelity_bound(11, 1) == doctest::Approx(12.0 / 14.0));
  auto b = min_battery_for_fidelity(0.85, 1);
  CHECK(b.N_min == 11);
  CHECK(b.n_min == 13);
  CHECK(b.fidelity >= 0.85);
  CHECK(fidelity_bound(10, 1) < 0.85);
  for (int a = 0; a <= 4; ++a)
    for (double F : {0.5, 0.9, 0.99}) {
      auto s = min_battery_for_fidelity(F, a);
      CHECK(fidelity_bound(s.N_min, a) >= F);
      if (s.N_min > 0) CHECK(fidelity_bound(s.N_min - 1, a) < F);
      CHECK(s.n_min == s.N_min + 2 * a);
    }
}
