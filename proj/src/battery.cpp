#include "blocc/battery.hpp"

#include <cmath>
#include <string>

#include "blocc/error.hpp"
#include "blocc/schmidt.hpp"
#include "blocc/summation.hpp"

namespace blocc {

namespace {
constexpr double kQuantizeSlack = 1e-12;
}

double work_quantum(int u) {
  if (u < 2) throw DomainError("battery fineness u must be at least 2");
  CompensatedSum s;
  s += std::log2(static_cast<double>(u));
  s += -std::log2(static_cast<double>(u - 1));
  return s.value();
}

std::int64_t quantize_work(int u, double w) {
  if (!std::isfinite(w)) throw DomainError("work value must be finite");
  const double dw = work_quantum(u);
  auto a = static_cast<std::int64_t>(std::floor(w / dw));
  while (static_cast<double>(a + 1) * dw <= w + kQuantizeSlack) ++a;
  while (static_cast<double>(a) * dw > w + kQuantizeSlack) --a;
  return a;
}

mpz_class multiplicity(int u, int n, int x) {
  if (u < 2) throw DomainError("battery fineness u must be at least 2");
  if (x < 0 || x > n)
    throw DomainError("battery level " + std::to_string(x) + " outside {0,...," +
                      std::to_string(n) + "}");
  mpz_class a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(u), static_cast<unsigned long>(x));
  mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(u - 1),
                static_cast<unsigned long>(n - x));
  return a * b;
}

BatteryConfig::BatteryConfig(int u, int n, int N) : u_(u), n_(n), N_(N) {
  if (u < 2) throw DomainError("battery fineness u must be at least 2");
  if (n < 1) throw DomainError("battery size n must be at least 1");
  if (N < 0 || N > n) throw DomainError("superposition width N must lie in {0,...,n}");
  if ((n - N) % 2 != 0)
    throw DomainError("n - N must be even so the battery window has integer end points");
}

mpz_class BatteryConfig::multiplicity(int x) const { return blocc::multiplicity(u_, n_, x); }

mpz_class BatteryConfig::total_multiplicity() const {
  mpz_class t = 0;
  for (int x = 0; x <= n_; ++x) t += multiplicity(x);
  return t;
}

mpz_class BatteryConfig::window_multiplicity() const {
  mpz_class t = 0;
  for (int x = window_lo(); x <= window_hi(); ++x) t += multiplicity(x);
  return t;
}

BatteryAmplitudes::BatteryAmplitudes(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw ValidationError("battery amplitudes must be non-empty");
  for (double a : alpha_)
    if (!std::isfinite(a) || a < 0.0)
      throw ValidationError("battery amplitude is negative or not finite");
  if (std::abs(compensated_sum(alpha_) - 1.0) > kNormTol)
    throw ValidationError("battery amplitudes do not sum to 1");
}

BatteryAmplitudes BatteryAmplitudes::boxcar(int n, int first, int count) {
  if (n < 0 || count < 1 || first < 0 || first + count - 1 > n)
    throw DomainError("boxcar does not fit in battery levels {0,...,n}");
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  for (int x = first; x < first + count; ++x) a[x] = 1.0 / count;
  return BatteryAmplitudes(std::move(a));
}

BatteryAmplitudes BatteryAmplitudes::canonical(const BatteryConfig& cfg) {
  return boxcar(cfg.n(), cfg.window_lo(), cfg.N() + 1);
}

double BatteryAmplitudes::at(std::int64_t x) const {
  if (x < 0 || x >= static_cast<std::int64_t>(alpha_.size())) return 0.0;
  return alpha_[static_cast<std::size_t>(x)];
}

double uniformity_cost(const BatteryAmplitudes& alpha, int y) {
  if (y < 0) throw DomainError("shift y must be non-negative");
  CompensatedSum s;
  // Levels x < 0 with x + y in range contribute alpha_{x+y}.
  for (std::int64_t x = -static_cast<std::int64_t>(y); x <= alpha.n(); ++x)
    s += std::abs(alpha.at(x) - alpha.at(x + y));
  return s.value();
}

int min_width_for_error(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  const double w = 1.0 / std::sqrt(2.0 * epsilon);
  return static_cast<int>(std::ceil(w - 1e-9));
}

double fidelity_bound(int N, int a_max) {
  if (N < 0 || a_max < 0) throw DomainError("N and a_max must be non-negative");
  return (N + 1.0) / (N + 1.0 + 2.0 * a_max);
}

BatterySize min_battery_for_fidelity(double target_fidelity, int a_max) {
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0))
    throw DomainError("target fidelity must lie in (0, 1]");
  if (a_max < 0) throw DomainError("a_max must be non-negative");
  if (a_max == 0) return {0, 0, 1.0};
  if (target_fidelity >= 1.0) throw DomainError("fidelity 1 needs an infinite battery");
  // (N+1)(1-F) >= 2 a F, solved in closed form and then confirmed by the bound itself.
  int N = static_cast<int>(std::ceil(2.0 * a_max * target_fidelity / (1.0 - target_fidelity))) - 1;
  N = std::max(N - 2, 0);
  while (fidelity_bound(N, a_max) < target_fidelity - kNormTol) ++N;
  return {N, N + 2 * a_max, fidelity_bound(N, a_max)};
}

}  // namespace blocc
