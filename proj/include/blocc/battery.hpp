#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace blocc {

/// Energy quantum of a battery of fineness u: log2(u / (u - 1)) bits.
double work_quantum(int u);

/// Greatest integer a with a * work_quantum(u) <= w, with a 1e-12 slack
/// toward inclusion so that exact multiples quantize to themselves.
std::int64_t quantize_work(int u, double w);

/// Battery of n subsystems of fineness u whose uniform superposition spans
/// the N + 1 levels {(n - N)/2, ..., (n + N)/2}.
class BatteryConfig {
 public:
  /// Throws DomainError unless u >= 2, n >= 1, 0 <= N <= n and n - N is even.
  BatteryConfig(int u, int n, int N);

  int u() const { return u_; }
  int n() const { return n_; }
  int N() const { return N_; }
  double delta_w() const { return work_quantum(u_); }
  int window_lo() const { return (n_ - N_) / 2; }
  int window_hi() const { return (n_ + N_) / 2; }
  bool in_window(std::int64_t x) const { return x >= window_lo() && x <= window_hi(); }

  /// Number of basis states z in the support of s_x: u^x (u-1)^(n-x).
  mpz_class multiplicity(int x) const;
  /// Total dimension sum_x multiplicity(x).
  mpz_class total_multiplicity() const;
  /// Dimension covered by the window levels.
  mpz_class window_multiplicity() const;

  friend bool operator==(const BatteryConfig&, const BatteryConfig&) = default;

 private:
  int u_;
  int n_;
  int N_;
};

/// xi_x = u^x (u-1)^(n-x), exact. Throws DomainError for x outside {0,...,n}.
mpz_class multiplicity(int u, int n, int x);

/// Probabilities alpha_x of the battery levels x = 0..n.
class BatteryAmplitudes {
 public:
  explicit BatteryAmplitudes(std::vector<double> alpha);

  /// `count` equal entries 1/count starting at level `first`, on levels 0..n.
  static BatteryAmplitudes boxcar(int n, int first, int count);
  /// The canonical battery state: 1/(N+1) on the window of `cfg`.
  static BatteryAmplitudes canonical(const BatteryConfig& cfg);

  int n() const { return static_cast<int>(alpha_.size()) - 1; }
  /// alpha_x, or 0 for x outside {0,...,n}.
  double at(std::int64_t x) const;
  const std::vector<double>& values() const { return alpha_; }

 private:
  std::vector<double> alpha_;
};

/// sum_x |alpha_x - alpha_{x+y}|, levels outside the battery counted as zero.
double uniformity_cost(const BatteryAmplitudes& alpha, int y);

/// Smallest width N with N >= 1/sqrt(2 epsilon); epsilon must lie in (0, 1).
int min_width_for_error(double epsilon);

/// Overlap lower bound (N + 1) / (N + 1 + 2 a_max) for a finite battery.
double fidelity_bound(int N, int a_max);

struct BatterySize {
  int N_min;
  int n_min;
  double fidelity;
};

/// Smallest N whose fidelity_bound reaches `target_fidelity`, and the
/// matching battery size n = N + 2 a_max.
BatterySize min_battery_for_fidelity(double target_fidelity, int a_max);

}  // namespace blocc
