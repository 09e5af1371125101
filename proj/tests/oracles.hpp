#pragma once

// Reference values computed without the library: plain loops, long double
// accumulation, Pascal's triangle.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline long double entropy(const std::vector<double>& p) {
  long double s = 0;
  for (double x : p)
    if (x > 0) s -= static_cast<long double>(x) * std::log2(static_cast<long double>(x));
  return s;
}

// Row n of Pascal's triangle.
inline std::vector<std::uint64_t> pascal_row(int n) {
  std::vector<std::uint64_t> row{1};
  for (int k = 1; k <= n; ++k) {
    std::vector<std::uint64_t> next(row.size() + 1, 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] += row[i];
      next[i + 1] += row[i];
    }
    row = std::move(next);
  }
  return row;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// sum_x u^x (u-1)^(n-x) = u^(n+1) - (u-1)^(n+1).
inline std::uint64_t total_levels(int u, int n) { return ipow(u, n + 1) - ipow(u - 1, n + 1); }

// Canonical matrix P(i, w_ij | j) = p_i, as a flat list (i, j, w, value).
struct Cell {
  int i, j;
  double w, value;
};
inline std::vector<Cell> canonical_cells(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<Cell> out;
  for (int j = 0; j < static_cast<int>(q.size()); ++j)
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
      out.push_back({i, j, std::log2(q[j]) - std::log2(p[i]), p[i]});
  return out;
}

inline long double canonical_exp2_mean(const std::vector<double>& p, const std::vector<double>& q) {
  long double s = 0;
  for (const auto& c : canonical_cells(p, q))
    s += static_cast<long double>(c.value) * q[c.j] * std::exp2(static_cast<long double>(c.w));
  return s;
}

// Strictly positive probability vector of length d.
inline std::vector<double> random_prob(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> U(0.05, 1.0);
  std::vector<double> v(d);
  double s = 0;
  for (auto& x : v) s += (x = U(rng));
  for (auto& x : v) x /= s;
  double t = 0;
  for (int k = 0; k + 1 < d; ++k) t += v[k];
  v[d - 1] = 1.0 - t;
  return v;
}

}  // namespace oracle
