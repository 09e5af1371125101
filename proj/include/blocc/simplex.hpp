#pragma once

#include <cstddef>
#include <vector>

namespace blocc::lp {

/// Standard-form linear program: minimize c.x subject to A x = b, x >= 0.
/// A is stored row-major.
class Problem {
 public:
  Problem(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& a(std::size_t r, std::size_t c) { return A_[r * cols_ + c]; }
  double a(std::size_t r, std::size_t c) const { return A_[r * cols_ + c]; }
  double& b(std::size_t r) { return b_[r]; }
  double b(std::size_t r) const { return b_[r]; }
  double& c(std::size_t col) { return c_[col]; }
  double c(std::size_t col) const { return c_[col]; }

  /// Appends a column of zeros and returns its index.
  std::size_t add_column();

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> A_;
  std::vector<double> b_;
  std::vector<double> c_;
};

enum class Status { optimal, infeasible, unbounded };

struct Options {
  /// Largest phase-one objective still accepted as feasible.
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-9;
  double cost_tol = 1e-11;
  std::size_t max_pivots = 200000;
};

struct Solution {
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Phase-one optimum: total artificial mass left. Zero iff feasible.
  double infeasibility = 0.0;
  /// For infeasible problems a Farkas vector y with A^T y <= 0 and b.y > 0.
  std::vector<double> farkas;
  std::size_t pivots = 0;
};

/// Two-phase dense-tableau simplex. Dantzig pricing, switching to Bland's rule
/// on degenerate pivots so the method cannot cycle. Redundant equality rows
/// are detected after phase one and left inert.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace blocc::lp
