#include "blocc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blocc/error.hpp"

namespace blocc::lp {

Problem::Problem(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), A_(rows * cols, 0.0), b_(rows, 0.0), c_(cols, 0.0) {}

std::size_t Problem::add_column() {
  std::vector<double> grown(rows_ * (cols_ + 1), 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    std::copy_n(A_.begin() + static_cast<std::ptrdiff_t>(r * cols_), cols_,
                grown.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)));
  A_ = std::move(grown);
  c_.push_back(0.0);
  return cols_++;
}

namespace {

// Tableau rows 0..m-1 are constraints, row m holds reduced costs. The last
// column is the right-hand side; the cost row's rhs stores minus the objective.
// The sign-adjusted original data is kept so the tableau can be rebuilt from
// the current basis, which stops round-off from accumulating across pivots.
class Tableau {
 public:
  Tableau(const Problem& p, std::vector<double>& sign)
      : m_(p.rows()), n_(p.cols()), width_(n_ + m_ + 1), t_((m_ + 1) * width_, 0.0),
        basis_(m_) {
    sign.assign(m_, 1.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (p.b(r) < 0.0) sign[r] = -1.0;
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = sign[r] * p.a(r, j);
      at(r, n_ + r) = 1.0;
      rhs(r) = sign[r] * p.b(r);
      basis_[r] = n_ + r;
    }
    orig_.assign(t_.begin(), t_.begin() + static_cast<std::ptrdiff_t>(m_ * width_));
  }

  double& at(std::size_t r, std::size_t j) { return t_[r * width_ + j]; }
  double at(std::size_t r, std::size_t j) const { return t_[r * width_ + j]; }
  double& rhs(std::size_t r) { return t_[r * width_ + width_ - 1]; }
  double rhs(std::size_t r) const { return t_[r * width_ + width_ - 1]; }
  double& cost(std::size_t j) { return at(m_, j); }
  double& cost_rhs() { return rhs(m_); }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t basic(std::size_t r) const { return basis_[r]; }
  bool is_artificial(std::size_t j) const { return j >= n_ && j < n_ + m_; }

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / at(r, s);
    double* prow = &t_[r * width_];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[s] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * width_];
      const double f = row[s];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[s] = 0.0;
    }
    basis_[r] = s;
  }

  // Sets the reduced-cost row for per-column costs `c` over all columns.
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j + 1 < width_; ++j) cost(j) = c[j];
    cost_rhs() = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(m_, j) -= cb * at(r, j);
    }
    for (std::size_t r = 0; r < m_; ++r) cost(basis_[r]) = 0.0;
  }

  // Rebuilds the constraint rows as B^-1 [A I b] by Gaussian elimination with
  // partial pivoting, then reprices. Leaves the tableau alone if B is
  // numerically singular.
  void reinvert(const std::vector<double>& c) {
    const std::size_t w = width_;
    std::vector<double> B(m_ * m_);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t k = 0; k < m_; ++k) B[r * m_ + k] = orig_[r * w + basis_[k]];
    std::vector<double> X = orig_;
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < m_; ++r)
        if (std::abs(B[r * m_ + k]) > std::abs(B[piv * m_ + k])) piv = r;
      if (std::abs(B[piv * m_ + k]) < 1e-13) return;
      if (piv != k) {
        std::swap_ranges(B.begin() + static_cast<std::ptrdiff_t>(k * m_),
                         B.begin() + static_cast<std::ptrdiff_t>((k + 1) * m_),
                         B.begin() + static_cast<std::ptrdiff_t>(piv * m_));
        std::swap_ranges(X.begin() + static_cast<std::ptrdiff_t>(k * w),
                         X.begin() + static_cast<std::ptrdiff_t>((k + 1) * w),
                         X.begin() + static_cast<std::ptrdiff_t>(piv * w));
      }
      for (std::size_t r = k + 1; r < m_; ++r) {
        const double f = B[r * m_ + k] / B[k * m_ + k];
        if (f == 0.0) continue;
        for (std::size_t j = k; j < m_; ++j) B[r * m_ + j] -= f * B[k * m_ + j];
        for (std::size_t j = 0; j < w; ++j) X[r * w + j] -= f * X[k * w + j];
      }
    }
    for (std::size_t k = m_; k-- > 0;) {
      for (std::size_t r = k + 1; r < m_; ++r) {
        const double f = B[k * m_ + r];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < w; ++j) X[k * w + j] -= f * X[r * w + j];
      }
      const double inv = 1.0 / B[k * m_ + k];
      for (std::size_t j = 0; j < w; ++j) X[k * w + j] *= inv;
    }
    std::copy(X.begin(), X.end(), t_.begin());
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t q = 0; q < m_; ++q) at(q, basis_[r]) = q == r ? 1.0 : 0.0;
    price(c);
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> t_;
  std::vector<double> orig_;
  std::vector<std::size_t> basis_;
};

constexpr std::size_t kReinvertEvery = 32;

enum class Outcome { optimal, unbounded };

Outcome iterate(Tableau& t, const std::vector<double>& costs, const Options& opt,
                bool allow_artificial, std::size_t& pivots) {
  const std::size_t ncols = t.n() + t.m();
  bool bland = false;
  std::size_t since_reinvert = 0;
  bool fresh = false;
  while (true) {
    if (pivots >= opt.max_pivots) throw std::runtime_error("simplex pivot limit exceeded");
    std::size_t enter = ncols;
    double best = -opt.cost_tol;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!allow_artificial && t.is_artificial(j)) continue;
      const double r = t.cost(j);
      if (bland) {
        if (r < -opt.cost_tol) {
          enter = j;
          break;
        }
      } else if (r < best) {
        best = r;
        enter = j;
      }
    }
    if (enter == ncols) {
      // Confirm optimality on a freshly rebuilt tableau.
      if (fresh) return Outcome::optimal;
      t.reinvert(costs);
      fresh = true;
      since_reinvert = 0;
      continue;
    }

    std::size_t leave = t.m();
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.m(); ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.pivot_tol) continue;
      const double q = std::max(t.rhs(r), 0.0) / a;
      if (leave == t.m()) {
        ratio = q;
        leave = r;
        continue;
      }
      const bool tie = std::abs(q - ratio) <= 1e-12 * std::max(1.0, ratio);
      if (q < ratio && !tie) {
        ratio = q;
        leave = r;
      } else if (tie) {
        // Bland needs the smallest basic index; otherwise prefer the larger pivot.
        const bool better = bland ? t.basic(r) < t.basic(leave) : a > t.at(leave, enter);
        if (better) leave = r;
      }
    }
    if (leave == t.m()) return Outcome::unbounded;
    bland = ratio <= opt.pivot_tol;
    t.pivot(leave, enter);
    ++pivots;
    fresh = false;
    if (++since_reinvert == kReinvertEvery) {
      t.reinvert(costs);
      since_reinvert = 0;
    }
  }
}

}  // namespace

Solution solve(const Problem& problem, const Options& opt) {
  Solution sol;
  std::vector<double> sign;
  Tableau t(problem, sign);
  const std::size_t m = t.m();
  const std::size_t n = t.n();

  std::vector<double> phase1(n + m, 0.0);
  std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
  t.price(phase1);
  iterate(t, phase1, opt, true, sol.pivots);
  sol.infeasibility = -t.cost_rhs();

  if (sol.infeasibility > opt.feasibility_tol) {
    sol.status = Status::infeasible;
    sol.farkas.resize(m);
    for (std::size_t r = 0; r < m; ++r) sol.farkas[r] = sign[r] * (1.0 - t.cost(n + r));
    return sol;
  }

  // Drive artificials out of the basis; rows where that is impossible are redundant.
  for (std::size_t r = 0; r < m; ++r) {
    if (!t.is_artificial(t.basic(r))) continue;
    std::size_t best = n;
    double mag = 1e-9;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.at(r, j)) > mag) {
        mag = std::abs(t.at(r, j));
        best = j;
      }
    }
    if (best < n) {
      t.pivot(r, best);
      ++sol.pivots;
    }
  }

  std::vector<double> phase2(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = problem.c(j);
  t.reinvert(phase2);
  if (iterate(t, phase2, opt, false, sol.pivots) == Outcome::unbounded) {
    sol.status = Status::unbounded;
    return sol;
  }

  sol.status = Status::optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (t.basic(r) < n) sol.x[t.basic(r)] = std::max(t.rhs(r), 0.0);
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += problem.c(j) * sol.x[j];
  sol.objective = obj;
  return sol;
}

}  // namespace blocc::lp
