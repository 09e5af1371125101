#include "blocc/lift.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>

#include "blocc/error.hpp"
#include "blocc/summation.hpp"

namespace blocc {

namespace {

std::atomic<std::uint64_t> next_lift_id{1};

std::vector<mpz_class> multiplicities(const BatteryConfig& cfg) {
  std::vector<mpz_class> xi;
  for (int x = 0; x <= cfg.n(); ++x) xi.push_back(cfg.multiplicity(x));
  return xi;
}

std::vector<double> multiplicities_d(const BatteryConfig& cfg) {
  std::vector<double> xi;
  for (int x = 0; x <= cfg.n(); ++x) xi.push_back(cfg.multiplicity(x).get_d());
  return xi;
}

std::size_t support_columns(const LiftedTransfer& l) {
  std::size_t s = 0;
  for (std::size_t j = 0; j < l.dim(); ++j)
    if (l.support_column(j)) ++s;
  return s;
}

}  // namespace

// ---------------------------------------------------------------- lifting

LiftedTransfer::LiftedTransfer(TransferMatrix base, BatteryConfig cfg)
    : base_(std::move(base)), cfg_(cfg) {}

double LiftedTransfer::value(std::size_t i, std::int64_t x, std::size_t j,
                             std::int64_t xp) const {
  const std::int64_t a = xp - x;
  for (const auto& b : blocks_)
    if (b.shift == a) return b.weight[i * dim_ + j];
  return 0.0;
}

double LiftedTransfer::shifted_mass(std::size_t i, const Block& b) const {
  CompensatedSum s;
  for (std::size_t j = 0; j < base_.d_out(); ++j) s += b.weight[i * dim_ + j] * base_.q()[j];
  return s.value();
}

LiftedTransfer lift(const TransferMatrix& t, const BatteryConfig& cfg) {
  if (!verify_conditions(t, kStructuralTol).pass)
    throw ValidationError("transfer matrix does not satisfy the feasibility conditions");
  LiftedTransfer l(t, cfg);
  l.dim_ = std::max(t.d(), t.d_out());
  for (double w : t.grid().values()) l.grid_shift_.push_back(quantize_work(cfg.u(), w));
  for (std::size_t k : t.active_grid_indices())
    l.a_max_ = std::max(l.a_max_, std::abs(l.grid_shift_[k]));

  if (cfg.window_lo() - l.a_max_ < 0 || cfg.window_hi() + l.a_max_ > cfg.n())
    throw BatteryTooSmall("battery too small: the window shifted by a_max = " +
                          std::to_string(l.a_max_) + " leaves {0,...," +
                          std::to_string(cfg.n()) + "}; need N <= n - 2 a_max");

  std::map<std::int64_t, std::vector<double>> blocks;
  for (const auto& e : t.entries()) {
    auto& w = blocks[l.grid_shift_[e.k]];
    if (w.empty()) w.assign(l.dim_ * l.dim_, 0.0);
    w[e.i * l.dim_ + e.j] += e.value;
  }
  for (auto& [shift, weight] : blocks) l.blocks_.push_back({shift, std::move(weight)});
  l.id_ = next_lift_id.fetch_add(1);
  return l;
}

LiftInvariants lift_invariants(const LiftedTransfer& l) {
  const auto& cfg = l.config();
  const std::size_t D = l.dim();
  LiftInvariants inv{0.0, 0.0};
  for (std::size_t j = 0; j < D; ++j) {
    if (!l.support_column(j)) continue;
    for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp) {
      CompensatedSum s;
      for (const auto& b : l.blocks()) {
        const std::int64_t x = xp - b.shift;
        if (x < 0 || x > cfg.n()) continue;
        for (std::size_t i = 0; i < D; ++i) s += b.weight[i * D + j];
      }
      inv.column_residual = std::max(inv.column_residual, std::abs(s.value() - 1.0));
    }
  }
  const double ratio = static_cast<double>(cfg.u()) / (cfg.u() - 1.0);
  for (std::size_t i = 0; i < D; ++i) {
    CompensatedSum s;
    for (const auto& b : l.blocks())
      for (std::size_t j = 0; j < D; ++j)
        s += b.weight[i * D + j] * std::pow(ratio, static_cast<double>(b.shift));
    inv.gibbs_max = std::max(inv.gibbs_max, s.value());
  }
  return inv;
}

// ------------------------------------------------------------- completion

CompletedBistochastic::CompletedBistochastic(LiftedTransfer lifted)
    : lifted_(std::move(lifted)) {
  const auto& cfg = lifted_.config();
  const std::size_t D = lifted_.dim();
  m_total_ = cfg.total_multiplicity();
  k_fill_ = mpz_class(static_cast<unsigned long>(D)) * m_total_ -
            mpz_class(static_cast<unsigned long>(support_columns(lifted_))) *
                cfg.window_multiplicity();

  const double ratio = static_cast<double>(cfg.u()) / (cfg.u() - 1.0);
  r_.assign(D * levels(), 0.0);
  for (std::size_t i = 0; i < D; ++i) {
    for (int x = 0; x <= cfg.n(); ++x) {
      CompensatedSum s;
      for (std::size_t j = 0; j < D; ++j) {
        if (!lifted_.support_column(j)) continue;
        for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp) {
          const double v = lifted_.value(i, x, j, xp);
          if (v != 0.0) s += v * std::pow(ratio, static_cast<double>(xp - x));
        }
      }
      r_[i * levels() + x] = s.value();
    }
  }
}

double CompletedBistochastic::fill(std::size_t i, int x) const {
  if (k_fill_ == 0) return 0.0;
  return (1.0 - window_mass(i, x)) / k_fill_.get_d() + fill_offset_;
}

double CompletedBistochastic::support_entry(std::size_t i, int x, std::size_t j,
                                            int xp) const {
  const double v = lifted_.value(i, x, j, xp);
  if (v == 0.0) return 0.0;
  return v / lifted_.config().multiplicity(x).get_d() + support_offset_;
}

bool CompletedBistochastic::is_support_column(std::size_t j, int xp) const {
  return lifted_.support_column(j) && lifted_.config().in_window(xp);
}

mpz_class CompletedBistochastic::side() const {
  return mpz_class(static_cast<unsigned long>(lifted_.dim())) * m_total_;
}

bool CompletedBistochastic::materializable() const { return side() <= kMaterializeLimit; }

CompletedBistochastic CompletedBistochastic::perturbed(double fill_offset,
                                                       double support_offset) const {
  CompletedBistochastic c = *this;
  c.fill_offset_ += fill_offset;
  c.support_offset_ += support_offset;
  return c;
}

CompletedBistochastic complete(const LiftedTransfer& l) { return CompletedBistochastic(l); }

// -------------------------------------------------------- aggregate sums

ExactAggregate aggregate_sums_exact(const CompletedBistochastic& c) {
  const auto& l = c.lifted();
  const auto& cfg = l.config();
  const std::size_t D = l.dim();
  const auto xi = multiplicities(cfg);
  const mpz_class& K = c.fill_columns();
  const mpq_class fill_off(c.fill_offset());
  const mpq_class supp_off(c.support_offset());

  auto entry = [&](std::size_t i, int x, std::size_t j, int xp) {
    const double v = l.value(i, x, j, xp);
    if (v == 0.0) return mpq_class(0);
    mpq_class e = mpq_class(v) / mpq_class(xi[x]);
    e += supp_off;
    return e;
  };

  ExactAggregate out{0, 0, 0};
  bool first_excess = true;
  std::vector<mpq_class> fill(D * (cfg.n() + 1));
  for (std::size_t i = 0; i < D; ++i) {
    for (int x = 0; x <= cfg.n(); ++x) {
      mpq_class r = 0;        // unperturbed window mass
      mpq_class row = 0;      // perturbed support-column contribution
      for (std::size_t j = 0; j < D; ++j) {
        if (!l.support_column(j)) continue;
        for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp) {
          const double v = l.value(i, x, j, xp);
          if (v == 0.0) continue;
          r += mpq_class(v) * mpq_class(xi[xp]) / mpq_class(xi[x]);
          row += entry(i, x, j, xp) * mpq_class(xi[xp]);
        }
      }
      mpq_class f = 0;
      if (K != 0) f = (1 - r) / mpq_class(K) + fill_off;
      fill[i * (cfg.n() + 1) + x] = f;
      row += f * mpq_class(K);
      const mpq_class dev = abs(row - 1);
      if (dev > out.row_max_deviation) out.row_max_deviation = dev;
      const mpq_class excess = r - 1;
      if (first_excess || excess > out.max_window_excess) out.max_window_excess = excess;
      first_excess = false;
    }
  }
  for (std::size_t j = 0; j < D; ++j) {
    if (!l.support_column(j)) continue;
    for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp) {
      mpq_class col = 0;
      for (std::size_t i = 0; i < D; ++i)
        for (int x = 0; x <= cfg.n(); ++x) col += entry(i, x, j, xp) * mpq_class(xi[x]);
      const mpq_class dev = abs(col - 1);
      if (dev > out.col_max_deviation) out.col_max_deviation = dev;
    }
  }
  if (K != 0) {
    mpq_class col = 0;
    for (std::size_t i = 0; i < D; ++i)
      for (int x = 0; x <= cfg.n(); ++x) col += fill[i * (cfg.n() + 1) + x] * mpq_class(xi[x]);
    const mpq_class dev = abs(col - 1);
    if (dev > out.col_max_deviation) out.col_max_deviation = dev;
  }
  return out;
}

AggregateSums aggregate_sums(const CompletedBistochastic& c) {
  const auto& l = c.lifted();
  const auto& cfg = l.config();
  const std::size_t D = l.dim();
  const auto xi = multiplicities_d(cfg);
  const double K = c.fill_columns().get_d();
  AggregateSums out{0.0, 0.0};
  CompensatedSum fill_col;
  for (std::size_t i = 0; i < D; ++i) {
    for (int x = 0; x <= cfg.n(); ++x) {
      CompensatedSum row;
      for (std::size_t j = 0; j < D; ++j) {
        if (!l.support_column(j)) continue;
        for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp)
          row += c.support_entry(i, x, j, xp) * xi[xp];
      }
      row += c.fill(i, x) * K;
      fill_col += c.fill(i, x) * xi[x];
      out.row_max_residual = std::max(out.row_max_residual, std::abs(row.value() - 1.0));
    }
  }
  for (std::size_t j = 0; j < D; ++j) {
    if (!l.support_column(j)) continue;
    for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp) {
      CompensatedSum col;
      for (std::size_t i = 0; i < D; ++i)
        for (int x = 0; x <= cfg.n(); ++x) col += c.support_entry(i, x, j, xp) * xi[x];
      out.col_max_residual = std::max(out.col_max_residual, std::abs(col.value() - 1.0));
    }
  }
  if (K > 0)
    out.col_max_residual = std::max(out.col_max_residual, std::abs(fill_col.value() - 1.0));
  return out;
}

// -------------------------------------------------------- boundary states

BoundaryStates boundary_states(const LiftedTransfer& l) {
  const auto& cfg = l.config();
  const std::size_t D = l.dim();
  const std::size_t L = static_cast<std::size_t>(cfg.n()) + 1;
  const double width = cfg.N() + 1.0;
  BoundaryStates b{l.id(), cfg, D, std::vector<double>(D, 0.0), std::vector<double>(D * L, 0.0),
                   std::vector<double>(D * L, 0.0)};
  const auto& base = l.base();
  for (std::size_t i = 0; i < base.d(); ++i) b.p[i] = base.p()[i];
  for (std::size_t i = 0; i < D; ++i) {
    for (const auto& blk : l.blocks()) {
      const double mass = l.shifted_mass(i, blk) / width;
      if (mass == 0.0) continue;
      for (int x = 0; x <= cfg.n(); ++x)
        if (cfg.in_window(x + blk.shift)) b.psi[i * L + x] += mass;
    }
  }
  for (std::size_t j = 0; j < base.d_out(); ++j)
    for (int x = cfg.window_lo(); x <= cfg.window_hi(); ++x)
      b.phi[j * L + x] = base.q()[j] / width;
  return b;
}

double verify_schmidt_mapping(const CompletedBistochastic& c, const BoundaryStates& b) {
  const auto& l = c.lifted();
  if (b.lift_id != l.id() || !(b.cfg == l.config()) || b.dim != l.dim())
    throw ValidationError("completed matrix and boundary states come from different lifts");
  const auto& cfg = l.config();
  const auto xi = multiplicities_d(cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < l.dim(); ++i) {
    for (int x = 0; x <= cfg.n(); ++x) {
      CompensatedSum image;
      for (std::size_t j = 0; j < l.dim(); ++j) {
        if (!l.support_column(j)) continue;
        for (int xp = cfg.window_lo(); xp <= cfg.window_hi(); ++xp)
          image += c.support_entry(i, x, j, xp) * b.phi_at(j, xp);  // xi[xp] states, each phi/xi
      }
      worst = std::max(worst, std::abs(image.value() - b.psi_at(i, x) / xi[x]));
    }
  }
  return worst;
}

// ---------------------------------------------------------- materialized

namespace {

// Per-(s, x) block values of the completed matrix plus the index layout.
struct DenseLayout {
  std::size_t D;
  std::size_t L;
  std::vector<std::uint64_t> offset;  // offset[x] within one system index
  std::uint64_t per_system;
  std::vector<double> block;  // (i*L + x) * (D*L) + (j*L + xp)

  explicit DenseLayout(const CompletedBistochastic& c)
      : D(c.lifted().dim()), L(static_cast<std::size_t>(c.lifted().config().n()) + 1) {
    const auto& cfg = c.lifted().config();
    per_system = 0;
    for (int x = 0; x <= cfg.n(); ++x) {
      offset.push_back(per_system);
      per_system += cfg.multiplicity(x).get_ui();
    }
    block.assign(D * L * D * L, 0.0);
    for (std::size_t i = 0; i < D; ++i)
      for (int x = 0; x <= cfg.n(); ++x)
        for (std::size_t j = 0; j < D; ++j)
          for (int xp = 0; xp <= cfg.n(); ++xp)
            block[(i * L + x) * D * L + j * L + xp] =
                c.is_support_column(j, xp) ? c.support_entry(i, x, j, xp) : c.fill(i, x);
  }

  std::uint64_t side() const { return D * per_system; }

  // Decomposes a flat index into (system index, battery level).
  std::pair<std::size_t, std::size_t> decode(std::uint64_t idx) const {
    const std::size_t s = idx / per_system;
    const std::uint64_t rem = idx % per_system;
    const auto it = std::upper_bound(offset.begin(), offset.end(), rem);
    return {s, static_cast<std::size_t>(it - offset.begin()) - 1};
  }
};

void require_materializable(const CompletedBistochastic& c) {
  if (!c.materializable())
    throw DomainError("completed matrix side " + c.side().get_str() +
                      " exceeds the materialization limit " + std::to_string(kMaterializeLimit));
}

}  // namespace

MaterializedReport verify_materialized(const CompletedBistochastic& c, const BoundaryStates& b) {
  require_materializable(c);
  if (b.lift_id != c.lifted().id())
    throw ValidationError("completed matrix and boundary states come from different lifts");
  const DenseLayout lay(c);
  const auto xi = multiplicities_d(c.lifted().config());
  const std::uint64_t n = lay.side();

  std::vector<std::pair<std::size_t, std::size_t>> label(n);
  std::vector<double> phi_coef(n), psi_coef(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    label[k] = lay.decode(k);
    const auto [s, x] = label[k];
    phi_coef[k] = b.phi_at(s, static_cast<int>(x)) / xi[x];
    psi_coef[k] = b.psi_at(s, static_cast<int>(x)) / xi[x];
  }

  MaterializedReport rep{n, 0.0, 0.0, 0.0, 0.0};
  std::vector<CompensatedSum> col(n);
  bool first = true;
  for (std::uint64_t r = 0; r < n; ++r) {
    const auto [i, x] = label[r];
    const double* brow = &lay.block[(i * lay.L + x) * lay.D * lay.L];
    CompensatedSum row, image;
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto [j, xp] = label[k];
      const double v = brow[j * lay.L + xp];
      row += v;
      col[k] += v;
      image += v * phi_coef[k];
      if (first || v < rep.min_entry) rep.min_entry = v;
      first = false;
    }
    rep.row_max_residual = std::max(rep.row_max_residual, std::abs(row.value() - 1.0));
    rep.mapping_residual = std::max(rep.mapping_residual, std::abs(image.value() - psi_coef[r]));
  }
  for (const auto& cs : col)
    rep.col_max_residual = std::max(rep.col_max_residual, std::abs(cs.value() - 1.0));
  return rep;
}

void write_matrix_csv(const CompletedBistochastic& c, std::ostream& out) {
  require_materializable(c);
  const DenseLayout lay(c);
  const std::uint64_t n = lay.side();
  std::vector<std::string> labels(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto [s, x] = lay.decode(k);
    const std::uint64_t z = k % lay.per_system - lay.offset[x];
    labels[k] = "\"(" + std::to_string(s) + "," + std::to_string(x) + "," + std::to_string(z) + ")\"";
  }
  out << "label";
  for (const auto& lb : labels) out << ',' << lb;
  out << '\n';
  char buf[32];
  for (std::uint64_t r = 0; r < n; ++r) {
    const auto [i, x] = lay.decode(r);
    const double* brow = &lay.block[(i * lay.L + x) * lay.D * lay.L];
    out << labels[r];
    for (std::uint64_t k = 0; k < n; ++k) {
      const auto [j, xp] = lay.decode(k);
      std::snprintf(buf, sizeof buf, "%.17g", brow[j * lay.L + xp]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

// --------------------------------------------------------------- overlap

OverlapReport product_overlap(const BoundaryStates& b) {
  const double levels = b.cfg.n() + 1.0;
  CompensatedSum s;
  for (std::size_t i = 0; i < b.dim; ++i)
    for (int x = 0; x <= b.cfg.n(); ++x) s += std::sqrt(b.p[i] / levels * b.psi_at(i, x));
  return {s.value(), (b.cfg.N() + 1.0) / levels};
}

}  // namespace blocc
