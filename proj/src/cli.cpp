#include "blocc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "blocc/error.hpp"
#include "blocc/io.hpp"
#include "blocc/lift.hpp"
#include "blocc/protocols.hpp"
#include "blocc/theorems.hpp"

namespace blocc::cli {

namespace {

using io::json;

struct Flags {
  std::string input;
  std::string output;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> count;
  std::optional<int> u, n, N;
  std::string plot_dir;
  bool all = false;
  std::optional<double> fidelity;
  std::optional<int> amax;
  int order = 3;
};

struct Outcome {
  json report;
  bool pass = true;
};

double tol_or(const Flags& f, double fallback) { return f.tol.value_or(fallback); }

json require_input(const Flags& f) {
  if (f.input.empty()) throw ValidationError("--input is required");
  return io::read_file(f.input);
}

TransferMatrix input_matrix(const Flags& f) { return io::transfer_from_json(require_input(f)); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

void emit_work(const Flags& f, const WorkDistribution& w) {
  if (f.plot_dir.empty()) return;
  std::ostringstream ss;
  io::write_work_csv(w, ss);
  write_text(std::filesystem::path(f.plot_dir) / "work_distribution.csv", ss.str());
}

bool all_pass(const std::vector<TheoremReport>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

std::vector<TheoremReport> theorem_suite(const TransferMatrix& t, const Flags& f) {
  std::vector<TheoremReport> rs{second_law_equality(t, tol_or(f, 1e-10)), mean_work_bound(t, tol_or(f, 1e-9)),
                                moment_inequalities(t, f.order, tol_or(f, 1e-9)),
                                third_law_bound(t, tol_or(f, 1e-9))};
  if (t.q().support_dimension() > 0 && t.p().full_support()) {
    bool uniform_q = true;
    const double q0 = t.q().min_support();
    for (std::size_t j = 0; j < t.d_out(); ++j)
      if (t.q().in_support(j) && std::abs(t.q()[j] - q0) > kNormTol) uniform_q = false;
    if (uniform_q) rs.push_back(jarzynski(t, tol_or(f, 1e-10)));
  }
  return rs;
}

Outcome cmd_feasibility(const Flags& f) {
  const json in = require_input(f);
  auto p = io::schmidt_from_json(in.at("p"));
  auto q = io::schmidt_from_json(in.at("q"));
  WorkGrid grid = in.contains("grid") ? io::grid_from_json(in.at("grid")) : canonical_grid(p, q);
  FeasibilityOptions opt;
  if (in.contains("mean_w_target")) opt.mean_w_target = in.at("mean_w_target").get<double>();
  auto r = feasibility_lp(p, q, grid, opt);
  json cert = json::array();
  for (const auto& c : r.certificate) cert.push_back({{"constraint", c.constraint}, {"multiplier", c.multiplier}});
  json out{{"feasible", r.feasible}, {"infeasibility", r.infeasibility}, {"certificate", cert},
           {"witness", r.witness ? io::to_json(*r.witness) : json(nullptr)}};
  if (r.witness) emit_work(f, work_marginal(*r.witness));
  return {out, true};
}

Outcome cmd_canonical(const Flags& f) {
  const json in = require_input(f);
  auto t = canonical_reversible(io::schmidt_from_json(in.at("p")), io::schmidt_from_json(in.at("q")));
  emit_work(f, work_marginal(t));
  return {io::to_json(t), true};
}

Outcome cmd_lift(const Flags& f) {
  if (!f.u || !f.n || !f.N) throw ValidationError("lift needs --u, --n and --N");
  auto t = input_matrix(f);
  auto l = lift(t, BatteryConfig(*f.u, *f.n, *f.N));
  auto c = complete(l);
  auto b = boundary_states(l);
  io::LiftReport rep{};
  emit_work(f, work_marginal(t));
  if (!f.plot_dir.empty() && c.materializable()) {
    std::ostringstream ss;
    write_matrix_csv(c, ss);
    write_text(std::filesystem::path(f.plot_dir) / "completed_matrix.csv", ss.str());
  }
  if (c.materializable()) {
    auto m = verify_materialized(c, b);
    rep = {m.row_max_residual, m.col_max_residual, m.mapping_residual, true};
  } else {
    auto s = aggregate_sums(c);
    rep = {s.row_max_residual, s.col_max_residual, verify_schmidt_mapping(c, b), false};
  }
  const double tol = tol_or(f, 1e-9);
  const bool pass = rep.row_max_residual <= tol && rep.col_max_residual <= tol && rep.mapping_residual <= tol;
  json out = io::to_json(rep);
  const auto ov = product_overlap(b);
  out["overlap"] = ov.exact;
  out["overlap_bound"] = ov.bound;
  out["pass"] = pass;
  return {out, pass};
}

Outcome cmd_verify(const Flags& f) {
  auto t = input_matrix(f);
  auto cond = verify_conditions(t, tol_or(f, 1e-12));
  json out{{"conditions", io::to_json(cond)}};
  bool pass = cond.pass;
  if (f.all) {
    auto rs = theorem_suite(t, f);
    out["theorems"] = io::to_json(rs);
    pass = pass && all_pass(rs);
  }
  out["pass"] = pass;
  emit_work(f, work_marginal(t));
  return {out, pass};
}

Outcome cmd_theorems(const Flags& f) {
  auto t = input_matrix(f);
  auto rs = theorem_suite(t, f);
  emit_work(f, work_marginal(t));
  return {io::to_json(rs), all_pass(rs)};
}

Outcome cmd_jarzynski(const Flags& f) {
  auto r = jarzynski(input_matrix(f), tol_or(f, 1e-10));
  return {io::to_json(r), r.pass};
}

Outcome cmd_thirdlaw(const Flags& f) {
  auto r = third_law_bound(input_matrix(f), tol_or(f, 1e-9));
  return {io::to_json(r), r.pass};
}

Outcome cmd_crooks(const Flags& f) {
  auto t = input_matrix(f);
  auto r = crooks_check(t, static_cast<int>(t.d_out()), static_cast<int>(t.d()), tol_or(f, 1e-10));
  if (!f.plot_dir.empty()) {
    emit_work(f, work_marginal(t));
    std::ostringstream ss;
    io::write_crooks_csv(r, ss);
    write_text(std::filesystem::path(f.plot_dir) / "crooks_ratio.csv", ss.str());
  }
  const bool pass = r.summary.pass && r.jarzynski_consistency.pass;
  return {io::to_json(r), pass};
}

Outcome cmd_concentrate(const Flags& f) {
  auto spec = io::concentration_spec_from_json(require_input(f));
  auto dist = concentration_distribution(spec);
  const double s = entanglement_entropy(SchmidtVector({spec.p, 1.0 - spec.p}));
  const double mean = concentration_mean(spec);
  emit_work(f, dist);
  return {{{"spec", io::to_json(spec)}, {"distribution", io::to_json(dist)}, {"mean", mean},
           {"mean_per_copy", mean / spec.n_copies}, {"entropy", s}},
          true};
}

Outcome cmd_dilute(const Flags& f) {
  const json in = require_input(f);
  auto target = io::schmidt_from_json(in.at("target"));
  if (!in.contains("m") || !in.at("m").is_number_integer()) throw ValidationError("\"m\" must be an integer");
  auto t = dilution_canonical(target, in.at("m").get<int>());
  emit_work(f, work_marginal(t));
  return {{{"transfer", io::to_json(t)}, {"mean_work", mean_work(t)}}, true};
}

Outcome cmd_battery_bound(const Flags& f) {
  if (!f.fidelity || !f.amax) throw ValidationError("battery-bound needs --fidelity and --amax");
  auto b = min_battery_for_fidelity(*f.fidelity, *f.amax);
  return {{{"N_min", b.N_min}, {"n_min", b.n_min}, {"fidelity", b.fidelity}}, true};
}

Outcome cmd_sample(const Flags& f) {
  if (f.count && *f.count <= 0) throw ValidationError("count must be positive");
  if (!f.count) throw ValidationError("--count is required");
  if (!f.seed) throw ValidationError("--seed is required");
  auto t = input_matrix(f);
  auto table = sample_joint(t, *f.count, *f.seed);
  auto [m, se] = table.mean_and_stderr(t.grid(), [](std::size_t, std::size_t, double w) { return w; });
  auto [e, ese] =
      table.mean_and_stderr(t.grid(), [](std::size_t, std::size_t, double w) { return std::exp2(w); });
  std::vector<double> hist(t.grid().size(), 0.0);
  for (const auto& c : table.cells) hist[c.k] += static_cast<double>(c.hits);
  std::vector<WorkPoint> pts;
  for (std::size_t k = 0; k < hist.size(); ++k)
    pts.push_back({t.grid()[k], hist[k] / static_cast<double>(table.count)});
  WorkDistribution emp(std::move(pts), 1e-9);
  emit_work(f, emp);
  return {{{"count", table.count}, {"seed", *f.seed}, {"mean_w", m}, {"mean_w_stderr", se},
           {"exp2_mean", e}, {"exp2_stderr", ese}, {"distribution", io::to_json(emp)}},
          true};
}

std::string one_line_error(const std::string& msg) { return json{{"error", msg}}.dump() + "\n"; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Battery-assisted LOCC fluctuation toolkit"};
  app.require_subcommand(1, 1);
  Flags f;

  auto common = [&f](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", f.input, "input JSON file");
    if (needs_input) in->required();
    sub->add_option("--output", f.output, "write the JSON report here instead of stdout");
    sub->add_option("--tol", f.tol, "tolerance override")->check(CLI::PositiveNumber);
    sub->add_option("--emit-plot-data", f.plot_dir, "directory for CSV plot series");
  };

  struct Command {
    const char* name;
    const char* help;
    Outcome (*fn)(const Flags&);
    bool needs_input;
  };
  const Command commands[] = {
      {"feasibility", "LP feasibility of p -> q on a work grid", cmd_feasibility, true},
      {"canonical", "canonical reversible transfer matrix", cmd_canonical, true},
      {"lift", "battery lift and doubly stochastic completion", cmd_lift, true},
      {"verify", "check the feasibility conditions", cmd_verify, true},
      {"theorems", "fluctuation identities and bounds", cmd_theorems, true},
      {"jarzynski", "Jarzynski equality", cmd_jarzynski, true},
      {"crooks", "Crooks ratio at every grid point", cmd_crooks, true},
      {"thirdlaw", "third-law lower bound", cmd_thirdlaw, true},
      {"concentrate", "concentration yield distribution", cmd_concentrate, true},
      {"dilute", "canonical dilution from m ebits", cmd_dilute, true},
      {"battery-bound", "smallest battery for a target fidelity", cmd_battery_bound, false},
      {"sample", "Monte Carlo sampling of (i, j, w)", cmd_sample, true},
  };

  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    common(sub, c.needs_input && std::string(c.name) != "sample");
    subs.emplace_back(sub, &c);
  }
  auto sub_of = [&](const char* name) { return app.get_subcommand(name); };
  for (const char* name : {"lift"}) {
    sub_of(name)->add_option("--u", f.u, "battery fineness");
    sub_of(name)->add_option("--n", f.n, "battery size");
    sub_of(name)->add_option("--N", f.N, "superposition width");
  }
  sub_of("verify")->add_flag("--all", f.all, "also run the full identity suite");
  sub_of("verify")->add_option("--order", f.order, "odd moment order");
  sub_of("theorems")->add_option("--order", f.order, "odd moment order");
  sub_of("battery-bound")->add_option("--fidelity", f.fidelity, "target fidelity in (0, 1)");
  sub_of("battery-bound")->add_option("--amax", f.amax, "largest work shift a_max");
  sub_of("sample")->add_option("--count", f.count, "number of samples");
  sub_of("sample")->add_option("--seed", f.seed, "RNG seed");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << one_line_error(e.what());
    return kExitInputError;
  }

  const Command* chosen = nullptr;
  for (auto& [sub, cmd] : subs)
    if (sub->parsed()) chosen = cmd;

  try {
    Outcome o = chosen->fn(f);
    const std::string text = o.report.dump(2) + "\n";
    if (f.output.empty())
      out << text;
    else
      write_text(f.output, text);
    return o.pass ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << one_line_error(e.what());
    return kExitInputError;
  }
}

}  // namespace blocc::cli
