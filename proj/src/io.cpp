#include "blocc/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "blocc/error.hpp"

namespace blocc::io {

namespace {

const json& member(const json& j, const char* key) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

long long integer(const json& j, const char* what) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v == static_cast<double>(static_cast<long long>(v))) return static_cast<long long>(v);
  }
  throw ValidationError(std::string(what) + " must be an integer");
}

int small_int(const json& j, const char* what) {
  const long long v = integer(j, what);
  if (v < -1000000000LL || v > 1000000000LL) throw ValidationError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(number(e, what));
  return out;
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

json to_json(const SchmidtVector& v) {
  return json(std::vector<double>(v.coeffs().begin(), v.coeffs().end()));
}

SchmidtVector schmidt_from_json(const json& j) { return SchmidtVector(numbers(j, "coefficients")); }

json to_json(const PureEnsemble& e) {
  json arr = json::array();
  for (const auto& m : e.members()) arr.push_back({{"weight", m.weight}, {"coeffs", to_json(m.vector)}});
  return arr;
}

PureEnsemble ensemble_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("ensemble must be an array");
  std::vector<EnsembleMember> members;
  for (const auto& m : j)
    members.push_back({number(member(m, "weight"), "weight"), schmidt_from_json(member(m, "coeffs"))});
  return PureEnsemble(std::move(members));
}

json to_json(const BatteryConfig& c) { return {{"u", c.u()}, {"n", c.n()}, {"N", c.N()}}; }

BatteryConfig battery_config_from_json(const json& j) {
  try {
    return BatteryConfig(small_int(member(j, "u"), "u"), small_int(member(j, "n"), "n"),
                         small_int(member(j, "N"), "N"));
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

json to_json(const BatteryAmplitudes& a) {
  json obj = json::object();
  for (int x = 0; x <= a.n(); ++x)
    if (a.at(x) != 0.0) obj[std::to_string(x)] = a.at(x);
  return obj;
}

BatteryAmplitudes amplitudes_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("amplitudes must be an object");
  std::vector<std::pair<int, double>> levels;
  int top = 0;
  for (const auto& [key, val] : j.items()) {
    int x = 0;
    try {
      std::size_t used = 0;
      x = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ValidationError("amplitude key \"" + key + "\" is not a level");
    }
    if (x < 0) throw ValidationError("amplitude level must be non-negative");
    levels.emplace_back(x, number(val, "amplitude"));
    top = std::max(top, x);
  }
  std::vector<double> alpha(static_cast<std::size_t>(top) + 1, 0.0);
  for (auto [x, v] : levels) alpha[static_cast<std::size_t>(x)] = v;
  return BatteryAmplitudes(std::move(alpha));
}

json to_json(const WorkGrid& g) { return json(std::vector<double>(g.values().begin(), g.values().end())); }

WorkGrid grid_from_json(const json& j) { return WorkGrid(numbers(j, "grid")); }

json to_json(const TransferMatrix& t) {
  json entries = json::array();
  for (const auto& e : t.entries()) entries.push_back(json::array({e.i, e.k, e.j, e.value}));
  return {{"p", to_json(t.p())}, {"q", to_json(t.q())}, {"grid", to_json(t.grid())}, {"entries", entries}};
}

TransferMatrix transfer_from_json(const json& j) {
  auto p = schmidt_from_json(member(j, "p"));
  auto q = schmidt_from_json(member(j, "q"));
  const auto raw_grid = numbers(member(j, "grid"), "grid");
  WorkGrid grid(raw_grid);
  if (grid.size() != raw_grid.size()) throw ValidationError("grid has repeated values");
  // Entries index the grid as written; map them onto the sorted grid.
  const auto& ej = member(j, "entries");
  if (!ej.is_array()) throw ValidationError("entries must be an array");
  std::vector<TransferEntry> entries;
  for (const auto& row : ej) {
    if (!row.is_array() || row.size() != 4) throw ValidationError("entry must be [i, w_index, j, value]");
    const long long i = integer(row[0], "i");
    const long long k = integer(row[1], "w_index");
    const long long jj = integer(row[2], "j");
    if (i < 0 || k < 0 || jj < 0) throw ValidationError("entry indices must be non-negative");
    if (static_cast<std::size_t>(k) >= raw_grid.size()) throw ValidationError("w_index out of range");
    entries.push_back({static_cast<std::size_t>(i), grid.index_of(raw_grid[static_cast<std::size_t>(k)]),
                       static_cast<std::size_t>(jj), number(row[3], "value")});
  }
  return TransferMatrix(std::move(p), std::move(q), std::move(grid), std::move(entries));
}

json to_json(const TheoremReport& r) {
  return {{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}, {"pass", r.pass},
          {"tolerance", r.tolerance}};
}

json to_json(const std::vector<TheoremReport>& rs) {
  json arr = json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

json to_json(const ConditionReport& r) {
  return {{"c1_residual", r.c1_residual}, {"c2_residual", r.c2_residual},
          {"c3_residual", r.c3_residual}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

json to_json(const CrooksReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"w", p.w}, {"forward_prob", p.forward_prob}, {"reverse_prob", p.reverse_prob},
                   {"ratio", p.ratio}, {"expected", p.expected}, {"residual", p.residual}, {"pass", p.pass}});
  return {{"summary", to_json(r.summary)}, {"jarzynski_consistency", to_json(r.jarzynski_consistency)},
          {"points", pts}};
}

json to_json(const ConcentrationSpec& s) { return {{"n", s.n_copies}, {"p", s.p}}; }

ConcentrationSpec concentration_spec_from_json(const json& j) {
  ConcentrationSpec s{small_int(member(j, "n"), "n"), number(member(j, "p"), "p")};
  validate(s);
  return s;
}

json to_json(const WorkDistribution& w) {
  json arr = json::array();
  for (const auto& pt : w.points()) arr.push_back({{"w", pt.w}, {"prob", pt.prob}});
  return arr;
}

json to_json(const LiftReport& r) {
  return {{"row_max_residual", r.row_max_residual}, {"col_max_residual", r.col_max_residual},
          {"mapping_residual", r.mapping_residual}, {"materialized", r.materialized}};
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_work_csv(const WorkDistribution& w, std::ostream& out) {
  out << "w,prob\n";
  for (const auto& pt : w.points()) out << format_number(pt.w) << ',' << format_number(pt.prob) << '\n';
}

void write_crooks_csv(const CrooksReport& r, std::ostream& out) {
  out << "w,ratio\n";
  for (const auto& p : r.points) out << format_number(p.w) << ',' << format_number(p.ratio) << '\n';
}

}  // namespace blocc::io
