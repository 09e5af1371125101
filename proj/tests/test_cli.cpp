#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blocc/cli.hpp"
#include "blocc/io.hpp"

namespace fs = std::filesystem;
using blocc::io::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = blocc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "blocc_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kPair = R"({"p": [0.5, 0.25, 0.125, 0.125], "q": [0.25, 0.25, 0.25, 0.25]})";

std::string canonical_file() {
  auto r = run({"canonical", "--input", write("pair.json", kPair)});
  REQUIRE(r.code == 0);
  return write("canonical.json", r.out);
}

}  // namespace

TEST_CASE("battery-bound") {
  auto r = run({"battery-bound", "--fidelity", "0.85", "--amax", "1"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["N_min"] == 11);
  CHECK(j["n_min"] == 13);
}

TEST_CASE("theorems on the reference instance") {
  auto r = run({"theorems", "--input", canonical_file()});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j[0]["name"] == "second_law_equality");
  CHECK(std::abs(j[0]["lhs"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("exit codes") {
  auto zero = run({"sample", "--count", "0", "--seed", "1", "--input", canonical_file()});
  CHECK(zero.code == 2);
  CHECK(json::parse(zero.err)["error"] == "count must be positive");
  CHECK(zero.err.find('\n') == zero.err.size() - 1);

  CHECK(run({"sample", "--count", "10", "--input", canonical_file()}).code == 2);
  CHECK(run({"theorems", "--input", write("bad.json", "{not json")}).code == 2);
  CHECK(run({"theorems", "--input", (scratch() / "missing.json").string()}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"lift", "--input", canonical_file(), "--u", "2", "--n", "4", "--N", "4"}).code == 2);
  CHECK(run({"jarzynski", "--input", write("rev.json", R"({"p": [1], "q": [0.5, 0.5], "grid": [-1],
             "entries": [[0, 0, 0, 1], [0, 0, 1, 1]]})")}).code == 0);
  auto pre = run({"jarzynski", "--input", write("nonuni.json", R"({"p": [0.5, 0.5], "q": [1], "grid": [1],
             "entries": [[0, 0, 0, 0.5], [1, 0, 0, 0.5]]})")});
  CHECK(pre.code == 0);

  // a matrix that breaks the second law: verify reports failure with exit 1
  auto broken = write("broken.json", R"({"p": [0.5, 0.5], "q": [0.5, 0.5], "grid": [1],
             "entries": [[0, 0, 0, 1], [1, 0, 1, 1]]})");
  auto v = run({"verify", "--input", broken, "--all"});
  CHECK(v.code == 1);
  CHECK(json::parse(v.out)["pass"] == false);
  CHECK(run({"theorems", "--input", broken}).code == 1);
}

TEST_CASE("output file and plot data") {
  auto dir = scratch() / "plots";
  fs::remove_all(dir);
  auto out = scratch() / "crooks.json";
  auto pair = write("crooks_pair.json", R"({"p": [0.75, 0.25], "q": [0.25, 0.25, 0.25, 0.25]})");
  auto can = run({"canonical", "--input", pair});
  auto r = run({"crooks", "--input", write("crooks_in.json", can.out), "--output", out.string(),
                "--emit-plot-data", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(json::parse(slurp(out))["summary"]["pass"] == true);
  CHECK(slurp(dir / "work_distribution.csv").rfind("w,prob\n", 0) == 0);
  CHECK(slurp(dir / "crooks_ratio.csv").rfind("w,ratio\n", 0) == 0);
}

TEST_CASE("every command is deterministic") {
  const auto can = canonical_file();
  const std::vector<std::vector<std::string>> commands{
      {"feasibility", "--input", write("feas.json", kPair)},
      {"canonical", "--input", write("pair2.json", kPair)},
      {"lift", "--input", can, "--u", "2", "--n", "6", "--N", "4"},
      {"verify", "--input", can, "--all"},
      {"theorems", "--input", can},
      {"jarzynski", "--input", can},
      {"crooks", "--input", can},
      {"thirdlaw", "--input", can},
      {"concentrate", "--input", write("conc.json", R"({"n": 8, "p": 0.3333333333333333})")},
      {"dilute", "--input", write("dil.json", R"({"target": [0.5, 0.3, 0.2], "m": 2})")},
      {"battery-bound", "--fidelity", "0.9", "--amax", "2"},
      {"sample", "--input", can, "--count", "50000", "--seed", "17"},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.err.empty());
    CHECK(a.out == b.out);
    CHECK(json::accept(a.out));
  }
}

TEST_CASE("feasibility reports a certificate") {
  auto r = run({"feasibility", "--input",
                write("infeas.json", R"({"p": [0.5, 0.5], "q": [1.0], "grid": [0.0]})")});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["feasible"] == false);
  CHECK(j["witness"].is_null());
  CHECK_FALSE(j["certificate"].empty());
}

TEST_CASE("lift writes the completed matrix") {
  auto dir = scratch() / "lift_plots";
  fs::remove_all(dir);
  auto r = run({"lift", "--input", canonical_file(), "--u", "2", "--n", "4", "--N", "2", "--emit-plot-data",
                dir.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["materialized"] == true);
  CHECK(j["row_max_residual"].get<double>() < 1e-12);
  const auto csv = slurp(dir / "completed_matrix.csv");
  CHECK(csv.rfind("label,\"(0,0,0)\"", 0) == 0);
  // header plus one line per row: 4 * (2^5 - 1)
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 124);
  CHECK(run({"lift", "--input", canonical_file(), "--u", "2", "--n", "4", "--N", "4"}).code == 2);
}
