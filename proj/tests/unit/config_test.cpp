#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "starkwg/config.hpp"
#include "starkwg/errors.hpp"
#include "starkwg/records.hpp"

using namespace starkwg;
namespace fs = std::filesystem;

namespace {
std::string error_message(const std::string& text,
                          const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir() {
  const fs::path p =
      fs::temp_directory_path() / ("starkwg_cfg_" + std::to_string(getpid()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}
}  // namespace

TEST_CASE("config: empty object gives the documented defaults") {
  const RunConfig cfg = parse_config("{}");
  CHECK(cfg.d == 1.0);
  CHECK(cfg.profile_kind == "bump");
  CHECK(cfg.gamma_max == 0.5);
  CHECK(cfg.s0 == 4.0);
  CHECK(cfg.F_list.empty());
  CHECK(cfg.eta == 0.0);
  CHECK(cfg.grid.N_s == 1200);
  CHECK(cfg.grid.N_u == 24);
  CHECK(cfg.alpha == kDefaultAlpha);
  CHECK(cfg.alpha_prime == 0.1);
  CHECK(cfg.beta_grid.empty());
  CHECK(std::isnan(cfg.E_override));
  CHECK(std::isnan(cfg.deltaE_override));
  CHECK(cfg.solver.k == 4);
  CHECK(!cfg.solver_k_set);
  CHECK(cfg.output.records_path.empty());
  CHECK(cfg.hash_hex.size() == 16);
}

TEST_CASE("config: typed fields come through from every block") {
  const std::string text = R"({
    "geometry": {"d": 0.8, "profile": "bump", "gamma_max": 0.3, "s0": 5.0},
    "field": {"F_list": [1e-3, 2e-3], "eta": 0.25},
    "grid": {"L_minus": -50.0, "L_plus": 20.0, "N_s": 700, "N_u": 16},
    "distortion": {"alpha": 0.4, "alpha_prime": 0.2, "beta_grid": [1e-4, 2e-4],
                   "E": -1.5, "deltaE": 0.5},
    "solver": {"k": 6, "tol": 1e-9, "seed": 42, "max_iter": 25,
               "krylov_dim": 50},
    "output": {"records": "out.jsonl", "csv": "out.csv"},
    "validation": {"tilted_eta": 0.7, "weyl_n": [3, 5],
                   "weyl_window_law": "power", "equivalence_k": 2}
  })";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.d == 0.8);
  CHECK(cfg.gamma_max == 0.3);
  CHECK(cfg.s0 == 5.0);
  REQUIRE(cfg.F_list.size() == 2);
  CHECK(cfg.F_list[0] == 1e-3);
  CHECK(cfg.F_list[1] == 2e-3);
  CHECK(cfg.eta == 0.25);
  CHECK(cfg.grid.L_minus == -50.0);
  CHECK(cfg.grid.L_plus == 20.0);
  CHECK(cfg.grid.N_s == 700);
  CHECK(cfg.grid.N_u == 16);
  CHECK(cfg.alpha == 0.4);
  CHECK(cfg.alpha_prime == 0.2);
  REQUIRE(cfg.beta_grid.size() == 2);
  CHECK(cfg.E_override == -1.5);
  CHECK(cfg.deltaE_override == 0.5);
  CHECK(cfg.solver.k == 6);
  CHECK(cfg.solver_k_set);
  CHECK(cfg.solver.tol == 1e-9);
  CHECK(cfg.solver.seed == 42);
  CHECK(cfg.solver.max_iter == 25);
  CHECK(cfg.solver.krylov_dim == 50);
  CHECK(cfg.output.records_path == "out.jsonl");
  CHECK(cfg.output.csv_path == "out.csv");
  CHECK(cfg.validation.tilted_eta == 0.7);
  REQUIRE(cfg.validation.weyl_n.size() == 2);
  CHECK(cfg.validation.weyl_n[1] == 5);
  CHECK(cfg.validation.weyl_window_law == "power");
  CHECK(cfg.validation.equivalence_k == 2);

  // A straight profile zeroes the bend whatever gamma_max says.
  const RunConfig straight = parse_config(
      R"({"geometry": {"profile": "straight", "gamma_max": 0.7}})");
  CHECK(straight.gamma_max == 0.0);
  CHECK(straight.build_geometry().alpha0() == 0.0);
}

TEST_CASE("config: rejections carry the offending key and line") {
  const std::string msg = error_message("{\n  \"geometry\": {\n    \"felid\": 1\n  }\n}");
  CHECK(msg.find("unknown key") != std::string::npos);
  CHECK(msg.find("'geometry.felid'") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);

  CHECK(error_message(R"({"field": {"F": 1.0, "F_list": [1.0]}})")
            .find("not both") != std::string::npos);
  CHECK(error_message(R"({"geometry": {"profile": "zigzag"}})")
            .find("straight") != std::string::npos);
  CHECK(error_message(R"({"geometry": {"d": "one"}})").find("number") !=
        std::string::npos);
  CHECK(error_message(R"({"distortion": {"E": -1.0}})").find("together") !=
        std::string::npos);
  CHECK(error_message(R"({"solver": {"seed": -3}})").find("nonnegative") !=
        std::string::npos);
  CHECK(error_message(R"({"validation": {"weyl_window_law": "cosine"}})")
            .find("power") != std::string::npos);
  CHECK(error_message(R"({"field": {"F": -0.5}})").find("F >= 0") !=
        std::string::npos);
  CHECK(error_message("{ nope").find("parse error") != std::string::npos);
  CHECK(error_message("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("config: overrides patch dotted paths before validation") {
  const RunConfig cfg =
      parse_config("{}", {"field.F=0.01", "solver.k=6", "output.records=r.jsonl"});
  REQUIRE(cfg.F_list.size() == 1);
  CHECK(cfg.F_list[0] == 0.01);
  CHECK(cfg.solver.k == 6);
  CHECK(cfg.solver_k_set);
  // Bare words that are not JSON stay strings.
  CHECK(cfg.output.records_path == "r.jsonl");

  CHECK_THROWS_AS(parse_config("{}", {"justakey"}), ConfigError);
  CHECK_THROWS_AS(parse_config("{}", {"=5"}), ConfigError);
  CHECK_THROWS_AS(parse_config("{}", {"field..F=1"}), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"geometry": {"d": 1.0}})", {"geometry.d.x=1"}),
      ConfigError);
  const std::string msg = error_message("{}", {"fold.F=1"});
  CHECK(msg.find("unknown key") != std::string::npos);
  CHECK(msg.find("introduced by an override") != std::string::npos);
}

TEST_CASE("config: hash tracks content, not formatting") {
  const RunConfig a =
      parse_config(R"({"field": {"F": 0.25, "eta": 0.1}})");
  const RunConfig b = parse_config(
      "{\n  \"field\" : {\"eta\": 0.1,   \"F\": 0.25}\n}");
  const RunConfig c =
      parse_config(R"({"field": {"F": 0.26, "eta": 0.1}})");
  CHECK(a.hash_hex == b.hash_hex);
  CHECK(a.hash == b.hash);
  CHECK(a.hash_hex != c.hash_hex);

  // An override lands on the same hash as writing the value inline.
  const RunConfig d = parse_config("{}", {"field.F=0.25", "field.eta=0.1"});
  CHECK(d.hash_hex == a.hash_hex);

  CHECK(a.hash_hex.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("config: single_F demands exactly one intensity") {
  const RunConfig one = parse_config(R"({"field": {"F": 0.5}})");
  CHECK(one.single_F("resonance") == 0.5);

  const RunConfig many =
      parse_config(R"({"field": {"F_list": [1e-3, 2e-3]}})");
  try {
    many.single_F("resonance");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("resonance") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("{}").single_F("weyl"), ConfigError);
}

TEST_CASE("records: shortest round-trip doubles survive both sinks") {
  const std::vector<double> values{0.1,
                                   1.0 / 3.0,
                                   9.854404234880432,
                                   2.189916644587342e-3,
                                   1e-300,
                                   6.02214076e23,
                                   -2.5,
                                   1.0,
                                   0.0};
  for (double x : values) {
    const std::string s = format_double(x);
    const double back = std::stod(s);
    std::uint64_t bx = 0;
    std::uint64_t bb = 0;
    std::memcpy(&bx, &x, sizeof(x));
    std::memcpy(&bb, &back, sizeof(back));
    CHECK(bx == bb);
  }
  CHECK(format_double(-0.0)[0] == '-');

  const fs::path dir = scratch_dir();
  const fs::path csv = dir / "table.csv";
  std::vector<ResonanceEstimate> rows(2);
  rows[0].F = 1e-5;
  rows[0].Z = {9.854404234880432, -1.2216e-9};
  rows[0].beta_used = 2.1597239715835702e-4;
  rows[0].plateau_score = 3.939e-9;
  rows[0].residual = 2.8e-13;
  rows[1].F = 1e-4;
  rows[1].Z = {9.854301, -1.0252e-4};
  rows[1].beta_used = 2.1597239715835702e-4;
  rows[1].plateau_score = 1.1e-8;
  rows[1].residual = 2.9e-13;
  write_sweep_csv(csv.string(), rows);

  const std::vector<std::string> ls = lines_of(csv);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "F,re_Z,im_Z,beta_used,plateau_score,residual");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::stringstream ss(ls[r + 1]);
    std::string cell;
    std::vector<double> got;
    while (std::getline(ss, cell, ',')) got.push_back(std::stod(cell));
    REQUIRE(got.size() == 6);
    CHECK(got[0] == rows[r].F);
    CHECK(got[1] == rows[r].Z.real());
    CHECK(got[2] == rows[r].Z.imag());
    CHECK(got[3] == rows[r].beta_used);
    CHECK(got[4] == rows[r].plateau_score);
    CHECK(got[5] == rows[r].residual);
  }
  fs::remove(csv);
}

TEST_CASE("records: the writer appends one JSON object per line") {
  const fs::path dir = scratch_dir();
  const fs::path path = dir / "records.jsonl";
  fs::remove(path);
  {
    RecordWriter w(path.string());
    ResultRecord r;
    r.config_hash = "deadbeefdeadbeef";
    r.subcommand = "bound-states";
    r.timestamp = iso8601_utc_now();
    r.outputs = {{"E0", 9.8544}};
    w.append(r);
    r.subcommand = "resonance";
    w.append(r);
  }
  const std::vector<std::string> ls = lines_of(path);
  REQUIRE(ls.size() == 2);
  const nlohmann::json j0 = nlohmann::json::parse(ls[0]);
  const nlohmann::json j1 = nlohmann::json::parse(ls[1]);
  CHECK(j0.at("config_hash") == "deadbeefdeadbeef");
  CHECK(j0.at("subcommand") == "bound-states");
  CHECK(j1.at("subcommand") == "resonance");
  CHECK(j0.at("outputs").at("E0") == 9.8544);
  CHECK(j0.contains("timestamp"));
  CHECK(j0.contains("parameters"));
  CHECK(j0.contains("solver"));
  fs::remove(path);
}

TEST_CASE("cli: exit codes separate config, hypothesis, and solver trouble") {
  const char* cli = std::getenv("STARKWG_CLI_PATH");
  if (cli == nullptr) {
    MESSAGE("STARKWG_CLI_PATH not set; skipping the subprocess checks");
    return;
  }
  const fs::path dir = scratch_dir();
  const auto run = [&](const std::string& args) {
    const std::string cmd = std::string(cli) + " " + args + " > " +
                            (dir / "cli.out").string() + " 2>&1";
    const int st = std::system(cmd.c_str());
    return WEXITSTATUS(st);
  };
  const auto write_cfg = [&](const std::string& name, const std::string& body) {
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p.string();
  };

  const std::string straight = write_cfg("straight.json", R"({
    "geometry": {"profile": "straight"},
    "grid": {"L_minus": -6.0, "L_plus": 6.0, "N_s": 80, "N_u": 8},
    "output": {"records": ")" + (dir / "straight.jsonl").string() + R"("}
  })");
  fs::remove(dir / "straight.jsonl");
  CHECK(run("bound-states " + straight) == 0);
  const std::vector<std::string> recs = lines_of(dir / "straight.jsonl");
  REQUIRE(recs.size() == 1);
  const nlohmann::json rec = nlohmann::json::parse(recs[0]);
  CHECK(rec.at("outputs").at("status") == "no-bound-state");

  CHECK(run("resonance " + straight + " --override field.F=0.01") == 2);

  const std::string tilted = write_cfg("tilted.json", R"({
    "field": {"F": 0.1, "eta": 1.6},
    "grid": {"L_minus": -6.0, "L_plus": 6.0, "N_s": 80, "N_u": 8}
  })");
  CHECK(run("geometry-check " + tilted) == 2);

  const std::string ok = write_cfg("ok.json", R"({
    "grid": {"L_minus": -6.0, "L_plus": 6.0, "N_s": 80, "N_u": 8}
  })");
  CHECK(run("validate " + ok + " --check nosuch") == 4);

  const std::string broken = write_cfg("broken.json", "{ nope");
  CHECK(run("geometry-check " + broken) == 4);

  CHECK(run("geometry-check " + (dir / "missing.json").string()) == 4);
  CHECK(run("bound-states " + ok + " --override tol") == 4);
}

TEST_CASE("cli: identical reruns differ only in the timestamp") {
  const char* cli = std::getenv("STARKWG_CLI_PATH");
  if (cli == nullptr) {
    MESSAGE("STARKWG_CLI_PATH not set; skipping the subprocess checks");
    return;
  }
  // Identical config bytes, separate working directories, so the embedded
  // config hash must agree and only the timestamp may move.
  const fs::path dir = scratch_dir();
  const auto run_in = [&](const std::string& sub) {
    const fs::path d = dir / sub;
    fs::create_directories(d);
    fs::remove(d / "records.jsonl");
    std::ofstream(d / "bind.json") << R"({
      "geometry": {"gamma_max": 0.5, "s0": 4.0, "d": 1.0},
      "grid": {"L_minus": -40.0, "L_plus": 44.0, "N_s": 335, "N_u": 8},
      "output": {"records": "records.jsonl"}
    })";
    const std::string cmd = "cd " + d.string() + " && " + std::string(cli) +
                            " bound-states bind.json > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  REQUIRE(run_in("rerun_a") == 0);
  REQUIRE(run_in("rerun_b") == 0);
  const std::vector<std::string> l1 = lines_of(dir / "rerun_a/records.jsonl");
  const std::vector<std::string> l2 = lines_of(dir / "rerun_b/records.jsonl");
  REQUIRE(l1.size() == 1);
  REQUIRE(l2.size() == 1);
  nlohmann::json j1 = nlohmann::json::parse(l1[0]);
  nlohmann::json j2 = nlohmann::json::parse(l2[0]);
  CHECK(j1.at("outputs").at("status") == "ok");
  CHECK(j1.at("config_hash") == j2.at("config_hash"));
  j1.erase("timestamp");
  j2.erase("timestamp");
  CHECK(j1.dump() == j2.dump());
}
