#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "exclusim/errors.hpp"
#include "exclusim/run_config.hpp"
#include "exclusim/runner.hpp"

using namespace exclusim;
namespace fs = std::filesystem;

namespace {

const char* kGoodConfig = R"({
  "schema_version": 1,
  "command": "simulate",
  "topology": {"L": 40.0, "rho": 1.0},
  "normalization": "weak-nonneg",
  "velocity": {"kind": "deterministic-common", "cap": 1.0},
  "init": {"family": "uniform"},
  "T": 100
})";

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    auto d = fs::temp_directory_path() / ("exclusim_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(EXCLUSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("defaults: half-run burn-in and sampled checking") {
    auto c = parse_config(kGoodConfig);
    CHECK(c.command == "simulate");
    CHECK(c.burn_in == -1);
    CHECK(c.effective_burn_in() == 50);
    CHECK(c.check == CheckLevel::sampled);
    CHECK(c.seeds == std::vector<std::uint64_t>{0});
    CHECK(c.L == 40.0);
}

TEST_CASE("topology validation") {
    CHECK_THROWS_AS(parse_config(R"({
      "schema_version": 1, "command": "simulate",
      "topology": {"L": 10.0, "rho": 0.13}, "T": 10
    })"),
                    SchemaError);
    CHECK_THROWS_AS(parse_config(R"({
      "schema_version": 1, "command": "simulate",
      "topology": {"L": 10.0, "rho": 1.0, "lattice_mode": true, "r": 0.25},
      "T": 10
    })"),
                    SchemaError);
}

TEST_CASE("all validation problems are reported together") {
    try {
        parse_config(R"({
          "schema_version": 3,
          "command": "warp",
          "topology": {"L": -5.0, "rho": 0.13},
          "T": 0
        })");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.issues.size() >= 4);
    }
}

TEST_CASE("malformed JSON is a schema error") {
    CHECK_THROWS_AS(parse_config("{ not json"), SchemaError);
}

TEST_CASE("runner writes artifacts and a report") {
    auto dir = temp_dir("runner");
    auto report = run(parse_config(kGoodConfig), dir.string());
    CHECK(report.exit_code == 0);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "simulate.csv"));
    const auto csv = read_file(dir / "simulate.csv");
    CHECK(csv.find("kind,rho,L,T,seed,V") == 0);
    bool saw_gap_check = false;
    for (const auto& c : report.checks) {
        if (c.name.find("gap") != std::string::npos) {
            saw_gap_check = c.pass;
        }
    }
    CHECK(saw_gap_check);
    fs::remove_all(dir);
}

TEST_CASE("cli end-to-end: sweep runs, reports, and repeats byte-identically") {
    auto dir = temp_dir("cli");
    const fs::path cfg = dir / "config.json";
    std::ofstream(cfg) << R"({
      "schema_version": 1,
      "command": "fd-sweep",
      "topology": {"L": 20.0, "rho": 1.0},
      "normalization": "weak-nonneg",
      "velocity": {"kind": "deterministic-common", "cap": 1.0},
      "init": {"family": "uniform"},
      "T": 200,
      "rho_grid": [0.5, 1.0, 2.0],
      "seeds": [1, 2]
    })";
    const fs::path out1 = dir / "out1";
    const fs::path out2 = dir / "out2";
    CHECK(run_cli("--config " + cfg.string() + " --out " + out1.string()) == 0);
    CHECK(run_cli("--config " + cfg.string() + " --out " + out2.string()) == 0);
    REQUIRE(fs::exists(out1 / "fd_sweep.csv"));
    CHECK(read_file(out1 / "fd_sweep.csv") == read_file(out2 / "fd_sweep.csv"));
    CHECK(fs::exists(out1 / "report.json"));
    fs::remove_all(dir);
}

TEST_CASE("cli rejects a bad config with exit code 1") {
    auto dir = temp_dir("cli_bad");
    const fs::path cfg = dir / "bad.json";
    std::ofstream(cfg) << R"({"schema_version": 1, "command": "warp"})";
    CHECK(run_cli("--config " + cfg.string() + " --out " + (dir / "out").string()) == 1);
    fs::remove_all(dir);
}

TEST_CASE("verify command self-checks without topology") {
    auto dir = temp_dir("verify");
    auto report = run(parse_config(R"({"schema_version": 1, "command": "verify"})"),
                      dir.string());
    CHECK(report.exit_code == 0);
    for (const auto& c : report.checks) {
        CHECK(c.pass);
    }
    fs::remove_all(dir);
}
