#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "slipflow/harness.hpp"

using namespace slipflow;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string small_config_text() {
    return "Lx=2\nNx=16\nNy=8\nm=8\nh=0.02\nT=0.1\nmu=0.05\na=0.5\n"
           "delta=0.1\nepsilon=0.02\nalpha=0.05\nrho0_amp=0.05\nu0_mode=2\nu0_amp=0.1\n"
           "noise_family=linear-momentum\ng0=0.2\nK=4\nsnapshots=all\n";
}

struct TempDir {
    std::string path;
    explicit TempDir(const std::string& name) : path("harness_test_" + name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing: defaults, echo round-trip, violations") {
    RunConfig c = parse_config("Lx=2\nNx=16\nNy=8\nm=8\n");
    CHECK(c.Lx == 2.0);
    CHECK(c.gamma == 1.4);  // default filled

    std::string echo = echo_config(c);
    RunConfig back = parse_config(echo);
    CHECK(echo_config(back) == echo);

    CHECK_THROWS_WITH_AS(parse_config("gamma=0.9\n"),
                         doctest::Contains("gamma > 1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("gamma=2\nGamma=4\n"),
                         doctest::Contains("Gamma >= max(6,gamma)"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("no_such_key=1\n"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_AS(parse_config("h=0.3\nT=1\n"), ConfigError);  // h does not divide T

    // all violations reported at once
    try {
        parse_config("gamma=0.5\nmu=-1\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("gamma > 1") != std::string::npos);
        CHECK(msg.find("mu > 0") != std::string::npos);
    }
}

TEST_CASE("infinite cutoff radius round-trips through the config") {
    RunConfig c = parse_config("R=inf\n");
    CHECK(std::isinf(c.R));
    RunConfig back = parse_config(echo_config(c));
    CHECK(std::isinf(back.R));
}

TEST_CASE("run command produces deterministic artifacts") {
    TempDir d1("run_a"), d2("run_b");
    RunConfig cfg = parse_config(small_config_text());
    int s1 = run_command(cfg, 42, 2, d1.path);
    int s2 = run_command(cfg, 42, 2, d2.path);
    CHECK(s1 == kExitOk);
    CHECK(s2 == kExitOk);

    CHECK(read_file(d1.path + "/summary.json") == read_file(d2.path + "/summary.json"));
    CHECK(read_file(d1.path + "/path_000/ledger.csv") == read_file(d2.path + "/path_000/ledger.csv"));
    CHECK(read_file(d1.path + "/path_001/ledger.csv") == read_file(d2.path + "/path_001/ledger.csv"));
    CHECK(read_file(d1.path + "/config.txt") == echo_config(cfg));
}

TEST_CASE("run artifacts are independent of the worker count") {
    TempDir d1("workers_1"), d2("workers_4");
    RunConfig cfg = parse_config(small_config_text());
    setenv("SLIPFLOW_WORKERS", "1", 1);
    run_command(cfg, 9, 3, d1.path);
    setenv("SLIPFLOW_WORKERS", "4", 1);
    run_command(cfg, 9, 3, d2.path);
    unsetenv("SLIPFLOW_WORKERS");
    CHECK(read_file(d1.path + "/summary.json") == read_file(d2.path + "/summary.json"));
    for (int i = 0; i < 3; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "/path_%03d/ledger.csv", i);
        CHECK(read_file(d1.path + buf) == read_file(d2.path + buf));
    }
}

TEST_CASE("deterministic run flags zero martingale column") {
    TempDir d("det");
    RunConfig cfg = parse_config(small_config_text());
    cfg.noise_family = "off";
    cfg.g0 = 0.0;
    int status = run_command(cfg, 5, 1, d.path);
    CHECK(status == kExitOk);
    std::string summary = read_file(d.path + "/summary.json");
    CHECK(summary.find("\"deterministic\": true") != std::string::npos);
    std::vector<LedgerRow> rows = read_ledger_csv(d.path + "/path_000/ledger.csv");
    for (const LedgerRow& r : rows) CHECK(r.martingale_increment == 0.0);
}

TEST_CASE("fault injection: forced CFL violation exits with the hard code") {
    TempDir d("fault");
    RunConfig cfg = parse_config(small_config_text());
    cfg.dt_inner = cfg.h;  // single inner step regardless of stability
    cfg.u0_amp = 50.0;
    int status = run_command(cfg, 5, 1, d.path);
    CHECK(status == kExitHardFailure);
    std::string summary = read_file(d.path + "/summary.json");
    CHECK(summary.find("\"failed\": true") != std::string::npos);
}

TEST_CASE("ledger CSV round-trip") {
    TempDir d("csv");
    RunConfig cfg = parse_config(small_config_text());
    run_command(cfg, 31, 1, d.path);
    std::vector<LedgerRow> rows = read_ledger_csv(d.path + "/path_000/ledger.csv");
    CHECK(rows.size() == 6);
    CHECK(rows[0].step == 0);
    CHECK(rows.back().t == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("check command suites on a stored record") {
    TempDir d("check");
    RunConfig cfg = parse_config(small_config_text());
    REQUIRE(run_command(cfg, 13, 1, d.path) == kExitOk);
    CHECK(check_command(d.path, "mass") == kExitOk);
    CHECK(check_command(d.path, "energy") == kExitOk);
    CHECK(check_command(d.path, "friction") == kExitOk);
    CHECK(check_command(d.path, "weakforms") == kExitOk);
    CHECK(check_command(d.path, "ops") == kExitOk);
    CHECK_THROWS_AS(check_command(d.path, "bogus"), ConfigError);
}

TEST_CASE("sweep command: R neutrality and m nesting") {
    TempDir d1("sweep_R"), d2("sweep_m");
    RunConfig cfg = parse_config(small_config_text());
    cfg.u0_amp = 0.1;

    int sr = sweep_command(cfg, "R", {1e6, 1e7}, 3, d1.path);
    CHECK(sr == kExitOk);
    std::string rep = read_file(d1.path + "/sweep_report.json");
    CHECK(rep.find("\"ledgers_identical\": true") != std::string::npos);

    int sm = sweep_command(cfg, "m", {6, 8}, 3, d2.path);
    CHECK(sm == kExitOk);
    CHECK(read_file(d2.path + "/sweep_report.json").find("prefix_comparison") !=
          std::string::npos);

    CHECK_THROWS_AS(sweep_command(cfg, "nope", {1, 2}, 3, d1.path), ConfigError);
}

TEST_CASE("sweep command: deterministic h sweep fits a first-order residual") {
    TempDir d("sweep_h");
    RunConfig cfg = parse_config(small_config_text());
    cfg.noise_family = "off";
    cfg.g0 = 0.0;
    cfg.T = 0.2;
    int status = sweep_command(cfg, "h", {0.02, 0.01, 0.005}, 3, d.path);
    CHECK(status == kExitOk);
    std::string rep = read_file(d.path + "/sweep_report.json");
    CHECK(rep.find("residual_order_fit") != std::string::npos);
}
