#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

// Exercises the installed binary end to end: golden CSV comparison,
// determinism, exit codes.  OTTO_CLI_PATH and OTTO_GOLDEN_DIR are injected
// by the build.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(OTTO_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path tmp_csv(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("cop-sweep matches the committed golden file and is deterministic") {
    const auto out1 = tmp_csv("otto_cop1.csv");
    const auto out2 = tmp_csv("otto_cop2.csv");
    CHECK(run("cop-sweep --out " + out1.string()).exit_code == 0);
    CHECK(run("cop-sweep --jobs 4 --out " + out2.string()).exit_code == 0);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));  // worker count must not affect bytes
    CHECK(a == slurp(std::filesystem::path(OTTO_GOLDEN_DIR) / "cop_sweep_default.csv"));
    CHECK(a.rfind("tau,cop_adiabatic,cop_cubic_exact,cop_first_order,carnot\n", 0) == 0);
    std::filesystem::remove(out1);
    std::filesystem::remove(out2);
}

TEST_CASE("critical-time matches the committed golden file") {
    const auto out = tmp_csv("otto_crit.csv");
    CHECK(run("critical-time --out " + out.string()).exit_code == 0);
    const std::string a = slurp(out);
    CHECK(a ==
          slurp(std::filesystem::path(OTTO_GOLDEN_DIR) / "critical_time_default.csv"));
    CHECK(a.rfind("T1,t0c_numeric,t0c_analytic,diverged\n", 0) == 0);
    std::filesystem::remove(out);
}

TEST_CASE("qstar subcommand") {
    SUBCASE("single point to stdout") {
        const auto r = run("qstar --t0 10");
        CHECK(r.exit_code == 0);
        std::istringstream in(r.output);
        std::string header, row;
        REQUIRE(std::getline(in, header));
        CHECK(header ==
              "t0,qstar_numeric,qstar_perturbative,sudden_limit,wronskian_drift,error");
        REQUIRE(std::getline(in, row));
        CHECK(row.rfind("1.0000000000000000e+01,", 0) == 0);
    }
    SUBCASE("quasistatic closed form") {
        const auto r = run("qstar --protocol quasistatic");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("1.0000000000000000e+00") != std::string::npos);
    }
    SUBCASE("sweep row count honors the range") {
        const auto r = run("qstar --range 0.1:10:5:log");
        CHECK(r.exit_code == 0);
        int lines = 0;
        for (char c : r.output) lines += c == '\n';
        CHECK(lines == 6);  // header + 5 rows
    }
}

TEST_CASE("report subcommand") {
    const auto r = run("report");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("cooling               = yes") != std::string::npos);
    CHECK(r.output.find("carnot cop") != std::string::npos);
    SUBCASE("past the threshold the cycle heats") {
        const auto h = run("report --q2 2.0");
        CHECK(h.exit_code == 0);
        CHECK(h.output.find("cooling               = no") != std::string::npos);
    }
}

TEST_CASE("exit codes") {
    SUBCASE("reversed baths are invalid input") {
        CHECK(run("report --beta1 0.5 --beta2 1.0").exit_code == 2);
    }
    SUBCASE("malformed range") {
        CHECK(run("cop-sweep --range 1:2").exit_code == 2);
    }
    SUBCASE("unknown protocol") {
        CHECK(run("qstar --protocol parabolic").exit_code == 2);
    }
    SUBCASE("unknown flag") {
        CHECK(run("report --frequency 3").exit_code == 2);
    }
    SUBCASE("help") {
        CHECK(run("--help").exit_code == 0);
    }
}

TEST_CASE("output file is written atomically") {
    const auto out = tmp_csv("otto_atomic.csv");
    std::filesystem::remove(out);
    CHECK(run("cop-sweep --out " + out.string()).exit_code == 0);
    CHECK(std::filesystem::exists(out));
    CHECK_FALSE(std::filesystem::exists(out.string() + ".tmp"));
    std::filesystem::remove(out);
}
