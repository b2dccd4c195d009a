// End-to-end checks of the disperse binary: exit codes, artifacts, and
// output determinism. The binary path comes in through DISPERSE_CLI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto capture =
        fs::temp_directory_path() / ("disperse_cli_out_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(DISPERSE_CLI) + " " + args + " > " + capture.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CommandResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(capture);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    fs::remove(capture);
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("disperse_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("list prints every bundled scenario") {
    const auto r = run_cli("list");
    CHECK(r.exit_code == 0);
    for (const char* id : {"drude_kernel", "drude_recovery", "drude_residual",
                           "drude_consistency", "lorentz_consistency", "theta_limit_probe",
                           "lorentz_kk", "specialfn_selftest"})
        CHECK(r.output.find(id) != std::string::npos);
}

TEST_CASE("describe explains an experiment and rejects unknown ones") {
    const auto ok = run_cli("describe limit-probe");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("ladders.T") != std::string::npos);

    const auto bad = run_cli("describe warpfield");
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("kernel") != std::string::npos); // suggestion list
}

TEST_CASE("run executes a bundled scenario id and writes artifacts") {
    const auto dir = fresh_dir("run");
    const auto r = run_cli("run drude_residual -o " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[pass] drude_residual") != std::string::npos);
    CHECK(fs::exists(dir / "drude_residual.csv"));
    CHECK(fs::exists(dir / "drude_residual.report.json"));
}

TEST_CASE("run accepts scenario files from disk") {
    const auto dir = fresh_dir("file");
    const auto scenario_path = dir / "my_kernel.json";
    std::ofstream(scenario_path) << R"json({
      "id": "my_kernel",
      "experiment": "kernel",
      "model": {"type": "plasma", "omega_p": 2.0},
      "grids": {"tau": {"max": 5.0, "n": 11}}
    })json";
    const auto r = run_cli("run " + scenario_path.string() + " -o " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "my_kernel.csv"));
}

TEST_CASE("malformed scenarios exit 2 and name the offending field") {
    const auto dir = fresh_dir("bad");
    const auto scenario_path = dir / "missing_beta.json";
    std::ofstream(scenario_path) << R"json({
      "id": "missing_beta",
      "experiment": "displacement",
      "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
      "pulse": {"e0": 1.0},
      "grids": {"t": {"min": -5.0, "max": 5.0, "n": 11}}
    })json";
    const auto r = run_cli("run " + scenario_path.string() + " -o " + dir.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("pulse.beta: required") != std::string::npos);

    const auto unknown = run_cli("run nonexistent_scenario -o " + dir.string());
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("tolerance-gate failures exit 1, numerical failures exit 3") {
    const auto dir = fresh_dir("codes");

    const auto strict_path = dir / "strict.json";
    std::ofstream(strict_path) << R"json({
      "id": "strict",
      "experiment": "kk",
      "model": {"type": "lorentz", "oscillators": [{"strength": 1.0, "resonance": 1.0, "damping": 0.1}]},
      "grids": {"omega": {"min": 0.1, "max": 3.0, "n": 5}},
      "tolerances": {"kk_residual": 1e-30}
    })json";
    CHECK(run_cli("run " + strict_path.string() + " -o " + dir.string()).exit_code == 1);

    const auto singular_path = dir / "singular.json";
    std::ofstream(singular_path) << R"json({
      "id": "singular",
      "experiment": "kk",
      "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
      "grids": {"omega": {"min": 0.1, "max": 3.0, "n": 5}}
    })json";
    const auto r = run_cli("run " + singular_path.string() + " -o " + dir.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("omega=0") != std::string::npos);
}

TEST_CASE("parallel runs succeed and per-scenario CSV output is deterministic") {
    const auto dir_a = fresh_dir("par_a");
    const auto dir_b = fresh_dir("par_b");
    const auto r =
        run_cli("run drude_kernel lorentz_kk specialfn_selftest --jobs 3 -o " + dir_a.string());
    CHECK(r.exit_code == 0);
    const auto r2 = run_cli("run drude_kernel -o " + dir_b.string());
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir_a / "drude_kernel.csv") == slurp(dir_b / "drude_kernel.csv"));
}

TEST_CASE("selftest-specialfn writes its error tables") {
    const auto dir = fresh_dir("selftest");
    const auto r = run_cli("selftest-specialfn -o " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "specialfn_selftest.csv"));
    const auto table = slurp(dir / "specialfn_selftest.csv");
    CHECK(table.find("erf_vs_series") != std::string::npos);
    CHECK(table.find("faddeeva_vs_quadrature_rel") != std::string::npos);
}
