// disperse_main.cpp -- batch scenario runner CLI.
//
// Exit codes: 0 all gates pass, 1 tolerance-gate failure, 2 malformed
// scenario or unknown input, 3 numerical failure (quadrature/extrapolation).

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "disperse/errors.hpp"
#include "disperse/scenario.hpp"

namespace {

std::string load_scenario_text(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) {
        std::ifstream in(arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    if (const auto* bundled = disperse::find_bundled(arg))
        return std::string(bundled->text);
    throw disperse::MalformedScenario("scenario '" + arg +
                                      "' is neither a readable file nor a bundled id "
                                      "(see `disperse list`)");
}

// 0 < 1 < 3 < 2: malformed input dominates, then numerical failure.
int worse_exit(int a, int b) {
    const auto rank = [](int c) {
        switch (c) {
        case 0: return 0;
        case 1: return 1;
        case 3: return 2;
        default: return 3;
        }
    };
    return rank(a) >= rank(b) ? a : b;
}

int run_one(const std::string& arg, const std::string& out_dir, std::mutex& io) {
    int code = 0;
    std::string line;
    try {
        const auto scenario = disperse::scenario_from_string(load_scenario_text(arg));
        const auto outcome = disperse::run_scenario(scenario, out_dir);
        code = outcome.exit_code;
        line = (outcome.pass ? "[pass] " : "[FAIL] ") + scenario.id;
        if (!outcome.pass) {
            for (const auto& g : outcome.report.at("gates")) {
                if (!g.at("pass").get<bool>())
                    line += "\n         gate " + g.at("name").get<std::string>() + ": " +
                            g.at("value").dump() + " vs threshold " +
                            g.at("threshold").dump();
            }
        }
    } catch (const disperse::MalformedScenario& e) {
        code = 2;
        line = "[ERROR] " + arg + ": " + e.what();
    } catch (const std::exception& e) {
        code = 3;
        line = "[ERROR] " + arg + ": " + e.what();
    }
    std::lock_guard<std::mutex> lock(io);
    std::cout << line << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"disperse -- temporal-dispersion scenario runner"};
    app.require_subcommand(1);

    std::vector<std::string> scenario_args;
    std::string out_dir = ".";
    unsigned jobs = 1;

    auto* run = app.add_subcommand("run", "Execute scenario files or bundled scenario ids");
    run->add_option("scenarios", scenario_args, "Scenario JSON files or bundled ids")
        ->required();
    run->add_option("-o,--out", out_dir, "Output directory for CSV/JSON artifacts");
    run->add_option("--jobs", jobs, "Run independent scenarios on N threads")
        ->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list", "List bundled scenarios");

    std::string experiment_name;
    auto* describe = app.add_subcommand("describe", "Describe an experiment type");
    describe->add_option("experiment", experiment_name, "Experiment name")->required();

    std::string selftest_out = ".";
    auto* selftest =
        app.add_subcommand("selftest-specialfn", "Dump special-function error tables as CSV");
    selftest->add_option("-o,--out", selftest_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& sc : disperse::bundled_scenarios()) {
            const auto parsed = disperse::scenario_from_string(sc.text);
            std::cout << sc.id << "  [" << disperse::experiment_label(parsed.experiment)
                      << "]  " << parsed.description << "\n";
        }
        return 0;
    }

    if (describe->parsed()) {
        try {
            std::cout << disperse::describe_experiment(experiment_name) << "\n";
            return 0;
        } catch (const disperse::MalformedScenario& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }

    if (selftest->parsed()) {
        std::mutex io;
        return run_one("specialfn_selftest", selftest_out, io);
    }

    // run
    std::mutex io;
    std::atomic<int> exit_code{0};
    if (jobs <= 1 || scenario_args.size() <= 1) {
        int code = 0;
        for (const auto& arg : scenario_args)
            code = worse_exit(code, run_one(arg, out_dir, io));
        return code;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n_threads = std::min<unsigned>(jobs, scenario_args.size());
    for (unsigned i = 0; i < n_threads; ++i) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= scenario_args.size())
                    return;
                const int code = run_one(scenario_args[idx], out_dir, io);
                int expected = exit_code.load();
                while (!exit_code.compare_exchange_weak(expected, worse_exit(expected, code))) {
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    return exit_code.load();
}
