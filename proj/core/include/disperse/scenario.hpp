// scenario.hpp -- declarative scenario files: parse, validate, execute, and
// emit CSV/JSON artifacts. This is the engine behind the `disperse` CLI.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "disperse/models.hpp"
#include "disperse/response.hpp"

namespace disperse {

enum class ExperimentKind {
    kernel,
    recovery,
    displacement,
    consistency,
    limit_probe,
    kk,
    specialfn_selftest,
};

std::string experiment_label(ExperimentKind kind);

/// Parses an experiment name; throws MalformedScenario listing the valid
/// names when it does not match.
ExperimentKind experiment_from_label(const std::string& name);

struct RangeGrid {
    double min = 0.0;
    double max = 1.0;
    std::size_t n = 2;
};

struct TauGrid {
    double max = 1.0;
    std::size_t n = 2;
};

struct Tolerances {
    double quad_rel = 1e-9;
    double path_agreement = 1e-6;
    double recovery_rel = 1e-6;
    double kk_residual = 1e-4;
    double asymptote_abs = 1e-5;
    double causality_abs = 1e-10;
    double offset_abs = 1e-4;
    double limit_zero_abs = 1e-6;
};

struct Scenario {
    std::string id;
    std::string description;
    ExperimentKind experiment = ExperimentKind::kernel;
    std::optional<DielectricModel> model;
    GaussianPulse pulse{1.0, 0.2};
    bool pulse_given = false;
    std::optional<RangeGrid> t_grid;
    std::optional<TauGrid> tau_grid;
    std::optional<RangeGrid> omega_grid;
    std::vector<double> theta_ladder;
    std::vector<double> eta_ladder;
    std::vector<double> horizon_ladder;
    Tolerances tolerances;
};

/// Parses and validates a scenario object. Throws MalformedScenario whose
/// message names the offending field path (e.g. "pulse.beta: required").
Scenario scenario_from_json(const nlohmann::json& j);
Scenario scenario_from_string(std::string_view text);

struct Gate {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RunOutcome {
    int exit_code = 0; // 0 pass, 1 tolerance-gate failure
    bool pass = true;
    nlohmann::json report;
    std::vector<std::string> written_files;
};

/// Executes the scenario and writes <id>.csv and <id>.report.json into
/// out_dir (created if missing). Deterministic for a fixed scenario.
/// Numerical failures (QuadratureFailure, ExtrapolationDiverged, ...)
/// propagate as exceptions; the CLI maps them to exit 3.
RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir);

struct BundledScenario {
    std::string_view id;
    std::string_view text; // scenario JSON
};

/// Built-in scenarios covering every experiment type.
const std::vector<BundledScenario>& bundled_scenarios();

/// Bundled scenario text by id (with or without a ".json" suffix);
/// nullptr when unknown.
const BundledScenario* find_bundled(std::string_view id);

/// Human-readable description of an experiment type and its required
/// scenario fields. Throws MalformedScenario with suggestions for unknown
/// names.
std::string describe_experiment(const std::string& name);

} // namespace disperse
