// bundled_scenarios.cpp -- built-in scenario files, one per experiment type
// plus one extra consistency case. The reference fixture throughout is
// omega_p = 1, gamma = 0.5, beta = 0.2, E0 = 1.

#include "disperse/scenario.hpp"

namespace disperse {

namespace {

constexpr std::string_view kDrudeKernel = R"json({
  "id": "drude_kernel",
  "description": "Conductor kernel with both inconsistent single-sided inversions on a tau grid",
  "experiment": "kernel",
  "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
  "grids": {"tau": {"max": 20.0, "n": 201}}
})json";

constexpr std::string_view kDrudeRecovery = R"json({
  "id": "drude_recovery",
  "description": "Ladder inversion of the regularized conductor model against the contour oracle",
  "experiment": "recovery",
  "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
  "grids": {"tau": {"max": 10.0, "n": 101}},
  "ladders": {"theta": [0.05, 0.025, 0.0125, 0.00625, 0.003125]},
  "tolerances": {"recovery_rel": 1e-6}
})json";

constexpr std::string_view kDrudeResidual = R"json({
  "id": "drude_residual",
  "description": "Residual displacement left in a conductor after the pulse has passed",
  "experiment": "displacement",
  "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
  "pulse": {"e0": 1.0, "beta": 0.2},
  "grids": {"t": {"min": -10.0, "max": 10.0, "n": 201}},
  "tolerances": {"asymptote_abs": 1e-5}
})json";

constexpr std::string_view kDrudeConsistency = R"json({
  "id": "drude_consistency",
  "description": "Convolution and closed form agree; the spectral path is flagged as the shifted quantity with a constant offset",
  "experiment": "consistency",
  "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
  "pulse": {"e0": 1.0, "beta": 0.2},
  "grids": {"t": {"min": -10.0, "max": 10.0, "n": 201}},
  "tolerances": {"path_agreement": 1e-6, "offset_abs": 1e-4}
})json";

constexpr std::string_view kLorentzConsistency = R"json({
  "id": "lorentz_consistency",
  "description": "Insulator well-posedness: all three displacement paths agree with no regularization",
  "experiment": "consistency",
  "model": {"type": "lorentz", "oscillators": [{"strength": 1.0, "resonance": 1.0, "damping": 0.1}]},
  "pulse": {"e0": 1.0, "beta": 0.2},
  "grids": {"t": {"min": -10.0, "max": 10.0, "n": 201}},
  "tolerances": {"path_agreement": 1e-6}
})json";

constexpr std::string_view kThetaLimitProbe = R"json({
  "id": "theta_limit_probe",
  "description": "Non-commuting limits: theta -> 0 then T -> inf keeps the residual, the other order erases it",
  "experiment": "limit-probe",
  "model": {"type": "drude", "omega_p": 1.0, "gamma": 0.5},
  "pulse": {"e0": 1.0, "beta": 0.2},
  "ladders": {"theta": [0.1, 0.01, 0.001, 0.0], "T": [30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0, 30000.0]},
  "tolerances": {"limit_zero_abs": 1e-6}
})json";

constexpr std::string_view kLorentzKk = R"json({
  "id": "lorentz_kk",
  "description": "Dispersion-relation residual for the insulator model",
  "experiment": "kk",
  "model": {"type": "lorentz", "oscillators": [{"strength": 1.0, "resonance": 1.0, "damping": 0.1}]},
  "grids": {"omega": {"min": 0.1, "max": 3.0, "n": 30}},
  "tolerances": {"kk_residual": 1e-4}
})json";

constexpr std::string_view kSpecialfnSelftest = R"json({
  "id": "specialfn_selftest",
  "description": "Error tables for erf/erfc/Faddeeva against series, asymptotic, and quadrature oracles",
  "experiment": "specialfn-selftest"
})json";

} // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
    static const std::vector<BundledScenario> list{
        {"drude_kernel", kDrudeKernel},
        {"drude_recovery", kDrudeRecovery},
        {"drude_residual", kDrudeResidual},
        {"drude_consistency", kDrudeConsistency},
        {"lorentz_consistency", kLorentzConsistency},
        {"theta_limit_probe", kThetaLimitProbe},
        {"lorentz_kk", kLorentzKk},
        {"specialfn_selftest", kSpecialfnSelftest},
    };
    return list;
}

const BundledScenario* find_bundled(std::string_view id) {
    std::string_view key = id;
    if (key.size() > 5 && key.substr(key.size() - 5) == ".json")
        key.remove_suffix(5);
    for (const auto& sc : bundled_scenarios())
        if (sc.id == key)
            return &sc;
    return nullptr;
}

} // namespace disperse
