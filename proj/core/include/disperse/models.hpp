// models.hpp -- frequency-domain permittivity models: closed-form evaluation,
// pole structure, validation, and the dispersion-relation consistency check.
#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace disperse {

struct Drude {
    double omega_p = 1.0; // plasma frequency
    double gamma = 1.0;   // relaxation rate
};

// Drude with the singular 1/omega factor shifted to 1/(omega + i theta);
// regular at omega = 0 for theta > 0.
struct RegularizedDrude {
    double omega_p = 1.0;
    double gamma = 1.0;
    double theta = 1.0;
};

struct Plasma {
    double omega_p = 1.0;
};

struct NormalSkin {
    double sigma0 = 1.0; // dc conductivity, same frequency unit as everything else
};

struct LorentzOscillator {
    double strength = 1.0;  // g_j, frequency^2
    double resonance = 1.0; // omega_j > 0
    double damping = 1.0;   // gamma_j, underdamped: gamma_j < 2 omega_j
};

struct LorentzSum {
    std::vector<LorentzOscillator> oscillators;
};

using DielectricModel = std::variant<Drude, RegularizedDrude, Plasma, NormalSkin, LorentzSum>;

struct ValidationIssue {
    std::string invariant;
    std::string parameter;
    std::string message;
};

struct ValidationReport {
    bool passed = true;
    std::vector<ValidationIssue> failures;
};

ValidationReport validate(const DielectricModel& model);

/// Throws InvalidModel with the first validation failure.
void require_valid(const DielectricModel& model);

/// Largest frequency-like parameter of the model; sets the scale for the
/// default pole guard and the dispersion-relation cutoff.
double characteristic_frequency(const DielectricModel& model);

/// Default guard radius around poles: 1e-12 in model frequency units.
double default_pole_guard(const DielectricModel& model);

/// Closed-form epsilon(omega). `pole_guard` <= 0 selects the default guard;
/// evaluation within the guard radius of a pole throws PoleEvaluation instead
/// of returning a huge number.
std::complex<double> eval_epsilon(const DielectricModel& model, std::complex<double> omega,
                                  double pole_guard = -1.0);

struct Pole {
    std::complex<double> location;
    int multiplicity = 1;
};

/// Exact pole set of epsilon(omega) - 1 viewed as a rational function.
std::vector<Pole> poles(const DielectricModel& model);

/// True when epsilon - 1 has a pole at omega = 0 (Drude, Plasma, NormalSkin);
/// `order` receives its multiplicity.
bool pole_at_zero(const DielectricModel& model, int* order = nullptr);

struct PvSettings {
    double cutoff_factor = 200.0; // integration cutoff = factor * characteristic frequency
    double rel_tol = 1e-8;
};

struct KkResidual {
    double max_relative_residual = 0.0;
    double cutoff = 0.0;
    std::vector<double> grid;
    std::vector<double> dispersion_integral; // (2/pi) PV int x Im eps / (x^2 - w^2) dx
    std::vector<double> target;              // Re eps(w) - 1
};

/// Checks Re eps - 1 against the principal-value dispersion integral of
/// Im eps on the given positive-frequency grid. Residuals are reported
/// relative to the peak |Re eps - 1| over the grid (the pointwise value
/// crosses zero). Only models regular at omega = 0 qualify; conductor-type
/// models throw SingularAtZero.
KkResidual kramers_kronig_residual(const DielectricModel& model,
                                   const std::vector<double>& omega_grid,
                                   const PvSettings& settings = {});

std::string model_label(const DielectricModel& model);

// JSON wire format, snake_case:
//   {"type":"drude","omega_p":1.0,"gamma":0.5}
//   {"type":"regularized_drude","omega_p":..,"gamma":..,"theta":..}
//   {"type":"plasma","omega_p":..}
//   {"type":"normal_skin","sigma_0":..}
//   {"type":"lorentz","oscillators":[{"strength":..,"resonance":..,"damping":..},...]}
nlohmann::json to_json(const DielectricModel& model);

/// Parses the wire format above; throws InvalidModel naming the missing or
/// mistyped field (e.g. "omega_p: required").
DielectricModel model_from_json(const nlohmann::json& j);

} // namespace disperse
