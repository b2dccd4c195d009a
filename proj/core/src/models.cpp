// models.cpp -- permittivity model evaluation, poles, validation, and the
// principal-value dispersion-relation residual.

#include "disperse/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "disperse/errors.hpp"
#include "disperse/quadrature.hpp"

namespace disperse {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
using cplx = std::complex<double>;

bool positive_finite(double v) {
    return std::isfinite(v) && v > 0.0;
}

void check_positive(ValidationReport& r, double v, const char* param) {
    if (!positive_finite(v))
        r.failures.push_back({"positive", param,
                              std::string(param) + " must be finite and > 0, got " +
                                  std::to_string(v)});
}

void guard_pole(const cplx& omega, const cplx& pole, double guard) {
    if (std::abs(omega - pole) < guard)
        throw PoleEvaluation("eval_epsilon: omega within guard radius " + std::to_string(guard) +
                             " of the pole at (" + std::to_string(pole.real()) + ", " +
                             std::to_string(pole.imag()) + "i)");
}

} // namespace

ValidationReport validate(const DielectricModel& model) {
    ValidationReport r;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>) {
                check_positive(r, m.omega_p, "omega_p");
                check_positive(r, m.gamma, "gamma");
            } else if constexpr (std::is_same_v<T, RegularizedDrude>) {
                check_positive(r, m.omega_p, "omega_p");
                check_positive(r, m.gamma, "gamma");
                check_positive(r, m.theta, "theta");
            } else if constexpr (std::is_same_v<T, Plasma>) {
                check_positive(r, m.omega_p, "omega_p");
            } else if constexpr (std::is_same_v<T, NormalSkin>) {
                check_positive(r, m.sigma0, "sigma_0");
            } else if constexpr (std::is_same_v<T, LorentzSum>) {
                for (std::size_t j = 0; j < m.oscillators.size(); ++j) {
                    const auto& o = m.oscillators[j];
                    const std::string idx = "oscillators[" + std::to_string(j) + "].";
                    check_positive(r, o.strength, (idx + "strength").c_str());
                    check_positive(r, o.resonance, (idx + "resonance").c_str());
                    check_positive(r, o.damping, (idx + "damping").c_str());
                    if (positive_finite(o.damping) && positive_finite(o.resonance) &&
                        !(o.damping < 2.0 * o.resonance))
                        r.failures.push_back(
                            {"underdamped", idx + "damping",
                             "overdamped oscillator: damping " + std::to_string(o.damping) +
                                 " >= 2 * resonance " + std::to_string(2.0 * o.resonance)});
                }
            }
        },
        model);
    r.passed = r.failures.empty();
    return r;
}

void require_valid(const DielectricModel& model) {
    const auto r = validate(model);
    if (!r.passed)
        throw InvalidModel("invalid model (" + model_label(model) + "): " +
                           r.failures.front().message);
}

double characteristic_frequency(const DielectricModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>)
                return std::max(m.omega_p, m.gamma);
            else if constexpr (std::is_same_v<T, RegularizedDrude>)
                return std::max({m.omega_p, m.gamma, m.theta});
            else if constexpr (std::is_same_v<T, Plasma>)
                return m.omega_p;
            else if constexpr (std::is_same_v<T, NormalSkin>)
                return kFourPi * m.sigma0;
            else {
                double f = 0.0;
                for (const auto& o : m.oscillators)
                    f = std::max({f, o.resonance, o.damping, std::sqrt(o.strength)});
                return f > 0.0 ? f : 1.0;
            }
        },
        model);
}

double default_pole_guard(const DielectricModel& model) {
    return 1e-12 * characteristic_frequency(model);
}

std::complex<double> eval_epsilon(const DielectricModel& model, std::complex<double> omega,
                                  double pole_guard) {
    require_valid(model);
    const double guard = pole_guard > 0.0 ? pole_guard : default_pole_guard(model);
    return std::visit(
        [&](const auto& m) -> cplx {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>) {
                guard_pole(omega, {0.0, 0.0}, guard);
                guard_pole(omega, {0.0, -m.gamma}, guard);
                return 1.0 - m.omega_p * m.omega_p / (omega * (omega + cplx(0.0, m.gamma)));
            } else if constexpr (std::is_same_v<T, RegularizedDrude>) {
                guard_pole(omega, {0.0, -m.theta}, guard);
                guard_pole(omega, {0.0, -m.gamma}, guard);
                return 1.0 - m.omega_p * m.omega_p /
                                 ((omega + cplx(0.0, m.theta)) * (omega + cplx(0.0, m.gamma)));
            } else if constexpr (std::is_same_v<T, Plasma>) {
                guard_pole(omega, {0.0, 0.0}, guard);
                return 1.0 - m.omega_p * m.omega_p / (omega * omega);
            } else if constexpr (std::is_same_v<T, NormalSkin>) {
                guard_pole(omega, {0.0, 0.0}, guard);
                return 1.0 + cplx(0.0, kFourPi * m.sigma0) / omega;
            } else {
                cplx eps{1.0, 0.0};
                for (const auto& o : m.oscillators) {
                    const double shifted = std::sqrt(o.resonance * o.resonance -
                                                     0.25 * o.damping * o.damping);
                    guard_pole(omega, {shifted, -0.5 * o.damping}, guard);
                    guard_pole(omega, {-shifted, -0.5 * o.damping}, guard);
                    eps += o.strength / (o.resonance * o.resonance - omega * omega -
                                         cplx(0.0, o.damping) * omega);
                }
                return eps;
            }
        },
        model);
}

std::vector<Pole> poles(const DielectricModel& model) {
    require_valid(model);
    return std::visit(
        [](const auto& m) -> std::vector<Pole> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>) {
                return {{{0.0, 0.0}, 1}, {{0.0, -m.gamma}, 1}};
            } else if constexpr (std::is_same_v<T, RegularizedDrude>) {
                if (m.theta == m.gamma)
                    return {{{0.0, -m.gamma}, 2}};
                return {{{0.0, -m.theta}, 1}, {{0.0, -m.gamma}, 1}};
            } else if constexpr (std::is_same_v<T, Plasma>) {
                return {{{0.0, 0.0}, 2}};
            } else if constexpr (std::is_same_v<T, NormalSkin>) {
                return {{{0.0, 0.0}, 1}};
            } else {
                std::vector<Pole> ps;
                ps.reserve(2 * m.oscillators.size());
                for (const auto& o : m.oscillators) {
                    const double shifted = std::sqrt(o.resonance * o.resonance -
                                                     0.25 * o.damping * o.damping);
                    ps.push_back({{shifted, -0.5 * o.damping}, 1});
                    ps.push_back({{-shifted, -0.5 * o.damping}, 1});
                }
                return ps;
            }
        },
        model);
}

bool pole_at_zero(const DielectricModel& model, int* order) {
    int ord = 0;
    if (std::holds_alternative<Drude>(model) || std::holds_alternative<NormalSkin>(model))
        ord = 1;
    else if (std::holds_alternative<Plasma>(model))
        ord = 2;
    if (order)
        *order = ord;
    return ord > 0;
}

KkResidual kramers_kronig_residual(const DielectricModel& model,
                                   const std::vector<double>& omega_grid,
                                   const PvSettings& settings) {
    require_valid(model);
    if (pole_at_zero(model))
        throw SingularAtZero("kramers_kronig_residual: " + model_label(model) +
                             " has a pole at omega=0; the unsubtracted dispersion relation "
                             "does not apply to conductor-type models");
    if (omega_grid.empty())
        throw std::invalid_argument("kramers_kronig_residual: empty grid");

    const double cutoff = settings.cutoff_factor * characteristic_frequency(model);
    KkResidual out;
    out.cutoff = cutoff;
    out.grid = omega_grid;

    const auto im_eps = [&](double x) { return eval_epsilon(model, {x, 0.0}).imag(); };
    quad::Options opts;
    opts.rel_tol = settings.rel_tol;

    for (double w : omega_grid) {
        if (!(w > 0.0) || !(w < 0.5 * cutoff))
            throw std::invalid_argument("kramers_kronig_residual: grid frequencies must lie in "
                                        "(0, cutoff/2)");
        const double d = std::min(0.5 * w, 1.0);
        // q(x) = x Im eps(x) / (x + w); integrand = q(x) / (x - w).
        const auto q = [&](double x) { return x * im_eps(x) / (x + w); };

        const auto below = quad::integrate([&](double x) { return q(x) / (x - w); }, 0.0,
                                           w - d, opts);
        // Even reflection around the singular point: the 1/(x - w) parts of the
        // u and -u contributions cancel, leaving a bounded integrand.
        const auto around = quad::integrate(
            [&](double u) { return (q(w + u) - q(w - u)) / u; }, 0.0, d, opts);
        const auto above = quad::integrate([&](double x) { return q(x) / (x - w); }, w + d,
                                           cutoff, opts);

        out.dispersion_integral.push_back((2.0 / std::numbers::pi) *
                                          (below.value + around.value + above.value));
        out.target.push_back(eval_epsilon(model, {w, 0.0}).real() - 1.0);
    }

    double peak = 0.0;
    for (double t : out.target)
        peak = std::max(peak, std::abs(t));
    if (peak == 0.0)
        peak = 1.0;
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        out.max_relative_residual =
            std::max(out.max_relative_residual,
                     std::abs(out.dispersion_integral[i] - out.target[i]) / peak);
    return out;
}

std::string model_label(const DielectricModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>)
                return "drude";
            else if constexpr (std::is_same_v<T, RegularizedDrude>)
                return "regularized_drude";
            else if constexpr (std::is_same_v<T, Plasma>)
                return "plasma";
            else if constexpr (std::is_same_v<T, NormalSkin>)
                return "normal_skin";
            else
                return "lorentz";
        },
        model);
}

nlohmann::json to_json(const DielectricModel& model) {
    nlohmann::json j;
    j["type"] = model_label(model);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>) {
                j["omega_p"] = m.omega_p;
                j["gamma"] = m.gamma;
            } else if constexpr (std::is_same_v<T, RegularizedDrude>) {
                j["omega_p"] = m.omega_p;
                j["gamma"] = m.gamma;
                j["theta"] = m.theta;
            } else if constexpr (std::is_same_v<T, Plasma>) {
                j["omega_p"] = m.omega_p;
            } else if constexpr (std::is_same_v<T, NormalSkin>) {
                j["sigma_0"] = m.sigma0;
            } else {
                auto arr = nlohmann::json::array();
                for (const auto& o : m.oscillators)
                    arr.push_back({{"strength", o.strength},
                                   {"resonance", o.resonance},
                                   {"damping", o.damping}});
                j["oscillators"] = arr;
            }
        },
        model);
    return j;
}

namespace {

double json_number(const nlohmann::json& j, const char* field) {
    if (!j.contains(field))
        throw InvalidModel(std::string(field) + ": required");
    if (!j.at(field).is_number())
        throw InvalidModel(std::string(field) + ": must be a number");
    return j.at(field).get<double>();
}

} // namespace

DielectricModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw InvalidModel("model must be a JSON object");
    if (!j.contains("type"))
        throw InvalidModel("type: required");
    const std::string type = j.at("type").is_string() ? j.at("type").get<std::string>() : "";
    if (type == "drude")
        return Drude{json_number(j, "omega_p"), json_number(j, "gamma")};
    if (type == "regularized_drude")
        return RegularizedDrude{json_number(j, "omega_p"), json_number(j, "gamma"),
                                json_number(j, "theta")};
    if (type == "plasma")
        return Plasma{json_number(j, "omega_p")};
    if (type == "normal_skin")
        return NormalSkin{json_number(j, "sigma_0")};
    if (type == "lorentz") {
        if (!j.contains("oscillators") || !j.at("oscillators").is_array())
            throw InvalidModel("oscillators: required array");
        LorentzSum sum;
        for (const auto& o : j.at("oscillators"))
            sum.oscillators.push_back({json_number(o, "strength"), json_number(o, "resonance"),
                                       json_number(o, "damping")});
        return sum;
    }
    throw InvalidModel("type: unknown model type '" + type +
                       "' (expected drude, regularized_drude, plasma, normal_skin, lorentz)");
}

} // namespace disperse
