// kernels.cpp -- evaluation of the closed-form time-domain kernels.

#include "disperse/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "disperse/errors.hpp"

namespace disperse {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

const Drude& as_drude(const DielectricModel& m, const char* who) {
    if (const auto* d = std::get_if<Drude>(&m))
        return *d;
    throw UnsupportedModel(std::string(who) + ": requires the bare Drude model, got " +
                           model_label(m));
}

// (exp(-a tau) - exp(-b tau)) / (b - a), stable through the removable point
// a == b where the value is tau exp(-a tau). Factored form:
// exp(-a tau) (1 - exp(-x)) / x * tau with x = (b - a) tau.
double exp_difference_quotient(double a, double b, double tau) {
    const double x = (b - a) * tau;
    if (std::abs(x) > 1.0)
        return (std::exp(-a * tau) - std::exp(-b * tau)) / (b - a);
    if (x == 0.0)
        return tau * std::exp(-a * tau);
    return -tau * std::exp(-a * tau) * std::expm1(-x) / x;
}

} // namespace

std::string kernel_family_label(KernelFamily family) {
    switch (family) {
    case KernelFamily::drude_regularized_zero: return "drude_regularized_zero";
    case KernelFamily::drude_cos_pathological: return "drude_cos_pathological";
    case KernelFamily::drude_sin_form: return "drude_sin_form";
    case KernelFamily::drude_theta: return "drude_theta";
    case KernelFamily::plasma_linear: return "plasma_linear";
    case KernelFamily::normal_skin_constant: return "normal_skin_constant";
    case KernelFamily::lorentz_damped: return "lorentz_damped";
    }
    return "unknown";
}

TemporalKernel kernel_for(const DielectricModel& model) {
    require_valid(model);
    TemporalKernel k;
    k.model = model;
    if (std::holds_alternative<Drude>(model))
        k.family = KernelFamily::drude_regularized_zero;
    else if (std::holds_alternative<RegularizedDrude>(model))
        k.family = KernelFamily::drude_theta;
    else if (std::holds_alternative<Plasma>(model))
        k.family = KernelFamily::plasma_linear;
    else if (std::holds_alternative<NormalSkin>(model))
        k.family = KernelFamily::normal_skin_constant;
    else
        k.family = KernelFamily::lorentz_damped;
    return k;
}

double eval_kernel(const TemporalKernel& kernel, double tau) {
    if (tau < 0.0)
        return 0.0;
    switch (kernel.family) {
    case KernelFamily::drude_regularized_zero:
    case KernelFamily::drude_sin_form: {
        const auto& m = std::get<Drude>(kernel.model);
        return -m.omega_p * m.omega_p * std::expm1(-m.gamma * tau) / m.gamma;
    }
    case KernelFamily::drude_cos_pathological: {
        const auto& m = std::get<Drude>(kernel.model);
        return -m.omega_p * m.omega_p / m.gamma * std::exp(-m.gamma * tau);
    }
    case KernelFamily::drude_theta: {
        const auto& m = std::get<RegularizedDrude>(kernel.model);
        return m.omega_p * m.omega_p * exp_difference_quotient(m.theta, m.gamma, tau);
    }
    case KernelFamily::plasma_linear: {
        const auto& m = std::get<Plasma>(kernel.model);
        return m.omega_p * m.omega_p * tau;
    }
    case KernelFamily::normal_skin_constant: {
        const auto& m = std::get<NormalSkin>(kernel.model);
        return kFourPi * m.sigma0;
    }
    case KernelFamily::lorentz_damped: {
        const auto& m = std::get<LorentzSum>(kernel.model);
        double f = 0.0;
        for (const auto& o : m.oscillators) {
            const double shifted =
                std::sqrt(o.resonance * o.resonance - 0.25 * o.damping * o.damping);
            f += o.strength * std::exp(-0.5 * o.damping * tau) * std::sin(shifted * tau) /
                 shifted;
        }
        return f;
    }
    }
    throw std::logic_error("eval_kernel: unknown kernel family");
}

TemporalKernel pathological_kernel(const DielectricModel& model, PathologicalForm form) {
    require_valid(model);
    as_drude(model, "pathological_kernel");
    TemporalKernel k;
    k.model = model;
    k.family = form == PathologicalForm::cosine ? KernelFamily::drude_cos_pathological
                                                : KernelFamily::drude_sin_form;
    return k;
}

TemporalKernel gamma_limit_kernel(const TemporalKernel& drude_kernel) {
    if (drude_kernel.family != KernelFamily::drude_regularized_zero)
        throw UnsupportedModel("gamma_limit_kernel: expects the drude_regularized_zero kernel");
    const auto& m = std::get<Drude>(drude_kernel.model);

    TemporalKernel limit;
    limit.model = Plasma{m.omega_p};
    limit.family = KernelFamily::plasma_linear;

    // Pointwise convergence check: the Taylor remainder bound
    // |f_D(tau) - wp^2 tau| <= wp^2 gamma tau^2 / 2.
    for (double tau : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
        const double diff = std::abs(eval_kernel(drude_kernel, tau) - eval_kernel(limit, tau));
        const double bound = 0.5 * m.omega_p * m.omega_p * m.gamma * tau * tau;
        if (diff > bound * (1.0 + 1e-12) + 1e-300)
            throw std::logic_error("gamma_limit_kernel: convergence bound violated");
    }
    return limit;
}

double kernel_decay_rate(const TemporalKernel& kernel) {
    switch (kernel.family) {
    case KernelFamily::drude_regularized_zero:
    case KernelFamily::drude_sin_form:
    case KernelFamily::plasma_linear:
    case KernelFamily::normal_skin_constant:
        return 0.0;
    case KernelFamily::drude_cos_pathological:
        return std::get<Drude>(kernel.model).gamma;
    case KernelFamily::drude_theta: {
        const auto& m = std::get<RegularizedDrude>(kernel.model);
        return std::min(m.theta, m.gamma);
    }
    case KernelFamily::lorentz_damped: {
        const auto& m = std::get<LorentzSum>(kernel.model);
        double rate = std::numeric_limits<double>::infinity();
        for (const auto& o : m.oscillators)
            rate = std::min(rate, 0.5 * o.damping);
        return rate;
    }
    }
    return 0.0;
}

bool kernel_is_decaying(const TemporalKernel& kernel) {
    return kernel_decay_rate(kernel) > 0.0;
}

double kernel_envelope(const TemporalKernel& kernel, double tau) {
    tau = std::max(tau, 0.0);
    switch (kernel.family) {
    case KernelFamily::drude_regularized_zero:
    case KernelFamily::drude_sin_form: {
        const auto& m = std::get<Drude>(kernel.model);
        return m.omega_p * m.omega_p / m.gamma;
    }
    case KernelFamily::drude_cos_pathological: {
        const auto& m = std::get<Drude>(kernel.model);
        return m.omega_p * m.omega_p / m.gamma * std::exp(-m.gamma * tau);
    }
    case KernelFamily::drude_theta: {
        const auto& m = std::get<RegularizedDrude>(kernel.model);
        const double rate = std::min(m.theta, m.gamma);
        const double width = std::abs(m.gamma - m.theta);
        const double amp = width > 0.0 ? std::min(tau, 1.0 / width) : tau;
        return m.omega_p * m.omega_p * amp * std::exp(-rate * tau);
    }
    case KernelFamily::plasma_linear: {
        const auto& m = std::get<Plasma>(kernel.model);
        return m.omega_p * m.omega_p * tau;
    }
    case KernelFamily::normal_skin_constant: {
        const auto& m = std::get<NormalSkin>(kernel.model);
        return kFourPi * m.sigma0;
    }
    case KernelFamily::lorentz_damped: {
        const auto& m = std::get<LorentzSum>(kernel.model);
        double env = 0.0;
        for (const auto& o : m.oscillators) {
            const double shifted =
                std::sqrt(o.resonance * o.resonance - 0.25 * o.damping * o.damping);
            env += o.strength / shifted * std::exp(-0.5 * o.damping * tau);
        }
        return env;
    }
    }
    return 0.0;
}

double kernel_oscillation_frequency(const TemporalKernel& kernel) {
    if (kernel.family != KernelFamily::lorentz_damped)
        return 0.0;
    const auto& m = std::get<LorentzSum>(kernel.model);
    double freq = 0.0;
    for (const auto& o : m.oscillators)
        freq = std::max(freq,
                        std::sqrt(o.resonance * o.resonance - 0.25 * o.damping * o.damping));
    return freq;
}

nlohmann::json to_json(const TemporalKernel& kernel) {
    return {{"family", kernel_family_label(kernel.family)},
            {"model", to_json(kernel.model)},
            {"delta_weight", TemporalKernel::delta_weight}};
}

} // namespace disperse
