// response.cpp -- the three displacement paths and their cross-checks.

#include "disperse/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "disperse/errors.hpp"
#include "disperse/special_functions.hpp"

namespace disperse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_pulse(const GaussianPulse& p) {
    if (!std::isfinite(p.amplitude) || !(p.beta > 0.0) || !std::isfinite(p.beta))
        throw std::invalid_argument("GaussianPulse: amplitude must be finite and beta > 0");
}

// exp(a^2/(4 beta) - a t) * erfc(a/(2 sqrt(beta)) - sqrt(beta) t), stable for
// every t. For negative erfc arguments the reflection keeps both exponents
// non-positive, so nothing overflows however large |t| gets.
double decayed_erfc_factor(double a, double beta, double t) {
    const double sb = std::sqrt(beta);
    const double b = a / (2.0 * sb) - sb * t;
    if (b >= 0.0)
        return std::exp(-beta * t * t) * specfn::erfcx_real(b);
    return 2.0 * std::exp(a * a / (4.0 * beta) - a * t) -
           std::exp(-beta * t * t) * specfn::erfcx_real(-b);
}

// d/da of decayed_erfc_factor, used for the removable theta == gamma point.
double decayed_erfc_factor_deriv(double a, double beta, double t) {
    return (a / (2.0 * beta) - t) * decayed_erfc_factor(a, beta, t) -
           std::exp(-beta * t * t) / std::sqrt(kPi * beta);
}

double closed_form_drude(const Drude& m, const GaussianPulse& p, double t) {
    const double coeff =
        p.amplitude * m.omega_p * m.omega_p / (2.0 * m.gamma) * std::sqrt(kPi / p.beta);
    const double saturation = specfn::erfc_real(-std::sqrt(p.beta) * t); // 1 + erf(sqrt(b) t)
    return pulse_value(p, t) + coeff * (saturation - decayed_erfc_factor(m.gamma, p.beta, t));
}

double closed_form_regularized_drude(const RegularizedDrude& m, const GaussianPulse& p,
                                     double t) {
    const double sqrt_pi_beta = std::sqrt(kPi / p.beta);
    const double wp2 = m.omega_p * m.omega_p;
    if (std::abs(m.gamma - m.theta) <= 1e-9 * std::max(m.gamma, m.theta)) {
        // Removable point theta == gamma: the bracket becomes -d/da of the
        // decayed factor at a = gamma.
        return pulse_value(p, t) - p.amplitude * 0.5 * wp2 * sqrt_pi_beta *
                                       decayed_erfc_factor_deriv(m.gamma, p.beta, t);
    }
    const double coeff = p.amplitude * wp2 / (2.0 * (m.gamma - m.theta)) * sqrt_pi_beta;
    return pulse_value(p, t) + coeff * (decayed_erfc_factor(m.theta, p.beta, t) -
                                        decayed_erfc_factor(m.gamma, p.beta, t));
}

double closed_form_lorentz(const LorentzSum& m, const GaussianPulse& p, double t) {
    const double beta = p.beta;
    const double sb = std::sqrt(beta);
    double d = pulse_value(p, t);
    for (const auto& o : m.oscillators) {
        const double s = std::sqrt(4.0 * o.resonance * o.resonance - o.damping * o.damping);
        const double re_b = (o.damping - 4.0 * beta * t) / (4.0 * sb);
        const double im_b = -s / (4.0 * sb);
        // E(t) * Im[exp(B^2) erfc(B)] evaluated without naked exponentials.
        double damped_im;
        if (re_b >= 0.0) {
            const std::complex<double> w =
                specfn::faddeeva_w(std::complex<double>(-im_b, re_b)); // w(iB)
            damped_im = std::exp(-beta * t * t) * w.imag();
        } else {
            // Reflection branch; the combined exponent B^2 - beta t^2 is
            // computed analytically, its real part stays negative here.
            const double re_exp =
                (o.damping * o.damping - 2.0 * o.resonance * o.resonance) / (8.0 * beta) -
                0.5 * o.damping * t;
            const double im_exp = -(o.damping - 4.0 * beta * t) * s / (8.0 * beta);
            const std::complex<double> refl =
                2.0 * std::exp(std::complex<double>(re_exp, im_exp));
            const std::complex<double> w =
                specfn::faddeeva_w(std::complex<double>(im_b, -re_b)); // w(-iB)
            damped_im = refl.imag() - std::exp(-beta * t * t) * w.imag();
        }
        d += p.amplitude * std::sqrt(kPi / beta) * o.strength / s * damped_im;
    }
    return d;
}

double slowest_saturation_rate(const DielectricModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>)
                return m.gamma;
            else if constexpr (std::is_same_v<T, RegularizedDrude>)
                return std::min(m.theta, m.gamma);
            else if constexpr (std::is_same_v<T, LorentzSum>) {
                double r = std::numeric_limits<double>::infinity();
                for (const auto& o : m.oscillators)
                    r = std::min(r, 0.5 * o.damping);
                return r;
            } else {
                // Plasma / NormalSkin: only the Gaussian tail sets the scale.
                return std::numeric_limits<double>::infinity();
            }
        },
        model);
}

} // namespace

double pulse_value(const GaussianPulse& p, double t) {
    require_pulse(p);
    return p.amplitude * std::exp(-p.beta * t * t);
}

double pulse_spectrum(const GaussianPulse& p, double omega) {
    require_pulse(p);
    return p.amplitude * std::exp(-omega * omega / (4.0 * p.beta)) /
           (2.0 * std::sqrt(kPi * p.beta));
}

double displacement_convolution(const TemporalKernel& kernel, const GaussianPulse& p, double t,
                                const quad::Options& opts) {
    require_pulse(p);
    const double sb = std::sqrt(p.beta);
    // Half-width of the Gaussian support window, widened for kernel growth.
    const double far = std::abs(t) + 10.0 / sb;
    const double growth = std::log1p(kernel_envelope(kernel, far));
    const double window = std::sqrt((46.0 + std::max(growth, 0.0)) / p.beta) + 2.0 / sb;

    const double lo = std::max(0.0, t - window);
    const double hi = t + window;
    if (!(hi > lo))
        return pulse_value(p, t);

    const auto integrand = [&](double tau) {
        return eval_kernel(kernel, tau) * pulse_value(p, t - tau);
    };
    const double osc = kernel_oscillation_frequency(kernel);
    return pulse_value(p, t) + quad::integrate_oscillatory(integrand, lo, hi, osc, opts).value;
}

double displacement_closed_form(const DielectricModel& model, const GaussianPulse& p,
                                double t) {
    require_valid(model);
    require_pulse(p);
    if (const auto* m = std::get_if<Drude>(&model))
        return closed_form_drude(*m, p, t);
    if (const auto* m = std::get_if<RegularizedDrude>(&model))
        return closed_form_regularized_drude(*m, p, t);
    if (const auto* m = std::get_if<LorentzSum>(&model))
        return closed_form_lorentz(*m, p, t);
    throw UnsupportedModel("displacement_closed_form: no closed form for " +
                           model_label(model) + "; use the convolution path");
}

SpectralDisplacement displacement_spectral(const DielectricModel& model, const GaussianPulse& p,
                                           const TimeGrid& grid, const SpectralSettings& s) {
    require_valid(model);
    require_pulse(p);
    if (grid.n < 1 || !(grid.dt > 0.0))
        throw std::invalid_argument("displacement_spectral: bad time grid");

    int zero_order = 0;
    pole_at_zero(model, &zero_order);
    if (zero_order >= 2)
        throw UnboundedSpectrum("displacement_spectral: " + model_label(model) +
                                " makes |eps(w) E(w)| grow like 1/w^2 near w = 0; the "
                                "symmetric-grid cancellation only removes odd singularities");

    const double omega_max =
        s.omega_max > 0.0 ? s.omega_max : 2.0 * std::sqrt(46.0 * p.beta) + 2.0;
    const std::size_t pairs = s.pairs > 0 ? s.pairs : 32768;
    const double domega = omega_max / static_cast<double>(pairs);

    // Midpoint nodes exclude omega = 0; combining +-w pairs into
    // 2 Re[S(w) e^{-iwt}] makes the odd 1/w part enter as sin(wt)/w, which is
    // finite -- the principal-value evaluation of the shifted quantity.
    std::vector<double> re_s(pairs), im_s(pairs), omegas(pairs);
    for (std::size_t j = 0; j < pairs; ++j) {
        const double w = (static_cast<double>(j) + 0.5) * domega;
        const auto eps = eval_epsilon(model, {w, 0.0});
        const double amp = pulse_spectrum(p, w);
        omegas[j] = w;
        re_s[j] = eps.real() * amp;
        im_s[j] = eps.imag() * amp;
    }

    SpectralDisplacement out;
    out.tilde = zero_order == 1;
    out.signal.t0 = grid.t0;
    out.signal.dt = grid.dt;
    out.signal.values.resize(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.at(k);
        quad::KahanSum acc;
        for (std::size_t j = 0; j < pairs; ++j) {
            const double phase = omegas[j] * t;
            acc.add(2.0 * (re_s[j] * std::cos(phase) + im_s[j] * std::sin(phase)));
        }
        out.signal.values[k] = acc.value() * domega;
    }
    return out;
}

double settle_horizon(const DielectricModel& model, const GaussianPulse& p) {
    require_pulse(p);
    const double gaussian_tail = 30.0 / std::sqrt(p.beta);
    const double rate = slowest_saturation_rate(model);
    return std::isfinite(rate) ? std::max(gaussian_tail, 20.0 / rate) : gaussian_tail;
}

AsymptoticLimits asymptotic_limits(const DielectricModel& model, const GaussianPulse& p) {
    require_valid(model);
    require_pulse(p);
    const double pulse_area = p.amplitude * std::sqrt(kPi / p.beta);
    AsymptoticLimits lim;
    lim.horizon = settle_horizon(model, p);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Drude>) {
                const double residual = m.omega_p * m.omega_p / m.gamma * pulse_area;
                lim.d_plus_inf = {LimitKind::finite, residual};
                lim.d_minus_inf = {LimitKind::finite, 0.0};
                lim.d_tilde_plus_inf = {LimitKind::finite, 0.5 * residual};
                lim.d_tilde_minus_inf = {LimitKind::finite, -0.5 * residual};
            } else if constexpr (std::is_same_v<T, NormalSkin>) {
                const double residual = kFourPi * m.sigma0 * pulse_area;
                lim.d_plus_inf = {LimitKind::finite, residual};
                lim.d_minus_inf = {LimitKind::finite, 0.0};
                lim.d_tilde_plus_inf = {LimitKind::finite, 0.5 * residual};
                lim.d_tilde_minus_inf = {LimitKind::finite, -0.5 * residual};
            } else if constexpr (std::is_same_v<T, Plasma>) {
                lim.d_plus_inf = {LimitKind::divergent, 0.0};
                lim.d_minus_inf = {LimitKind::finite, 0.0};
                lim.d_tilde_plus_inf = {LimitKind::not_available, 0.0};
                lim.d_tilde_minus_inf = {LimitKind::not_available, 0.0};
            } else {
                // RegularizedDrude and LorentzSum are integrable: every limit
                // vanishes and the spectral path computes D itself.
                lim.d_plus_inf = {LimitKind::finite, 0.0};
                lim.d_minus_inf = {LimitKind::finite, 0.0};
                lim.d_tilde_plus_inf = {LimitKind::finite, 0.0};
                lim.d_tilde_minus_inf = {LimitKind::finite, 0.0};
            }
        },
        model);
    return lim;
}

LimitProbeResult limit_order_probe(const DielectricModel& model, const GaussianPulse& p,
                                   const std::vector<double>& theta_ladder,
                                   const std::vector<double>& horizon_ladder) {
    require_valid(model);
    require_pulse(p);
    const auto* drude = std::get_if<Drude>(&model);
    if (!drude)
        throw UnsupportedModel("limit_order_probe: requires the bare Drude model");
    if (theta_ladder.empty() || horizon_ladder.empty())
        throw std::invalid_argument("limit_order_probe: ladders must be non-empty");

    LimitProbeResult out;
    out.thetas = theta_ladder;
    out.horizons = horizon_ladder;
    out.residual_after_pulse =
        p.amplitude * drude->omega_p * drude->omega_p / drude->gamma * std::sqrt(kPi / p.beta);
    out.iterated_other_way = 0.0;

    for (double theta : theta_ladder) {
        if (theta < 0.0)
            throw std::invalid_argument("limit_order_probe: theta must be >= 0");
        DielectricModel column_model;
        if (theta == 0.0)
            column_model = *drude;
        else
            column_model = RegularizedDrude{drude->omega_p, drude->gamma, theta};
        std::vector<double> plus, minus;
        plus.reserve(horizon_ladder.size());
        minus.reserve(horizon_ladder.size());
        for (double T : horizon_ladder) {
            plus.push_back(displacement_closed_form(column_model, p, T));
            minus.push_back(displacement_closed_form(column_model, p, -T));
        }
        out.d_plus.push_back(std::move(plus));
        out.d_minus.push_back(std::move(minus));
    }
    return out;
}

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

ConsistencyReport consistency_report(const DielectricModel& model, const GaussianPulse& p,
                                     const ConsistencySettings& settings) {
    require_valid(model);
    require_pulse(p);

    ConsistencyReport rep;
    rep.model = model_label(model);
    rep.grid = settings.grid;
    rep.dev_conv_spec = kNaN;
    rep.dev_conv_closed = kNaN;
    rep.dev_spec_closed = kNaN;
    rep.tilde_offset = kNaN;
    rep.tilde_offset_stddev = kNaN;
    rep.tilde_offset_expected = kNaN;
    rep.conv_at_plus_horizon = kNaN;
    rep.conv_at_minus_horizon = kNaN;

    rep.field.resize(settings.grid.n);
    for (std::size_t i = 0; i < settings.grid.n; ++i)
        rep.field[i] = pulse_value(p, settings.grid.at(i));

    try {
        const auto kernel = kernel_for(model);
        PathCurve c;
        c.values.resize(settings.grid.n);
        for (std::size_t i = 0; i < settings.grid.n; ++i)
            c.values[i] = displacement_convolution(kernel, p, settings.grid.at(i),
                                                   settings.quad);
        c.ok = true;
        rep.convolution = std::move(c);
    } catch (const std::exception& e) {
        rep.convolution.error = e.what();
    }

    try {
        auto spec = displacement_spectral(model, p, settings.grid, settings.spectral);
        rep.spectral.values = std::move(spec.signal.values);
        rep.spectral.tilde = spec.tilde;
        rep.spectral.ok = true;
        rep.spectral_is_tilde = spec.tilde;
    } catch (const std::exception& e) {
        rep.spectral.error = e.what();
    }

    try {
        PathCurve c;
        c.values.resize(settings.grid.n);
        for (std::size_t i = 0; i < settings.grid.n; ++i)
            c.values[i] = displacement_closed_form(model, p, settings.grid.at(i));
        c.ok = true;
        rep.closed_form = std::move(c);
    } catch (const std::exception& e) {
        rep.closed_form.error = e.what();
    }

    if (rep.convolution.ok && rep.closed_form.ok)
        rep.dev_conv_closed = max_abs_diff(rep.convolution.values, rep.closed_form.values);
    if (rep.spectral.ok && !rep.spectral_is_tilde) {
        if (rep.convolution.ok)
            rep.dev_conv_spec = max_abs_diff(rep.convolution.values, rep.spectral.values);
        if (rep.closed_form.ok)
            rep.dev_spec_closed = max_abs_diff(rep.spectral.values, rep.closed_form.values);
    }
    if (rep.spectral.ok && rep.spectral_is_tilde && rep.convolution.ok) {
        // The shifted path differs from D by a constant; report its mean,
        // spread, and predicted value.
        double mean = 0.0;
        for (std::size_t i = 0; i < settings.grid.n; ++i)
            mean += rep.spectral.values[i] - rep.convolution.values[i];
        mean /= static_cast<double>(settings.grid.n);
        double var = 0.0;
        for (std::size_t i = 0; i < settings.grid.n; ++i) {
            const double d = rep.spectral.values[i] - rep.convolution.values[i] - mean;
            var += d * d;
        }
        rep.tilde_offset = mean;
        rep.tilde_offset_stddev = std::sqrt(var / static_cast<double>(settings.grid.n));
    }

    rep.limits = asymptotic_limits(model, p);
    if (rep.spectral_is_tilde && rep.limits.d_tilde_plus_inf.kind == LimitKind::finite &&
        rep.limits.d_plus_inf.kind == LimitKind::finite)
        rep.tilde_offset_expected =
            rep.limits.d_tilde_plus_inf.value - rep.limits.d_plus_inf.value;

    if (rep.convolution.ok) {
        try {
            const auto kernel = kernel_for(model);
            rep.conv_at_plus_horizon =
                displacement_convolution(kernel, p, rep.limits.horizon, settings.quad);
            rep.conv_at_minus_horizon =
                displacement_convolution(kernel, p, -rep.limits.horizon, settings.quad);
        } catch (const std::exception&) {
            // leave NaN
        }
    }
    return rep;
}

namespace {

nlohmann::json limit_to_json(const LimitValue& v) {
    switch (v.kind) {
    case LimitKind::finite: return {{"kind", "finite"}, {"value", v.value}};
    case LimitKind::divergent: return {{"kind", "divergent"}};
    case LimitKind::not_available: return {{"kind", "not_available"}};
    }
    return {};
}

nlohmann::json path_to_json(const PathCurve& c) {
    nlohmann::json j;
    j["ok"] = c.ok;
    if (!c.ok)
        j["error"] = c.error;
    if (c.tilde)
        j["tilde"] = true;
    return j;
}

} // namespace

nlohmann::json ConsistencyReport::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["grid"] = {{"t0", grid.t0}, {"dt", grid.dt}, {"n", grid.n}};
    j["paths"] = {{"convolution", path_to_json(convolution)},
                  {"spectral", path_to_json(spectral)},
                  {"closed_form", path_to_json(closed_form)}};
    const auto put = [&j](const char* key, double v) {
        if (std::isnan(v))
            j["deviations"][key] = nullptr;
        else
            j["deviations"][key] = v;
    };
    put("conv_vs_spectral", dev_conv_spec);
    put("conv_vs_closed", dev_conv_closed);
    put("spectral_vs_closed", dev_spec_closed);
    j["spectral_is_tilde"] = spectral_is_tilde;
    if (spectral_is_tilde && !std::isnan(tilde_offset)) {
        j["tilde_offset"] = {{"mean", tilde_offset},
                             {"stddev", tilde_offset_stddev},
                             {"expected", tilde_offset_expected}};
    }
    j["limits"] = {{"horizon", limits.horizon},
                   {"d_plus_inf", limit_to_json(limits.d_plus_inf)},
                   {"d_minus_inf", limit_to_json(limits.d_minus_inf)},
                   {"d_tilde_plus_inf", limit_to_json(limits.d_tilde_plus_inf)},
                   {"d_tilde_minus_inf", limit_to_json(limits.d_tilde_minus_inf)}};
    if (!std::isnan(conv_at_plus_horizon))
        j["convolution_at_horizon"] = {{"plus", conv_at_plus_horizon},
                                       {"minus", conv_at_minus_horizon}};
    return j;
}

} // namespace disperse
