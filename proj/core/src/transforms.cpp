// transforms.cpp -- discrete transforms, damped half-line transforms, and the
// two independent realizations of the +i0 kernel recovery.

#include "disperse/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "disperse/errors.hpp"

namespace disperse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDecayThreshold = 1e-12;

void require_signal_sane(const SampledSignal& s) {
    if (s.values.size() < 2)
        throw std::invalid_argument("sampled signal needs at least 2 samples");
    if (!(s.dt > 0.0))
        throw std::invalid_argument("sampled signal needs dt > 0");
    for (double v : s.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("sampled signal contains non-finite values");
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const std::vector<std::complex<double>>& v) {
    double m = 0.0;
    for (const auto& x : v)
        m = std::max(m, std::abs(x));
    return m;
}

// Ooura-Mori double-exponential integrators for int_0^inf g(w) trig(w tau) dw.
// Node tables are expensive to build, so they are cached per thread.
boost::math::quadrature::ooura_fourier_cos<double>& ooura_cos(double rel_tol) {
    thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(rel_tol, 11);
    return integrator;
}

boost::math::quadrature::ooura_fourier_sin<double>& ooura_sin(double rel_tol) {
    thread_local boost::math::quadrature::ooura_fourier_sin<double> integrator(rel_tol, 11);
    return integrator;
}

// Full-line inverse of eps(w) - 1 = -wp^2 / ((w + i a)(w + i b)) at time tau,
// i.e. (1/pi) [ int_0^inf R cos(w tau) dw + int_0^inf I sin(w tau) dw ] with
// R, I the real and imaginary parts. Regular on the whole axis for a, b > 0.
double invert_shifted_drude(double omega_p, double a, double b, double tau, double rel_tol) {
    const double wp2 = omega_p * omega_p;
    const double ab = a * b;
    const double apb = a + b;
    const auto re_part = [=](double w) {
        const double w2 = w * w;
        const double d = (w2 - ab) * (w2 - ab) + w2 * apb * apb;
        return -wp2 * (w2 - ab) / d;
    };
    const auto im_part = [=](double w) {
        const double w2 = w * w;
        const double d = (w2 - ab) * (w2 - ab) + w2 * apb * apb;
        return wp2 * w * apb / d;
    };

    if (tau == 0.0) {
        // No oscillation: plain adaptive quadrature with a 1/w tail substitution.
        const double split = 50.0 * std::max({a, b, 1.0});
        quad::Options opts{rel_tol, 0.0, 15};
        const auto head = quad::integrate(re_part, 0.0, split, opts);
        const auto tail = quad::integrate(
            [=](double u) {
                // w = 1/u; R(1/u)/u^2 stays bounded as u -> 0.
                const double num = 1.0 - ab * u * u;
                const double den = num * num + apb * apb * u * u;
                return -wp2 * num / den;
            },
            0.0, 1.0 / split, opts);
        return (head.value + tail.value) / kPi;
    }

    const auto cos_result = ooura_cos(rel_tol).integrate(re_part, tau);
    const auto sin_result = ooura_sin(rel_tol).integrate(im_part, tau);
    return (cos_result.first + sin_result.first) / kPi;
}

KernelRecoveryResult recover_kernel(const DielectricModel& model,
                                    const std::vector<double>& tau_grid,
                                    const std::vector<double>& ladder, int order,
                                    bool abel_damping, double rel_tol) {
    require_valid(model);
    const auto* drude = std::get_if<Drude>(&model);
    if (!drude)
        throw UnsupportedModel("kernel recovery requires the bare Drude model, got " +
                               model_label(model));
    if (ladder.size() < 3)
        throw ExtrapolationDiverged("kernel recovery: regularization ladder needs at least "
                                    "3 stages");

    KernelRecoveryResult out;
    out.ladder = ladder;
    out.points.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        if (tau < 0.0)
            throw std::invalid_argument("kernel recovery: tau grid must be non-negative");
        KernelRecoveryPoint pt;
        pt.tau = tau;
        pt.stage_values.reserve(ladder.size());
        for (double reg : ladder) {
            double value;
            if (abel_damping) {
                // f(tau) e^{-eta tau} is the kernel of the model shifted by
                // i eta in both factors; undo the damping afterwards.
                value = std::exp(reg * tau) *
                        invert_shifted_drude(drude->omega_p, reg, drude->gamma + reg, tau,
                                             rel_tol);
            } else {
                value = invert_shifted_drude(drude->omega_p, reg, drude->gamma, tau, rel_tol);
            }
            pt.stage_values.push_back(value);
        }
        const auto extr = quad::extrapolate_to_zero(ladder, pt.stage_values, order);
        pt.recovered = extr.estimate;
        pt.observed_rate = extr.observed_rate;
        out.points.push_back(std::move(pt));
    }
    return out;
}

} // namespace

SampledSpectrum spectrum_of(const SampledSignal& signal, double omega_max, std::size_t n) {
    require_signal_sane(signal);
    if (!(omega_max > 0.0) || n < 3)
        throw std::invalid_argument("spectrum_of: need omega_max > 0 and n >= 3");

    const double peak = max_abs(signal.values);
    if (peak > 0.0) {
        const double edge = std::max(std::abs(signal.values.front()),
                                     std::abs(signal.values.back()));
        if (edge > kDecayThreshold * peak)
            throw NotDecayed("spectrum_of: signal does not decay below 1e-12 of its peak at "
                             "the grid ends; its Fourier transform is not classical");
    }

    SampledSpectrum spec;
    spec.omega0 = -omega_max;
    spec.domega = 2.0 * omega_max / static_cast<double>(n - 1);
    spec.values.resize(n);

    const double scale = signal.dt / (2.0 * kPi);
    const std::size_t m = signal.values.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = spec.omega_at(k);
        quad::KahanSum re, im;
        for (std::size_t j = 0; j < m; ++j) {
            // Trapezoid: endpoint samples carry half weight.
            const double weight = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
            const double v = weight * signal.values[j];
            const double phase = w * signal.time_at(j);
            re.add(v * std::cos(phase));
            im.add(v * std::sin(phase));
        }
        spec.values[k] = scale * std::complex<double>(re.value(), im.value());
    }
    return spec;
}

SampledSpectrum spectrum_of(const SampledSignal& signal) {
    require_signal_sane(signal);
    const double span = signal.dt * static_cast<double>(signal.values.size() - 1);
    const double omega_max = kPi / (4.0 * signal.dt);
    const double domega = kPi / span;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * omega_max / domega)) + 1;
    if (n % 2 == 0)
        ++n; // keep a node at omega = 0
    return spectrum_of(signal, omega_max, n);
}

InverseResult signal_of(const SampledSpectrum& spectrum, double t0, double dt, std::size_t n) {
    if (spectrum.values.size() < 3)
        throw std::invalid_argument("signal_of: need at least 3 spectrum samples");
    if (!(dt > 0.0) || n < 2)
        throw std::invalid_argument("signal_of: need dt > 0 and n >= 2");

    const double peak = max_abs(spectrum.values);
    if (peak > 0.0) {
        const double edge = std::max(std::abs(spectrum.values.front()),
                                     std::abs(spectrum.values.back()));
        if (edge > kDecayThreshold * peak)
            throw NotDecayed("signal_of: spectrum does not decay below 1e-12 of its peak at "
                             "the grid ends");
    }

    InverseResult out;
    out.signal.t0 = t0;
    out.signal.dt = dt;
    out.signal.values.resize(n);
    const std::size_t m = spectrum.values.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        quad::KahanSum re, im;
        for (std::size_t j = 0; j < m; ++j) {
            const double weight = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
            const auto v = weight * spectrum.values[j];
            const double phase = -spectrum.omega_at(j) * t;
            const double c = std::cos(phase);
            const double s = std::sin(phase);
            re.add(v.real() * c - v.imag() * s);
            im.add(v.real() * s + v.imag() * c);
        }
        out.signal.values[k] = spectrum.domega * re.value();
        out.imag_residue = std::max(out.imag_residue, spectrum.domega * std::abs(im.value()));
    }
    return out;
}

InverseResult signal_of(const SampledSpectrum& spectrum) {
    const double omega_span =
        spectrum.domega * static_cast<double>(spectrum.values.size() - 1);
    const double omega_max = std::abs(spectrum.omega0) + omega_span; // loose upper bound
    const double dt = kPi / (2.0 * omega_max);
    const double t_max = 0.5 * kPi / spectrum.domega;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * t_max / dt)) + 1;
    return signal_of(spectrum, -t_max, dt, n);
}

double conjugate_symmetry_defect(const SampledSpectrum& spectrum) {
    const std::size_t n = spectrum.values.size();
    if (n < 2)
        return 0.0;
    const double end = spectrum.omega_at(n - 1);
    if (std::abs(spectrum.omega0 + end) > 1e-9 * spectrum.domega)
        throw std::invalid_argument("conjugate_symmetry_defect: grid is not symmetric "
                                    "around omega = 0");
    const double peak = max_abs(spectrum.values);
    if (peak == 0.0)
        return 0.0;
    double defect = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto mirrored = spectrum.values[n - 1 - j];
        defect = std::max(defect, std::abs(mirrored - std::conj(spectrum.values[j])));
    }
    return defect / peak;
}

namespace {

double abel_halfline_trig(const TemporalKernel& kernel, double omega, double eta, bool cosine,
                          const quad::Options& opts) {
    if (!(omega > 0.0))
        throw std::invalid_argument("abel half-line transform: omega must be > 0");
    if (!(eta >= 0.0))
        throw std::invalid_argument("abel half-line transform: eta must be >= 0");
    if (eta == 0.0 && !kernel_is_decaying(kernel))
        throw QuadratureFailure("abel half-line transform: eta = 0 with a non-decaying kernel; "
                                "the classical integral does not converge");

    const double rate = eta + kernel_decay_rate(kernel);
    const double scale =
        std::max({kernel_envelope(kernel, 0.0), kernel_envelope(kernel, 1.0 / rate), 1e-300});
    const auto envelope = [&](double tau) {
        return kernel_envelope(kernel, tau) * std::exp(-eta * tau);
    };
    const double horizon =
        quad::truncation_horizon(envelope, 1e-15 * scale, 1.0 / rate, 1e12);

    const double osc = std::max(omega, kernel_oscillation_frequency(kernel));
    const auto integrand = [&](double tau) {
        const double trig = cosine ? std::cos(omega * tau) : std::sin(omega * tau);
        return eval_kernel(kernel, tau) * std::exp(-eta * tau) * trig;
    };
    return quad::integrate_oscillatory(integrand, 0.0, horizon, osc, opts).value;
}

AbelLimit abel_limit_impl(const TemporalKernel& kernel, double omega,
                          const std::vector<double>& ladder, bool cosine,
                          const quad::Options& opts) {
    if (ladder.size() < 3)
        throw ExtrapolationDiverged("abel limit: eta ladder needs at least 3 stages");
    std::vector<double> values;
    values.reserve(ladder.size());
    for (double eta : ladder)
        values.push_back(abel_halfline_trig(kernel, omega, eta, cosine, opts));
    AbelLimit out;
    out.diagnostics = quad::extrapolate_to_zero(ladder, values,
                                                static_cast<int>(ladder.size()) - 1);
    out.value = out.diagnostics.estimate;
    return out;
}

} // namespace

double abel_halfline_cosine(const TemporalKernel& kernel, double omega, double eta,
                            const quad::Options& opts) {
    return abel_halfline_trig(kernel, omega, eta, true, opts);
}

double abel_halfline_sine(const TemporalKernel& kernel, double omega, double eta,
                          const quad::Options& opts) {
    return abel_halfline_trig(kernel, omega, eta, false, opts);
}

AbelLimit abel_limit_cosine(const TemporalKernel& kernel, double omega,
                            const std::vector<double>& eta_ladder, const quad::Options& opts) {
    return abel_limit_impl(kernel, omega, eta_ladder, true, opts);
}

AbelLimit abel_limit_sine(const TemporalKernel& kernel, double omega,
                          const std::vector<double>& eta_ladder, const quad::Options& opts) {
    return abel_limit_impl(kernel, omega, eta_ladder, false, opts);
}

std::vector<double> default_regularization_ladder() {
    return {0.05, 0.025, 0.0125, 0.00625, 0.003125};
}

KernelRecoveryResult theta_regularized_kernel_recovery(const DielectricModel& model,
                                                       const std::vector<double>& tau_grid,
                                                       const RegularizationLadder& ladder,
                                                       double quad_rel_tol) {
    return recover_kernel(model, tau_grid, ladder.thetas, ladder.order, false, quad_rel_tol);
}

KernelRecoveryResult abel_damped_kernel_recovery(const DielectricModel& model,
                                                 const std::vector<double>& tau_grid,
                                                 const std::vector<double>& eta_ladder,
                                                 double quad_rel_tol) {
    return recover_kernel(model, tau_grid, eta_ladder,
                          static_cast<int>(eta_ladder.size()) - 1, true, quad_rel_tol);
}

ContourKernelParts drude_contour_oracle(const DielectricModel& model, double tau) {
    require_valid(model);
    const auto* drude = std::get_if<Drude>(&model);
    if (!drude)
        throw UnsupportedModel("drude_contour_oracle: requires the bare Drude model");
    const double amp = drude->omega_p * drude->omega_p / (2.0 * drude->gamma);
    ContourKernelParts parts;
    parts.regular_part = -amp * std::exp(-drude->gamma * std::abs(tau));
    if (tau >= 0.0)
        parts.pole_part = amp * (2.0 - std::exp(-drude->gamma * tau));
    else
        parts.pole_part = amp * std::exp(drude->gamma * tau);
    parts.f = parts.regular_part + parts.pole_part;
    return parts;
}

} // namespace disperse
