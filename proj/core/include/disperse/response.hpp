// response.hpp -- electric displacement for a Gaussian probe pulse computed
// through three independent paths (time-domain convolution, spectral
// multiplication, closed form), the exact asymptotic limits, the theta/T
// limit-order probe, and the consistency report that ties them together.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "disperse/kernels.hpp"
#include "disperse/models.hpp"
#include "disperse/quadrature.hpp"
#include "disperse/transforms.hpp"

namespace disperse {

struct GaussianPulse {
    double amplitude = 1.0; // E0
    double beta = 1.0;      // width parameter, inverse time^2
};

double pulse_value(const GaussianPulse& p, double t);

/// Closed-form spectrum E0 exp(-w^2/(4 beta)) / (2 sqrt(pi beta)); real and even.
double pulse_spectrum(const GaussianPulse& p, double omega);

struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 2;

    double at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

/// D(t) = E(t) + int_0^inf f(tau) E(t - tau) dtau by adaptive quadrature over
/// the Gaussian support window. Works for every kernel family: the Gaussian
/// tail makes the integral convergent even for growing kernels.
double displacement_convolution(const TemporalKernel& kernel, const GaussianPulse& p, double t,
                                const quad::Options& opts = {1e-9, 0.0, 15});

/// The closed-form displacement. Drude, RegularizedDrude and LorentzSum only;
/// Plasma/NormalSkin have no closed form here (UnsupportedModel) -- use the
/// convolution path. All exp(...) erfc(...) factors are evaluated through the
/// scaled complementary error function, never as a naked product.
double displacement_closed_form(const DielectricModel& model, const GaussianPulse& p, double t);

struct SpectralSettings {
    double omega_max = 0.0; // <= 0: derived from the pulse width
    std::size_t pairs = 0;  // number of positive midpoint nodes; 0: 32768
};

struct SpectralDisplacement {
    SampledSignal signal;
    // True for models with a simple pole at omega = 0 (Drude, NormalSkin):
    // the symmetric-grid principal-value evaluation omits the delta-type
    // contribution there and yields the shifted quantity, not D itself.
    bool tilde = false;
};

/// Inverse transform of eps(w) E(w) on a symmetric midpoint grid (no node at
/// omega = 0; odd 1/w singularities cancel pairwise). Plasma's double pole is
/// even -- no cancellation -- and throws UnboundedSpectrum.
SpectralDisplacement displacement_spectral(const DielectricModel& model, const GaussianPulse& p,
                                           const TimeGrid& grid, const SpectralSettings& s = {});

enum class LimitKind { finite, divergent, not_available };

struct LimitValue {
    LimitKind kind = LimitKind::not_available;
    double value = 0.0;
};

struct AsymptoticLimits {
    LimitValue d_plus_inf;
    LimitValue d_minus_inf;
    LimitValue d_tilde_plus_inf;
    LimitValue d_tilde_minus_inf;
    double horizon = 0.0; // T*: where finite-horizon checks evaluate "infinity"
};

/// Exact t -> +-inf limits of the displacement (and of the spectral-path
/// quantity where it differs). Plasma's forward limit is reported as
/// divergent rather than thrown.
AsymptoticLimits asymptotic_limits(const DielectricModel& model, const GaussianPulse& p);

/// Finite horizon standing in for t = +-inf: max(30/sqrt(beta), 20/r) with r
/// the slowest kernel decay/saturation rate of the model.
double settle_horizon(const DielectricModel& model, const GaussianPulse& p);

struct LimitProbeResult {
    std::vector<double> thetas;   // may include 0 (bare model column)
    std::vector<double> horizons; // T values
    // Row-major [theta][T] closed-form displacement at +T and -T.
    std::vector<std::vector<double>> d_plus;
    std::vector<std::vector<double>> d_minus;
    double residual_after_pulse = 0.0; // lim_T lim_theta: E0 (wp^2/g) sqrt(pi/beta)
    double iterated_other_way = 0.0;   // lim_theta lim_T: 0 for every theta > 0
};

/// Tabulates D^(theta)(+-T) over both ladders; the two iterated limits differ
/// by the full residual displacement -- the limits do not commute.
LimitProbeResult limit_order_probe(const DielectricModel& model, const GaussianPulse& p,
                                   const std::vector<double>& theta_ladder,
                                   const std::vector<double>& horizon_ladder);

struct PathCurve {
    bool ok = false;
    std::string error;          // set when the path failed
    std::vector<double> values; // on the shared grid when ok
    bool tilde = false;
};

struct ConsistencyReport {
    std::string model;
    TimeGrid grid;
    std::vector<double> field; // E(t) on the grid
    PathCurve convolution;
    PathCurve spectral;
    PathCurve closed_form;

    // Pairwise max |a - b| over the grid; NaN when a pair is unavailable or
    // the spectral path computes the shifted quantity instead of D.
    double dev_conv_spec = 0.0;
    double dev_conv_closed = 0.0;
    double dev_spec_closed = 0.0;

    // For shifted spectral paths: the constant offset spectral - convolution,
    // its standard deviation over the grid, and the predicted value.
    bool spectral_is_tilde = false;
    double tilde_offset = 0.0;
    double tilde_offset_stddev = 0.0;
    double tilde_offset_expected = 0.0;

    AsymptoticLimits limits;
    double conv_at_plus_horizon = 0.0;
    double conv_at_minus_horizon = 0.0;

    nlohmann::json to_json() const;
};

struct ConsistencySettings {
    TimeGrid grid{-10.0, 0.1, 201};
    quad::Options quad{1e-9, 0.0, 15};
    SpectralSettings spectral{};
};

/// Runs every applicable path on a shared grid. Path errors are recorded in
/// the report (ok = false), never rethrown.
ConsistencyReport consistency_report(const DielectricModel& model, const GaussianPulse& p,
                                     const ConsistencySettings& settings = {});

} // namespace disperse
