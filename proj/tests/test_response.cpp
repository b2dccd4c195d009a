#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "disperse/errors.hpp"
#include "disperse/models.hpp"
#include "disperse/response.hpp"
#include "test_helpers.hpp"

using namespace disperse;

namespace {

const DielectricModel kDrude = Drude{1.0, 0.5};
const DielectricModel kRegDrude01 = RegularizedDrude{1.0, 0.5, 0.1};
const DielectricModel kLorentz = LorentzSum{{{1.0, 1.0, 0.1}}};
const DielectricModel kPlasma = Plasma{1.0};
const DielectricModel kSkin = NormalSkin{1.0 / (4.0 * testutil::kPi)};
const GaussianPulse kPulse{1.0, 0.2};

// Exact closed-form displacement of the reference conductor at t = 30,
// frozen from a high-precision evaluation.
constexpr double kDrudeD30 = 7.926651280927938;
constexpr double kDrudeD0 = 2.6382793039094335;

} // namespace

TEST_CASE("pulse value and spectrum") {
    CHECK(pulse_value(kPulse, 0.0) == 1.0);
    CHECK(pulse_value(kPulse, 40.0) < 1e-100);
    CHECK(pulse_value(kPulse, -40.0) < 1e-100);
    CHECK(std::abs(pulse_value({2.0, 0.5}, 1.0) - 1.2130613194252668) < 1e-15);
    CHECK(std::abs(pulse_value({2.0, 0.5}, 1.0) - 1.2130613) < 1e-7);

    CHECK(std::abs(pulse_spectrum(kPulse, 0.0) - 0.6307831305) < 1e-10);
    for (double w : {0.3, 1.7, 4.0})
        CHECK(pulse_spectrum(kPulse, -w) == pulse_spectrum(kPulse, w));

    // The inverse transform at t = 0 recovers E(0) = E0.
    const double integral =
        quad::integrate([&](double w) { return pulse_spectrum(kPulse, w); }, -8.0, 8.0,
                        {1e-10, 0.0, 15})
            .value;
    CHECK(std::abs(integral - 1.0) <= 1e-8);

    CHECK_THROWS_AS((void)pulse_value({1.0, -0.2}, 0.0), std::invalid_argument);
}

TEST_CASE("convolution path: conductor residual and causality") {
    const auto kernel = kernel_for(kDrude);
    const double d30 = displacement_convolution(kernel, kPulse, 30.0);
    CHECK(std::abs(d30 - kDrudeD30) <= 1e-8);
    CHECK(std::abs(d30 - 7.9266546) <= 1e-5);

    for (const auto& model : {kDrude, kRegDrude01, kLorentz, kPlasma, kSkin}) {
        const double before = displacement_convolution(kernel_for(model), kPulse, -30.0);
        CHECK(std::abs(before) <= 1e-10);
    }

    // Constant kernel: D(t) = E(t) + 4 pi sigma0 * integral of E up to t.
    const double skin30 = displacement_convolution(kernel_for(kSkin), kPulse, 30.0);
    CHECK(std::abs(skin30 - testutil::kHalfResidual) <= 1e-8);
    CHECK(std::abs(skin30 - 3.9633273) <= 1e-5);
}

TEST_CASE("closed form: conductor spot value cross-checked by convolution") {
    const double d0 = displacement_closed_form(kDrude, kPulse, 0.0);
    CHECK(std::abs(d0 - kDrudeD0) <= 1e-12);
    CHECK(std::abs(d0 - 2.638) <= 1e-3);
    const double conv0 = displacement_convolution(kernel_for(kDrude), kPulse, 0.0);
    CHECK(std::abs(d0 - conv0) <= 1e-8);

    CHECK(std::abs(displacement_closed_form(kDrude, kPulse, 30.0) - kDrudeD30) <= 1e-12);
    CHECK_THROWS_AS((void)displacement_closed_form(kPlasma, kPulse, 0.0), UnsupportedModel);
    CHECK_THROWS_AS((void)displacement_closed_form(kSkin, kPulse, 0.0), UnsupportedModel);
}

TEST_CASE("closed form: theta -> 0 recovers the bare-conductor displacement") {
    for (double t : {-2.0, 0.0, 1.0, 2.0}) {
        const double bare = displacement_closed_form(kDrude, kPulse, t);
        double prev = std::numeric_limits<double>::infinity();
        for (double theta : {0.1, 0.01, 0.001}) {
            const double dev = std::abs(displacement_closed_form(
                                   DielectricModel(RegularizedDrude{1.0, 0.5, theta}),
                                   kPulse, t) -
                               bare);
            CHECK(dev < prev);
            prev = dev;
        }
        CHECK(prev <= 0.02 * std::abs(bare)); // O(theta) with theta = 1e-3
    }
}

TEST_CASE("closed form: theta == gamma removable point") {
    const DielectricModel critical = RegularizedDrude{1.0, 0.5, 0.5};
    const auto kernel = kernel_for(critical);
    for (double t : {-1.0, 0.0, 2.0}) {
        const double closed = displacement_closed_form(critical, kPulse, t);
        const double conv = displacement_convolution(kernel, kPulse, t);
        CHECK(std::abs(closed - conv) <= 1e-8 * std::max(1.0, std::abs(conv)));
    }
}

TEST_CASE("closed form: insulator vanishes before and long after the pulse") {
    CHECK(std::abs(displacement_closed_form(kLorentz, kPulse, -30.0)) <= 1e-8);
    // At +30 the oscillator ringdown is still alive; the closed form must
    // track the convolution, not zero.
    const double ring = displacement_closed_form(kLorentz, kPulse, 30.0);
    const double conv = displacement_convolution(kernel_for(kLorentz), kPulse, 30.0);
    CHECK(std::abs(ring - conv) <= 1e-8);
    CHECK(std::abs(ring - (-0.2552676590508802)) <= 1e-10);
    // By the settle horizon (20 / slowest rate) it is gone on both sides.
    const double horizon = settle_horizon(kLorentz, kPulse);
    CHECK(horizon == doctest::Approx(400.0));
    CHECK(std::abs(displacement_closed_form(kLorentz, kPulse, horizon)) <= 1e-8);
    CHECK(std::abs(displacement_closed_form(kLorentz, kPulse, -horizon)) <= 1e-8);

    // Frozen mid-pulse values, cross-checked against the convolution path.
    for (auto [t, expected] : {std::pair{0.0, 2.1031324793355823},
                               std::pair{1.0, 2.2875967788081741}}) {
        CHECK(std::abs(displacement_closed_form(kLorentz, kPulse, t) - expected) <= 1e-12);
        CHECK(std::abs(displacement_convolution(kernel_for(kLorentz), kPulse, t) - expected) <=
              1e-8);
    }
}

TEST_CASE("closed form: two-oscillator sum tracks the convolution everywhere") {
    const DielectricModel pair = LorentzSum{{{1.0, 1.0, 0.1}, {0.5, 2.3, 0.6}}};
    const auto kernel = kernel_for(pair);
    for (double t : {-4.0, -1.0, 0.0, 0.5, 2.0, 8.0, 30.0}) {
        const double closed = displacement_closed_form(pair, kPulse, t);
        const double conv = displacement_convolution(kernel, kPulse, t);
        CHECK(std::abs(closed - conv) <= 1e-8 * std::max(1.0, std::abs(conv)));
    }
}

TEST_CASE("closed form: theta above gamma is just as valid") {
    const DielectricModel reg = RegularizedDrude{1.0, 0.5, 0.8};
    const auto kernel = kernel_for(reg);
    for (double t : {-2.0, 0.0, 1.0, 5.0}) {
        const double closed = displacement_closed_form(reg, kPulse, t);
        const double conv = displacement_convolution(kernel, kPulse, t);
        CHECK(std::abs(closed - conv) <= 1e-8 * std::max(1.0, std::abs(conv)));
    }
}

TEST_CASE("empty oscillator sum degenerates to the vacuum response") {
    const DielectricModel vacuum = LorentzSum{};
    CHECK(eval_epsilon(vacuum, {1.3, 0.0}) == std::complex<double>(1.0, 0.0));
    CHECK(eval_kernel(kernel_for(vacuum), 2.0) == 0.0);
    for (double t : {-1.0, 0.0, 3.0}) {
        CHECK(displacement_closed_form(vacuum, kPulse, t) == pulse_value(kPulse, t));
        CHECK(std::abs(displacement_convolution(kernel_for(vacuum), kPulse, t) -
                       pulse_value(kPulse, t)) <= 1e-15);
    }
}

TEST_CASE("spectral path: conductor gives the shifted quantity") {
    TimeGrid edge{30.0, 1.0, 1};
    const auto plus = displacement_spectral(kDrude, kPulse, edge);
    CHECK(plus.tilde);
    CHECK(std::abs(plus.signal.values[0] - testutil::kHalfResidual) <= 1e-4);

    TimeGrid minus_grid{-30.0, 1.0, 1};
    const auto minus = displacement_spectral(kDrude, kPulse, minus_grid);
    CHECK(std::abs(minus.signal.values[0] + testutil::kHalfResidual) <= 1e-4);

    // The offset to the convolution path is constant over the pulse window.
    TimeGrid grid{-10.0, 0.25, 81};
    const auto spec = displacement_spectral(kDrude, kPulse, grid);
    const auto kernel = kernel_for(kDrude);
    double mean = 0.0;
    std::vector<double> offsets(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        offsets[i] = spec.signal.values[i] -
                     displacement_convolution(kernel, kPulse, grid.at(i));
        mean += offsets[i];
    }
    mean /= static_cast<double>(grid.n);
    CHECK(std::abs(mean - (-testutil::kHalfResidual)) <= 1e-4);
    double spread = 0.0;
    for (double o : offsets)
        spread = std::max(spread, std::abs(o - mean));
    CHECK(spread <= 1e-4 * std::abs(mean));
}

TEST_CASE("spectral path: insulator and regularized conductor compute D itself") {
    TimeGrid grid{-10.0, 0.5, 41};
    for (const auto& model : {kLorentz, kRegDrude01}) {
        const auto spec = displacement_spectral(model, kPulse, grid);
        CHECK_FALSE(spec.tilde);
        double peak = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i)
            peak = std::max(peak,
                            std::abs(displacement_closed_form(model, kPulse, grid.at(i))));
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double closed = displacement_closed_form(model, kPulse, grid.at(i));
            CHECK(std::abs(spec.signal.values[i] - closed) <= 1e-6 * peak);
        }
    }
    CHECK_THROWS_AS((void)displacement_spectral(kPlasma, kPulse, grid), UnboundedSpectrum);
    CHECK(displacement_spectral(kSkin, kPulse, TimeGrid{0.0, 1.0, 1}).tilde);
}

TEST_CASE("asymptotic limits per model") {
    const auto drude = asymptotic_limits(kDrude, kPulse);
    CHECK(drude.d_plus_inf.kind == LimitKind::finite);
    CHECK(std::abs(drude.d_plus_inf.value - testutil::kResidual) < 1e-14);
    CHECK(std::abs(drude.d_plus_inf.value - 7.9266546) < 1e-7);
    CHECK(drude.d_minus_inf.value == 0.0);
    CHECK(std::abs(drude.d_tilde_plus_inf.value - testutil::kHalfResidual) < 1e-14);
    CHECK(std::abs(drude.d_tilde_minus_inf.value + testutil::kHalfResidual) < 1e-14);
    CHECK(std::abs(drude.d_tilde_plus_inf.value - 3.9633273) < 1e-7);
    CHECK(drude.horizon == doctest::Approx(30.0 / std::sqrt(0.2)));

    const auto reg = asymptotic_limits(kRegDrude01, kPulse);
    CHECK(reg.d_plus_inf.value == 0.0);
    CHECK(reg.d_minus_inf.value == 0.0);

    const auto lorentz = asymptotic_limits(kLorentz, kPulse);
    CHECK(lorentz.d_plus_inf.value == 0.0);
    CHECK(lorentz.d_minus_inf.value == 0.0);

    const auto plasma = asymptotic_limits(kPlasma, kPulse);
    CHECK(plasma.d_plus_inf.kind == LimitKind::divergent);
    CHECK(plasma.d_minus_inf.kind == LimitKind::finite);

    const auto skin = asymptotic_limits(kSkin, kPulse);
    CHECK(std::abs(skin.d_plus_inf.value - testutil::kHalfResidual) < 1e-14);
}

TEST_CASE("limit-order probe: the two iterated limits disagree by the residual") {
    const std::vector<double> thetas{0.1, 0.001, 0.0};
    const std::vector<double> horizons{30.0, 300.0, 3000.0};
    const auto probe = limit_order_probe(kDrude, kPulse, thetas, horizons);

    CHECK(std::abs(probe.residual_after_pulse - testutil::kResidual) < 1e-14);
    CHECK(probe.iterated_other_way == 0.0);

    // theta = 0.001 at T = 30 is still near the bare residual ...
    const double near = probe.d_plus[1][0];
    CHECK(std::abs(near - 7.70780846604246) <= 1e-9);
    CHECK(std::abs(near - testutil::kResidual) <= 0.03 * testutil::kResidual);
    // ... and cross-checks against the convolution with the theta kernel.
    const double conv = displacement_convolution(
        kernel_for(DielectricModel(RegularizedDrude{1.0, 0.5, 0.001})), kPulse, 30.0);
    CHECK(std::abs(near - conv) <= 1e-6);

    // theta = 0.1 at T = 3000 has fully decayed.
    CHECK(std::abs(probe.d_plus[0][2]) <= 1e-6);

    // The theta = 0 column is exactly the bare closed form.
    for (std::size_t j = 0; j < horizons.size(); ++j)
        CHECK(probe.d_plus[2][j] == displacement_closed_form(kDrude, kPulse, horizons[j]));

    CHECK_THROWS_AS((void)limit_order_probe(kLorentz, kPulse, thetas, horizons),
                    UnsupportedModel);
}

TEST_CASE("theta -> 0 converges uniformly on compacts, yet every theta > 0 forgets "
          "the residual") {
    double prev_sup = std::numeric_limits<double>::infinity();
    for (double theta : {0.1, 0.01, 0.001}) {
        const DielectricModel reg = RegularizedDrude{1.0, 0.5, theta};
        double sup = 0.0;
        for (double t = -10.0; t <= 10.0; t += 0.5)
            sup = std::max(sup, std::abs(displacement_closed_form(reg, kPulse, t) -
                                         displacement_closed_form(kDrude, kPulse, t)));
        CHECK(sup < prev_sup);
        prev_sup = sup;
        // At fixed theta the displacement still dies out at both ends.
        const double far = 40.0 / theta;
        CHECK(std::abs(displacement_closed_form(reg, kPulse, far)) <= 1e-10);
        CHECK(std::abs(displacement_closed_form(reg, kPulse, -far)) <= 1e-10);
    }
    CHECK(prev_sup <= 0.02 * testutil::kResidual);
}

TEST_CASE("conductor residual saturates monotonically") {
    const auto kernel = kernel_for(kDrude);
    const double sb = std::sqrt(0.2);
    double prev = 0.0;
    for (double scaled : {5.0, 10.0, 15.0, 20.0, 25.0, 30.0}) {
        const double v = displacement_convolution(kernel, kPulse, scaled / sb);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(std::abs(prev - testutil::kResidual) <= 1e-6 * testutil::kResidual);
}

TEST_CASE("linearity: doubling the amplitude doubles every path exactly") {
    const GaussianPulse twice{2.0, 0.2};
    const auto kernel = kernel_for(kDrude);
    for (double t : {-3.0, 0.0, 2.0, 10.0}) {
        CHECK(displacement_convolution(kernel, twice, t) ==
              doctest::Approx(2.0 * displacement_convolution(kernel, kPulse, t))
                  .epsilon(1e-14));
        CHECK(displacement_closed_form(kDrude, twice, t) ==
              doctest::Approx(2.0 * displacement_closed_form(kDrude, kPulse, t))
                  .epsilon(1e-14));
    }
    TimeGrid grid{-2.0, 2.0, 3};
    const auto one = displacement_spectral(kLorentz, kPulse, grid);
    const auto two = displacement_spectral(kLorentz, twice, grid);
    for (std::size_t i = 0; i < grid.n; ++i)
        CHECK(two.signal.values[i] ==
              doctest::Approx(2.0 * one.signal.values[i]).epsilon(1e-14));
}

TEST_CASE("causality: nothing moves before the field arrives") {
    const double t_early = -10.0 / std::sqrt(0.2);
    for (const auto& model : {kDrude, kRegDrude01, kLorentz, kPlasma, kSkin})
        CHECK(std::abs(displacement_convolution(kernel_for(model), kPulse, t_early)) <=
              1e-10);
    for (const auto& model : {kDrude, kRegDrude01, kLorentz})
        CHECK(std::abs(displacement_closed_form(model, kPulse, t_early)) <= 1e-10);
}

TEST_CASE("consistency report: insulator, conductor, and collisionless cases") {
    ConsistencySettings settings;
    settings.grid = TimeGrid{-10.0, 0.25, 81};

    const auto lorentz = consistency_report(kLorentz, kPulse, settings);
    CHECK(lorentz.convolution.ok);
    CHECK(lorentz.spectral.ok);
    CHECK(lorentz.closed_form.ok);
    CHECK_FALSE(lorentz.spectral_is_tilde);
    double peak = 0.0;
    for (double v : lorentz.convolution.values)
        peak = std::max(peak, std::abs(v));
    CHECK(lorentz.dev_conv_spec <= 1e-6 * peak);
    CHECK(lorentz.dev_conv_closed <= 1e-6 * peak);
    CHECK(lorentz.dev_spec_closed <= 1e-6 * peak);

    const auto drude = consistency_report(kDrude, kPulse, settings);
    CHECK(drude.spectral_is_tilde);
    CHECK(drude.dev_conv_closed <= 1e-6);
    CHECK(std::abs(drude.tilde_offset - (-3.9633273)) <= 1e-4);
    CHECK(std::abs(drude.tilde_offset - drude.tilde_offset_expected) <= 1e-4);
    CHECK(drude.tilde_offset_stddev <= 1e-4 * std::abs(drude.tilde_offset));
    CHECK(std::abs(drude.conv_at_plus_horizon - testutil::kResidual) <= 1e-5);

    // The theta-regularized conductor is integrable: all three paths agree.
    const auto reg = consistency_report(kRegDrude01, kPulse, settings);
    CHECK_FALSE(reg.spectral_is_tilde);
    double reg_peak = 0.0;
    for (double v : reg.convolution.values)
        reg_peak = std::max(reg_peak, std::abs(v));
    CHECK(reg.dev_conv_spec <= 1e-6 * reg_peak);
    CHECK(reg.dev_conv_closed <= 1e-6 * reg_peak);
    CHECK(reg.dev_spec_closed <= 1e-6 * reg_peak);

    const auto plasma = consistency_report(kPlasma, kPulse, settings);
    CHECK(plasma.convolution.ok);
    CHECK_FALSE(plasma.closed_form.ok);
    CHECK(plasma.closed_form.error.find("closed form") != std::string::npos);
    CHECK_FALSE(plasma.spectral.ok);
    CHECK(plasma.limits.d_plus_inf.kind == LimitKind::divergent);

    const auto j = drude.to_json();
    CHECK(j.at("spectral_is_tilde") == true);
    CHECK(j.at("paths").at("convolution").at("ok") == true);
}
