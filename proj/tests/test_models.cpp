#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "disperse/errors.hpp"
#include "disperse/models.hpp"
#include "test_helpers.hpp"

using namespace disperse;
using cplx = std::complex<double>;

namespace {

const DielectricModel kDrude = Drude{1.0, 0.5};
const DielectricModel kRegDrude = RegularizedDrude{1.0, 0.5, 0.1};
const DielectricModel kPlasma = Plasma{1.0};
const DielectricModel kSkin = NormalSkin{1.0 / (4.0 * testutil::kPi)};
const DielectricModel kLorentz = LorentzSum{{{1.0, 1.0, 0.1}}};

const std::vector<DielectricModel> kAllModels{kDrude, kRegDrude, kPlasma, kSkin, kLorentz};

} // namespace

TEST_CASE("eval_epsilon closed-form spot values") {
    const cplx drude = eval_epsilon(kDrude, {1.0, 0.0});
    CHECK(std::abs(drude - cplx(0.2, 0.4)) < 1e-14);

    CHECK(std::abs(eval_epsilon(kPlasma, {1.0, 0.0})) < 1e-15);

    const cplx lorentz = eval_epsilon(kLorentz, {0.0, 0.0});
    CHECK(std::abs(lorentz - cplx(2.0, 0.0)) < 1e-14);

    // Gaussian-unit conductivity factor enters as 4 pi sigma0 / omega.
    const cplx skin = eval_epsilon(kSkin, {2.0, 0.0});
    CHECK(std::abs(skin - cplx(1.0, 0.5)) < 1e-14);
}

TEST_CASE("pole guard turns near-pole evaluation into an error") {
    CHECK_THROWS_AS((void)eval_epsilon(kDrude, {0.0, 0.0}), PoleEvaluation);
    CHECK_THROWS_AS((void)eval_epsilon(kDrude, {0.0, -0.5}), PoleEvaluation);
    CHECK_THROWS_AS((void)eval_epsilon(kDrude, {1e-15, 0.0}), PoleEvaluation);
    CHECK_THROWS_AS((void)eval_epsilon(kPlasma, {1e-14, 1e-14}), PoleEvaluation);
    // Wider explicit guard radius.
    CHECK_THROWS_AS((void)eval_epsilon(kDrude, {1e-3, 0.0}, 1e-2), PoleEvaluation);
    CHECK_NOTHROW((void)eval_epsilon(kDrude, {1e-3, 0.0}));
}

TEST_CASE("pole sets with multiplicity") {
    const auto drude = poles(kDrude);
    REQUIRE(drude.size() == 2);
    CHECK(std::abs(drude[0].location) < 1e-300);
    CHECK(std::abs(drude[1].location - cplx(0.0, -0.5)) < 1e-15);

    const auto reg = poles(kRegDrude);
    REQUIRE(reg.size() == 2);
    CHECK(std::abs(reg[0].location - cplx(0.0, -0.1)) < 1e-15);
    CHECK(std::abs(reg[1].location - cplx(0.0, -0.5)) < 1e-15);

    const auto critical = poles(RegularizedDrude{1.0, 0.5, 0.5});
    REQUIRE(critical.size() == 1);
    CHECK(critical[0].multiplicity == 2);

    const auto plasma = poles(kPlasma);
    REQUIRE(plasma.size() == 1);
    CHECK(plasma[0].multiplicity == 2);

    const auto lorentz = poles(kLorentz);
    REQUIRE(lorentz.size() == 2);
    CHECK(std::abs(lorentz[0].location - cplx(0.99874922, -0.05)) < 1e-8);
    CHECK(std::abs(lorentz[1].location - cplx(-0.99874922, -0.05)) < 1e-8);
}

TEST_CASE("validate reports invariant violations") {
    CHECK(validate(kDrude).passed);
    CHECK(validate(kLorentz).passed);

    const auto overdamped = validate(LorentzSum{{{1.0, 1.0, 2.5}}});
    REQUIRE_FALSE(overdamped.passed);
    CHECK(overdamped.failures.front().invariant == "underdamped");

    const auto negative = validate(Drude{1.0, -0.5});
    REQUIRE_FALSE(negative.passed);
    CHECK(negative.failures.front().parameter == "gamma");

    CHECK_THROWS_AS((void)eval_epsilon(Drude{1.0, -0.5}, {1.0, 0.0}), InvalidModel);
    CHECK_THROWS_AS((void)poles(Plasma{0.0}), InvalidModel);
}

TEST_CASE("conjugate symmetry eps(-w) = conj eps(w) on random real frequencies") {
    for (const auto& model : kAllModels) {
        for (int i = 0; i < 1000; ++i) {
            double w = testutil::uniform(-50.0, 50.0);
            if (std::abs(w) < 1e-3)
                w += std::copysign(1e-3, w == 0.0 ? 1.0 : w);
            const cplx plus = eval_epsilon(model, {w, 0.0});
            const cplx minus = eval_epsilon(model, {-w, 0.0});
            CHECK(std::abs(minus - std::conj(plus)) <= 1e-14 * std::abs(plus));
        }
    }
}

TEST_CASE("passivity: Im eps >= 0 for positive real frequencies") {
    for (const auto& model : kAllModels) {
        for (int i = 0; i < 300; ++i) {
            const double w = std::exp(testutil::uniform(std::log(1e-3), std::log(1e3)));
            CHECK(eval_epsilon(model, {w, 0.0}).imag() >= -1e-15);
        }
    }
    // Analytic check for the conductor: wp^2 g / (w (w^2 + g^2)).
    const double w = 0.7;
    const double expected = 0.5 / (w * (w * w + 0.25));
    CHECK(std::abs(eval_epsilon(kDrude, {w, 0.0}).imag() - expected) < 1e-14);
}

TEST_CASE("upper half-plane analyticity: every pole sits on or below the real axis") {
    for (const auto& model : kAllModels)
        for (const auto& p : poles(model))
            CHECK(p.location.imag() <= 0.0);
    for (const auto& model : {kRegDrude, kLorentz})
        for (const auto& p : poles(model))
            CHECK(p.location.imag() < 0.0);
}

TEST_CASE("high-frequency limit |eps - 1| <= C / |w|") {
    for (const auto& model : kAllModels) {
        const double f = characteristic_frequency(model);
        const double w0 = 1e3 * f;
        const double c = std::abs(eval_epsilon(model, {w0, 0.0}) - 1.0) * w0 * 1.001;
        for (double w : {1e4 * f, 1e5 * f, 1e6 * f})
            CHECK(std::abs(eval_epsilon(model, {w, 0.0}) - 1.0) <= c / w);
    }
}

TEST_CASE("gamma -> 0 pointwise limit of the conductor model is the collisionless one") {
    const double w = 1.3;
    const cplx plasma = eval_epsilon(kPlasma, {w, 0.0});
    double prev = std::numeric_limits<double>::infinity();
    for (double g : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double dev = std::abs(eval_epsilon(Drude{1.0, g}, {w, 0.0}) - plasma);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 1e-7);
}

TEST_CASE("dispersion-relation residual for models regular at omega = 0") {
    std::vector<double> grid;
    for (int i = 0; i < 30; ++i)
        grid.push_back(0.1 + (3.0 - 0.1) * i / 29.0);

    const auto lorentz = kramers_kronig_residual(kLorentz, grid);
    CHECK(lorentz.cutoff == doctest::Approx(200.0));
    CHECK(lorentz.max_relative_residual <= 1e-4);

    const auto reg = kramers_kronig_residual(kRegDrude, grid);
    CHECK(reg.max_relative_residual <= 1e-4);

    CHECK_THROWS_AS((void)kramers_kronig_residual(kDrude, grid), SingularAtZero);
    CHECK_THROWS_AS((void)kramers_kronig_residual(kPlasma, grid), SingularAtZero);
    CHECK_THROWS_AS((void)kramers_kronig_residual(kSkin, grid), SingularAtZero);

    // The residual is a truncation effect: it shrinks as the cutoff grows.
    PvSettings near_cut{25.0, 1e-8};
    PvSettings far_cut{400.0, 1e-8};
    const double shrunk = kramers_kronig_residual(kLorentz, grid, far_cut)
                              .max_relative_residual;
    CHECK(shrunk < kramers_kronig_residual(kLorentz, grid, near_cut).max_relative_residual);
    CHECK(shrunk <= 1e-6);
}

TEST_CASE("JSON wire format round trip") {
    for (const auto& model : kAllModels) {
        const auto j = to_json(model);
        const auto back = model_from_json(j);
        CHECK(to_json(back) == j);
    }
    const auto j = to_json(kDrude);
    CHECK(j.at("type") == "drude");
    CHECK(j.at("omega_p") == 1.0);
    CHECK(j.at("gamma") == 0.5);

    CHECK_THROWS_WITH_AS((void)model_from_json({{"type", "drude"}, {"gamma", 0.5}}),
                         "omega_p: required", InvalidModel);
    CHECK_THROWS_AS((void)model_from_json({{"type", "maxwell"}}), InvalidModel);
    CHECK_THROWS_AS((void)model_from_json(nlohmann::json::array()), InvalidModel);
}
