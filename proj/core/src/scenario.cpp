// scenario.cpp -- scenario parsing, experiment execution, artifact emission.

#include "disperse/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "disperse/errors.hpp"
#include "disperse/quadrature.hpp"
#include "disperse/special_functions.hpp"
#include "disperse/transforms.hpp"

namespace disperse {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- parsing --

[[noreturn]] void missing(const std::string& path) {
    throw MalformedScenario(path + ": required");
}

const nlohmann::json* find_member(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        return nullptr;
    return &j.at(key);
}

double need_number(const nlohmann::json& j, const char* key, const std::string& path) {
    const auto* v = find_member(j, key);
    if (!v)
        missing(path);
    if (!v->is_number())
        throw MalformedScenario(path + ": must be a number");
    return v->get<double>();
}

std::size_t need_count(const nlohmann::json& j, const char* key, const std::string& path) {
    const auto* v = find_member(j, key);
    if (!v)
        missing(path);
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() > 0))
        throw MalformedScenario(path + ": must be a positive integer");
    return v->get<std::size_t>();
}

std::vector<double> need_ladder(const nlohmann::json& j, const char* key,
                                const std::string& path, bool allow_zero) {
    const auto* v = find_member(j, key);
    if (!v)
        missing(path);
    if (!v->is_array() || v->empty())
        throw MalformedScenario(path + ": must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
        if (!e.is_number())
            throw MalformedScenario(path + ": must contain numbers only");
        const double x = e.get<double>();
        if (!(x > 0.0) && !(allow_zero && x == 0.0))
            throw MalformedScenario(path + (allow_zero ? ": entries must be >= 0"
                                                       : ": entries must be > 0"));
        out.push_back(x);
    }
    return out;
}

RangeGrid parse_range_grid(const nlohmann::json& g, const std::string& path) {
    RangeGrid out;
    out.min = need_number(g, "min", path + ".min");
    out.max = need_number(g, "max", path + ".max");
    out.n = need_count(g, "n", path + ".n");
    if (!(out.min < out.max))
        throw MalformedScenario(path + ": min must be < max");
    if (out.n < 2)
        throw MalformedScenario(path + ".n: must be >= 2");
    return out;
}

TauGrid parse_tau_grid(const nlohmann::json& g, const std::string& path) {
    TauGrid out;
    out.max = need_number(g, "max", path + ".max");
    out.n = need_count(g, "n", path + ".n");
    if (!(out.max > 0.0))
        throw MalformedScenario(path + ".max: must be > 0");
    if (out.n < 2)
        throw MalformedScenario(path + ".n: must be >= 2");
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = lo + step * static_cast<double>(i);
    xs.back() = hi;
    return xs;
}

// ------------------------------------------------------------ CSV writing --

std::string format_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header)
        : out_(file) {
        if (!out_)
            throw Error("cannot open output file " + file.string());
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << format_cell(values[i]);
        out_ << "\n";
    }

    void row_tagged(const std::string& tag, const std::vector<double>& values) {
        out_ << tag;
        for (double v : values)
            out_ << "," << format_cell(v);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

// ------------------------------------------------------------------ gates --

nlohmann::json gates_to_json(const std::vector<Gate>& gates) {
    auto arr = nlohmann::json::array();
    for (const auto& g : gates)
        arr.push_back({{"name", g.name},
                       {"value", std::isnan(g.value) ? nlohmann::json() : nlohmann::json(g.value)},
                       {"threshold", g.threshold},
                       {"pass", g.pass}});
    return arr;
}

Gate gate_le(const std::string& name, double value, double threshold) {
    return {name, value, threshold, std::isfinite(value) && value <= threshold};
}

// --------------------------------------------------- experiment execution --

struct ExperimentContext {
    const Scenario& sc;
    std::filesystem::path out_dir;
    std::vector<Gate> gates;
    nlohmann::json metrics;
    std::vector<std::string> files;

    std::filesystem::path csv_path() const { return out_dir / (sc.id + ".csv"); }
};

const DielectricModel& need_model(const Scenario& sc) {
    if (!sc.model)
        missing("model");
    return *sc.model;
}

void run_kernel_experiment(ExperimentContext& ctx) {
    const auto& model = need_model(ctx.sc);
    if (!ctx.sc.tau_grid)
        missing("grids.tau");
    const auto kernel = kernel_for(model);
    const bool drude = std::holds_alternative<Drude>(model);

    std::vector<std::string> header{"tau", "f"};
    if (drude) {
        header.push_back("f_cos_pathological");
        header.push_back("f_sin_form");
    }
    CsvWriter csv(ctx.csv_path(), header);
    const auto taus = linspace(0.0, ctx.sc.tau_grid->max, ctx.sc.tau_grid->n);
    for (double tau : taus) {
        std::vector<double> row{tau, eval_kernel(kernel, tau)};
        if (drude) {
            row.push_back(eval_kernel(pathological_kernel(model, PathologicalForm::cosine), tau));
            row.push_back(eval_kernel(pathological_kernel(model, PathologicalForm::sine), tau));
        }
        csv.row(row);
    }
    ctx.files.push_back(ctx.csv_path().string());

    ctx.metrics["family"] = kernel_family_label(kernel.family);
    ctx.metrics["delta_weight"] = TemporalKernel::delta_weight;
    ctx.metrics["decays"] = kernel_is_decaying(kernel);
    ctx.gates.push_back(gate_le("causal_zero_before_onset",
                                std::abs(eval_kernel(kernel, -1.0)), 0.0));
}

void run_recovery_experiment(ExperimentContext& ctx) {
    const auto& model = need_model(ctx.sc);
    if (!ctx.sc.tau_grid)
        missing("grids.tau");

    RegularizationLadder ladder;
    if (!ctx.sc.theta_ladder.empty()) {
        ladder.thetas = ctx.sc.theta_ladder;
        ladder.order = static_cast<int>(ladder.thetas.size()) - 1;
    }
    const auto taus = linspace(0.0, ctx.sc.tau_grid->max, ctx.sc.tau_grid->n);
    const auto rec = theta_regularized_kernel_recovery(model, taus, ladder,
                                                       std::min(1e-11, ctx.sc.tolerances.quad_rel));

    CsvWriter csv(ctx.csv_path(), {"tau", "f_numeric", "f_oracle", "abs_err"});
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double oracle_peak = 0.0;
    for (const auto& pt : rec.points)
        oracle_peak = std::max(oracle_peak, std::abs(drude_contour_oracle(model, pt.tau).f));

    auto diagnostics = nlohmann::json::array();
    for (const auto& pt : rec.points) {
        const double oracle = drude_contour_oracle(model, pt.tau).f;
        const double err = std::abs(pt.recovered - oracle);
        max_abs_err = std::max(max_abs_err, err);
        max_rel_err = std::max(max_rel_err, err / std::max(std::abs(oracle), 1e-3 * oracle_peak));
        csv.row({pt.tau, pt.recovered, oracle, err});

        auto stages = nlohmann::json::array();
        for (std::size_t i = 0; i < rec.ladder.size(); ++i)
            stages.push_back({{"theta", rec.ladder[i]}, {"value", pt.stage_values[i]}});
        diagnostics.push_back({{"tau", pt.tau},
                               {"stages", stages},
                               {"richardson_estimate", pt.recovered},
                               {"rate", std::isnan(pt.observed_rate)
                                            ? nlohmann::json()
                                            : nlohmann::json(pt.observed_rate)}});
    }
    ctx.files.push_back(ctx.csv_path().string());
    ctx.metrics["diagnostics"] = diagnostics;
    ctx.metrics["max_abs_err"] = max_abs_err;
    ctx.gates.push_back(
        gate_le("recovery_max_rel_err", max_rel_err, ctx.sc.tolerances.recovery_rel));
}

TimeGrid to_time_grid(const RangeGrid& g) {
    TimeGrid out;
    out.t0 = g.min;
    out.dt = (g.max - g.min) / static_cast<double>(g.n - 1);
    out.n = g.n;
    return out;
}

SpectralSettings spectral_settings_for(const Scenario& sc) {
    SpectralSettings s;
    if (sc.omega_grid) {
        s.omega_max = std::max(std::abs(sc.omega_grid->min), std::abs(sc.omega_grid->max));
        s.pairs = sc.omega_grid->n / 2;
    }
    return s;
}

ConsistencyReport build_consistency(const Scenario& sc) {
    if (!sc.t_grid)
        missing("grids.t");
    if (!sc.pulse_given)
        missing("pulse");
    ConsistencySettings settings;
    settings.grid = to_time_grid(*sc.t_grid);
    settings.quad.rel_tol = sc.tolerances.quad_rel;
    settings.spectral = spectral_settings_for(sc);
    return consistency_report(need_model(sc), sc.pulse, settings);
}

void write_paths_csv(ExperimentContext& ctx, const ConsistencyReport& rep) {
    CsvWriter csv(ctx.csv_path(), {"t", "E", "D_conv", "D_spec", "D_closed", "flags"});
    for (std::size_t i = 0; i < rep.grid.n; ++i) {
        // flags: bit 0 = spectral path computes the shifted quantity,
        // bit 1 = spectral missing, bit 2 = closed form missing.
        double flags = 0.0;
        if (rep.spectral_is_tilde)
            flags += 1.0;
        if (!rep.spectral.ok)
            flags += 2.0;
        if (!rep.closed_form.ok)
            flags += 4.0;
        csv.row({rep.grid.at(i), rep.field[i],
                 rep.convolution.ok ? rep.convolution.values[i]
                                    : std::numeric_limits<double>::quiet_NaN(),
                 rep.spectral.ok ? rep.spectral.values[i]
                                 : std::numeric_limits<double>::quiet_NaN(),
                 rep.closed_form.ok ? rep.closed_form.values[i]
                                    : std::numeric_limits<double>::quiet_NaN(),
                 flags});
    }
    ctx.files.push_back(ctx.csv_path().string());
}

double curve_peak(const ConsistencyReport& rep) {
    double peak = 0.0;
    if (rep.convolution.ok)
        for (double v : rep.convolution.values)
            peak = std::max(peak, std::abs(v));
    return std::max(peak, 1e-300);
}

void run_displacement_experiment(ExperimentContext& ctx) {
    const auto rep = build_consistency(ctx.sc);
    write_paths_csv(ctx, rep);
    ctx.metrics["report"] = rep.to_json();

    if (!rep.convolution.ok)
        throw QuadratureFailure("displacement: convolution path failed: " +
                                rep.convolution.error);

    // Finite-horizon stand-ins for the t -> +-inf claims.
    if (rep.limits.d_plus_inf.kind == LimitKind::finite) {
        ctx.gates.push_back(gate_le(
            "asymptote_plus",
            std::abs(rep.conv_at_plus_horizon - rep.limits.d_plus_inf.value),
            ctx.sc.tolerances.asymptote_abs));
    }
    ctx.gates.push_back(gate_le("causality_minus",
                                std::abs(rep.conv_at_minus_horizon),
                                ctx.sc.tolerances.causality_abs *
                                    std::max(std::abs(ctx.sc.pulse.amplitude), 1.0)));
}

void run_consistency_experiment(ExperimentContext& ctx) {
    const auto rep = build_consistency(ctx.sc);
    write_paths_csv(ctx, rep);
    ctx.metrics["report"] = rep.to_json();

    const double scale = curve_peak(rep);
    const double tol = ctx.sc.tolerances.path_agreement * scale;
    if (rep.convolution.ok && rep.closed_form.ok)
        ctx.gates.push_back(gate_le("conv_vs_closed", rep.dev_conv_closed, tol));
    if (rep.spectral.ok && !rep.spectral_is_tilde && rep.convolution.ok)
        ctx.gates.push_back(gate_le("conv_vs_spectral", rep.dev_conv_spec, tol));
    if (rep.spectral.ok && rep.spectral_is_tilde && rep.convolution.ok &&
        !std::isnan(rep.tilde_offset_expected)) {
        ctx.gates.push_back(gate_le("tilde_offset_error",
                                    std::abs(rep.tilde_offset - rep.tilde_offset_expected),
                                    ctx.sc.tolerances.offset_abs));
        ctx.gates.push_back(gate_le("tilde_offset_stddev", rep.tilde_offset_stddev,
                                    ctx.sc.tolerances.offset_abs));
    }
}

void run_limit_probe_experiment(ExperimentContext& ctx) {
    const auto& model = need_model(ctx.sc);
    if (!ctx.sc.pulse_given)
        missing("pulse");
    if (ctx.sc.theta_ladder.empty())
        missing("ladders.theta");
    if (ctx.sc.horizon_ladder.empty())
        missing("ladders.T");

    const auto probe =
        limit_order_probe(model, ctx.sc.pulse, ctx.sc.theta_ladder, ctx.sc.horizon_ladder);

    CsvWriter csv(ctx.csv_path(), {"theta", "T", "d_plus", "d_minus"});
    for (std::size_t i = 0; i < probe.thetas.size(); ++i)
        for (std::size_t j = 0; j < probe.horizons.size(); ++j)
            csv.row({probe.thetas[i], probe.horizons[j], probe.d_plus[i][j],
                     probe.d_minus[i][j]});
    ctx.files.push_back(ctx.csv_path().string());

    ctx.metrics["residual_after_pulse"] = probe.residual_after_pulse;
    ctx.metrics["iterated_theta_then_T"] = probe.residual_after_pulse;
    ctx.metrics["iterated_T_then_theta"] = probe.iterated_other_way;

    // theta = 0 column must saturate at the residual; every theta > 0 column
    // must decay back to zero when T grows.
    for (std::size_t i = 0; i < probe.thetas.size(); ++i) {
        const double last = probe.d_plus[i].back();
        if (probe.thetas[i] == 0.0) {
            ctx.gates.push_back(gate_le(
                "bare_column_reaches_residual",
                std::abs(last - probe.residual_after_pulse) / probe.residual_after_pulse,
                ctx.sc.tolerances.limit_zero_abs));
        } else {
            double min_abs = std::abs(probe.d_plus[i].front());
            bool monotone = true;
            for (std::size_t j = 0; j + 1 < probe.horizons.size(); ++j) {
                if (std::abs(probe.d_plus[i][j + 1]) >
                    std::abs(probe.d_plus[i][j]) + 1e-12)
                    monotone = false;
                min_abs = std::min(min_abs, std::abs(probe.d_plus[i][j + 1]));
            }
            const std::string tag = "theta_" + format_cell(probe.thetas[i]);
            ctx.gates.push_back(gate_le(tag + "_decays_to_zero", min_abs,
                                        ctx.sc.tolerances.limit_zero_abs));
            ctx.gates.push_back({tag + "_monotone_tail", monotone ? 0.0 : 1.0, 0.0, monotone});
        }
    }
}

void run_kk_experiment(ExperimentContext& ctx) {
    const auto& model = need_model(ctx.sc);
    if (!ctx.sc.omega_grid)
        missing("grids.omega");
    const auto grid = linspace(ctx.sc.omega_grid->min, ctx.sc.omega_grid->max,
                               ctx.sc.omega_grid->n);
    const auto kk = kramers_kronig_residual(model, grid);

    CsvWriter csv(ctx.csv_path(), {"omega", "dispersion_integral", "re_eps_minus_1",
                                   "abs_residual"});
    for (std::size_t i = 0; i < kk.grid.size(); ++i)
        csv.row({kk.grid[i], kk.dispersion_integral[i], kk.target[i],
                 std::abs(kk.dispersion_integral[i] - kk.target[i])});
    ctx.files.push_back(ctx.csv_path().string());

    ctx.metrics["cutoff"] = kk.cutoff;
    ctx.gates.push_back(gate_le("kk_max_relative_residual", kk.max_relative_residual,
                                ctx.sc.tolerances.kk_residual));
}

// Self-contained oracles for the special-function error tables: a Maclaurin
// series for erf, the large-x asymptotic series for erfc, and direct
// quadrature of the Faddeeva defining integral.
double oracle_erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 80; ++k) {
        term *= -x2 / k;
        sum += term / (2 * k + 1);
    }
    return 2.0 / std::sqrt(kPi) * sum;
}

double oracle_erfc_asymptotic(double x) {
    const double r = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 200; ++k) {
        term *= -(2 * k - 1) * r;
        // Asymptotic series: stop at the smallest term.
        if (std::abs(term) >= prev)
            break;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-18 * std::abs(sum))
            break;
    }
    return std::exp(-x * x) / (x * std::sqrt(kPi)) * sum;
}

std::complex<double> oracle_faddeeva_quadrature(std::complex<double> z) {
    // w(z) = (i/pi) int exp(-t^2)/(z - t) dt for Im z > 0.
    quad::Options opts{1e-12, 0.0, 15};
    const double split = z.real();
    const auto re_f = [&](double t) {
        const std::complex<double> v = std::exp(-t * t) / (z - t);
        return v.real();
    };
    const auto im_f = [&](double t) {
        const std::complex<double> v = std::exp(-t * t) / (z - t);
        return v.imag();
    };
    const double lo = -9.0, hi = 9.0;
    double re = quad::integrate(re_f, lo, split, opts).value +
                quad::integrate(re_f, split, hi, opts).value;
    double im = quad::integrate(im_f, lo, split, opts).value +
                quad::integrate(im_f, split, hi, opts).value;
    return std::complex<double>(0.0, 1.0 / kPi) * std::complex<double>(re, im);
}

void run_specialfn_experiment(ExperimentContext& ctx) {
    CsvWriter csv(ctx.csv_path(),
                  {"check", "arg_re", "arg_im", "got_re", "got_im", "ref_re", "ref_im",
                   "abs_err"});

    // The alternating Maclaurin series loses ~exp(x^2) eps to cancellation,
    // so the series comparison stays inside |x| <= 2.5.
    double max_series_err = 0.0;
    for (double x = -2.5; x <= 2.5 + 1e-12; x += 0.25) {
        const double got = specfn::erf_real(x);
        const double ref = oracle_erf_series(x);
        const double err = std::abs(got - ref);
        max_series_err = std::max(max_series_err, err);
        csv.row_tagged("erf_vs_series", {x, 0.0, got, 0.0, ref, 0.0, err});
    }

    double max_asym_err = 0.0;
    for (double x : {6.0, 8.0, 10.0, 12.0, 15.0, 20.0}) {
        const double got = specfn::erfc_real(x);
        const double ref = oracle_erfc_asymptotic(x);
        const double err = std::abs(got / ref - 1.0);
        max_asym_err = std::max(max_asym_err, err);
        csv.row_tagged("erfc_vs_asymptotic_rel", {x, 0.0, got, 0.0, ref, 0.0, err});
    }

    double max_identity_err = 0.0;
    for (double x = -8.0; x <= 8.0 + 1e-12; x += 0.125) {
        const double s = specfn::erf_real(x) + specfn::erfc_real(x);
        max_identity_err = std::max(max_identity_err, std::abs(s - 1.0));
    }
    csv.row_tagged("erf_plus_erfc_minus_1", {0.0, 0.0, max_identity_err, 0.0, 0.0, 0.0,
                                             max_identity_err});

    double max_w_err = 0.0;
    for (double re = -2.5; re <= 2.51; re += 1.25) {
        for (double im : {0.2, 1.0, 2.5}) {
            const std::complex<double> z{re, im};
            const auto got = specfn::faddeeva_w(z);
            const auto ref = oracle_faddeeva_quadrature(z);
            const double err = std::abs(got - ref) / std::abs(ref);
            max_w_err = std::max(max_w_err, err);
            csv.row_tagged("faddeeva_vs_quadrature_rel",
                           {re, im, got.real(), got.imag(), ref.real(), ref.imag(), err});
        }
    }
    ctx.files.push_back(ctx.csv_path().string());

    ctx.gates.push_back(gate_le("erf_vs_series_abs", max_series_err, 2e-13));
    ctx.gates.push_back(gate_le("erfc_vs_asymptotic_rel", max_asym_err, 1e-12));
    ctx.gates.push_back(gate_le("erf_erfc_identity_abs", max_identity_err, 1e-15));
    ctx.gates.push_back(gate_le("faddeeva_vs_quadrature_rel", max_w_err, 1e-10));
}

} // namespace

std::string experiment_label(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::kernel: return "kernel";
    case ExperimentKind::recovery: return "recovery";
    case ExperimentKind::displacement: return "displacement";
    case ExperimentKind::consistency: return "consistency";
    case ExperimentKind::limit_probe: return "limit-probe";
    case ExperimentKind::kk: return "kk";
    case ExperimentKind::specialfn_selftest: return "specialfn-selftest";
    }
    return "unknown";
}

ExperimentKind experiment_from_label(const std::string& name) {
    for (auto kind :
         {ExperimentKind::kernel, ExperimentKind::recovery, ExperimentKind::displacement,
          ExperimentKind::consistency, ExperimentKind::limit_probe, ExperimentKind::kk,
          ExperimentKind::specialfn_selftest})
        if (experiment_label(kind) == name)
            return kind;
    throw MalformedScenario("experiment: unknown value '" + name +
                            "' (expected kernel, recovery, displacement, consistency, "
                            "limit-probe, kk, specialfn-selftest)");
}

Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw MalformedScenario("scenario: must be a JSON object");
    Scenario sc;

    const auto* id = find_member(j, "id");
    if (!id)
        missing("id");
    if (!id->is_string() || id->get<std::string>().empty())
        throw MalformedScenario("id: must be a non-empty string");
    sc.id = id->get<std::string>();

    if (const auto* d = find_member(j, "description"); d && d->is_string())
        sc.description = d->get<std::string>();

    const auto* exp = find_member(j, "experiment");
    if (!exp)
        missing("experiment");
    if (!exp->is_string())
        throw MalformedScenario("experiment: must be a string");
    sc.experiment = experiment_from_label(exp->get<std::string>());

    if (const auto* m = find_member(j, "model")) {
        try {
            sc.model = model_from_json(*m);
        } catch (const InvalidModel& e) {
            throw MalformedScenario(std::string("model.") + e.what());
        }
        const auto report = validate(*sc.model);
        if (!report.passed)
            throw MalformedScenario("model." + report.failures.front().parameter + ": " +
                                    report.failures.front().message);
    }

    if (const auto* p = find_member(j, "pulse")) {
        sc.pulse.amplitude = need_number(*p, "e0", "pulse.e0");
        sc.pulse.beta = need_number(*p, "beta", "pulse.beta");
        if (!(sc.pulse.beta > 0.0))
            throw MalformedScenario("pulse.beta: must be > 0");
        sc.pulse_given = true;
    }

    if (const auto* grids = find_member(j, "grids")) {
        if (const auto* g = find_member(*grids, "t"))
            sc.t_grid = parse_range_grid(*g, "grids.t");
        if (const auto* g = find_member(*grids, "tau"))
            sc.tau_grid = parse_tau_grid(*g, "grids.tau");
        if (const auto* g = find_member(*grids, "omega"))
            sc.omega_grid = parse_range_grid(*g, "grids.omega");
    }

    if (const auto* ladders = find_member(j, "ladders")) {
        if (find_member(*ladders, "theta"))
            sc.theta_ladder = need_ladder(*ladders, "theta", "ladders.theta",
                                          sc.experiment == ExperimentKind::limit_probe);
        if (find_member(*ladders, "eta"))
            sc.eta_ladder = need_ladder(*ladders, "eta", "ladders.eta", false);
        if (find_member(*ladders, "T"))
            sc.horizon_ladder = need_ladder(*ladders, "T", "ladders.T", false);
    }

    const auto* tol = find_member(j, "tolerances");
    if (tol) {
        const auto opt = [&](const char* key, double& slot) {
            if (const auto* v = find_member(*tol, key)) {
                if (!v->is_number() || !(v->get<double>() > 0.0))
                    throw MalformedScenario(std::string("tolerances.") + key +
                                            ": must be a positive number");
                slot = v->get<double>();
            }
        };
        opt("quad_rel", sc.tolerances.quad_rel);
        opt("path_agreement", sc.tolerances.path_agreement);
        opt("recovery_rel", sc.tolerances.recovery_rel);
        opt("kk_residual", sc.tolerances.kk_residual);
        opt("asymptote_abs", sc.tolerances.asymptote_abs);
        opt("causality_abs", sc.tolerances.causality_abs);
        opt("offset_abs", sc.tolerances.offset_abs);
        opt("limit_zero_abs", sc.tolerances.limit_zero_abs);
    }
    if (!tol || !tol->contains("quad_rel")) {
        // Environment override of the default quadrature tolerance; an
        // explicit scenario value wins over it.
        if (const char* env = std::getenv("DISPERSE_QUAD_RELTOL")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end != env && v > 0.0)
                sc.tolerances.quad_rel = v;
        }
    }

    // Per-experiment required fields, checked up front so that error messages
    // name the missing field rather than failing mid-run.
    switch (sc.experiment) {
    case ExperimentKind::kernel:
        if (!sc.model) missing("model");
        if (!sc.tau_grid) missing("grids.tau");
        break;
    case ExperimentKind::recovery:
        if (!sc.model) missing("model");
        if (!sc.tau_grid) missing("grids.tau");
        break;
    case ExperimentKind::displacement:
    case ExperimentKind::consistency:
        if (!sc.model) missing("model");
        if (!sc.pulse_given) missing("pulse.beta");
        if (!sc.t_grid) missing("grids.t");
        break;
    case ExperimentKind::limit_probe:
        if (!sc.model) missing("model");
        if (!sc.pulse_given) missing("pulse.beta");
        if (sc.theta_ladder.empty()) missing("ladders.theta");
        if (sc.horizon_ladder.empty()) missing("ladders.T");
        break;
    case ExperimentKind::kk:
        if (!sc.model) missing("model");
        if (!sc.omega_grid) missing("grids.omega");
        break;
    case ExperimentKind::specialfn_selftest:
        break;
    }
    return sc;
}

Scenario scenario_from_string(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedScenario(std::string("scenario: invalid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir) {
    ExperimentContext ctx{scenario, std::filesystem::path(out_dir), {}, {}, {}};
    std::filesystem::create_directories(ctx.out_dir);

    switch (scenario.experiment) {
    case ExperimentKind::kernel: run_kernel_experiment(ctx); break;
    case ExperimentKind::recovery: run_recovery_experiment(ctx); break;
    case ExperimentKind::displacement: run_displacement_experiment(ctx); break;
    case ExperimentKind::consistency: run_consistency_experiment(ctx); break;
    case ExperimentKind::limit_probe: run_limit_probe_experiment(ctx); break;
    case ExperimentKind::kk: run_kk_experiment(ctx); break;
    case ExperimentKind::specialfn_selftest: run_specialfn_experiment(ctx); break;
    }

    RunOutcome out;
    out.pass = std::all_of(ctx.gates.begin(), ctx.gates.end(),
                           [](const Gate& g) { return g.pass; });
    out.exit_code = out.pass ? 0 : 1;

    nlohmann::json report;
    report["id"] = scenario.id;
    report["experiment"] = experiment_label(scenario.experiment);
    if (scenario.model)
        report["model"] = to_json(*scenario.model);
    if (scenario.pulse_given)
        report["pulse"] = {{"e0", scenario.pulse.amplitude}, {"beta", scenario.pulse.beta}};
    report["settings"] = {{"quad_rel", scenario.tolerances.quad_rel}};
    report["gates"] = gates_to_json(ctx.gates);
    report["pass"] = out.pass;
    report["metrics"] = ctx.metrics;

    const auto report_path = ctx.out_dir / (scenario.id + ".report.json");
    std::ofstream rf(report_path);
    if (!rf)
        throw Error("cannot open output file " + report_path.string());
    rf << report.dump(2) << "\n";
    ctx.files.push_back(report_path.string());

    out.report = std::move(report);
    out.written_files = std::move(ctx.files);
    return out;
}

std::string describe_experiment(const std::string& name) {
    ExperimentKind kind;
    try {
        kind = experiment_from_label(name);
    } catch (const MalformedScenario&) {
        throw MalformedScenario(
            "unknown experiment '" + name +
            "'. Valid experiments: kernel, recovery, displacement, consistency, "
            "limit-probe, kk, specialfn-selftest");
    }
    switch (kind) {
    case ExperimentKind::kernel:
        return "kernel: sample the model's time-domain kernel f(tau) on a grid.\n"
               "required: model, grids.tau {max, n}\n"
               "csv: tau, f [, f_cos_pathological, f_sin_form for the bare Drude model]";
    case ExperimentKind::recovery:
        return "recovery: invert the theta-regularized model numerically on a theta ladder,\n"
               "extrapolate theta -> 0, and compare against the analytic contour result.\n"
               "required: model (drude), grids.tau {max, n}\n"
               "optional: ladders.theta (descending, >= 3 entries), tolerances.recovery_rel\n"
               "csv: tau, f_numeric, f_oracle, abs_err";
    case ExperimentKind::displacement:
        return "displacement: run all applicable displacement paths on a time grid and gate\n"
               "the finite-horizon asymptotics against the exact limits.\n"
               "required: model, pulse {e0, beta}, grids.t {min, max, n}\n"
               "optional: grids.omega (spectral-path resolution), tolerances.asymptote_abs\n"
               "csv: t, E, D_conv, D_spec, D_closed, flags";
    case ExperimentKind::consistency:
        return "consistency: cross-check convolution, spectral, and closed-form paths on a\n"
               "shared grid; for conductor models the spectral path is the shifted quantity\n"
               "and its constant offset is gated instead.\n"
               "required: model, pulse {e0, beta}, grids.t {min, max, n}\n"
               "optional: grids.omega, tolerances.path_agreement, tolerances.offset_abs\n"
               "csv: t, E, D_conv, D_spec, D_closed, flags";
    case ExperimentKind::limit_probe:
        return "limit-probe: tabulate the regularized displacement over a theta ladder and a\n"
               "horizon ladder T; the iterated limits theta->0,T->inf and T->inf,theta->0\n"
               "differ by the full residual displacement.\n"
               "required: model (drude), pulse {e0, beta}, ladders.theta (0 allowed),\n"
               "          ladders.T\n"
               "csv: theta, T, d_plus, d_minus";
    case ExperimentKind::kk:
        return "kk: evaluate the principal-value dispersion relation on a frequency grid and\n"
               "gate the residual. Only models regular at omega = 0 qualify.\n"
               "required: model (regularized_drude or lorentz), grids.omega {min, max, n}\n"
               "optional: tolerances.kk_residual\n"
               "csv: omega, dispersion_integral, re_eps_minus_1, abs_residual";
    case ExperimentKind::specialfn_selftest:
        return "specialfn-selftest: dump error tables for erf/erfc/Faddeeva against\n"
               "independent oracles (series, asymptotics, quadrature).\n"
               "required: nothing\n"
               "csv: check, arg_re, arg_im, got_re, got_im, ref_re, ref_im, abs_err";
    }
    return "";
}

} // namespace disperse
