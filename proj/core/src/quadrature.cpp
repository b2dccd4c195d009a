// quadrature.cpp -- thin policy layer over boost.math Gauss-Kronrod plus the
// ladder extrapolation used by every eta/theta regularization limit.

#include "disperse/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "disperse/errors.hpp"

namespace disperse::quad {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void check_converged(double value, double error, double l1, const Options& opts,
                     const char* what) {
    if (!std::isfinite(value))
        throw QuadratureFailure(std::string(what) + ": integrand produced a non-finite value");
    const double scale = std::max(std::abs(value), l1);
    const double budget = 50.0 * (opts.abs_tol + opts.rel_tol * scale) +
                          64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, l1);
    if (error > budget)
        throw QuadratureFailure(std::string(what) + ": error estimate " + fmt_g(error) +
                                " above tolerance budget " + fmt_g(budget));
}

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
    if (!(b > a))
        return {0.0, 0.0};
    double error = 0.0;
    double l1 = 0.0;
    const double value = GK15::integrate(f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
    check_converged(value, error, l1, opts, "integrate");
    return {value, error};
}

Result integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double osc_freq, const Options& opts) {
    if (!(b > a))
        return {0.0, 0.0};
    const double span = b - a;
    const double half_period = osc_freq > 0.0 ? std::numbers::pi / osc_freq : span;
    auto panels = static_cast<std::size_t>(std::ceil(span / half_period));
    panels = std::clamp<std::size_t>(panels, 1, 4'000'000);
    if (panels <= 2)
        return integrate(f, a, b, opts);

    const double width = span / static_cast<double>(panels);
    KahanSum sum;
    double error = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == panels) ? b : lo + width;
        double perr = 0.0;
        double pl1 = 0.0;
        sum.add(GK15::integrate(f, lo, hi, opts.max_depth, opts.rel_tol, &perr, &pl1));
        error += perr;
        l1 += pl1;
    }
    check_converged(sum.value(), error, l1, opts, "integrate_oscillatory");
    return {sum.value(), error};
}

double truncation_horizon(const std::function<double(double)>& envelope, double threshold,
                          double initial, double limit) {
    double t = std::max(initial, 1e-8);
    while (t < limit) {
        if (envelope(t) < threshold && envelope(1.5 * t) < threshold)
            return t;
        t *= 2.0;
    }
    throw QuadratureFailure("truncation_horizon: envelope does not fall below threshold; "
                            "the integral has no decaying tail");
}

ExtrapolationResult extrapolate_to_zero(const std::vector<double>& x,
                                        const std::vector<double>& y, int order) {
    if (x.size() != y.size())
        throw ExtrapolationDiverged("extrapolate_to_zero: ladder and value counts differ");
    if (x.size() < 3)
        throw ExtrapolationDiverged("extrapolate_to_zero: ladder needs at least 3 stages");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] > x[i + 1]) || !(x[i + 1] > 0.0))
            throw ExtrapolationDiverged("extrapolate_to_zero: ladder must be strictly "
                                        "decreasing and positive");

    double scale = 0.0;
    for (double v : y)
        scale = std::max(scale, std::abs(v));
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);

    // Successive raw differences must not grow (beyond rounding noise).
    double prev_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double d = std::abs(y[i] - y[i + 1]);
        if (d > 1.05 * prev_diff && d > noise_floor)
            throw ExtrapolationDiverged("extrapolate_to_zero: ladder differences grow; "
                                        "the stage values are not converging");
        prev_diff = d;
    }

    const std::size_t use = std::min<std::size_t>(x.size(), static_cast<std::size_t>(std::max(order, 1)) + 1);
    const std::size_t first = x.size() - use;

    std::vector<double> xs(x.begin() + static_cast<std::ptrdiff_t>(first), x.end());
    std::vector<double> tab(y.begin() + static_cast<std::ptrdiff_t>(first), y.end());

    ExtrapolationResult out;
    out.table_diagonal.push_back(tab.back());
    for (std::size_t k = 1; k < xs.size(); ++k) {
        for (std::size_t i = 0; i + k < xs.size(); ++i) {
            // Neville recursion evaluated at x = 0.
            tab[i] = (xs[i] * tab[i + 1] - xs[i + k] * tab[i]) / (xs[i] - xs[i + k]);
        }
        out.table_diagonal.push_back(tab[0]);
    }
    out.estimate = tab[0];

    const std::size_t n = y.size();
    const double d1 = std::abs(y[n - 3] - y[n - 2]);
    const double d2 = std::abs(y[n - 2] - y[n - 1]);
    if (d1 > noise_floor && d2 > noise_floor)
        out.observed_rate = std::log(d1 / d2) / std::log(x[n - 3] / x[n - 2]);
    else
        out.observed_rate = std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace disperse::quad
