// quadrature.hpp -- adaptive quadrature, truncation-horizon search, and
// ladder extrapolation shared by the transform and response machinery.
#pragma once

#include <functional>
#include <vector>

namespace disperse::quad {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 0.0; // absolute floor, 0 disables
    unsigned max_depth = 15;
};

struct Result {
    double value = 0.0;
    double error = 0.0; // absolute error estimate
};

/// Adaptive Gauss-Kronrod on [a, b]. Throws QuadratureFailure when the error
/// estimate stays above tolerance or the integrand produced non-finite values.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// Same, but the interval is pre-split into half-period panels pi/osc_freq so
/// the subdivision never has to discover the oscillation on its own.
/// osc_freq <= 0 falls back to plain adaptive integration.
Result integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double osc_freq, const Options& opts = {});

/// Smallest T (by doubling from `initial`) with envelope(T) and
/// envelope(1.5 T) below `threshold`. Throws QuadratureFailure when no such T
/// exists below `limit` -- the envelope does not decay.
double truncation_horizon(const std::function<double(double)>& envelope, double threshold,
                          double initial = 1.0, double limit = 1e9);

struct ExtrapolationResult {
    double estimate = 0.0;
    // Empirical order p in y(x) ~ y0 + c x^p, from the last three raw stages.
    double observed_rate = 0.0;
    // Neville diagonal: estimate after using 1, 2, ... ladder stages.
    std::vector<double> table_diagonal;
};

/// Polynomial (Neville) extrapolation of y(x) to x = 0 on a descending
/// positive ladder x. `order` caps the polynomial degree: only the last
/// order+1 stages (smallest x) enter. Throws ExtrapolationDiverged when fewer
/// than three stages are given or successive raw differences grow.
ExtrapolationResult extrapolate_to_zero(const std::vector<double>& x,
                                        const std::vector<double>& y, int order);

/// Compensated (Kahan) accumulator for the long discrete-transform sums.
class KahanSum {
  public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace disperse::quad
