// kernels.hpp -- closed-form time-domain kernels f(tau) for every model,
// including the deliberately inconsistent single-sided inversions of the
// conducting models. The full temporal response is 2*delta(tau) + f(tau);
// the delta part is never sampled, it contributes the identity term E(t).
#pragma once

#include <string>

#include <json.hpp>

#include "disperse/models.hpp"

namespace disperse {

enum class KernelFamily {
    drude_regularized_zero, // (wp^2/g)(1 - exp(-g tau)); the +i0 inversion
    drude_cos_pathological, // -(wp^2/g) exp(-g tau); cosine-only inversion
    drude_sin_form,         // sine-only inversion; equals drude_regularized_zero
    drude_theta,            // wp^2 (exp(-th tau) - exp(-g tau)) / (g - th)
    plasma_linear,          // wp^2 tau
    normal_skin_constant,   // 4 pi sigma0
    lorentz_damped,         // sum_j g_j exp(-g_j tau/2) sin(W_j tau) / W_j
};

std::string kernel_family_label(KernelFamily family);

struct TemporalKernel {
    KernelFamily family{};
    DielectricModel model; // owning model's parameters
    // Weight of the delta part of the response; the half-weight endpoint
    // convention turns it into exactly one unit of E(t).
    static constexpr double delta_weight = 2.0;
};

/// The physically selected kernel for each model. Never returns the
/// pathological single-sided families; those are built explicitly via
/// pathological_kernel.
TemporalKernel kernel_for(const DielectricModel& model);

/// Closed-form f(tau). Zero for tau < 0 (causality); stable for decay
/// exponents up to ~700 (exponentials underflow gracefully).
double eval_kernel(const TemporalKernel& kernel, double tau);

enum class PathologicalForm { cosine, sine };

/// The single-sided inversions of the bare Drude model. Only Drude qualifies;
/// anything else throws UnsupportedModel.
TemporalKernel pathological_kernel(const DielectricModel& model, PathologicalForm form);

/// The limit gamma -> 0 of the Drude kernel: the plasma kernel wp^2 tau with
/// the same plasma frequency. Verifies pointwise convergence on an internal
/// grid (|f_D - wp^2 tau| <= wp^2 gamma tau^2 / 2).
TemporalKernel gamma_limit_kernel(const TemporalKernel& drude_kernel);

/// Slowest exponential decay rate of the kernel; 0 for families that do not
/// decay (bounded or growing).
double kernel_decay_rate(const TemporalKernel& kernel);

bool kernel_is_decaying(const TemporalKernel& kernel);

/// Monotone-in-structure upper bound for |f(tau)|, usable as a truncation
/// envelope.
double kernel_envelope(const TemporalKernel& kernel, double tau);

/// Dominant oscillation frequency (0 for non-oscillatory kernels); quadrature
/// pre-splits panels at this scale.
double kernel_oscillation_frequency(const TemporalKernel& kernel);

nlohmann::json to_json(const TemporalKernel& kernel);

} // namespace disperse
