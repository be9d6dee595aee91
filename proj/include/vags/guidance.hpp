#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "vags/vecmath.hpp"

namespace vags {

enum class SchedulerKind { Fixed, Vags, Monotone, Interval, ZeroInit };

std::string_view to_string(SchedulerKind kind);
/// Accepts "fixed", "vags", "monotone", "interval", "zero_init".
SchedulerKind parse_scheduler_kind(std::string_view name);

struct SchedulerParams {
    SchedulerKind kind = SchedulerKind::Fixed;
    double lambda = 7.0;
    double kappa = 1.0;
    double interval_lo = 0.2;  ///< Interval only: active window in t
    double interval_hi = 0.8;
    int zero_steps = 1;        ///< ZeroInit only

    void validate() const;

    friend bool operator==(const SchedulerParams&, const SchedulerParams&) = default;
};

/// Where the sampler is on its grid. `first_step` is the index the loop
/// starts from (N for generation, n_max for editing); steps count down to 2.
struct StepContext {
    int step_index = 0;
    double t = 0.0;
    double sigma = 1.0;
    std::optional<double> alignment;
    int first_step = 0;

    static StepContext at(int step_index, double t, int first_step,
                          std::optional<double> alignment = std::nullopt) {
        return StepContext{step_index, t, 1.0 - t, alignment, first_step};
    }
};

/// exp(kappa (2 sigma - 1) s): bounded by [e^-kappa, e^kappa] for s in [-1, 1].
template <typename Scalar>
Scalar vags_multiplier(Scalar kappa, Scalar sigma, Scalar alignment) {
    return std::exp(kappa * (Scalar(2) * sigma - Scalar(1)) * alignment);
}

/// Temporal-only scale lambda * exp(kappa (2 sigma - 1)), used by the Monotone
/// baseline and the editing pilot velocity.
template <typename Scalar>
Scalar temporal_scale(Scalar lambda, Scalar kappa, Scalar sigma) {
    return lambda * std::exp(kappa * (Scalar(2) * sigma - Scalar(1)));
}

double effective_scale(const SchedulerParams& params, const StepContext& ctx);

/// Classifier-free guidance: v_uncond + scale (v_cond - v_uncond).
template <typename DerivedU, typename DerivedC>
Latent<typename DerivedU::Scalar> cfg_combine(const Eigen::MatrixBase<DerivedU>& v_uncond,
                                              const Eigen::MatrixBase<DerivedC>& v_cond,
                                              typename DerivedU::Scalar scale) {
    require_same_dimension(v_uncond, v_cond);
    return v_uncond + scale * (v_cond - v_uncond);
}

} // namespace vags
