#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "vags/diagnostics.hpp"
#include "vags/guidance.hpp"
#include "vags/sampler.hpp"
#include "vags/velocity.hpp"

namespace vags {

struct CoupledLatents {
    LatentVector source;  ///< (1 - t) x_src + t eps
    LatentVector target;  ///< source + (z_edit - x_src)
};

/// Noisy source latent and the target latent sharing its noise. The target is
/// formed as source + (z_edit - x_src) so that z_edit == x_src yields
/// bit-identical latents.
CoupledLatents couple_latents(const LatentVector& x_src, const LatentVector& z_edit, double t,
                              const LatentVector& noise);

/// Raw predictions of one four-way evaluation.
struct EditStepRaw {
    LatentVector u_src;
    LatentVector p_src;
    LatentVector u_tar;
    LatentVector p_tar;
};

struct PilotVelocity {
    LatentVector pilot;
    double base_scale = 0.0;
};

/// Target velocity guided by the temporal-only scale lambda_tar exp(kappa_tar (2 sigma - 1)).
PilotVelocity pilot_target_velocity(const EditStepRaw& raw, double lambda_tar, double kappa_tar,
                                    double sigma);

struct AdaptiveTargetScale {
    double scale = 0.0;
    double alignment = 0.0;
};

/// lambda_tar exp(kappa_tar (2 sigma - 1) s) with s = cos(V_src, pilot).
AdaptiveTargetScale adaptive_target_scale(const LatentVector& v_src, const LatentVector& pilot,
                                          double lambda_tar, double kappa_tar, double sigma);

struct EditRunSpec {
    std::shared_ptr<const ConditionedVelocityField> field;
    LatentVector x_src;
    ConditionLabel c_src = ConditionLabel::component(0);
    ConditionLabel c_tar = ConditionLabel::component(0);
    double lambda_src = 3.5;
    /// Target-scale rule. kind == Vags gives the adaptive editor; lambda and
    /// kappa are lambda_tar and kappa_tar.
    SchedulerParams target{SchedulerKind::Vags, 13.5, 0.9};
    TimeGrid grid = uniform_grid(50);
    int n_max = 33;
    std::uint64_t seed = 0;
    std::string label;

    void validate() const;
};

struct EditResult {
    LatentVector final_state;
    TrajectoryTrace trace;
};

/// Per-step noise eps_i; a pure function of (seed, i).
LatentVector edit_noise(std::uint64_t seed, int step, Eigen::Index dimension);

/// Inversion-free editing from t_{n_max} down to t_1. The source scale stays
/// fixed; only the target scale follows `spec.target`. Trace rows carry the
/// target scale and ||z_edit - x_src|| after each update.
EditResult edit(const EditRunSpec& spec);

} // namespace vags
