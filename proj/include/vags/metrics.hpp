#pragma once

#include <string>
#include <vector>

#include "vags/velocity.hpp"

namespace vags {

struct SampleBatch {
    std::vector<LatentVector> points;
    std::vector<std::string> provenance;

    void validate() const;
};

struct ComponentStats {
    double mass = 0.0;
    std::size_t count = 0;
    LatentVector mean;      ///< empty when no point was assigned
    LatentVector variance;  ///< per-coordinate, population variance
};

/// Hard nearest-true-mean assignment (ties go to the lower index).
std::vector<ComponentStats> component_assignment_stats(const SampleBatch& batch,
                                                       const std::vector<GaussianComponent>& components);

/// One isotropic Gaussian, as seen by a single coordinate of the affine guided field.
struct ScalarGaussian {
    double mean = 0.0;
    double variance = 1.0;
};

inline constexpr int kReferenceSubsteps = 100'000;

/// Endpoint of dz/dt = v_u + lambda (v_c - v_u) from t_start to t_end, where
/// v_u and v_c are the exact single-Gaussian velocities (both affine in z).
/// Integrated with classical RK4 at `substeps` uniform steps.
double linear_ode_reference(double z0, double t_start, double t_end, const ScalarGaussian& cond,
                            const ScalarGaussian& uncond, double lambda,
                            int substeps = kReferenceSubsteps);

/// Conditional and unconditional branches share one Gaussian, so the guided
/// field is the plain conditional flow for every lambda.
double linear_ode_reference(double z0, double t_start, double t_end, double mean, double variance,
                            double lambda, int substeps = kReferenceSubsteps);

} // namespace vags
