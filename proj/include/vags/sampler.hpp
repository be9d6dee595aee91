#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vags/diagnostics.hpp"
#include "vags/guidance.hpp"
#include "vags/velocity.hpp"

namespace vags {

/// Strictly increasing times t_1 < ... < t_N inside [0, 1]. Indexed 1..N to
/// match the sampler loops, which run from t_N (noise) down to t_1.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> points);

    int size() const { return static_cast<int>(points_.size()); }
    double operator()(int i) const { return points_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<double>& points() const { return points_; }

private:
    std::vector<double> points_;
};

/// t_i = (i - 1) / (N - 1).
TimeGrid uniform_grid(int n);

/// State components beyond this magnitude count as divergence.
inline constexpr double kDivergenceBound = 1e12;

/// Throws DivergenceError(step) if z has a non-finite or exploding component.
void check_state(const LatentVector& z, int step);

struct GenRunSpec {
    std::shared_ptr<const ConditionedVelocityField> field;
    ConditionLabel condition = ConditionLabel::unconditional();
    SchedulerParams scheduler;
    TimeGrid grid = uniform_grid(25);
    std::uint64_t seed = 0;
    std::string label;  ///< trace scheduler label; defaults to the kind name

    void validate() const;
};

struct GenerationResult {
    LatentVector final_state;
    TrajectoryTrace trace;
};

/// Initial latent z_{t_N} ~ N(0, I) for a given seed.
LatentVector initial_noise(std::uint64_t seed, Eigen::Index dimension);

/// Guided Euler integration from t_N to t_1. Each step evaluates the
/// unconditional and conditional raw velocities once; the VAGS scheduler adds
/// their cosine as the alignment signal. Trace rows record the scale used at
/// step i and the norm of the state after the update.
GenerationResult generate(const GenRunSpec& spec);

} // namespace vags
