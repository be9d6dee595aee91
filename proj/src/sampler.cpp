#include "vags/sampler.hpp"

#include <cmath>

#include "vags/random.hpp"

namespace vags {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw ConfigError("time grid needs at least 2 points");
    if (!(points_.front() >= 0.0 && points_.back() <= 1.0))
        throw ConfigError("time grid must lie inside [0, 1]");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i] > points_[i - 1])) throw ConfigError("time grid must be strictly increasing");
}

TimeGrid uniform_grid(int n) {
    if (n < 2) throw ConfigError("n: grid needs N >= 2, got " + std::to_string(n));
    std::vector<double> points(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) points[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
    return TimeGrid(std::move(points));
}

void check_state(const LatentVector& z, int step) {
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > kDivergenceBound) throw DivergenceError(step);
}

void GenRunSpec::validate() const {
    if (!field) throw ConfigError("field: missing velocity field");
    field->check_condition(condition);
    scheduler.validate();
}

LatentVector initial_noise(std::uint64_t seed, Eigen::Index dimension) {
    return CounterNormal(seed, 0).vector(dimension);
}

GenerationResult generate(const GenRunSpec& spec) {
    spec.validate();
    const auto& field = *spec.field;
    const auto uncond = ConditionLabel::unconditional();
    const bool adaptive = spec.scheduler.kind == SchedulerKind::Vags;
    const int n = spec.grid.size();

    TrajectoryTrace trace("generate-" + std::to_string(spec.seed),
                          spec.label.empty() ? std::string(to_string(spec.scheduler.kind)) : spec.label,
                          spec.seed);

    LatentVector z = initial_noise(spec.seed, field.dimension());
    for (int i = n; i >= 2; --i) {
        const double t = spec.grid(i);
        const LatentVector v_uncond = field.raw_velocity(z, t, uncond);
        const LatentVector v_cond = field.raw_velocity(z, t, spec.condition);

        std::optional<double> alignment;
        if (adaptive) alignment = cosine_similarity(v_uncond, v_cond);
        const auto ctx = StepContext::at(i, t, n, alignment);
        const double scale = effective_scale(spec.scheduler, ctx);

        z += (spec.grid(i - 1) - t) * cfg_combine(v_uncond, v_cond, scale);
        check_state(z, i);
        trace.append({i, t, ctx.sigma, alignment.value_or(0.0), scale, z.norm()});
    }
    trace.set_endpoint(z);
    return {std::move(z), std::move(trace)};
}

} // namespace vags
