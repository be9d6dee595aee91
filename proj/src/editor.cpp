#include "vags/editor.hpp"

#include "vags/random.hpp"

namespace vags {

CoupledLatents couple_latents(const LatentVector& x_src, const LatentVector& z_edit, double t,
                              const LatentVector& noise) {
    require_same_dimension(x_src, z_edit);
    require_same_dimension(x_src, noise);
    LatentVector source = (1.0 - t) * x_src + t * noise;
    LatentVector target = source + (z_edit - x_src);
    return {std::move(source), std::move(target)};
}

PilotVelocity pilot_target_velocity(const EditStepRaw& raw, double lambda_tar, double kappa_tar,
                                    double sigma) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0, 1]");
    const double base = temporal_scale(lambda_tar, kappa_tar, sigma);
    return {cfg_combine(raw.u_tar, raw.p_tar, base), base};
}

AdaptiveTargetScale adaptive_target_scale(const LatentVector& v_src, const LatentVector& pilot,
                                          double lambda_tar, double kappa_tar, double sigma) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0, 1]");
    const double s = cosine_similarity(v_src, pilot);
    return {lambda_tar * vags_multiplier(kappa_tar, sigma, s), s};
}

void EditRunSpec::validate() const {
    if (!field) throw ConfigError("field: missing velocity field");
    field->check_condition(c_src);
    field->check_condition(c_tar);
    if (x_src.size() != field->dimension()) throw DimensionError(field->dimension(), x_src.size());
    if (!x_src.allFinite()) throw ConfigError("x_src: non-finite value");
    if (!(lambda_src >= 0.0)) throw ConfigError("lambda_src: must be >= 0");
    target.validate();
    if (n_max < 2 || n_max > grid.size())
        throw ConfigError("n_max: must satisfy 2 <= n_max <= n, got " + std::to_string(n_max));
}

LatentVector edit_noise(std::uint64_t seed, int step, Eigen::Index dimension) {
    return CounterNormal(seed, static_cast<std::uint64_t>(step)).vector(dimension);
}

EditResult edit(const EditRunSpec& spec) {
    spec.validate();
    const auto& field = *spec.field;
    const auto uncond = ConditionLabel::unconditional();
    const bool adaptive = spec.target.kind == SchedulerKind::Vags;
    const Eigen::Index d = spec.x_src.size();

    TrajectoryTrace trace("edit-" + std::to_string(spec.seed),
                          spec.label.empty() ? std::string(to_string(spec.target.kind)) : spec.label,
                          spec.seed);

    LatentVector z_edit = spec.x_src;
    for (int i = spec.n_max; i >= 2; --i) {
        const double t = spec.grid(i);
        const double sigma = 1.0 - t;
        const auto coupled = couple_latents(spec.x_src, z_edit, t, edit_noise(spec.seed, i, d));

        const EditStepRaw raw{field.raw_velocity(coupled.source, t, uncond),
                              field.raw_velocity(coupled.source, t, spec.c_src),
                              field.raw_velocity(coupled.target, t, uncond),
                              field.raw_velocity(coupled.target, t, spec.c_tar)};

        const LatentVector v_src = cfg_combine(raw.u_src, raw.p_src, spec.lambda_src);

        std::optional<double> alignment;
        if (adaptive) {
            const auto pilot = pilot_target_velocity(raw, spec.target.lambda, spec.target.kappa, sigma);
            alignment = cosine_similarity(v_src, pilot.pilot);
        }
        const auto ctx = StepContext::at(i, t, spec.n_max, alignment);
        const double scale_tar = effective_scale(spec.target, ctx);
        const LatentVector v_tar = cfg_combine(raw.u_tar, raw.p_tar, scale_tar);

        z_edit += (spec.grid(i - 1) - t) * (v_tar - v_src);
        check_state(z_edit, i);
        trace.append({i, t, sigma, alignment.value_or(0.0), scale_tar, (z_edit - spec.x_src).norm()});
    }
    trace.set_endpoint(z_edit);
    return {std::move(z_edit), std::move(trace)};
}

} // namespace vags
