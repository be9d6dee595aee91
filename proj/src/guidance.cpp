#include "vags/guidance.hpp"

#include "vags/errors.hpp"

namespace vags {

std::string_view to_string(SchedulerKind kind) {
    switch (kind) {
    case SchedulerKind::Fixed: return "fixed";
    case SchedulerKind::Vags: return "vags";
    case SchedulerKind::Monotone: return "monotone";
    case SchedulerKind::Interval: return "interval";
    case SchedulerKind::ZeroInit: return "zero_init";
    }
    return "unknown";
}

SchedulerKind parse_scheduler_kind(std::string_view name) {
    for (auto kind : {SchedulerKind::Fixed, SchedulerKind::Vags, SchedulerKind::Monotone,
                      SchedulerKind::Interval, SchedulerKind::ZeroInit})
        if (to_string(kind) == name) return kind;
    throw ConfigError("unknown scheduler kind '" + std::string(name) + "'");
}

void SchedulerParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda: must be finite and >= 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa: must be finite and >= 0");
    if (kind == SchedulerKind::Interval &&
        !(interval_lo >= 0.0 && interval_lo < interval_hi && interval_hi <= 1.0))
        throw ConfigError("interval: need 0 <= t_lo < t_hi <= 1");
    if (kind == SchedulerKind::ZeroInit && zero_steps < 1)
        throw ConfigError("zero_steps: must be >= 1");
}

double effective_scale(const SchedulerParams& params, const StepContext& ctx) {
    switch (params.kind) {
    case SchedulerKind::Fixed:
        return params.lambda;
    case SchedulerKind::Vags: {
        if (!ctx.alignment) throw ContractError("vags scheduler needs an alignment signal");
        const double s = *ctx.alignment;
        if (!(s >= -1.0 && s <= 1.0)) throw ContractError("alignment must lie in [-1, 1]");
        return params.lambda * vags_multiplier(params.kappa, ctx.sigma, s);
    }
    case SchedulerKind::Monotone:
        return temporal_scale(params.lambda, params.kappa, ctx.sigma);
    case SchedulerKind::Interval:
        return (ctx.t >= params.interval_lo && ctx.t <= params.interval_hi) ? params.lambda : 1.0;
    case SchedulerKind::ZeroInit:
        return (ctx.first_step - ctx.step_index < params.zero_steps) ? 0.0 : params.lambda;
    }
    throw ContractError("unhandled scheduler kind");
}

} // namespace vags
