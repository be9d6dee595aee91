#include "vags/velocity.hpp"

#include <cmath>
#include <limits>

#include "vags/random.hpp"

namespace vags {

namespace {

void check_time(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("time must lie in [0, 1], got " + std::to_string(t));
}

// Variance of z_t for one component: (1-t)^2 v + t^2.
double marginal_variance(double t, double variance) {
    const double a = 1.0 - t;
    return a * a * variance + t * t;
}

} // namespace

std::size_t ConditionLabel::index() const {
    if (!index_) throw ConditionError("unconditional label has no component index");
    return *index_;
}

std::string ConditionLabel::to_string() const {
    return index_ ? std::to_string(*index_) : std::string("uncond");
}

void ConditionedVelocityField::check_condition(const ConditionLabel& condition) const {
    if (!condition.is_unconditional() && condition.index() >= condition_count())
        throw ConditionError("condition index " + std::to_string(condition.index()) +
                             " out of range for " + std::to_string(condition_count()) +
                             " components");
}

LatentVector gaussian_flow_velocity(const LatentVector& z, double t, const LatentVector& mean,
                                    double variance) {
    check_time(t);
    require_same_dimension(z, mean);
    if (!(variance > 0.0)) throw DomainError("component variance must be positive");
    const double a = 1.0 - t;
    const double gain = (t - a * variance) / marginal_variance(t, variance);
    return gain * (z - a * mean) - mean;
}

Eigen::VectorXd posterior_weights(const LatentVector& z, double t,
                                  const std::vector<GaussianComponent>& components) {
    check_time(t);
    if (components.empty()) throw ConfigError("mixture has no components");
    const double a = 1.0 - t;
    const double half_dim = 0.5 * static_cast<double>(z.size());
    Eigen::VectorXd log_w(static_cast<Eigen::Index>(components.size()));
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& c = components[k];
        require_same_dimension(z, c.mean);
        const double s2 = marginal_variance(t, c.variance);
        log_w[static_cast<Eigen::Index>(k)] =
            std::log(c.weight) - half_dim * std::log(s2) - (z - a * c.mean).squaredNorm() / (2.0 * s2);
    }
    const double top = log_w.maxCoeff();
    Eigen::VectorXd w(log_w.size());
    double total = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        // Weights below e^-700 relative to the leader are dropped outright
        // rather than computed as subnormals.
        const double gap = log_w[k] - top;
        w[k] = gap < -700.0 ? 0.0 : std::exp(gap);
        total += w[k];
    }
    return w / total;
}

LatentVector mixture_flow_velocity(const LatentVector& z, double t,
                                   const std::vector<GaussianComponent>& components) {
    const Eigen::VectorXd w = posterior_weights(z, t, components);
    LatentVector v = LatentVector::Zero(z.size());
    for (std::size_t k = 0; k < components.size(); ++k)
        v += w[static_cast<Eigen::Index>(k)] *
             gaussian_flow_velocity(z, t, components[k].mean, components[k].variance);
    return v;
}

void validate_mixture(const std::vector<GaussianComponent>& components) {
    if (components.empty()) throw ConfigError("mixture has no components");
    const Eigen::Index d = components.front().mean.size();
    if (d < 1) throw ConfigError("component mean must have dimension >= 1");
    double total = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& c = components[k];
        const std::string where = "components[" + std::to_string(k) + "]";
        if (c.mean.size() != d) throw ConfigError(where + ".mean: dimension mismatch");
        if (!c.mean.allFinite()) throw ConfigError(where + ".mean: non-finite value");
        if (!(c.variance > 0.0) || !std::isfinite(c.variance))
            throw ConfigError(where + ".variance: must be positive");
        if (!(c.weight > 0.0 && c.weight <= 1.0))
            throw ConfigError(where + ".weight: must lie in (0, 1]");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("weights: must sum to 1, got " + std::to_string(total));
}

GaussianMixtureField::GaussianMixtureField(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
    validate_mixture(components_);
}

LatentVector GaussianMixtureField::raw_velocity(const LatentVector& z, double t,
                                                const ConditionLabel& condition) const {
    check_condition(condition);
    if (condition.is_unconditional()) return mixture_flow_velocity(z, t, components_);
    const auto& c = components_[condition.index()];
    return gaussian_flow_velocity(z, t, c.mean, c.variance);
}

OracleEstimate mc_velocity_oracle(const LatentVector& z, double t,
                                  const std::vector<GaussianComponent>& components,
                                  const ConditionLabel& condition, const OracleOptions& options) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("oracle requires t in (0, 1)");
    if (options.n_samples < 10'000) throw DomainError("oracle requires at least 1e4 samples");
    if (!(options.bandwidth > 0.0)) throw DomainError("oracle bandwidth must be positive");
    validate_mixture(components);
    require_same_dimension(z, components.front().mean);
    if (!condition.is_unconditional() && condition.index() >= components.size())
        throw ConditionError("condition index out of range");

    const Eigen::Index d = z.size();
    const auto dd = static_cast<std::uint64_t>(d);
    const CounterNormal normals(options.seed, 1);
    const CounterNormal picker(options.seed, 2);

    std::vector<double> cumulative;
    for (const auto& c : components) cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + c.weight);

    const double inv_two_h2 = 1.0 / (2.0 * options.bandwidth * options.bandwidth);
    double sum_w = 0.0;
    double sum_w2 = 0.0;
    LatentVector sum_wy = LatentVector::Zero(d);
    LatentVector sum_w2y = LatentVector::Zero(d);
    LatentVector sum_w2y2 = LatentVector::Zero(d);
    LatentVector x(d), eps(d), y(d);

    for (std::uint64_t j = 0; j < options.n_samples; ++j) {
        std::size_t k = 0;
        if (condition.is_unconditional()) {
            const double u = picker.uniform_open(j) * cumulative.back();
            while (k + 1 < components.size() && u > cumulative[k]) ++k;
        } else {
            k = condition.index();
        }
        const auto& c = components[k];
        const double sd = std::sqrt(c.variance);
        const std::uint64_t base = j * 2 * dd;
        for (Eigen::Index i = 0; i < d; ++i) {
            x[i] = c.mean[i] + sd * normals(base + static_cast<std::uint64_t>(i));
            eps[i] = normals(base + dd + static_cast<std::uint64_t>(i));
        }
        const double dist2 = ((1.0 - t) * x + t * eps - z).squaredNorm();
        const double w = std::exp(-dist2 * inv_two_h2);
        if (w == 0.0) continue;
        y = eps - x;
        sum_w += w;
        sum_w2 += w * w;
        sum_wy += w * y;
        sum_w2y += (w * w) * y;
        sum_w2y2 += (w * w) * y.cwiseAbs2();
    }

    const double ess = sum_w > 0.0 ? sum_w * sum_w / sum_w2 : 0.0;
    if (ess < 100.0)
        throw OracleInsufficiencyError("effective sample size " + std::to_string(ess) +
                                       " below 100 near probe point");

    OracleEstimate out;
    out.estimate = sum_wy / sum_w;
    // Var(sum w y / sum w) ~ sum w^2 (y - m)^2 / (sum w)^2
    const LatentVector& m = out.estimate;
    LatentVector spread = sum_w2y2 - 2.0 * m.cwiseProduct(sum_w2y) + sum_w2 * m.cwiseAbs2();
    out.component_stderr = spread.cwiseMax(0.0).cwiseSqrt() / sum_w;
    out.stderr_max = out.component_stderr.maxCoeff();
    out.effective_samples = ess;
    return out;
}

} // namespace vags
