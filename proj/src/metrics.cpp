#include "vags/metrics.hpp"

#include <limits>

namespace vags {

void SampleBatch::validate() const {
    if (points.empty()) throw ContractError("sample batch is empty");
    for (const auto& p : points)
        if (p.size() != points.front().size()) throw DimensionError(points.front().size(), p.size());
}

std::vector<ComponentStats> component_assignment_stats(const SampleBatch& batch,
                                                       const std::vector<GaussianComponent>& components) {
    batch.validate();
    if (components.empty()) throw ConfigError("no components to assign to");
    const Eigen::Index d = batch.points.front().size();
    for (const auto& c : components)
        if (c.mean.size() != d) throw DimensionError(d, c.mean.size());

    const std::size_t k_count = components.size();
    std::vector<LatentVector> sum(k_count, LatentVector::Zero(d));
    std::vector<LatentVector> sum_sq(k_count, LatentVector::Zero(d));
    std::vector<std::size_t> counts(k_count, 0);

    for (const auto& p : batch.points) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < k_count; ++k) {
            const double dist = (p - components[k].mean).squaredNorm();
            if (dist < best_dist) {
                best_dist = dist;
                best = k;
            }
        }
        ++counts[best];
        sum[best] += p;
        sum_sq[best] += p.cwiseAbs2();
    }

    const auto total = static_cast<double>(batch.points.size());
    std::vector<ComponentStats> out(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        out[k].count = counts[k];
        out[k].mass = static_cast<double>(counts[k]) / total;
        if (counts[k] == 0) continue;
        const auto n = static_cast<double>(counts[k]);
        out[k].mean = sum[k] / n;
        out[k].variance = (sum_sq[k] / n - out[k].mean.cwiseAbs2()).cwiseMax(0.0);
    }
    return out;
}

namespace {

// Exact single-Gaussian velocity in one coordinate: gain(t) * (z - (1-t) m) - m.
double scalar_velocity(double z, double t, const ScalarGaussian& g) {
    const double a = 1.0 - t;
    const double gain = (t - a * g.variance) / (a * a * g.variance + t * t);
    return gain * (z - a * g.mean) - g.mean;
}

} // namespace

double linear_ode_reference(double z0, double t_start, double t_end, const ScalarGaussian& cond,
                            const ScalarGaussian& uncond, double lambda, int substeps) {
    if (substeps < 1) throw DomainError("substeps must be >= 1");
    if (!(cond.variance > 0.0 && uncond.variance > 0.0)) throw DomainError("variance must be positive");
    if (t_start == t_end) return z0;

    auto rhs = [&](double z, double t) {
        const double vu = scalar_velocity(z, t, uncond);
        return vu + lambda * (scalar_velocity(z, t, cond) - vu);
    };
    const double h = (t_end - t_start) / substeps;
    double z = z0;
    for (int k = 0; k < substeps; ++k) {
        const double t = t_start + k * h;
        const double k1 = rhs(z, t);
        const double k2 = rhs(z + 0.5 * h * k1, t + 0.5 * h);
        const double k3 = rhs(z + 0.5 * h * k2, t + 0.5 * h);
        const double k4 = rhs(z + h * k3, t + h);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

double linear_ode_reference(double z0, double t_start, double t_end, double mean, double variance,
                            double lambda, int substeps) {
    const ScalarGaussian g{mean, variance};
    return linear_ode_reference(z0, t_start, t_end, g, g, lambda, substeps);
}

} // namespace vags
