#pragma once

#include <atomic>
#include <memory>
#include <random>
#include <vector>

#include "vags/velocity.hpp"

namespace vags::testing {

/// Two-component d=2 mixture: weights 0.7 / 0.3, means +-(3, 3), unit variance.
inline std::vector<GaussianComponent> benchmark_components() {
    return {{make_latent({3.0, 3.0}), 1.0, 0.7}, {make_latent({-3.0, -3.0}), 1.0, 0.3}};
}

inline std::shared_ptr<const GaussianMixtureField> benchmark_field() {
    return std::make_shared<const GaussianMixtureField>(benchmark_components());
}

inline LatentVector random_latent(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    LatentVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = normal(rng);
    return v;
}

/// Forwards to another field and counts raw evaluations.
class CountingField final : public ConditionedVelocityField {
public:
    explicit CountingField(std::shared_ptr<const ConditionedVelocityField> inner) : inner_(std::move(inner)) {}

    LatentVector raw_velocity(const LatentVector& z, double t, const ConditionLabel& c) const override {
        ++count_;
        return inner_->raw_velocity(z, t, c);
    }
    Eigen::Index dimension() const override { return inner_->dimension(); }
    std::size_t condition_count() const override { return inner_->condition_count(); }

    std::size_t count() const { return count_; }

private:
    std::shared_ptr<const ConditionedVelocityField> inner_;
    mutable std::atomic<std::size_t> count_{0};
};

} // namespace vags::testing
