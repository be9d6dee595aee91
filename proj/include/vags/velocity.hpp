#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vags/vecmath.hpp"

namespace vags {

/// Isotropic Gaussian N(mean, variance * I) with a mixture weight.
struct GaussianComponent {
    LatentVector mean;
    double variance = 1.0;
    double weight = 1.0;
};

/// Either the unconditional branch or a component index.
class ConditionLabel {
public:
    static ConditionLabel unconditional() { return ConditionLabel{}; }
    static ConditionLabel component(std::size_t index) { return ConditionLabel{index}; }

    bool is_unconditional() const { return !index_.has_value(); }
    std::size_t index() const;

    std::string to_string() const;

    friend bool operator==(const ConditionLabel&, const ConditionLabel&) = default;

private:
    ConditionLabel() = default;
    explicit ConditionLabel(std::size_t index) : index_(index) {}

    std::optional<std::size_t> index_;
};

/// Evaluable map (z, t, condition) -> velocity.
class ConditionedVelocityField {
public:
    virtual ~ConditionedVelocityField() = default;

    virtual LatentVector raw_velocity(const LatentVector& z, double t,
                                      const ConditionLabel& condition) const = 0;
    virtual Eigen::Index dimension() const = 0;
    virtual std::size_t condition_count() const = 0;

    void check_condition(const ConditionLabel& condition) const;
};

/// Exact flow-matching velocity E[eps - x | z_t = z] along
/// z_t = (1 - t) x + t eps, with x ~ N(mean, variance I) and eps ~ N(0, I).
LatentVector gaussian_flow_velocity(const LatentVector& z, double t, const LatentVector& mean,
                                    double variance);

/// Posterior responsibilities of each component for z_t = z, normalized with log-sum-exp.
Eigen::VectorXd posterior_weights(const LatentVector& z, double t,
                                  const std::vector<GaussianComponent>& components);

/// Marginal velocity of the mixture: posterior-weighted component velocities.
LatentVector mixture_flow_velocity(const LatentVector& z, double t,
                                   const std::vector<GaussianComponent>& components);

/// Throws ConfigError unless the list is a valid mixture (nonempty, shared
/// dimension, positive variances, weights in (0,1] summing to 1).
void validate_mixture(const std::vector<GaussianComponent>& components);

/// Analytic Gaussian-mixture field. The unconditional branch is the full
/// mixture; condition k is component k alone.
class GaussianMixtureField final : public ConditionedVelocityField {
public:
    explicit GaussianMixtureField(std::vector<GaussianComponent> components);

    LatentVector raw_velocity(const LatentVector& z, double t,
                              const ConditionLabel& condition) const override;
    Eigen::Index dimension() const override { return components_.front().mean.size(); }
    std::size_t condition_count() const override { return components_.size(); }

    const std::vector<GaussianComponent>& components() const { return components_; }

private:
    std::vector<GaussianComponent> components_;
};

inline LatentVector raw_velocity(const ConditionedVelocityField& field, const LatentVector& z,
                                 double t, const ConditionLabel& condition) {
    return field.raw_velocity(z, t, condition);
}

struct OracleEstimate {
    LatentVector estimate;
    LatentVector component_stderr;
    double stderr_max = 0.0;  ///< largest entry of component_stderr
    double effective_samples = 0.0;
};

struct OracleOptions {
    std::size_t n_samples = 1'000'000;
    double bandwidth = 0.05;
    std::uint64_t seed = 0;
};

/// Nadaraya-Watson estimate of E[eps - x | z_t ~ z] from seeded paired draws
/// (Gaussian kernel of width `bandwidth`). Independent of the closed forms.
OracleEstimate mc_velocity_oracle(const LatentVector& z, double t,
                                  const std::vector<GaussianComponent>& components,
                                  const ConditionLabel& condition, const OracleOptions& options);

} // namespace vags
