#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include <Eigen/Core>

#include "vags/errors.hpp"

namespace vags {

template <typename Scalar>
using Latent = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A point of the ODE state space; velocities share the representation.
using LatentVector = Latent<double>;

/// Norms below this are treated as zero by cosine_similarity.
inline constexpr double kDegenerateNorm = 1e-12;

template <typename DerivedA, typename DerivedB>
void require_same_dimension(const Eigen::MatrixBase<DerivedA>& a,
                            const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size()) throw DimensionError(a.size(), b.size());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    return a.allFinite();
}

/// Builds a latent from plain values, rejecting empty input and NaN/Inf.
template <typename Scalar = double>
Latent<Scalar> make_latent(const std::vector<Scalar>& values) {
    if (values.empty()) throw DomainError("latent vector must have dimension >= 1");
    Latent<Scalar> out = Eigen::Map<const Latent<Scalar>>(values.data(),
                                                         static_cast<Eigen::Index>(values.size()));
    if (!out.allFinite()) throw DomainError("latent vector has non-finite components");
    return out;
}

template <typename Scalar = double>
Latent<Scalar> make_latent(std::initializer_list<Scalar> values) {
    return make_latent<Scalar>(std::vector<Scalar>(values));
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
    require_same_dimension(a, b);
    return a.dot(b);
}

template <typename Derived>
typename Derived::Scalar norm(const Eigen::MatrixBase<Derived>& a) {
    return a.norm();
}

/// Cosine of the angle between a and b, clamped to [-1, 1]. Returns 0 when
/// either argument is (numerically) the zero vector, which keeps any
/// exp(kappa * ... * s) multiplier neutral.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    require_same_dimension(a, b);
    const Scalar na = a.norm();
    const Scalar nb = b.norm();
    if (na < Scalar(kDegenerateNorm) || nb < Scalar(kDegenerateNorm)) return Scalar(0);
    return std::clamp(a.dot(b) / (na * nb), Scalar(-1), Scalar(1));
}

} // namespace vags
