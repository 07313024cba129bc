#pragma once

#include <Eigen/Dense>

#include <span>

#include "saddle/expr.hpp"
#include "saddle/multiseries.hpp"
#include "saddle/types.hpp"

namespace saddle {

/// Second-partials matrix of a re-centred phase series, with eigenvalues,
/// determinant and the principal-root (det H)^{-1/2}.
HessianData hessian_of(const TruncatedSeries& phi);

HessianData hessian_from_matrix(const Eigen::MatrixXcd& matrix);

/// ∏ μ_k^{-1/2} with principal roots. Throws InadmissiblePhase when an
/// eigenvalue lies on the closed negative real axis.
Complex inv_sqrt_det(const HessianData& h);

/// ∏ √μ_k with principal roots.
Complex principal_sqrt_product(const Eigen::VectorXcd& eigenvalues);

bool on_closed_negative_axis(Complex mu);

/// Minimum of Re φ(x + r u) - Re φ(x) over `samples` pseudo-random unit
/// directions u. With `face`, directions pointing out of the domain are
/// reflected inward.
double admissibility_margin(const Expr& phi, std::span<const Complex> point, double radius = 1e-2,
                            int samples = 100, const std::optional<Face>& face = std::nullopt);

}  // namespace saddle
