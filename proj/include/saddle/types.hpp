#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "saddle/multiseries.hpp"

namespace saddle {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Axis-aligned integration box. `halfspace_box` declares that the
/// stationary points are expected on a face; geometry decides per point.
struct Domain {
    enum class Kind { Box, HalfspaceBox };
    Kind kind = Kind::Box;
    std::vector<Interval> bounds;

    int dim() const noexcept { return static_cast<int>(bounds.size()); }
    double volume() const;
    bool contains(std::span<const double> x, double slack = 0.0) const;
};

struct HessianData {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd eigenvalues;
    Complex det{};
    /// ∏ μ_k^{-1/2} over principal roots; NaN when !admissible.
    Complex inv_sqrt_det{};
    /// False when some eigenvalue lies on the closed negative real axis.
    bool admissible = false;
};

/// Which face of the box a boundary stationary point sits on. The domain
/// near the point is {side * (x[axis] - x0[axis]) >= 0}.
struct Face {
    int axis = 0;
    int side = 1;
};

struct CriticalPointReport {
    std::vector<Complex> location;
    Complex phi_value{};
    HessianData hessian;
    bool boundary_half = false;
    std::optional<Face> face;
    Complex amplitude_at{};
    double gradient_residual = 0.0;
};

struct PointContribution {
    CriticalPointReport report;
    /// c_ℓ(x) for ℓ = 0.., attached to λ^{-(d+ℓ)/2}; excludes ω(x,λ).
    std::vector<Complex> coefficients;
    /// Boundary terms past the leading one come from the flattened-face
    /// push-forward rather than the half-factor rule.
    bool extended_beyond_leading = false;
    /// Orientation sign fixed by the principal-root rule.
    int orientation = 1;
    /// Residual of φ∘ψ - S through the Morse truncation order.
    double morse_residual = 0.0;
};

struct Expansion {
    int dim = 0;
    std::vector<PointContribution> points;

    /// Number of coefficients available at every point.
    int available_terms() const;
};

}  // namespace saddle
