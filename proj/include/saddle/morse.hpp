#pragma once

// Constructive Morse lemma for a phase series with a nondegenerate critical
// point at the origin: builds y(x) with Σ y_j(x)² = φ(x) by completing
// squares one variable at a time, then inverts it to get ψ = y^{-1} with
// φ∘ψ = S.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "saddle/multiseries.hpp"

namespace saddle {

struct MorseOptions {
    /// Use the negative square root for the first completed square.
    bool flip_first_branch = false;
    /// A pivot or diagonal entry below this multiple of ‖H‖ counts as vanishing.
    double pivot_threshold = 1e-6;
    /// Keep this axis last and unrotated so that y_{d-1} = x[axis]·(unit);
    /// the face {x[axis] = 0} then maps onto {y_{d-1} = 0}.
    std::optional<int> boundary_axis;
};

struct MorseData {
    /// x = ψ(y), in the caller's coordinates.
    std::vector<TruncatedSeries> psi;
    /// y = y(x), the completed-square coordinates.
    std::vector<TruncatedSeries> forward;
    Complex jac_det_at_0{};
    /// Real orthogonal pre-map: φ was completed in coordinates x' = Uᵀx.
    Eigen::MatrixXd unitary_pre_rotation;
    /// max |coeff(φ∘ψ - S)| through the truncation order.
    double residual = 0.0;
    bool precision_ok = true;
};

/// φ_{j,k} with φ = Σ x_j x_k φ_{j,k} and φ_{j,k}(0) = ½ H_{j,k}. The
/// coefficient of x^r in φ is shared out with weight r_j(r_k - δ_jk)/(|r|(|r|-1)).
SeriesMatrix quadratic_decomposition(const TruncatedSeries& phi);

struct RotatedPhase {
    TruncatedSeries phi;
    Eigen::MatrixXd rotation;
};

/// Returns φ∘U and U such that the Hessian of φ∘U has no small diagonal
/// entry and no small elimination pivot. U is the identity when φ already
/// qualifies. With a boundary axis, U also moves that axis last and only
/// rotates the remaining ones.
RotatedPhase pre_rotate_if_needed(const TruncatedSeries& phi, const MorseOptions& options = {});

MorseData complete_squares(const TruncatedSeries& phi, const MorseOptions& options = {});

/// Applies the linear map x -> M x to a series: returns f(M x).
TruncatedSeries linear_substitution(const TruncatedSeries& f, const Eigen::MatrixXd& m);

/// The standard phase S = Σ x_j² at the given order.
TruncatedSeries standard_phase(int dim, int order);

}  // namespace saddle
