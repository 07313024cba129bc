#pragma once

// Asymptotic expansion of I(λ) = ∫_M e^{-λφ(x)} A(x) dx over a box M.
//
// Each stationary point x (critical, Re φ(x) = 0, nondegenerate Hessian)
// contributes ω(x,λ) Σ_ℓ c_ℓ(x) λ^{-(d+ℓ)/2} with ω(x,λ) = e^{-λφ(x)}.
// The c_ℓ(x) come from the Morse push-forward Ã = (A∘ψ)·det dψ and the
// standard-phase constants; the leading term is
//   c_0(x) = (2π)^{d/2} A(x) (det H)^{-1/2}
// (halved for a point on a face of the box).

#include <optional>
#include <span>
#include <vector>

#include "saddle/expr.hpp"
#include "saddle/morse.hpp"
#include "saddle/types.hpp"

namespace saddle {

struct SearchOptions {
    double newton_tol = 1e-12;
    int max_iterations = 60;
    int grid_per_axis = 9;
    double dedupe_tol = 1e-8;
    double boundary_tol = 1e-8;
    double imag_tol = 1e-8;
    /// Smallest singular value of H below this (relative to max(1, ‖H‖))
    /// counts as degenerate.
    double degeneracy_tol = 1e-6;
};

/// Newton iteration on ∇φ = 0 from the user seeds plus a grid over the box.
/// Keeps real in-domain roots with Re φ <= 1e-12, de-duplicated, and
/// classifies them as interior or face points. Throws DegenerateHessian,
/// UnsupportedGeometry (corner points) or NoStationaryPoints.
std::vector<CriticalPointReport> find_critical_points(const Expr& phi, const Domain& dom,
                                                      std::span<const std::vector<double>> seeds = {},
                                                      const Expr* amplitude = nullptr,
                                                      const SearchOptions& options = {});

struct ExpandOptions {
    bool flip_first_branch = false;
    /// Spot-check Re φ >= 0 on a small sphere around the point.
    bool check_admissibility = true;
};

/// Leading coefficient from the Hessian alone.
Complex leading_coefficient(const CriticalPointReport& report, int dim);

/// Coefficients c_0..c_L of one point. `phi` and `amplitude` are Taylor
/// series re-centred at the point; phi must have order >= L + 2 and the
/// amplitude order >= L. The constant term of phi is ignored (it is carried
/// by ω).
PointContribution expand_at(const TruncatedSeries& phi, const TruncatedSeries& amplitude,
                            const CriticalPointReport& report, int max_order, const ExpandOptions& options = {});

/// Taylor-expands the expressions at the report location and calls expand_at.
PointContribution expand_point(const Expr& phi, const Expr& amplitude, const CriticalPointReport& report,
                               int max_order, const ExpandOptions& options = {});

Expansion assemble(int dim, std::vector<PointContribution> points);

/// find_critical_points + expand_point for every point (points in parallel).
Expansion expand(const Expr& phi, const Expr& amplitude, const Domain& dom, int max_order,
                 std::span<const std::vector<double>> seeds = {}, const ExpandOptions& options = {},
                 const SearchOptions& search = {});

/// Σ_x ω(x,λ) Σ_{ℓ<n_terms} c_ℓ(x) λ^{-(d+ℓ)/2}.
Complex evaluate_partial_sum(const Expansion& e, double lambda, int n_terms);

/// One-dimensional λ^{-1/2} and λ^{-3/2} coefficients from the closed-form
/// derivatives of ψ obtained by differentiating φ∘ψ = y².
struct ClosedForm1D {
    Complex psi1{};
    Complex psi2{};
    Complex psi3{};
    Complex c0{};
    Complex c2{};
};

ClosedForm1D higher_order_1d_closed_form(const TruncatedSeries& phi, const TruncatedSeries& amplitude);

}  // namespace saddle
