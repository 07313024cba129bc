#pragma once

// Gaussian monomial integrals against the standard phase S(x) = Σ x_j².
//
// Normalisation: ∫_ℝ x^n e^{-λx²} dx = Γ((n+1)/2) λ^{-(n+1)/2} for even n,
// so the multivariate constant is β_r = ∏_j Γ((r_j+1)/2) = π^{d/2} ∏_j
// r_j! / ((r_j/2)! 2^{r_j}) when every r_j is even, and 0 otherwise.

#include <optional>
#include <vector>

#include "saddle/multiseries.hpp"
#include "saddle/types.hpp"

namespace saddle {

/// Γ(m/2) for integer m >= 1, by the half-integer recurrence.
double gamma_half(int m);

/// ∫_{-∞}^{∞} x^n e^{-λx²} dx.
double monomial_integral_1d(int n, double lambda);

/// ∫_0^{∞} x^n e^{-x²} dx = Γ((n+1)/2) / 2, for every n >= 0.
double half_line_constant(int n);

double beta(const MultiIndex& r);

/// Integration over {side * y[axis] >= 0} instead of ℝ^d.
struct HalfRange {
    int axis = 0;
    int side = 1;
};

/// ∫ y^r e^{-S(y)} dy over the half-space.
double beta_half(const MultiIndex& r, const HalfRange& half);

/// c_n = Σ_{|r|=n} a_r β_r for n = 0..max_order. With `half`, the half-range
/// constants are used and odd-n terms survive.
std::vector<Complex> standard_phase_coefficients(const TruncatedSeries& amplitude, int max_order,
                                                 const std::optional<HalfRange>& half = std::nullopt);

/// Expansion of ∫ A e^{-λS} as a single contribution at the origin.
Expansion standard_phase_expansion(const TruncatedSeries& amplitude, int max_order);

}  // namespace saddle
