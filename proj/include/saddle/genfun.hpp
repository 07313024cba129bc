#pragma once

// Coefficients a_rs of F(z,w) = 1/((1 - w v1(z))(1 - w v2(z))).
//
// With v1(1) = v2(1) = 1 and κ strictly between v1'(1) and v2'(1), the
// coefficients along r ≈ κs tend to 1/|v1'(1) - v2'(1)|. The library obtains
// this constant from a two-dimensional saddle-point expansion of
//   ∫∫ e^{-sφ(p,t)} dp dt,   φ(p,t) = iκt - log[(1-p) v1(e^{it}) + p v2(e^{it})]
// over [0,1] × [-1/2, 1/2], scaled by 1/(2π). Exact coefficients come from
// plain power-series arithmetic on F and serve as the independent check.

#include <algorithm>
#include <vector>

#include "saddle/expr.hpp"
#include "saddle/quadrature.hpp"

namespace saddle {

struct GenFunProblem {
    Expr v1;  // functions of the single variable z
    Expr v2;
    double kappa = 0.0;
    int series_order = 0;
};

/// Values and derivatives of v1, v2 at z = 1.
struct GenFunDerivatives {
    double v1p = 0.0;
    double v2p = 0.0;
    double v1pp = 0.0;
    double v2pp = 0.0;

    double delta() const { return v2p - v1p; }
    double lower() const { return std::min(v1p, v2p); }
    double upper() const { return std::max(v1p, v2p); }
};

/// Throws InvalidProblem unless v1(1) = v2(1) = 1, the first derivatives are
/// distinct positive reals and the second derivatives are real.
GenFunDerivatives validate(const GenFunProblem& p);

class CoefficientTable {
public:
    CoefficientTable(int r_max, int s_max)
        : r_max_(r_max), s_max_(s_max), a_(static_cast<std::size_t>(r_max + 1) * (s_max + 1)) {}

    int r_max() const noexcept { return r_max_; }
    int s_max() const noexcept { return s_max_; }
    Complex& at(int r, int s) { return a_[static_cast<std::size_t>(s) * (r_max_ + 1) + r]; }
    Complex at(int r, int s) const { return a_[static_cast<std::size_t>(s) * (r_max_ + 1) + r]; }

private:
    int r_max_;
    int s_max_;
    std::vector<Complex> a_;
};

/// a_rs for r <= R, s <= S through C_s = v2 C_{s-1} + v1^s, where C_s(z) is
/// the w^s coefficient of F. Throws InvalidProblem when R·S > 10^6 or the
/// Maclaurin coefficients of v1, v2 grow (radius of convergence <= 1).
CoefficientTable exact_coefficients(const GenFunProblem& p, int R, int S,
                                    ExecPolicy policy = ExecPolicy::Parallel);

/// The phase φ(p,t) in the variables (p, t).
Expr genfun_phase(const GenFunProblem& p, double kappa);

/// 1/|v1'(1) - v2'(1)|, cross-checked against the saddle-point pipeline to
/// 1e-8. Throws BoundaryDirection unless κ lies strictly inside the interval.
double saddle_prediction(const GenFunProblem& p);

/// Pipeline value c_0/(2π) at its stationary point. Inside the interval this
/// is the central constant; at an endpoint the point sits on a face of the
/// square and the value is halved.
double pipeline_constant(const GenFunProblem& p, double kappa);

enum class BoundarySide { Lower, Upper };

/// Variance of the Gaussian window at an endpoint κ_b = v_b'(1):
/// v_b''(1) + v_b'(1) - v_b'(1)².
double boundary_variance(const GenFunProblem& p, BoundarySide side);

/// u = (r - κ_b s)/(σ_b √s), signed so that u > 0 points into the interval.
double boundary_u(const GenFunProblem& p, int r, int s, BoundarySide side);

/// Nearest integer r with boundary_u(r, s) ≈ u.
int r_for(const GenFunProblem& p, int s, double u, BoundarySide side);

/// Φ(u)/|v1'(1) - v2'(1)| with Φ the standard normal distribution function.
double boundary_limit(const GenFunProblem& p, double u);

}  // namespace saddle
