#include "saddle/standard_phase.hpp"

#include <cmath>
#include <numbers>

#include "saddle/error.hpp"

namespace saddle {

double gamma_half(int m) {
    if (m < 1) throw Error("gamma_half: argument must be a positive half-integer");
    // Γ(1/2) = √π, Γ(1) = 1, Γ(x + 1) = x Γ(x).
    double g = (m % 2 == 1) ? std::sqrt(std::numbers::pi) : 1.0;
    for (int k = (m % 2 == 1) ? 1 : 2; k < m; k += 2) g *= k / 2.0;
    return g;
}

double monomial_integral_1d(int n, double lambda) {
    if (!(lambda > 0.0)) throw Error("monomial_integral_1d: lambda must be positive");
    if (n < 0) throw Error("monomial_integral_1d: negative power");
    if (n % 2 == 1) return 0.0;
    return gamma_half(n + 1) * std::pow(lambda, -0.5 * (n + 1));
}

double half_line_constant(int n) {
    if (n < 0) throw Error("half_line_constant: negative power");
    return 0.5 * gamma_half(n + 1);
}

double beta(const MultiIndex& r) {
    double b = 1.0;
    for (int j = 0; j < r.dim(); ++j) {
        if (r[j] % 2 == 1) return 0.0;
        b *= gamma_half(r[j] + 1);
    }
    return b;
}

double beta_half(const MultiIndex& r, const HalfRange& half) {
    if (half.axis < 0 || half.axis >= r.dim()) throw DimensionMismatch("beta_half: axis out of range");
    double b = 1.0;
    for (int j = 0; j < r.dim(); ++j) {
        if (j == half.axis) {
            const double sign = (half.side < 0 && r[j] % 2 == 1) ? -1.0 : 1.0;
            b *= sign * half_line_constant(r[j]);
        } else {
            if (r[j] % 2 == 1) return 0.0;
            b *= gamma_half(r[j] + 1);
        }
    }
    return b;
}

std::vector<Complex> standard_phase_coefficients(const TruncatedSeries& amplitude, int max_order,
                                                 const std::optional<HalfRange>& half) {
    if (max_order < 0) throw SeriesError("standard_phase_coefficients: negative order");
    if (amplitude.order() < max_order) {
        throw SeriesError("amplitude truncated at order " + std::to_string(amplitude.order()) +
                          ", below requested " + std::to_string(max_order));
    }
    std::vector<Complex> c(max_order + 1);
    for (const auto& [idx, a] : amplitude.terms()) {
        const int n = idx.total_degree();
        if (n > max_order) continue;
        c[n] += a * (half ? beta_half(idx, *half) : beta(idx));
    }
    return c;
}

Expansion standard_phase_expansion(const TruncatedSeries& amplitude, int max_order) {
    Expansion e;
    e.dim = amplitude.dim();
    PointContribution p;
    p.report.location.assign(e.dim, Complex{});
    p.report.amplitude_at = amplitude.constant_term();
    p.coefficients = standard_phase_coefficients(amplitude, max_order);
    e.points.push_back(std::move(p));
    return e;
}

}  // namespace saddle
