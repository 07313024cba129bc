#include "saddle/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "saddle/error.hpp"
#include "saddle/expansion.hpp"

namespace saddle {

namespace {

struct Derivs {
    Complex value, first, second;
};

Derivs at_one(const Expr& v) {
    const std::vector<Complex> one{1.0};
    const TruncatedSeries s = taylor(v, ExpansionPoint{one, 2});
    return {s.coeff(MultiIndex{0}), s.coeff(MultiIndex{1}), 2.0 * s.coeff(MultiIndex{2})};
}

std::vector<Complex> maclaurin(const Expr& v, int order) {
    const std::vector<Complex> zero{0.0};
    const TruncatedSeries s = taylor(v, ExpansionPoint{zero, order});
    std::vector<Complex> c(order + 1);
    for (int n = 0; n <= order; ++n) c[n] = s.coeff(MultiIndex{n});
    return c;
}

// Root test on the tail: coefficients of a function analytic past |z| = 1
// eventually shrink geometrically.
void check_radius(const std::vector<Complex>& c, const char* name) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 16) return;
    for (int k = n / 2; k <= n; ++k) {
        const double m = std::abs(c[k]);
        if (m > 1.0 && std::pow(m, 1.0 / k) > 1.0 + 1e-3) {
            throw InvalidProblem(std::string("Maclaurin coefficients of ") + name +
                                 " grow; its radius of convergence is not above 1");
        }
    }
}

// out[r] = Σ_k a[k] b[r-k] for r <= R.
void convolve_serial(const std::vector<Complex>& a, const std::vector<Complex>& b, std::vector<Complex>& out) {
    const int R = static_cast<int>(out.size()) - 1;
    for (int r = 0; r <= R; ++r) {
        Complex acc{};
        for (int k = 0; k <= r; ++k) acc += a[k] * b[r - k];
        out[r] = acc;
    }
}

void convolve_parallel(const std::vector<Complex>& a, const std::vector<Complex>& b, std::vector<Complex>& out) {
    const int R = static_cast<int>(out.size()) - 1;
#pragma omp parallel for schedule(static)
    for (int r = 0; r <= R; ++r) {
        Complex acc{};
        for (int k = 0; k <= r; ++k) acc += a[k] * b[r - k];
        out[r] = acc;
    }
}

Expr e_it() { return Expr::unary(Op::Exp, Expr::constant(Complex(0.0, 1.0)) * Expr::variable(1)); }

}  // namespace

GenFunDerivatives validate(const GenFunProblem& p) {
    if (!p.v1.valid() || !p.v2.valid()) throw InvalidProblem("v1 and v2 are required");
    if (max_variable_index(p.v1) > 0 || max_variable_index(p.v2) > 0) {
        throw InvalidProblem("v1 and v2 must be functions of z alone");
    }
    const Derivs d1 = at_one(p.v1), d2 = at_one(p.v2);
    if (std::abs(d1.value - 1.0) > 1e-12) throw InvalidProblem("v1(1) must equal 1");
    if (std::abs(d2.value - 1.0) > 1e-12) throw InvalidProblem("v2(1) must equal 1");
    for (const Complex c : {d1.first, d2.first, d1.second, d2.second}) {
        if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c))) {
            throw InvalidProblem("derivatives of v1, v2 at 1 must be real");
        }
    }
    GenFunDerivatives g{d1.first.real(), d2.first.real(), d1.second.real(), d2.second.real()};
    if (!(g.v1p > 0.0) || !(g.v2p > 0.0)) throw InvalidProblem("v1'(1) and v2'(1) must be positive");
    if (std::abs(g.delta()) <= 1e-12) throw InvalidProblem("v1'(1) and v2'(1) must differ");
    return g;
}

CoefficientTable exact_coefficients(const GenFunProblem& p, int R, int S, ExecPolicy policy) {
    if (R < 0 || S < 0) throw InvalidProblem("negative coefficient range");
    if (static_cast<double>(R) * S > 1e6) throw InvalidProblem("R·S exceeds 10^6");
    const int probe = std::max(R, 32);
    const auto v1 = maclaurin(p.v1, probe);
    const auto v2 = maclaurin(p.v2, probe);
    check_radius(v1, "v1");
    check_radius(v2, "v2");

    CoefficientTable table(R, S);
    std::vector<Complex> c(R + 1), power(R + 1), scratch(R + 1);
    c[0] = 1.0;
    power[0] = 1.0;
    for (int r = 0; r <= R; ++r) table.at(r, 0) = c[r];
    const auto conv = policy == ExecPolicy::Parallel ? convolve_parallel : convolve_serial;
    for (int s = 1; s <= S; ++s) {
        conv(v1, power, scratch);
        power.swap(scratch);
        conv(v2, c, scratch);
        for (int r = 0; r <= R; ++r) c[r] = scratch[r] + power[r];
        for (int r = 0; r <= R; ++r) table.at(r, s) = c[r];
    }
    return table;
}

Expr genfun_phase(const GenFunProblem& p, double kappa) {
    const Expr z = e_it();
    const Expr pv = Expr::variable(0);
    const Expr mix = (Expr::constant(1.0) - pv) * substitute(p.v1, 0, z) + pv * substitute(p.v2, 0, z);
    return Expr::constant(Complex(0.0, kappa)) * Expr::variable(1) - Expr::unary(Op::Log, mix);
}

double pipeline_constant(const GenFunProblem& p, double kappa) {
    const GenFunDerivatives g = validate(p);
    const double p0 = (kappa - g.v1p) / (g.v2p - g.v1p);
    if (p0 < -1e-12 || p0 > 1 + 1e-12) throw BoundaryDirection("kappa lies outside [v1'(1), v2'(1)]");
    Domain dom;
    dom.bounds = {{0.0, 1.0}, {-0.5, 0.5}};
    const std::vector<std::vector<double>> seeds{{std::clamp(p0, 0.0, 1.0), 0.0}};
    const Expansion e = expand(genfun_phase(p, kappa), Expr::constant(1.0), dom, 0, seeds);
    Complex total{};
    for (const auto& point : e.points) {
        if (std::abs(point.report.location[1]) > 1e-8) continue;  // only the t = 0 point is on |z| = 1 at z = 1
        total += point.coefficients.front();
    }
    return (total / (2.0 * std::numbers::pi)).real();
}

double saddle_prediction(const GenFunProblem& p) {
    const GenFunDerivatives g = validate(p);
    if (!(p.kappa > g.lower() && p.kappa < g.upper())) {
        throw BoundaryDirection("kappa is not strictly between v1'(1) and v2'(1); use the boundary regime");
    }
    const double predicted = 1.0 / std::abs(g.delta());
    const double pipeline = pipeline_constant(p, p.kappa);
    if (std::abs(pipeline - predicted) > 1e-8) {
        throw Error("saddle-point pipeline disagrees with 1/|v1'(1) - v2'(1)|");
    }
    return predicted;
}

double boundary_variance(const GenFunProblem& p, BoundarySide side) {
    const GenFunDerivatives g = validate(p);
    const bool first = (side == BoundarySide::Lower) == (g.v1p < g.v2p);
    const double vp = first ? g.v1p : g.v2p;
    const double vpp = first ? g.v1pp : g.v2pp;
    return vpp + vp - vp * vp;
}

double boundary_u(const GenFunProblem& p, int r, int s, BoundarySide side) {
    const GenFunDerivatives g = validate(p);
    const double var = boundary_variance(p, side);
    if (!(var > 0.0)) throw InvalidProblem("boundary variance is not positive; no Gaussian window");
    const double kb = side == BoundarySide::Lower ? g.lower() : g.upper();
    const double sign = side == BoundarySide::Lower ? 1.0 : -1.0;
    return sign * (r - kb * s) / std::sqrt(var * s);
}

int r_for(const GenFunProblem& p, int s, double u, BoundarySide side) {
    const GenFunDerivatives g = validate(p);
    const double var = boundary_variance(p, side);
    if (!(var >= 0.0)) throw InvalidProblem("boundary variance is negative");
    const double kb = side == BoundarySide::Lower ? g.lower() : g.upper();
    const double sign = side == BoundarySide::Lower ? 1.0 : -1.0;
    return static_cast<int>(std::lround(kb * s + sign * u * std::sqrt(var * s)));
}

double boundary_limit(const GenFunProblem& p, double u) {
    const GenFunDerivatives g = validate(p);
    return 0.5 * std::erfc(-u / std::numbers::sqrt2) / std::abs(g.delta());
}

}  // namespace saddle
