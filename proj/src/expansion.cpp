#include "saddle/expansion.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "saddle/error.hpp"
#include "saddle/hessian.hpp"
#include "saddle/standard_phase.hpp"

namespace saddle {

namespace {

std::vector<std::vector<double>> grid_seeds(const Domain& dom, int per_axis) {
    const int d = dom.dim();
    if (d > 3) per_axis = 3;
    std::vector<std::vector<double>> seeds;
    std::vector<int> counter(d, 0);
    for (;;) {
        std::vector<double> x(d);
        for (int j = 0; j < d; ++j) {
            const auto& b = dom.bounds[j];
            x[j] = per_axis == 1 ? 0.5 * (b.lo + b.hi) : b.lo + (b.hi - b.lo) * counter[j] / (per_axis - 1);
        }
        seeds.push_back(std::move(x));
        int j = 0;
        while (j < d && ++counter[j] == per_axis) counter[j++] = 0;
        if (j == d) break;
    }
    return seeds;
}

struct DerivativeTable {
    std::vector<CompiledExpr> grad;
    std::vector<std::vector<CompiledExpr>> hess;
};

DerivativeTable derivative_table(const Expr& phi, int d) {
    DerivativeTable t;
    for (int j = 0; j < d; ++j) {
        const Expr dj = derivative(phi, j);
        t.grad.emplace_back(dj);
        std::vector<CompiledExpr> row;
        for (int k = 0; k < d; ++k) row.emplace_back(derivative(dj, k));
        t.hess.push_back(std::move(row));
    }
    return t;
}

double norm_of(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex c : v) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace

std::vector<CriticalPointReport> find_critical_points(const Expr& phi, const Domain& dom,
                                                      std::span<const std::vector<double>> seeds,
                                                      const Expr* amplitude, const SearchOptions& options) {
    const int d = dom.dim();
    if (d < 1) throw InvalidProblem("domain has no axes");
    for (const auto& b : dom.bounds) {
        if (!(b.hi > b.lo)) throw InvalidProblem("domain interval must have hi > lo");
    }
    if (max_variable_index(phi) >= d) throw InvalidProblem("phase uses more variables than the domain has");

    std::vector<std::vector<double>> starts(seeds.begin(), seeds.end());
    for (const auto& s : starts) {
        if (static_cast<int>(s.size()) != d) throw InvalidProblem("seed dimension does not match domain");
    }
    for (auto& s : grid_seeds(dom, options.grid_per_axis)) starts.push_back(std::move(s));

    const DerivativeTable table = derivative_table(phi, d);
    double best_residual = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    std::vector<CriticalPointReport> found;

    for (const auto& seed : starts) {
        std::vector<Complex> x(seed.begin(), seed.end());
        std::vector<Complex> g(d);
        bool converged = false;
        try {
            for (int it = 0; it <= options.max_iterations; ++it) {
                for (int j = 0; j < d; ++j) g[j] = table.grad[j].eval(x);
                const double r = norm_of(g);
                if (!std::isfinite(r)) break;
                best_residual = std::min(best_residual, r);
                if (r <= options.newton_tol) {
                    converged = true;
                    break;
                }
                if (it == options.max_iterations) break;
                Eigen::MatrixXcd h(d, d);
                Eigen::VectorXcd rhs(d);
                for (int j = 0; j < d; ++j) {
                    rhs[j] = -g[j];
                    for (int k = 0; k < d; ++k) h(j, k) = table.hess[j][k].eval(x);
                }
                Eigen::FullPivLU<Eigen::MatrixXcd> lu(h);
                if (!lu.isInvertible()) break;
                const Eigen::VectorXcd step = lu.solve(rhs);
                for (int j = 0; j < d; ++j) x[j] += step[j];
            }
        } catch (const SingularPoint&) {
            converged = false;
        }
        if (!converged) continue;
        any_converged = true;

        std::vector<double> real(d);
        bool is_real = true;
        for (int j = 0; j < d; ++j) {
            if (std::abs(x[j].imag()) > options.imag_tol) is_real = false;
            real[j] = x[j].real();
        }
        if (!is_real || !dom.contains(real, options.boundary_tol)) continue;

        // Snap to faces and classify.
        std::vector<Face> faces;
        for (int j = 0; j < d; ++j) {
            const auto& b = dom.bounds[j];
            if (std::abs(real[j] - b.lo) <= options.boundary_tol) {
                real[j] = b.lo;
                faces.push_back({j, +1});
            } else if (std::abs(real[j] - b.hi) <= options.boundary_tol) {
                real[j] = b.hi;
                faces.push_back({j, -1});
            }
        }

        bool duplicate = false;
        for (const auto& p : found) {
            double dist = 0.0;
            for (int j = 0; j < d; ++j) dist = std::max(dist, std::abs(p.location[j].real() - real[j]));
            if (dist <= options.dedupe_tol) duplicate = true;
        }
        if (duplicate) continue;

        CriticalPointReport rep;
        rep.location.assign(real.begin(), real.end());
        rep.phi_value = evaluate(phi, rep.location);
        if (rep.phi_value.real() > 1e-12) continue;  // exponentially small contribution
        if (rep.phi_value.real() < -1e-12) {
            throw InadmissiblePhase("Re φ < 0 at a critical point; the integrand grows with λ");
        }
        rep.phi_value.real(0.0);
        if (faces.size() > 1) {
            throw UnsupportedGeometry("stationary point at a corner of the domain (quarter-space); not supported");
        }
        rep.gradient_residual = norm_of(gradient_at(phi, rep.location));
        ExpansionPoint at{rep.location, 2};
        TruncatedSeries local = taylor(phi, at);
        for (int j = 0; j < d; ++j) local.set(MultiIndex::unit(d, j), 0.0);
        local.set(MultiIndex(d), 0.0);
        rep.hessian = hessian_of(local);
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rep.hessian.matrix);
        const double smin = svd.singularValues().minCoeff();
        const double hnorm = std::max(1.0, svd.singularValues().maxCoeff());
        if (smin <= options.degeneracy_tol * hnorm) {
            throw DegenerateHessian("degenerate (non-quadratic) stationary point; Hessian is singular");
        }
        if (!faces.empty()) {
            rep.boundary_half = true;
            rep.face = faces.front();
        }
        if (amplitude) rep.amplitude_at = evaluate(*amplitude, rep.location);
        found.push_back(std::move(rep));
    }

    if (found.empty()) {
        if (!any_converged) {
            throw NoStationaryPoints("Newton iteration did not converge from any seed", best_residual);
        }
        throw NoStationaryPoints("no stationary point (critical with Re φ = 0) in the domain", best_residual);
    }
    if (dom.kind == Domain::Kind::HalfspaceBox) {
        for (const auto& p : found) {
            if (!p.boundary_half) {
                throw InvalidProblem("halfspace_box domain but a stationary point lies in the interior");
            }
        }
    }
    // Deterministic order: lexicographic in location.
    std::sort(found.begin(), found.end(), [](const CriticalPointReport& a, const CriticalPointReport& b) {
        for (std::size_t j = 0; j < a.location.size(); ++j) {
            if (a.location[j].real() != b.location[j].real()) return a.location[j].real() < b.location[j].real();
        }
        return false;
    });
    return found;
}

Complex leading_coefficient(const CriticalPointReport& report, int dim) {
    const Complex c = std::pow(2.0 * std::numbers::pi, 0.5 * dim) * report.amplitude_at *
                      inv_sqrt_det(report.hessian);
    return report.boundary_half ? 0.5 * c : c;
}

namespace {

// Ã = (A∘ψ)·det dψ.
TruncatedSeries pushed_amplitude(const TruncatedSeries& amplitude, const MorseData& morse) {
    const TruncatedSeries composed = compose(amplitude, morse.psi);
    const TruncatedSeries jac = determinant(jacobian(morse.psi));
    return composed * jac;
}

int orientation_sign(const MorseData& morse, const HessianData& h, int d) {
    const Complex target = std::pow(2.0, 0.5 * d) * inv_sqrt_det(h);
    const Complex ratio = morse.jac_det_at_0 / target;
    if (std::abs(ratio.imag()) > 1e-6 || std::abs(std::abs(ratio.real()) - 1.0) > 1e-6) {
        throw Error("Morse Jacobian does not match (det ½H)^{-1/2} up to sign");
    }
    return ratio.real() > 0 ? 1 : -1;
}

}  // namespace

PointContribution expand_at(const TruncatedSeries& phi, const TruncatedSeries& amplitude,
                            const CriticalPointReport& report, int max_order, const ExpandOptions& options) {
    const int d = phi.dim();
    if (amplitude.dim() != d) throw DimensionMismatch("phase and amplitude dimensions differ");
    if (max_order < 0) throw SeriesError("negative expansion order");
    if (phi.order() < max_order + 2 || amplitude.order() < max_order) {
        throw SeriesError("truncation too low for requested order " + std::to_string(max_order));
    }
    TruncatedSeries local = phi;
    local.set(MultiIndex(d), 0.0);
    for (int j = 0; j < d; ++j) local.set(MultiIndex::unit(d, j), 0.0);
    local = local.truncated(max_order + 2);
    const TruncatedSeries amp = amplitude.truncated(max_order);

    PointContribution out;
    out.report = report;
    out.report.hessian = hessian_of(local);
    out.report.amplitude_at = amp.constant_term();
    const HessianData& h = out.report.hessian;
    if (std::abs(h.det) <= 1e-12 * std::max(1.0, std::pow(h.matrix.cwiseAbs().maxCoeff(), d))) {
        throw DegenerateHessian("degenerate Hessian at the expansion point");
    }
    const Complex closed = leading_coefficient(out.report, d);

    MorseOptions mopts;
    mopts.flip_first_branch = options.flip_first_branch;

    if (!report.boundary_half) {
        const MorseData morse = complete_squares(local, mopts);
        out.orientation = orientation_sign(morse, h, d);
        out.morse_residual = morse.residual;
        out.coefficients = standard_phase_coefficients(pushed_amplitude(amp, morse), max_order);
        for (auto& c : out.coefficients) c *= static_cast<double>(out.orientation);
    } else {
        if (!report.face) throw InvalidProblem("boundary point without a face");
        const Face face = *report.face;
        mopts.boundary_axis = face.axis;
        try {
            const MorseData morse = complete_squares(local, mopts);
            // y_{d-1} = x[axis]·c(x); the side of the face in y is fixed by Re c(0).
            const Complex c = morse.forward[d - 1].coeff(MultiIndex::unit(d, face.axis));
            if (std::abs(c.real()) <= 1e-12 * std::abs(c)) {
                throw UnsupportedGeometry("flattened face is tangent to the imaginary axis");
            }
            const int y_side = (c.real() > 0 ? 1 : -1) * face.side;
            out.orientation = orientation_sign(morse, h, d);
            out.morse_residual = morse.residual;
            out.coefficients = standard_phase_coefficients(pushed_amplitude(amp, morse), max_order,
                                                           HalfRange{d - 1, y_side});
            for (auto& cl : out.coefficients) cl *= static_cast<double>(out.orientation);
            out.extended_beyond_leading = max_order > 0;
        } catch (const UnsupportedGeometry&) {
            // The face cannot be flattened with a boundary-preserving
            // rotation; only the half-factor leading term is available.
            out.coefficients = {closed};
            out.extended_beyond_leading = false;
        }
    }

    const Complex c0 = out.coefficients.front();
    if (std::abs(out.report.amplitude_at) > 1e-14 && std::abs(c0 - closed) > 1e-9 * std::abs(closed)) {
        throw Error("series leading coefficient disagrees with the closed form");
    }
    return out;
}

PointContribution expand_point(const Expr& phi, const Expr& amplitude, const CriticalPointReport& report,
                               int max_order, const ExpandOptions& options) {
    const int d = static_cast<int>(report.location.size());
    if (options.check_admissibility) {
        const double margin = admissibility_margin(phi, report.location, 1e-2, 100, report.face);
        if (margin < -1e-9) {
            throw InadmissiblePhase("Re φ drops below its stationary value near the point (margin " +
                                    std::to_string(margin) + ")");
        }
    }
    const TruncatedSeries phi_s = taylor(phi, ExpansionPoint{report.location, max_order + 2});
    const TruncatedSeries amp_s = taylor(amplitude, ExpansionPoint{report.location, max_order});
    if (phi_s.dim() != d) throw DimensionMismatch("phase dimension mismatch");
    PointContribution p = expand_at(phi_s, amp_s, report, max_order, options);
    p.report.phi_value = report.phi_value;
    return p;
}

Expansion assemble(int dim, std::vector<PointContribution> points) {
    Expansion e;
    e.dim = dim;
    e.points = std::move(points);
    return e;
}

Expansion expand(const Expr& phi, const Expr& amplitude, const Domain& dom, int max_order,
                 std::span<const std::vector<double>> seeds, const ExpandOptions& options,
                 const SearchOptions& search) {
    const auto reports = find_critical_points(phi, dom, seeds, &amplitude, search);
    const int n = static_cast<int>(reports.size());
    std::vector<PointContribution> points(n);
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) {
        try {
            points[k] = expand_point(phi, amplitude, reports[k], max_order, options);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return assemble(dom.dim(), std::move(points));
}

Complex evaluate_partial_sum(const Expansion& e, double lambda, int n_terms) {
    if (!(lambda > 0.0)) throw Error("evaluate_partial_sum: lambda must be positive");
    if (n_terms < 0 || n_terms > e.available_terms()) {
        throw SeriesError("evaluate_partial_sum: requested " + std::to_string(n_terms) + " terms, " +
                          std::to_string(e.available_terms()) + " available");
    }
    Complex total{};
    for (const auto& p : e.points) {
        Complex sum{};
        for (int l = 0; l < n_terms; ++l) sum += p.coefficients[l] * std::pow(lambda, -0.5 * (e.dim + l));
        total += std::exp(-lambda * p.report.phi_value) * sum;
    }
    return total;
}

ClosedForm1D higher_order_1d_closed_form(const TruncatedSeries& phi, const TruncatedSeries& amplitude) {
    if (phi.dim() != 1 || amplitude.dim() != 1) throw DimensionMismatch("closed form is one-dimensional");
    if (phi.order() < 4 || amplitude.order() < 2) throw SeriesError("closed form needs φ to order 4, A to order 2");
    auto deriv = [](const TruncatedSeries& f, int k) {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return fact * f.coeff(MultiIndex{k});
    };
    const Complex a2 = deriv(phi, 2), a3 = deriv(phi, 3), a4 = deriv(phi, 4);
    const Complex A0 = deriv(amplitude, 0), A1 = deriv(amplitude, 1), A2 = deriv(amplitude, 2);
    if (std::abs(a2) <= 1e-14 * std::max(1.0, phi.max_abs())) throw DegenerateHessian("φ''(0) = 0");
    if (on_closed_negative_axis(a2)) throw InadmissiblePhase("φ''(0) on the negative real axis");

    ClosedForm1D r;
    // Differentiating φ(ψ(y)) = y² at y = 0 and solving the triangular system.
    r.psi1 = std::sqrt(2.0 / a2);
    r.psi2 = -2.0 * a3 / (3.0 * a2 * a2);
    r.psi3 = (5.0 * a3 * a3 - 3.0 * a2 * a4) / (3.0 * a2 * a2 * a2 * a2 * r.psi1);
    const double root_pi = std::sqrt(std::numbers::pi);
    r.c0 = root_pi * A0 * r.psi1;
    // ¼ ∂² of (A∘ψ)·ψ' at 0, times ∫ e^{-y²} dy.
    r.c2 = root_pi * 0.25 * (A2 * r.psi1 * r.psi1 * r.psi1 + 3.0 * A1 * r.psi1 * r.psi2 + A0 * r.psi3);
    return r;
}

}  // namespace saddle
