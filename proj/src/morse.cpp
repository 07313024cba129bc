#include "saddle/morse.hpp"

#include <cmath>
#include <numbers>

#include "saddle/error.hpp"

namespace saddle {

namespace {

void require_critical_origin(const TruncatedSeries& phi) {
    const int d = phi.dim();
    const double scale = std::max(1.0, phi.max_abs());
    if (std::abs(phi.constant_term()) > 1e-12 * scale) {
        throw SeriesError("phase must vanish at the origin (re-centre and subtract φ(x) first)");
    }
    for (int j = 0; j < d; ++j) {
        if (std::abs(phi.coeff(MultiIndex::unit(d, j))) > 1e-8 * scale) {
            throw SeriesError("phase has a nonzero linear term; origin is not a critical point");
        }
    }
    if (phi.order() < 2) throw SeriesError("phase series needs order >= 2");
}

// ½ Hessian at the origin.
Eigen::MatrixXcd half_hessian(const TruncatedSeries& phi) {
    const int d = phi.dim();
    Eigen::MatrixXcd h(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const Complex c = phi.coeff(MultiIndex::unit(d, i) + MultiIndex::unit(d, j));
            h(i, j) = i == j ? c : 0.5 * c;
        }
    }
    return h;
}

// Pivots of Gaussian elimination without row exchanges.
std::vector<Complex> elimination_pivots(Eigen::MatrixXcd m) {
    const Eigen::Index n = m.rows();
    std::vector<Complex> pivots;
    for (Eigen::Index k = 0; k < n; ++k) {
        pivots.push_back(m(k, k));
        if (m(k, k) == Complex{}) {
            for (Eigen::Index r = k + 1; r < n; ++r) pivots.push_back(0.0);
            break;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const Complex f = m(i, k) / m(k, k);
            for (Eigen::Index j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return pivots;
}

Eigen::MatrixXd givens(int d, int i, int j, double theta) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d);
    g(i, i) = std::cos(theta);
    g(j, j) = std::cos(theta);
    g(i, j) = -std::sin(theta);
    g(j, i) = std::sin(theta);
    return g;
}

// Smallest of |pivot| and, for the rotatable axes, |diagonal|, relative to ‖H‖.
double conditioning(const Eigen::MatrixXcd& half_h, int rotatable) {
    const double norm = half_h.cwiseAbs().maxCoeff();
    double worst = std::numeric_limits<double>::infinity();
    for (const Complex p : elimination_pivots(half_h)) worst = std::min(worst, std::abs(p));
    for (int k = 0; k < rotatable; ++k) worst = std::min(worst, std::abs(half_h(k, k)));
    return worst / norm;
}

}  // namespace

TruncatedSeries standard_phase(int dim, int order) {
    TruncatedSeries s(dim, order);
    if (order < 2) return s;
    for (int j = 0; j < dim; ++j) s.set(MultiIndex::unit(dim, j) + MultiIndex::unit(dim, j), 1.0);
    return s;
}

TruncatedSeries linear_substitution(const TruncatedSeries& f, const Eigen::MatrixXd& m) {
    const int d = f.dim();
    if (m.rows() != d || m.cols() != d) throw DimensionMismatch("linear_substitution: matrix size");
    std::vector<TruncatedSeries> inner;
    for (int i = 0; i < d; ++i) {
        TruncatedSeries row(d, std::max(f.order(), 1));
        for (int j = 0; j < d; ++j) row.set(MultiIndex::unit(d, j), m(i, j));
        inner.push_back(row);
    }
    TruncatedSeries out = compose(f, inner);
    // compose truncates to min order; the inner maps are exact.
    return out.truncated(f.order());
}

SeriesMatrix quadratic_decomposition(const TruncatedSeries& phi) {
    require_critical_origin(phi);
    const int d = phi.dim();
    const int order = phi.order() - 2;
    SeriesMatrix m(d, std::vector<TruncatedSeries>(d, TruncatedSeries(d, order)));
    for (const auto& [idx, a] : phi.terms()) {
        const int n = idx.total_degree();
        if (n < 2) continue;
        const double denom = static_cast<double>(n) * (n - 1);
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                const int rj = idx[j];
                const int rk = idx[k] - (j == k ? 1 : 0);
                if (rj <= 0 || rk <= 0) continue;
                MultiIndex lowered = idx;
                lowered.set(j, idx[j] - 1);
                lowered.set(k, lowered[k] - 1);
                m[j][k].accumulate(lowered, a * (rj * static_cast<double>(rk) / denom));
            }
        }
    }
    return m;
}

RotatedPhase pre_rotate_if_needed(const TruncatedSeries& phi, const MorseOptions& options) {
    require_critical_origin(phi);
    const int d = phi.dim();
    const Eigen::MatrixXcd h = half_hessian(phi);
    if (h.cwiseAbs().maxCoeff() == 0.0 || std::abs(h.partialPivLu().determinant()) == 0.0) {
        throw DegenerateHessian("singular Hessian at the critical point");
    }

    // Base permutation: boundary axis last, others in order.
    Eigen::MatrixXd base = Eigen::MatrixXd::Identity(d, d);
    int rotatable = d;
    if (options.boundary_axis) {
        const int b = *options.boundary_axis;
        if (b < 0 || b >= d) throw DimensionMismatch("boundary axis out of range");
        base.setZero();
        int col = 0;
        for (int j = 0; j < d; ++j) {
            if (j != b) base(j, col++) = 1.0;
        }
        base(b, d - 1) = 1.0;
        rotatable = d - 1;
    }

    auto score = [&](const Eigen::MatrixXd& u) {
        const Eigen::MatrixXcd rotated = u.transpose().cast<Complex>() * h * u.cast<Complex>();
        return conditioning(rotated, rotatable);
    };

    Eigen::MatrixXd best = base;
    double best_score = score(base);
    if (best_score < options.pivot_threshold) {
        static const double angles[] = {std::numbers::pi / 4, std::numbers::pi / 3, std::numbers::pi / 6,
                                        std::numbers::pi / 5, 2 * std::numbers::pi / 5, 0.3, 0.9, 1.3};
        for (const double theta : angles) {
            Eigen::MatrixXd sweep = Eigen::MatrixXd::Identity(d, d);
            for (int i = 0; i < rotatable; ++i) {
                for (int j = i + 1; j < rotatable; ++j) sweep = sweep * givens(d, i, j, theta);
            }
            const Eigen::MatrixXd u = base * sweep;
            const double s = score(u);
            if (s > best_score) {
                best_score = s;
                best = u;
            }
            if (s >= options.pivot_threshold) break;
        }
    }
    if (best_score < options.pivot_threshold) {
        throw UnsupportedGeometry("no rotation of the free axes clears the vanishing Hessian pivots");
    }
    const bool identity = best.isApprox(Eigen::MatrixXd::Identity(d, d));
    return {identity ? phi : linear_substitution(phi, best), identity ? Eigen::MatrixXd::Identity(d, d) : best};
}

MorseData complete_squares(const TruncatedSeries& phi, const MorseOptions& options) {
    require_critical_origin(phi);
    const int d = phi.dim();
    const int n = phi.order();
    const RotatedPhase rotated = pre_rotate_if_needed(phi, options);
    const double hnorm = half_hessian(rotated.phi).cwiseAbs().maxCoeff();

    SeriesMatrix h = quadratic_decomposition(rotated.phi);
    std::vector<TruncatedSeries> forward_rot;
    for (int r = 0; r < d; ++r) {
        const TruncatedSeries& pivot = h[r][r];
        const Complex p0 = pivot.constant_term();
        if (std::abs(p0) < options.pivot_threshold * hnorm) {
            throw Error("complete_squares: vanishing pivot after pre-rotation");
        }
        Complex branch = std::sqrt(p0);
        if (r == 0 && options.flip_first_branch) branch = -branch;
        const TruncatedSeries root = sqrt_series(pivot, branch);
        const TruncatedSeries inv = reciprocal(pivot);

        // y_r = √h_rr [x_r + Σ_{k>r} x_k h_rk / h_rr]
        TruncatedSeries y = mul_monomial(root, r);
        std::vector<TruncatedSeries> ratio(d);
        for (int k = r + 1; k < d; ++k) {
            ratio[k] = h[r][k] * inv;
            y += mul_monomial(root * ratio[k], k);
        }
        forward_rot.push_back(y.truncated(n - 1));

        // Schur complement: h_jk -= h_rj h_rk / h_rr.
        for (int j = r + 1; j < d; ++j) {
            for (int k = j; k < d; ++k) {
                h[j][k] -= h[r][j] * ratio[k];
                if (k != j) h[k][j] = h[j][k];
            }
        }
    }

    const std::vector<TruncatedSeries> psi_rot = invert_map(forward_rot);

    MorseData out;
    out.unitary_pre_rotation = rotated.rotation;
    const Eigen::MatrixXd& u = rotated.rotation;
    // ψ = U ψ_rot, y(x) = y_rot(Uᵀ x).
    for (int i = 0; i < d; ++i) {
        TruncatedSeries comp(d, psi_rot.front().order());
        for (int j = 0; j < d; ++j) {
            if (u(i, j) != 0.0) comp += scale(psi_rot[j], u(i, j));
        }
        out.psi.push_back(comp.cleaned());
    }
    const Eigen::MatrixXd ut = u.transpose();
    for (const auto& y : forward_rot) out.forward.push_back(linear_substitution(y, ut));

    Eigen::MatrixXcd lin(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) lin(i, j) = out.psi[i].coeff(MultiIndex::unit(d, j));
    }
    out.jac_det_at_0 = lin.determinant();

    const TruncatedSeries back = compose(phi, out.psi);
    out.residual = max_coeff_diff(back, standard_phase(d, back.order()));
    out.precision_ok = out.residual <= 1e-9 * phi.max_abs();
    return out;
}

}  // namespace saddle
