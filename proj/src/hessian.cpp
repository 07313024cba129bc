#include "saddle/hessian.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "saddle/error.hpp"

namespace saddle {

bool on_closed_negative_axis(Complex mu) {
    const double scale = std::abs(mu);
    if (scale == 0.0) return true;
    return mu.real() < 0.0 && std::abs(mu.imag()) <= 1e-12 * scale;
}

HessianData hessian_from_matrix(const Eigen::MatrixXcd& matrix) {
    HessianData h;
    h.matrix = matrix;
    const double norm = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * norm) {
        throw Error("hessian: matrix is not symmetric");
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error("hessian: eigenvalue iteration did not converge");
    h.eigenvalues = solver.eigenvalues();
    h.det = matrix.partialPivLu().determinant();
    h.admissible = true;
    for (Eigen::Index k = 0; k < h.eigenvalues.size(); ++k) {
        if (on_closed_negative_axis(h.eigenvalues[k])) h.admissible = false;
    }
    if (h.admissible) {
        h.inv_sqrt_det = 1.0 / principal_sqrt_product(h.eigenvalues);
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        h.inv_sqrt_det = {nan, nan};
    }
    return h;
}

HessianData hessian_of(const TruncatedSeries& phi) {
    if (phi.order() < 2) throw SeriesError("hessian_of: phase series must have order >= 2");
    const int d = phi.dim();
    const double scale = std::max(1.0, phi.max_abs());
    for (int j = 0; j < d; ++j) {
        if (std::abs(phi.coeff(MultiIndex::unit(d, j))) > 1e-8 * scale) {
            throw SeriesError("hessian_of: phase has a nonzero linear term (not a critical point)");
        }
    }
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const MultiIndex idx = MultiIndex::unit(d, i) + MultiIndex::unit(d, j);
            m(i, j) = phi.coeff(idx) * (i == j ? 2.0 : 1.0);
        }
    }
    return hessian_from_matrix(m);
}

Complex principal_sqrt_product(const Eigen::VectorXcd& eigenvalues) {
    Complex p = 1.0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) p *= std::sqrt(eigenvalues[k]);
    return p;
}

Complex inv_sqrt_det(const HessianData& h) {
    for (Eigen::Index k = 0; k < h.eigenvalues.size(); ++k) {
        if (on_closed_negative_axis(h.eigenvalues[k])) {
            throw InadmissiblePhase("Hessian eigenvalue on the closed negative real axis; principal roots undefined");
        }
    }
    return 1.0 / principal_sqrt_product(h.eigenvalues);
}

double admissibility_margin(const Expr& phi, std::span<const Complex> point, double radius, int samples,
                            const std::optional<Face>& face) {
    const int d = static_cast<int>(point.size());
    const double base = evaluate(phi, point).real();
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    double margin = std::numeric_limits<double>::infinity();
    std::vector<Complex> x(d);
    for (int s = 0; s < samples; ++s) {
        std::vector<double> u(d);
        double norm = 0.0;
        for (auto& v : u) {
            v = normal(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        for (auto& v : u) v /= norm;
        if (face && u[face->axis] * face->side < 0) u[face->axis] = -u[face->axis];
        for (int j = 0; j < d; ++j) x[j] = point[j] + radius * u[j];
        margin = std::min(margin, evaluate(phi, x).real() - base);
    }
    return margin;
}

}  // namespace saddle
