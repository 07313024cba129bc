#include <gtest/gtest.h>

#include <random>

#include "saddle/error.hpp"
#include "saddle/hessian.hpp"

namespace saddle {
namespace {

constexpr Complex I{0.0, 1.0};
using TS = TruncatedSeries;

TS quad(int d, std::initializer_list<std::pair<MultiIndex, Complex>> terms) {
    TS s(d, 2);
    for (const auto& [r, c] : terms) s.set(r, c);
    return s;
}

TEST(HessianOf, Examples) {
    auto h = hessian_of(quad(1, {{MultiIndex{2}, 1.0}}));
    EXPECT_EQ(h.matrix(0, 0), Complex(2.0));

    h = hessian_of(quad(2, {{MultiIndex{2, 0}, 1.0}, {MultiIndex{1, 1}, 1.0}, {MultiIndex{0, 2}, 1.0}}));
    EXPECT_EQ(h.matrix(0, 0), Complex(2.0));
    EXPECT_EQ(h.matrix(0, 1), Complex(1.0));
    EXPECT_EQ(h.matrix(1, 0), Complex(1.0));
    EXPECT_EQ(h.matrix(1, 1), Complex(2.0));
    EXPECT_NEAR(std::abs(h.det - 3.0), 0.0, 1e-14);

    h = hessian_of(quad(1, {{MultiIndex{2}, Complex(1.0, 1.0)}}));
    EXPECT_EQ(h.matrix(0, 0), Complex(2.0, 2.0));
}

TEST(HessianOf, RequiresCriticalPointAndOrderTwo) {
    EXPECT_THROW(hessian_of(TS::variable(1, 1, 0)), SeriesError);
    TS s(1, 2);
    s.set(MultiIndex{1}, 0.5);
    s.set(MultiIndex{2}, 1.0);
    EXPECT_THROW(hessian_of(s), SeriesError);
}

TEST(InvSqrtDet, Examples) {
    Eigen::MatrixXcd m = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
    EXPECT_NEAR(std::abs(inv_sqrt_det(hessian_from_matrix(m)) - 0.5), 0.0, 1e-15);

    Eigen::MatrixXcd a(1, 1);
    a(0, 0) = 2.0 * I;
    EXPECT_NEAR(std::abs(inv_sqrt_det(hessian_from_matrix(a)) - Complex(0.5, -0.5)), 0.0, 1e-15);

    a(0, 0) = -2.0;
    const HessianData neg = hessian_from_matrix(a);
    EXPECT_FALSE(neg.admissible);
    EXPECT_THROW(inv_sqrt_det(neg), InadmissiblePhase);
}

TEST(HessianFromMatrix, RejectsAsymmetric) {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, 2.0, 3.0, 1.0;
    EXPECT_THROW(hessian_from_matrix(m), Error);
}

TEST(HessianFromMatrix, Invariants) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + trial % 4;
        Eigen::MatrixXcd b(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) b(i, j) = Complex(g(rng), 0.3 * g(rng));
        // Re-positive-definite symmetric matrix: real part SPD, small imaginary part.
        Eigen::MatrixXcd m = b.real().transpose().cast<Complex>() * b.real().cast<Complex>() +
                             Eigen::MatrixXcd::Identity(d, d) + I * (b.imag() + b.imag().transpose()).cast<Complex>();
        const HessianData h = hessian_from_matrix(m);
        const Complex prod = h.eigenvalues.prod();
        EXPECT_LE(std::abs(prod - h.det), 1e-9 * std::abs(h.det));
        ASSERT_TRUE(h.admissible);
        EXPECT_LE(std::abs(h.inv_sqrt_det * h.inv_sqrt_det * h.det - 1.0), 1e-9);
    }
}

// For α real nonsingular and π_t(z) = Re z + (1 - t) Im z, det of the
// deformed α_t stays equal to the product of principal square roots of the
// eigenvalues of α_t^T α_t (up to the sign of det α).
TEST(HessianFromMatrix, PrincipalRootContinuity) {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> g;
    int checked = 0;
    for (int trial = 0; checked < 20 && trial < 200; ++trial) {
        const int d = 1 + trial % 3;
        Eigen::MatrixXcd alpha(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) alpha(i, j) = Complex(g(rng) + (i == j ? 2.0 : 0.0), 0.4 * g(rng));
        bool admissible = true;
        std::vector<Complex> dets, roots;
        for (const double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            Eigen::MatrixXcd at = alpha.real().cast<Complex>() + (1.0 - t) * I * alpha.imag().cast<Complex>();
            const HessianData h = hessian_from_matrix(at.transpose() * at);
            if (!h.admissible) {
                admissible = false;
                break;
            }
            dets.push_back(at.determinant());
            roots.push_back(principal_sqrt_product(h.eigenvalues));
        }
        if (!admissible) continue;
        // Fix the sign at the real end (t = 1) and follow it through t.
        const double s = (dets.back() / roots.back()).real() > 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < dets.size(); ++k) {
            EXPECT_LE(std::abs(dets[k] - s * roots[k]), 1e-8 * std::max(1.0, std::abs(dets[k])));
        }
        ++checked;
    }
    EXPECT_EQ(checked, 20);
}

TEST(Admissibility, Margin) {
    const std::vector<std::string> v{"x", "y"};
    const std::vector<Complex> origin{0.0, 0.0};
    EXPECT_GE(admissibility_margin(parse("x^2 + (1+i)*y^2", v), origin), 0.0);
    EXPECT_LT(admissibility_margin(parse("x^2 - y^2", v), origin), -1e-9);
    // On the face x >= 0 of the domain, only inward directions count.
    EXPECT_GE(admissibility_margin(parse("x + y^2", v), origin, 1e-2, 100, Face{0, 1}), 0.0);
}

TEST(NegativeAxis, Classification) {
    EXPECT_TRUE(on_closed_negative_axis(-1.0));
    EXPECT_TRUE(on_closed_negative_axis(0.0));
    EXPECT_FALSE(on_closed_negative_axis(Complex(-1.0, 1e-3)));
    EXPECT_FALSE(on_closed_negative_axis(2.0));
}

}  // namespace
}  // namespace saddle
