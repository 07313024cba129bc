#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "saddle/error.hpp"
#include "saddle/quadrature.hpp"

namespace saddle {
namespace {

constexpr Complex I{0.0, 1.0};
const std::vector<std::string> kX{"x"};
const std::vector<std::string> kXY{"x", "y"};

Domain box(std::vector<Interval> b) {
    Domain d;
    d.bounds = std::move(b);
    return d;
}

TEST(Integrate, Examples) {
    auto q = integrate(parse("x^2", kX), parse("1", kX), box({{-10, 10}}), 1.0);
    EXPECT_NEAR(std::abs(q.value - std::sqrt(std::numbers::pi)), 0.0, 1e-12);

    q = integrate(parse("i*x", kX), parse("1", kX), box({{0, 2 * std::numbers::pi}}), 1.0);
    EXPECT_NEAR(std::abs(q.value), 0.0, 1e-12);

    q = integrate(parse("x^2 + (1 + i)*y^2", kXY), parse("1", kXY), box({{-8, 8}, {-8, 8}}), 4.0);
    const Complex exact = std::sqrt(std::numbers::pi / 4.0) * std::sqrt(std::numbers::pi / (4.0 * (1.0 + I)));
    EXPECT_NEAR(std::abs(q.value - exact), 0.0, 1e-9);
}

TEST(Integrate, ErrorEstimateIsConservative) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> deg(0, 6);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 * (deg(rng) / 2);
        const double lambda = 1.0 + trial;
        QuadOptions o;
        o.rel_tol = 1e-6;  // loose, so the estimate is not at the rounding floor
        o.abs_tol = 0.0;
        const auto q = integrate(parse("x^2", kX), parse("x^" + std::to_string(n), kX), box({{-10, 10}}), lambda, o);
        const double exact = std::tgamma((n + 1) / 2.0) * std::pow(lambda, -(n + 1) / 2.0);
        EXPECT_LE(std::abs(q.value - exact), 3.0 * q.abs_error_estimate + 1e-15) << n << " " << lambda;
        EXPECT_GE(q.abs_error_estimate, 0.0);
    }
}

TEST(Integrate, HalvingToleranceIsSelfConsistent) {
    const Expr phi = parse("exp(i*pi/4)*x^2 + x^3", kX);
    const Expr amp = parse("1 + x", kX);
    QuadOptions o;
    o.rel_tol = 1e-6;
    const auto a = integrate(phi, amp, box({{-0.4, 0.4}}), 80.0, o);
    o.rel_tol = 0.5e-6;
    const auto b = integrate(phi, amp, box({{-0.4, 0.4}}), 80.0, o);
    EXPECT_LE(std::abs(a.value - b.value), a.abs_error_estimate);
}

TEST(Integrate, Linearity) {
    const Expr phi = parse("x^2 + y^2 - i*x*y/2", kXY);
    const Domain dom = box({{-4, 4}, {-4, 4}});
    const auto a = integrate(phi, parse("1 + x", kXY), dom, 10.0);
    const auto b = integrate(phi, parse("y^2 - 3*x*y", kXY), dom, 10.0);
    const auto ab = integrate(phi, parse("1 + x + y^2 - 3*x*y", kXY), dom, 10.0);
    EXPECT_LE(std::abs(ab.value - a.value - b.value),
              a.abs_error_estimate + b.abs_error_estimate + ab.abs_error_estimate + 1e-14);
}

TEST(Integrate, SerialAndParallelAreBitIdentical) {
    const Expr phi = parse("x^2 + y^2 + z^2 + i*x*y*z", std::vector<std::string>{"x", "y", "z"});
    const Expr amp = parse("cos(x) + y*z", std::vector<std::string>{"x", "y", "z"});
    const Domain dom = box({{-3, 3}, {-3, 3}, {-3, 3}});
    QuadOptions serial, parallel;
    serial.policy = ExecPolicy::Serial;
    parallel.policy = ExecPolicy::Parallel;
    const auto a = integrate(phi, amp, dom, 20.0, serial);
    const auto b = integrate(phi, amp, dom, 20.0, parallel);
    EXPECT_EQ(a.value.real(), b.value.real());
    EXPECT_EQ(a.value.imag(), b.value.imag());
    EXPECT_EQ(a.abs_error_estimate, b.abs_error_estimate);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Integrate, BudgetFlag) {
    QuadOptions o;
    o.max_evals = 2000;
    const auto q = integrate(parse("i*x", kX), parse("1", kX), box({{0, 100}}), 400.0, o);
    EXPECT_TRUE(q.budget_exceeded);
    EXPECT_LE(q.evaluations, 2000);
}

TEST(Integrate, RejectsBadInput) {
    EXPECT_THROW(integrate(parse("x^2", kX), parse("1", kX), box({{-1, 1}}), -1.0), InvalidProblem);
    EXPECT_THROW(integrate(parse("x^2 + y^2", kXY), parse("1", kXY), box({{-1, 1}}), 1.0), InvalidProblem);
    const std::vector<std::string> v4{"a", "b", "c", "d"};
    EXPECT_THROW(integrate(parse("a", v4), parse("1", v4), box({{0, 1}, {0, 1}, {0, 1}, {0, 1}}), 1.0),
                 InvalidProblem);
}

TEST(DecaySlope, Examples) {
    std::vector<std::pair<double, double>> v{{10, 1e-2}, {20, 0.25e-2}, {40, 0.0625e-2}};
    EXPECT_NEAR(decay_slope(v), -2.0, 1e-12);

    v = {{10, 3.0}, {20, 3.0}, {40, 3.0}};
    EXPECT_NEAR(decay_slope(v), 0.0, 1e-12);

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    v.clear();
    for (const double l : {10.0, 20.0, 40.0, 80.0}) v.emplace_back(l, 5.0 * std::pow(l, -1.5) * (1 + noise(rng)));
    const double s = decay_slope(v);
    EXPECT_GE(s, -1.55);
    EXPECT_LE(s, -1.45);
}

TEST(DecaySlope, SkipsNonPositiveAndNeedsThree) {
    std::vector<std::pair<double, double>> v{{10, 1.0}, {20, 0.0}, {40, 0.25}, {80, -1.0}};
    EXPECT_THROW(decay_slope(v), InvalidProblem);
    v.emplace_back(160, 1.0 / 16.0);
    EXPECT_NEAR(decay_slope(v), -1.0, 1e-12);
}

}  // namespace
}  // namespace saddle
