#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "saddle/error.hpp"
#include "saddle/expr.hpp"

namespace saddle {
namespace {

constexpr Complex I{0.0, 1.0};
const std::vector<std::string> kX{"x"};
const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kT{"t"};

TEST(Parse, PolynomialTree) {
    const Expr e = parse("x^2 + i*x^3", kX);
    ASSERT_EQ(e.op(), Op::Add);
    EXPECT_EQ(e.lhs().op(), Op::Pow);
    EXPECT_EQ(e.lhs().exponent(), 2);
    EXPECT_EQ(e.rhs().op(), Op::Mul);
    const std::vector<Complex> p{2.0};
    EXPECT_NEAR(std::abs(evaluate(e, p) - Complex(4.0, 8.0)), 0.0, 1e-15);
}

TEST(Parse, BoundSubexpressions) {
    const std::vector<std::string> vars{"p", "t"};
    Bindings b;
    b["v1"] = parse("exp(i*t)", vars);
    b["v2"] = parse("(exp(i*t) + exp(3*i*t))/2", vars);
    const Expr e = parse("log((1-p)*v1 + p*v2)", vars, b);
    EXPECT_EQ(e.op(), Op::Log);
    const std::vector<Complex> at{0.3, 0.0};
    EXPECT_NEAR(std::abs(evaluate(e, at)), 0.0, 1e-15);
}

TEST(Parse, SyntaxErrorOffset) {
    try {
        parse("x +", kX);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 3u);
    }
}

TEST(Parse, Rejections) {
    EXPECT_THROW(parse("y", kX), ParseError);            // unknown identifier
    EXPECT_THROW(parse("x^1.5", kX), ParseError);        // non-integer exponent
    EXPECT_THROW(parse("2x", kX), ParseError);           // juxtaposition
    EXPECT_THROW(parse("(x", kX), ParseError);
    EXPECT_THROW(parse("", kX), ParseError);
    EXPECT_THROW(parse("exp x", kX), ParseError);
}

TEST(Parse, LiteralsAndUnary) {
    const std::vector<Complex> p{0.5};
    EXPECT_NEAR(std::abs(evaluate(parse("3i", kX), p) - 3.0 * I), 0.0, 0.0);
    EXPECT_NEAR(std::abs(evaluate(parse("-x^2", kX), p) + 0.25), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(evaluate(parse("x^(-2)", kX), p) - 4.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(evaluate(parse("2.5e-1*pi", kX), p) - 0.25 * M_PI), 0.0, 1e-15);
}

TEST(Parse, PrintParseIdempotent) {
    for (const char* text : {"x^2 + i*x^3", "-(x - y)/(1 + y^2)^(-3)", "exp(i*pi/4)*x^2 + x^3",
                             "sqrt(1 + x*y) - log(2 + cos(x)) * sin(y)", "1.25e-3*x - 3i*y", "--x"}) {
        const Expr e = parse(text, kXY);
        const std::string once = print(e, kXY);
        const Expr again = parse(once, kXY);
        EXPECT_EQ(again, e) << text << " -> " << once;
        EXPECT_EQ(print(again, kXY), once);
    }
}

TEST(Taylor, Examples) {
    const ExpansionPoint origin{{0.0}, 4};
    const TruncatedSeries x2 = taylor(parse("x^2", kX), origin);
    EXPECT_EQ(x2.terms().size(), 1u);
    EXPECT_EQ(x2.coeff(MultiIndex{2}), Complex(1.0));

    const TruncatedSeries e = taylor(parse("exp(x)-1-x", kX), ExpansionPoint{{0.0}, 3});
    EXPECT_NEAR(std::abs(e.coeff(MultiIndex{0})), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(e.coeff(MultiIndex{1})), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(e.coeff(MultiIndex{2}) - 0.5), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(e.coeff(MultiIndex{3}) - 1.0 / 6.0), 0.0, 1e-16);

    const TruncatedSeries l = taylor(parse("i*t + log(1+t)", kT), ExpansionPoint{{0.0}, 2});
    EXPECT_NEAR(std::abs(l.coeff(MultiIndex{1}) - Complex(1.0, 1.0)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(l.coeff(MultiIndex{2}) + 0.5), 0.0, 1e-16);
}

TEST(Taylor, SingularPointNamesSubexpression) {
    try {
        taylor(parse("log(1+t)", kT), ExpansionPoint{{-1.0}, 2});
        FAIL() << "expected SingularPoint";
    } catch (const SingularPoint& e) {
        EXPECT_NE(e.subexpression().find("log"), std::string::npos);
    }
    EXPECT_THROW(taylor(parse("1/x", kX), ExpansionPoint{{0.0}, 2}), SingularPoint);
    EXPECT_THROW(taylor(parse("sqrt(x)", kX), ExpansionPoint{{0.0}, 2}), SingularPoint);
}

// The Taylor polynomial of order N evaluated at offset h differs from the
// function by O(h^{N+1}).
TEST(Taylor, TruncationErrorSlope) {
    const Expr f = parse("exp(i*x*y) / (2 + x) + sqrt(3 + y) * cos(x - y)", kXY);
    const std::vector<Complex> at{0.3, -0.2};
    const int n = 4;
    const TruncatedSeries s = taylor(f, ExpansionPoint{at, n});
    std::vector<double> logs;
    for (const double h : {1e-1, 1e-2, 1e-3}) {
        const std::vector<Complex> offset{h, -0.7 * h};
        const std::vector<Complex> point{at[0] + offset[0], at[1] + offset[1]};
        logs.push_back(std::log10(std::abs(eval(s, offset) - evaluate(f, point))));
    }
    const double slope = (logs.front() - logs.back()) / 2.0;
    EXPECT_GE(slope, n + 0.5);
}

TEST(Gradient, Examples) {
    const Expr x2 = parse("x^2", kX);
    const std::vector<Complex> zero{0.0}, one{1.0};
    EXPECT_EQ(gradient_at(x2, zero)[0], Complex(0.0));
    EXPECT_EQ(gradient_at(x2, one)[0], Complex(2.0));
    const std::vector<Complex> minus_one{-1.0};
    EXPECT_THROW(gradient_at(parse("i*t + log(1+t)", kT), minus_one), SingularPoint);
}

TEST(Gradient, MatchesCentralDifferences) {
    const Expr f = parse("log(2 + x*y) + exp(i*x) * y^3 - sin(y)/(3 + x^2)", kXY);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<Complex> p{Complex(u(rng), 0.1 * u(rng)), Complex(u(rng), 0.1 * u(rng))};
        const auto g = gradient_at(f, p);
        for (int j = 0; j < 2; ++j) {
            for (const Complex dir : {Complex(1.0), I}) {
                const double h = 1e-6;
                auto q = p, r = p;
                q[j] += h * dir;
                r[j] -= h * dir;
                const Complex fd = (evaluate(f, q) - evaluate(f, r)) / (2.0 * h * dir);
                EXPECT_LE(std::abs(fd - g[j]), 1e-6 * std::max(1.0, std::abs(g[j])));
            }
        }
    }
}

TEST(Compiled, AgreesWithTreeEvaluation) {
    const Expr f = parse("(x - 2*y)^(-2) + exp(-x*y) * sqrt(1 + i*x) - cos(y)^3", kXY);
    const CompiledExpr c(f);
    const std::vector<Complex> p{0.4, -1.3};
    EXPECT_NEAR(std::abs(c.eval(p) - evaluate(f, p)), 0.0, 1e-14);
}

TEST(Expr, SubstituteAndMaxVariable) {
    const Expr f = parse("x*y + y", kXY);
    EXPECT_EQ(max_variable_index(f), 1);
    EXPECT_EQ(max_variable_index(parse("2 + pi", kXY)), -1);
    const Expr g = substitute(f, 1, Expr::constant(2.0));
    EXPECT_EQ(max_variable_index(g), 0);
    const std::vector<Complex> p{3.0, 100.0};
    EXPECT_EQ(evaluate(g, p), Complex(8.0));
}

}  // namespace
}  // namespace saddle
