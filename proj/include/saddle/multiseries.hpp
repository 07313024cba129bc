#pragma once

// Truncated multivariate power series with complex double coefficients.
//
// A TruncatedSeries of order N in d variables stores the coefficients of all
// monomials of total degree <= N that are not exactly zero. Every binary
// operation truncates to the smaller of the operand orders; nothing is ever
// promoted to a higher order than the data supports.

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace saddle {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int dim);
    MultiIndex(std::initializer_list<int> exponents);

    static MultiIndex unit(int dim, int axis);

    int dim() const noexcept { return dim_; }
    int operator[](int axis) const noexcept { return exps_[axis]; }
    void set(int axis, int exponent);
    int total_degree() const noexcept;

    MultiIndex operator+(const MultiIndex& other) const;

    // Lexicographic on the exponent vector.
    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;

    std::string to_string() const;

private:
    std::array<std::uint16_t, kMaxDim> exps_{};
    std::uint8_t dim_ = 0;
};

class TruncatedSeries {
public:
    using Terms = std::map<MultiIndex, Complex>;

    TruncatedSeries() = default;
    TruncatedSeries(int dim, int order);

    static TruncatedSeries constant(int dim, int order, Complex value);
    /// The coordinate function x_axis.
    static TruncatedSeries variable(int dim, int order, int axis);
    static TruncatedSeries monomial(int dim, int order, const MultiIndex& index, Complex value);

    int dim() const noexcept { return dim_; }
    int order() const noexcept { return order_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Complex coeff(const MultiIndex& index) const;
    Complex constant_term() const;
    /// Sets a coefficient; a zero value removes the key. Throws when the
    /// index degree exceeds the truncation order.
    void set(const MultiIndex& index, Complex value);
    void accumulate(const MultiIndex& index, Complex value);

    TruncatedSeries truncated(int order) const;
    TruncatedSeries homogeneous_part(int degree) const;
    /// Lowest total degree carrying a nonzero coefficient (order+1 if zero).
    int valuation() const;
    double max_abs() const;
    /// Drops coefficients below rel * max_abs().
    TruncatedSeries cleaned(double rel = 1e-14) const;

    TruncatedSeries& operator+=(const TruncatedSeries& other);
    TruncatedSeries& operator-=(const TruncatedSeries& other);
    TruncatedSeries& operator*=(Complex scalar);

private:
    int dim_ = 0;
    int order_ = 0;
    Terms terms_;
};

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries scale(const TruncatedSeries& a, Complex scalar);

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(Complex scalar, const TruncatedSeries& a);
TruncatedSeries operator*(const TruncatedSeries& a, Complex scalar);

/// x_axis * f. The result is one order higher: multiplying by an exact
/// monomial does not lose information.
TruncatedSeries mul_monomial(const TruncatedSeries& f, int axis);

/// outer(inner_0, ..., inner_{d-1}). Every inner series must have zero
/// constant term.
TruncatedSeries compose(const TruncatedSeries& outer, std::span<const TruncatedSeries> inner);

/// Compositional inverse g of the map f (compose(f, g) = identity).
std::vector<TruncatedSeries> invert_map(std::span<const TruncatedSeries> f);

/// g with g*g = f and g(0) = branch_of_constant.
TruncatedSeries sqrt_series(const TruncatedSeries& f, Complex branch_of_constant);
TruncatedSeries reciprocal(const TruncatedSeries& f);
TruncatedSeries divide(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries exp_series(const TruncatedSeries& f);
/// Principal logarithm of the constant term plus log(1 + (f - f0)/f0).
TruncatedSeries log_series(const TruncatedSeries& f);

/// Formal partial derivative along axis (0-based). Order drops by one.
TruncatedSeries diff(const TruncatedSeries& f, int axis);

Complex eval(const TruncatedSeries& f, std::span<const Complex> point);

/// max |a_r - b_r| over the union of supports through min(order).
double max_coeff_diff(const TruncatedSeries& a, const TruncatedSeries& b);

/// Matrix of coefficient maps, row-major, used for Jacobians of maps.
using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

TruncatedSeries determinant(const SeriesMatrix& m);

/// Jacobian matrix (d f_i / d x_j) of a map.
SeriesMatrix jacobian(std::span<const TruncatedSeries> map);

/// Identity map x -> x at the given order.
std::vector<TruncatedSeries> identity_map(int dim, int order);

}  // namespace saddle
