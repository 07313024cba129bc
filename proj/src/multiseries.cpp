#include "saddle/multiseries.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "saddle/error.hpp"

namespace saddle {

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(int dim) {
    if (dim < 0 || dim > kMaxDim) {
        throw DimensionMismatch("multi-index dimension out of range: " + std::to_string(dim));
    }
    dim_ = static_cast<std::uint8_t>(dim);
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(static_cast<int>(exponents.size())) {
    int axis = 0;
    for (int e : exponents) set(axis++, e);
}

MultiIndex MultiIndex::unit(int dim, int axis) {
    MultiIndex m(dim);
    m.set(axis, 1);
    return m;
}

void MultiIndex::set(int axis, int exponent) {
    if (axis < 0 || axis >= dim_) throw DimensionMismatch("multi-index axis out of range");
    if (exponent < 0 || exponent > 0xffff) throw SeriesError("exponent out of range");
    exps_[axis] = static_cast<std::uint16_t>(exponent);
}

int MultiIndex::total_degree() const noexcept {
    int total = 0;
    for (int j = 0; j < dim_; ++j) total += exps_[j];
    return total;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (other.dim_ != dim_) throw DimensionMismatch("multi-index dimension mismatch");
    MultiIndex out(dim_);
    for (int j = 0; j < dim_; ++j) out.exps_[j] = static_cast<std::uint16_t>(exps_[j] + other.exps_[j]);
    return out;
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << exps_[j];
    os << ')';
    return os.str();
}

// ----------------------------------------------------------- TruncatedSeries

TruncatedSeries::TruncatedSeries(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("series dimension out of range");
    if (order < 0) throw SeriesError("negative truncation order");
}

TruncatedSeries TruncatedSeries::constant(int dim, int order, Complex value) {
    TruncatedSeries s(dim, order);
    s.set(MultiIndex(dim), value);
    return s;
}

TruncatedSeries TruncatedSeries::variable(int dim, int order, int axis) {
    TruncatedSeries s(dim, order);
    if (order >= 1) s.set(MultiIndex::unit(dim, axis), 1.0);
    return s;
}

TruncatedSeries TruncatedSeries::monomial(int dim, int order, const MultiIndex& index, Complex value) {
    TruncatedSeries s(dim, order);
    if (index.total_degree() <= order) s.set(index, value);
    return s;
}

Complex TruncatedSeries::coeff(const MultiIndex& index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? Complex{} : it->second;
}

Complex TruncatedSeries::constant_term() const { return coeff(MultiIndex(dim_)); }

void TruncatedSeries::set(const MultiIndex& index, Complex value) {
    if (index.dim() != dim_) throw DimensionMismatch("index dimension does not match series");
    if (index.total_degree() > order_) {
        throw SeriesError("index " + index.to_string() + " exceeds truncation order " +
                          std::to_string(order_));
    }
    if (value == Complex{}) {
        terms_.erase(index);
    } else {
        terms_[index] = value;
    }
}

void TruncatedSeries::accumulate(const MultiIndex& index, Complex value) {
    if (index.total_degree() > order_) return;
    auto [it, inserted] = terms_.try_emplace(index, value);
    if (!inserted) {
        it->second += value;
        if (it->second == Complex{}) terms_.erase(it);
    }
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
    TruncatedSeries out(dim_, std::min(order, order_));
    for (const auto& [idx, c] : terms_) {
        if (idx.total_degree() <= out.order_) out.terms_.emplace(idx, c);
    }
    return out;
}

TruncatedSeries TruncatedSeries::homogeneous_part(int degree) const {
    TruncatedSeries out(dim_, order_);
    for (const auto& [idx, c] : terms_) {
        if (idx.total_degree() == degree) out.terms_.emplace(idx, c);
    }
    return out;
}

int TruncatedSeries::valuation() const {
    int v = order_ + 1;
    for (const auto& [idx, c] : terms_) v = std::min(v, idx.total_degree());
    return v;
}

double TruncatedSeries::max_abs() const {
    double m = 0.0;
    for (const auto& [idx, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

TruncatedSeries TruncatedSeries::cleaned(double rel) const {
    const double cutoff = rel * max_abs();
    TruncatedSeries out(dim_, order_);
    for (const auto& [idx, c] : terms_) {
        if (std::abs(c) >= cutoff) out.terms_.emplace_hint(out.terms_.end(), idx, c);
    }
    return out;
}

namespace {

void require_same_dim(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("series dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    }
}

// Terms bucketed by total degree, for products that truncate early.
std::vector<std::vector<std::pair<MultiIndex, Complex>>> by_degree(const TruncatedSeries& s) {
    std::vector<std::vector<std::pair<MultiIndex, Complex>>> buckets(s.order() + 1);
    for (const auto& [idx, c] : s.terms()) buckets[idx.total_degree()].emplace_back(idx, c);
    return buckets;
}

}  // namespace

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
    require_same_dim(*this, other);
    *this = truncated(std::min(order_, other.order_));
    for (const auto& [idx, c] : other.terms_) accumulate(idx, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
    require_same_dim(*this, other);
    *this = truncated(std::min(order_, other.order_));
    for (const auto& [idx, c] : other.terms_) accumulate(idx, -c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scalar) {
    if (scalar == Complex{}) {
        terms_.clear();
        return *this;
    }
    for (auto& [idx, c] : terms_) c *= scalar;
    return *this;
}

// --------------------------------------------------------------- arithmetic

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries out = a;
    out += b;
    return out;
}

TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries out = a;
    out -= b;
    return out;
}

TruncatedSeries scale(const TruncatedSeries& a, Complex scalar) {
    TruncatedSeries out = a;
    out *= scalar;
    return out;
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_dim(a, b);
    const int order = std::min(a.order(), b.order());
    TruncatedSeries out(a.dim(), order);
    if (a.is_zero() || b.is_zero()) return out;
    const auto bb = by_degree(b);
    for (const auto& [ia, ca] : a.terms()) {
        const int da = ia.total_degree();
        for (int db = 0; da + db <= order && db <= b.order(); ++db) {
            for (const auto& [ib, cb] : bb[db]) out.accumulate(ia + ib, ca * cb);
        }
    }
    return out.cleaned();
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b); }
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return sub(a, b); }
TruncatedSeries operator-(const TruncatedSeries& a) { return scale(a, -1.0); }
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b); }
TruncatedSeries operator*(Complex scalar, const TruncatedSeries& a) { return scale(a, scalar); }
TruncatedSeries operator*(const TruncatedSeries& a, Complex scalar) { return scale(a, scalar); }

TruncatedSeries mul_monomial(const TruncatedSeries& f, int axis) {
    if (axis < 0 || axis >= f.dim()) throw DimensionMismatch("axis out of range");
    TruncatedSeries out(f.dim(), f.order() + 1);
    const MultiIndex shift = MultiIndex::unit(f.dim(), axis);
    for (const auto& [idx, c] : f.terms()) out.set(idx + shift, c);
    return out;
}

TruncatedSeries compose(const TruncatedSeries& outer, std::span<const TruncatedSeries> inner) {
    const int d = outer.dim();
    if (static_cast<int>(inner.size()) != d) {
        throw DimensionMismatch("compose: expected " + std::to_string(d) + " inner series, got " +
                                std::to_string(inner.size()));
    }
    const int inner_dim = inner.front().dim();
    int order = outer.order();
    for (const auto& g : inner) {
        if (g.dim() != inner_dim) throw DimensionMismatch("compose: inner series dimensions differ");
        order = std::min(order, g.order());
        const double scale_ref = std::max(1.0, g.max_abs());
        if (std::abs(g.constant_term()) > 1e-13 * scale_ref) {
            throw SeriesError("compose: inner series has nonzero constant term");
        }
    }

    // powers[j][k] = inner_j^k, truncated at the result order.
    std::vector<std::vector<TruncatedSeries>> powers(d);
    for (int j = 0; j < d; ++j) {
        TruncatedSeries g = inner[j].truncated(order);
        g.set(MultiIndex(inner_dim), 0.0);
        powers[j].push_back(TruncatedSeries::constant(inner_dim, order, 1.0));
        for (int k = 1; k <= order; ++k) powers[j].push_back(mul(powers[j].back(), g));
    }

    TruncatedSeries out(inner_dim, order);
    for (const auto& [idx, c] : outer.terms()) {
        if (idx.total_degree() > order) continue;
        TruncatedSeries term = powers[0][idx[0]];
        for (int j = 1; j < d; ++j) {
            if (idx[j] > 0) term = mul(term, powers[j][idx[j]]);
        }
        for (const auto& [ti, tc] : term.terms()) out.accumulate(ti, c * tc);
    }
    return out.cleaned();
}

namespace {

Eigen::MatrixXcd linear_part(std::span<const TruncatedSeries> f) {
    const int d = static_cast<int>(f.size());
    Eigen::MatrixXcd lin(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) lin(i, j) = f[i].coeff(MultiIndex::unit(d, j));
    }
    return lin;
}

}  // namespace

std::vector<TruncatedSeries> invert_map(std::span<const TruncatedSeries> f) {
    const int d = static_cast<int>(f.size());
    if (d == 0) throw DimensionMismatch("invert_map: empty map");
    int order = f.front().order();
    for (const auto& fi : f) {
        if (fi.dim() != d) throw DimensionMismatch("invert_map: need d series in d variables");
        order = std::min(order, fi.order());
        if (std::abs(fi.constant_term()) > 1e-13 * std::max(1.0, fi.max_abs())) {
            throw SeriesError("invert_map: nonzero constant term");
        }
    }
    if (order < 1) throw SeriesError("invert_map: order must be at least 1");

    const Eigen::MatrixXcd lin = linear_part(f);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(lin);
    const double norm = lin.cwiseAbs().maxCoeff();
    if (norm == 0.0 || !lu.isInvertible() ||
        std::abs(lu.determinant()) <= 1e-14 * std::pow(norm, d)) {
        throw SeriesError("invert_map: singular linear part");
    }
    const Eigen::MatrixXcd lin_inv = lu.inverse();

    std::vector<TruncatedSeries> g;
    for (int i = 0; i < d; ++i) {
        TruncatedSeries gi(d, order);
        for (int j = 0; j < d; ++j) gi.set(MultiIndex::unit(d, j), lin_inv(i, j));
        g.push_back(gi);
    }

    // Degree k of g is fixed by degree k of f(g) - x, which depends on g only
    // through degrees < k beyond the linear term.
    for (int k = 2; k <= order; ++k) {
        std::vector<TruncatedSeries> gk;
        for (const auto& gi : g) gk.push_back(gi.truncated(k));
        std::vector<TruncatedSeries> residual;
        for (int i = 0; i < d; ++i) {
            residual.push_back(compose(f[i].truncated(k), gk).homogeneous_part(k));
        }
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (lin_inv(i, j) == Complex{}) continue;
                for (const auto& [idx, c] : residual[j].terms()) g[i].accumulate(idx, -lin_inv(i, j) * c);
            }
        }
    }
    for (auto& gi : g) gi = gi.cleaned();
    return g;
}

namespace {

// Homogeneous parts 0..order of s.
std::vector<TruncatedSeries> graded(const TruncatedSeries& s) {
    std::vector<TruncatedSeries> parts;
    for (int k = 0; k <= s.order(); ++k) parts.push_back(s.homogeneous_part(k));
    return parts;
}

}  // namespace

TruncatedSeries sqrt_series(const TruncatedSeries& f, Complex branch_of_constant) {
    const Complex f0 = f.constant_term();
    if (f0 == Complex{}) throw SeriesError("sqrt_series: zero constant term");
    if (std::abs(branch_of_constant * branch_of_constant - f0) > 1e-12 * std::abs(f0)) {
        throw SeriesError("sqrt_series: branch value squared does not equal f(0)");
    }
    const auto fk = graded(f);
    std::vector<TruncatedSeries> gk;
    gk.push_back(TruncatedSeries::constant(f.dim(), f.order(), branch_of_constant));
    const Complex inv_two_b = 1.0 / (2.0 * branch_of_constant);
    for (int k = 1; k <= f.order(); ++k) {
        TruncatedSeries acc = fk[k];
        for (int i = 1; i < k; ++i) acc -= mul(gk[i], gk[k - i]);
        gk.push_back(scale(acc.homogeneous_part(k), inv_two_b));
    }
    TruncatedSeries out(f.dim(), f.order());
    for (const auto& part : gk) out += part;
    return out.cleaned();
}

TruncatedSeries reciprocal(const TruncatedSeries& f) {
    const Complex f0 = f.constant_term();
    if (f0 == Complex{}) throw SeriesError("reciprocal: zero constant term");
    const auto fk = graded(f);
    std::vector<TruncatedSeries> gk;
    gk.push_back(TruncatedSeries::constant(f.dim(), f.order(), 1.0 / f0));
    for (int k = 1; k <= f.order(); ++k) {
        TruncatedSeries acc(f.dim(), f.order());
        for (int i = 1; i <= k; ++i) {
            if (!fk[i].is_zero()) acc += mul(fk[i], gk[k - i]);
        }
        gk.push_back(scale(acc.homogeneous_part(k), -1.0 / f0));
    }
    TruncatedSeries out(f.dim(), f.order());
    for (const auto& part : gk) out += part;
    return out.cleaned();
}

TruncatedSeries divide(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, reciprocal(b)); }

namespace {

// Univariate series sum_k coeffs[k] t^k.
TruncatedSeries univariate(const std::vector<Complex>& coeffs, int order) {
    TruncatedSeries s(1, order);
    for (int k = 0; k <= order && k < static_cast<int>(coeffs.size()); ++k) s.set(MultiIndex{k}, coeffs[k]);
    return s;
}

}  // namespace

TruncatedSeries exp_series(const TruncatedSeries& f) {
    const Complex f0 = f.constant_term();
    std::vector<Complex> c(f.order() + 1);
    double fact = 1.0;
    for (int k = 0; k <= f.order(); ++k) {
        if (k > 0) fact *= k;
        c[k] = 1.0 / fact;
    }
    TruncatedSeries g = f;
    g.set(MultiIndex(f.dim()), 0.0);
    const TruncatedSeries inner[] = {g};
    return scale(compose(univariate(c, f.order()), inner), std::exp(f0));
}

TruncatedSeries log_series(const TruncatedSeries& f) {
    const Complex f0 = f.constant_term();
    if (f0 == Complex{}) throw SeriesError("log_series: zero constant term");
    std::vector<Complex> c(f.order() + 1);
    for (int k = 1; k <= f.order(); ++k) c[k] = (k % 2 == 1 ? 1.0 : -1.0) / k;
    TruncatedSeries g = scale(f, 1.0 / f0);
    g.set(MultiIndex(f.dim()), 0.0);
    const TruncatedSeries inner[] = {g};
    TruncatedSeries out = compose(univariate(c, f.order()), inner);
    out.accumulate(MultiIndex(f.dim()), std::log(f0));
    return out;
}

TruncatedSeries diff(const TruncatedSeries& f, int axis) {
    if (axis < 0 || axis >= f.dim()) {
        throw DimensionMismatch("diff: axis " + std::to_string(axis) + " out of range");
    }
    if (f.order() == 0) throw SeriesError("diff: series of order 0 has no known derivative");
    TruncatedSeries out(f.dim(), f.order() - 1);
    for (const auto& [idx, c] : f.terms()) {
        const int e = idx[axis];
        if (e == 0) continue;
        MultiIndex lowered = idx;
        lowered.set(axis, e - 1);
        out.set(lowered, c * static_cast<double>(e));
    }
    return out;
}

Complex eval(const TruncatedSeries& f, std::span<const Complex> point) {
    const int d = f.dim();
    if (static_cast<int>(point.size()) != d) throw DimensionMismatch("eval: point length mismatch");
    std::vector<std::vector<Complex>> powers(d, std::vector<Complex>(f.order() + 1, 1.0));
    for (int j = 0; j < d; ++j) {
        for (int k = 1; k <= f.order(); ++k) powers[j][k] = powers[j][k - 1] * point[j];
    }
    Complex sum{};
    for (const auto& [idx, c] : f.terms()) {
        Complex term = c;
        for (int j = 0; j < d; ++j) term *= powers[j][idx[j]];
        sum += term;
    }
    return sum;
}

double max_coeff_diff(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_dim(a, b);
    const int order = std::min(a.order(), b.order());
    double m = 0.0;
    for (const auto& [idx, c] : a.terms()) {
        if (idx.total_degree() <= order) m = std::max(m, std::abs(c - b.coeff(idx)));
    }
    for (const auto& [idx, c] : b.terms()) {
        if (idx.total_degree() <= order) m = std::max(m, std::abs(c - a.coeff(idx)));
    }
    return m;
}

TruncatedSeries determinant(const SeriesMatrix& m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) throw DimensionMismatch("determinant of empty matrix");
    for (const auto& row : m) {
        if (static_cast<int>(row.size()) != n) throw DimensionMismatch("determinant: matrix not square");
    }
    if (n == 1) return m[0][0];
    // Leibniz expansion; n is the phase dimension (<= 4 in practice).
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int order = m[0][0].order();
    for (const auto& row : m) {
        for (const auto& e : row) order = std::min(order, e.order());
    }
    TruncatedSeries det(m[0][0].dim(), order);
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        }
        TruncatedSeries term = m[0][perm[0]];
        for (int i = 1; i < n && !term.is_zero(); ++i) term = mul(term, m[i][perm[i]]);
        if (inversions % 2) {
            det -= term;
        } else {
            det += term;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det.cleaned();
}

SeriesMatrix jacobian(std::span<const TruncatedSeries> map) {
    SeriesMatrix jac;
    for (const auto& fi : map) {
        std::vector<TruncatedSeries> row;
        for (int j = 0; j < fi.dim(); ++j) row.push_back(diff(fi, j));
        jac.push_back(std::move(row));
    }
    return jac;
}

std::vector<TruncatedSeries> identity_map(int dim, int order) {
    std::vector<TruncatedSeries> id;
    for (int j = 0; j < dim; ++j) id.push_back(TruncatedSeries::variable(dim, order, j));
    return id;
}

}  // namespace saddle
