#include "saddle/quadrature.hpp"

#include <array>
#include <cmath>

#include "saddle/error.hpp"

namespace saddle {

namespace {

// Kronrod 15-point nodes on [-1,1]; the odd positions carry the Gauss 7 rule.
constexpr std::array<double, 15> kNodes = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr std::array<double, 15> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr std::array<double, 15> kGauss = {
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0};

struct Cell {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
};

struct CellEstimate {
    Complex kronrod{};
    double error = 0.0;
};

class Integrand {
public:
    Integrand(const Expr& phi, const Expr& amplitude, double lambda)
        : phi_(phi), amp_(amplitude), lambda_(lambda) {}

    Complex operator()(std::span<const Complex> x) const {
        const Complex a = amp_.eval(x);
        if (a == Complex{}) return a;
        return std::exp(-lambda_ * phi_.eval(x)) * a;
    }

private:
    CompiledExpr phi_;
    CompiledExpr amp_;
    double lambda_;
};

int points_per_cell(int d) {
    int n = 1;
    for (int j = 0; j < d; ++j) n *= 15;
    return n;
}

CellEstimate integrate_cell(const Integrand& f, const Cell& c, int d) {
    std::array<double, 3> half{}, mid{};
    double jac = 1.0;
    for (int j = 0; j < d; ++j) {
        half[j] = 0.5 * (c.hi[j] - c.lo[j]);
        mid[j] = 0.5 * (c.hi[j] + c.lo[j]);
        jac *= half[j];
    }
    Complex k{}, g{};
    std::array<int, 3> idx{};
    std::array<Complex, 3> x{};
    const int n = points_per_cell(d);
    for (int p = 0; p < n; ++p) {
        int rest = p;
        double wk = 1.0, wg = 1.0;
        for (int j = 0; j < d; ++j) {
            idx[j] = rest % 15;
            rest /= 15;
            x[j] = mid[j] + half[j] * kNodes[idx[j]];
            wk *= kKronrod[idx[j]];
            wg *= kGauss[idx[j]];
        }
        const Complex v = f(std::span<const Complex>(x.data(), d));
        k += wk * v;
        if (wg != 0.0) g += wg * v;
    }
    return {jac * k, jac * std::abs(k - g)};
}

void split(const Cell& c, int d, std::vector<Cell>& out) {
    for (int mask = 0; mask < (1 << d); ++mask) {
        Cell child = c;
        for (int j = 0; j < d; ++j) {
            const double m = 0.5 * (c.lo[j] + c.hi[j]);
            if (mask & (1 << j)) child.lo[j] = m;
            else child.hi[j] = m;
        }
        out.push_back(child);
    }
}

double cell_volume(const Cell& c, int d) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) v *= c.hi[j] - c.lo[j];
    return v;
}

// The kernel: one rule application per cell, independent across cells.
void estimate_serial(const Integrand& f, const std::vector<Cell>& cells, int d, std::vector<CellEstimate>& out) {
    out.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) out[i] = integrate_cell(f, cells[i], d);
}

void estimate_parallel(const Integrand& f, const std::vector<Cell>& cells, int d, std::vector<CellEstimate>& out) {
    out.resize(cells.size());
    const auto n = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) out[i] = integrate_cell(f, cells[i], d);
}

}  // namespace

QuadratureResult integrate(const Expr& phi, const Expr& amplitude, const Domain& dom, double lambda,
                           const QuadOptions& options) {
    const int d = dom.dim();
    if (d < 1 || d > 3) throw InvalidProblem("quadrature supports 1 to 3 dimensions");
    if (!(lambda > 0.0)) throw InvalidProblem("lambda must be positive");
    for (const auto& b : dom.bounds) {
        if (!(b.hi > b.lo) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw InvalidProblem("quadrature needs a finite box with hi > lo");
        }
    }
    if (max_variable_index(phi) >= d || max_variable_index(amplitude) >= d) {
        throw InvalidProblem("expression uses more variables than the domain has");
    }
    const Integrand f(phi, amplitude, lambda);
    const double total_volume = dom.volume();
    const int per_cell = points_per_cell(d);

    std::vector<Cell> pending;
    {
        const int m = std::max(1, options.initial_cells);
        int count = 1;
        for (int j = 0; j < d; ++j) count *= m;
        for (int p = 0; p < count; ++p) {
            Cell c;
            int rest = p;
            for (int j = 0; j < d; ++j) {
                const int i = rest % m;
                rest /= m;
                const double w = (dom.bounds[j].hi - dom.bounds[j].lo) / m;
                c.lo[j] = dom.bounds[j].lo + i * w;
                c.hi[j] = i + 1 == m ? dom.bounds[j].hi : c.lo[j] + w;
            }
            pending.push_back(c);
        }
    }

    QuadratureResult result;
    Complex accepted_sum{};
    double accepted_error = 0.0;
    std::vector<CellEstimate> est;
    std::vector<Cell> next;

    while (!pending.empty()) {
        if (options.policy == ExecPolicy::Parallel) estimate_parallel(f, pending, d, est);
        else estimate_serial(f, pending, d, est);
        result.evaluations += static_cast<std::int64_t>(pending.size()) * per_cell;
        result.cells += static_cast<std::int64_t>(pending.size());

        Complex round_sum = accepted_sum;
        for (const auto& e : est) round_sum += e.kronrod;
        const double target = std::max(options.abs_tol, options.rel_tol * std::abs(round_sum));

        std::vector<std::size_t> rejected;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (!std::isfinite(est[i].kronrod.real()) || !std::isfinite(est[i].kronrod.imag())) {
                throw SingularPoint("integrand is not finite inside the domain", "");
            }
            const double share = target * cell_volume(pending[i], d) / total_volume;
            if (est[i].error <= share) {
                accepted_sum += est[i].kronrod;
                accepted_error += est[i].error;
            } else {
                rejected.push_back(i);
            }
        }
        const auto needed = static_cast<std::int64_t>(rejected.size()) * (std::int64_t{1} << d) * per_cell;
        if (!rejected.empty() && result.evaluations + needed > options.max_evals) {
            for (const std::size_t i : rejected) {
                accepted_sum += est[i].kronrod;
                accepted_error += est[i].error;
            }
            result.budget_exceeded = true;
            break;
        }
        next.clear();
        for (const std::size_t i : rejected) split(pending[i], d, next);
        pending.swap(next);
    }
    result.value = accepted_sum;
    result.abs_error_estimate = accepted_error;
    return result;
}

double decay_slope(std::span<const std::pair<double, double>> lambda_error) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [lambda, err] : lambda_error) {
        if (!(err > 0.0) || !(lambda > 0.0)) continue;
        const double x = std::log(lambda), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw InvalidProblem("decay_slope needs at least three positive errors");
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw InvalidProblem("decay_slope needs distinct lambda values");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace saddle
