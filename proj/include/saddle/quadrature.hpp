#pragma once

// Adaptive tensor Gauss-Kronrod quadrature of e^{-λφ(x)} A(x) over a box.
//
// Each cell is integrated with the 15-point Kronrod rule along every axis and
// with the embedded 7-point Gauss rule; |K - G| is the cell error estimate.
// Refinement proceeds in rounds: a cell is accepted once its estimate is
// below its volume share of max(abs_tol, rel_tol |I|), otherwise it is split
// into 2^d children. Accepted cells are summed in a fixed order, so serial and
// parallel runs return bit-identical results.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "saddle/expr.hpp"
#include "saddle/types.hpp"

namespace saddle {

enum class ExecPolicy { Serial, Parallel };

struct QuadOptions {
    double abs_tol = 1e-15;
    double rel_tol = 1e-11;
    std::int64_t max_evals = 10'000'000;
    /// Cells per axis before adaptive refinement starts.
    int initial_cells = 4;
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct QuadratureResult {
    Complex value{};
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
    /// The evaluation budget ran out; value is the best available estimate.
    bool budget_exceeded = false;
    std::int64_t cells = 0;
};

QuadratureResult integrate(const Expr& phi, const Expr& amplitude, const Domain& dom, double lambda,
                           const QuadOptions& options = {});

/// Least-squares slope of log(error) against log(λ). Non-positive errors are
/// skipped; throws when fewer than three points remain.
double decay_slope(std::span<const std::pair<double, double>> lambda_error);

}  // namespace saddle
