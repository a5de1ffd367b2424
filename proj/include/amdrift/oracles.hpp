#pragma once

#include "amdrift/gain.hpp"

#include <vector>

namespace amdrift {

struct CrrResult {
    double price = 0.0;
    /// Highest spot at which exercise is optimal, one entry per step
    /// 0..steps; NaN where no node exercises.
    std::vector<double> exercise_boundary;
    int steps = 0;
};

/// American put on a recombining lattice with u = e^{b sqrt(dt)}, d = 1/u,
/// p = (e^{(r - delta) dt} - d)/(u - d). Backward induction of the discrete
/// optimal-stopping value. Throws std::domain_error when p falls outside
/// (0, 1).
CrrResult crr_american_put(const MarketParams& params, int steps);

/// European put closed form K e^{-r tau} N(-d2) - S e^{-delta tau} N(-d1),
/// tau = T - t; the b = 0 limit is the discounted deterministic payoff.
double bs_european_put(const MarketParams& params, double t);

struct DecompositionReport {
    double lhs = 0.0;       // V_0 from backward induction
    double rhs = 0.0;       // G_0 plus expected discounted gain increments up to the stopping time
    double residual = 0.0;  // |lhs - rhs|
    int steps = 0;
};

/// Exact discrete decomposition of the tree value: enumerates all 2^steps
/// paths, applies the backward-induction stopping rule, and accumulates the
/// discounted gain increments before exercise. The identity is a telescoping
/// sum, so the residual is pure floating-point noise (<= 1e-12). Refuses
/// steps > 12.
DecompositionReport discrete_decomposition_check(const MarketParams& params, int steps);

struct ComparisonRow {
    double spot = 0.0;
    double intrinsic = 0.0;
    double bs_put = 0.0;
    double crr_put = 0.0;
    double additive_put = 0.0;
    double critical_time = 0.0;
    double deviation = 0.0;  // additive_put - crr_put, signed
};

struct ValuationReport {
    MarketParams params;
    int crr_steps = 0;
    std::vector<ComparisonRow> rows;
};

/// Per-spot comparison of the additive model against the classical prices.
/// The deviation column is an output, never an assertion: the additive
/// closed form sits at or below intrinsic while the tree price sits above.
ValuationReport comparison_report(const MarketParams& params, const std::vector<double>& spots,
                                  int crr_steps = 5000, double quad_tol = 1e-9);

}  // namespace amdrift
