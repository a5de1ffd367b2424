#pragma once

#include "amdrift/numerics.hpp"

#include <functional>

namespace amdrift {

/// Market and contract parameters. Rates and volatilities are annualized,
/// times are in years.
struct MarketParams {
    double r = 0.0;      // risk-free rate
    double delta = 0.0;  // continuous dividend yield
    double b = 0.0;      // volatility
    double s0 = 0.0;     // spot price
    double K = 0.0;      // strike
    double T = 0.0;      // maturity

    void validate() const;

    /// Drift applied to the underlying and to gain-drift terms. Dividends
    /// enter here only; discounting stays at r.
    double carry() const { return r - delta; }
};

enum class GainMode { additive, multiplicative };

/// Payoff process together with the coefficients of its SDE. In additive
/// mode the coefficients are absolute (dG = mu dt + sigma dW); in
/// multiplicative mode they are proportional (dG/G = mu dt + sigma dW).
struct GainProcess {
    GainMode mode = GainMode::additive;
    std::function<double(double)> payoff;          // state -> gain
    std::function<double(double, double)> mu;      // (time, state) -> drift coefficient
    std::function<double(double, double)> sigma;   // (time, state) -> diffusion coefficient
};

/// American put gain (K - S)^+ with the change-of-variable coefficients
///   mu = -(r - delta) S 1{K > S},  sigma = -b S 1{K > S}.
/// The indicator is strict at S = K. The local-time term at the strike is
/// omitted: the exercise boundary sits below K, so the process never
/// accumulates local time at K before stopping.
GainProcess put_gain(const MarketParams& p);

/// Power payoff S^a, a > 0. Constant proportional coefficients
///   mu = a (r - delta) + a (a - 1) b^2 / 2,  sigma = a b.
GainProcess power_gain(double a, const MarketParams& p);

/// Maps simulated underlying paths through the payoff, element-wise.
/// Grid and seed provenance carry through unchanged.
PathSet gain_paths(const GainProcess& g, const PathSet& underlying);

}  // namespace amdrift
