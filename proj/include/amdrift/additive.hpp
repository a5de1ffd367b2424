#pragma once

#include "amdrift/curve.hpp"
#include "amdrift/gain.hpp"
#include "amdrift/numerics.hpp"

#include <cstdint>
#include <functional>

namespace amdrift {

/// Drift and diffusion surfaces of the forward-rate dynamics
///   d_t f_t(u) = alpha(t, u) dt + beta(t, u) dW_t
/// on the triangle t <= u.
struct ForwardDynamics {
    std::function<double(double, double)> alpha;
    std::function<double(double, double)> beta;
};

/// Instantaneous forward exercise rate of the American put under constant
/// coefficients:
///   f_t(u) = -r K e^{-r (u - t)} N(-d2),
///   d2 = [ln(s_t/K) + (carry - b^2/2)(u - t)] / (b sqrt(u - t)).
/// Limit conventions: at u = t (and for b = 0) d2 is replaced by the sign
/// limit of its numerator, so the value is -rK 1{s_t < K}, with -rK/2 when
/// the numerator vanishes. Always in [-rK, 0].
double put_forward_rate(double t, double u, double s_t, const MarketParams& params);

/// Whether a Monte Carlo forward-rate estimate censors paths at the
/// deterministic critical time. With `none` the survival indicator is
/// dropped, matching the closed form above.
enum class Stopping { none, critical_time };

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
};

/// Monte Carlo estimate of the forward rate
///   E[ e^{-r(u-t)} (mu_u - r G_u) ] = E[ -r K e^{-r(u-t)} 1{S_u < K} ]
/// by exact one-step terminal sampling of S_u. With stopping =
/// critical_time the estimate is additionally multiplied by the
/// deterministic indicator 1{u <= critical time}. Requires n_paths >= 100.
McEstimate forward_rate_mc(double t, double u, double s_t, const MarketParams& params,
                           Stopping stopping, long n_paths, std::uint64_t seed,
                           int n_threads = 0);

struct ValuationResult {
    double price = 0.0;
    double intrinsic = 0.0;
    double critical_time = 0.0;
    ForwardCurve curve;
    /// The forward rate is non-positive, so the price sits at or below the
    /// intrinsic value whenever the integral is non-zero. Reported as-is,
    /// never floored.
    bool below_intrinsic = false;
};

/// American put value under the additive model:
///   V_t = (K - s_t)^+ + integral of the forward rate over [t, t*],
/// with t* the deterministic critical time. The returned curve samples the
/// forward rate over the full [t, T].
ValuationResult value_put_additive(double t, double s_t, const MarketParams& params,
                                   double quad_tol = 1e-9, int curve_nodes = 200);

/// Earliest s in [t, T] with Phi(s) = integral_s^T f_s(u) du = 0, the spot
/// frozen at s_t when the curve is re-indexed to s. Phi(T) = 0 always (empty
/// integral), so the result never exceeds T; a Phi that already vanishes at
/// t returns t.
double critical_time(double t, double s_t, const MarketParams& params, double root_tol = 1e-8,
                     double quad_tol = 1e-9, int scan_nodes = 200);

/// Drift slice making the discounted value a martingale: alpha(u) = r f(u),
/// node-wise over the curve's maturities.
std::vector<double> no_arb_drift_additive(const ForwardCurve& curve, double r);

/// Residual of the spot-consistency identity f_t(t) = mu_t - r G_t,
/// approached through the closed form at horizon h:
///   | put_forward_rate(t, t+h) - (mu_t - r G_t) |.
/// Tends to 0 as h -> 0 whenever s_t != K.
double spot_consistency_residual_additive(const GainProcess& g, double t, double s_t,
                                          const MarketParams& params, double h);

struct MartingaleStat {
    double mean = 0.0;       // sample mean of e^{-r (T - t0)} V_T - V_0
    double std_error = 0.0;
    long n_paths = 0;
    double v0 = 0.0;
};

struct CurveEvolutionConfig {
    ForwardCurve curve0;       // initial curve; its nodes double as the time grid
    ForwardDynamics dynamics;  // beta is used; the drift is r f scaled by drift_scale
    double rate = 0.0;
    double g0 = 0.0;           // initial gain value
    double sigma_gain = 0.0;   // constant gain volatility
    long n_paths = 100000;
    std::uint64_t seed = 0;
    double drift_scale = 1.0;  // 1 = no-arbitrage drift; other values break the martingale
    int n_threads = 0;
};

/// Evolves the whole curve triangle under d f = drift_scale * r f dt + beta dW
/// together with a gain process whose drift is pinned to the curve's left
/// edge (the spot-consistency identity), rebuilds V_t = G_t + integral f,
/// and returns the drift statistic of the discounted value. Each step
/// compounds exactly over its interval, so with drift_scale = 1 the
/// discounted value is a discrete martingale with no time-stepping bias.
MartingaleStat evolve_curve_additive(const CurveEvolutionConfig& cfg);

}  // namespace amdrift
