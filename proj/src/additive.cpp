#include "amdrift/additive.hpp"

#include "amdrift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amdrift {

double put_forward_rate(double t, double u, double s_t, const MarketParams& params) {
    params.validate();
    if (!(s_t > 0.0)) throw std::invalid_argument("put_forward_rate: spot must be positive");
    if (!std::isfinite(t) || !std::isfinite(u)) {
        throw std::domain_error("put_forward_rate: times must be finite");
    }
    if (u < t) throw std::domain_error("put_forward_rate: u must not precede t");

    const double rk = params.r * params.K;
    if (rk == 0.0) return 0.0;

    const double tau = u - t;
    const double num = std::log(s_t / params.K) + (params.carry() - 0.5 * params.b * params.b) * tau;
    double n_minus_d2;
    if (tau == 0.0 || params.b == 0.0) {
        // d2 degenerates to the sign limit of its numerator; the symmetric
        // value 1/2 is used when the numerator vanishes.
        n_minus_d2 = num > 0.0 ? 0.0 : (num < 0.0 ? 1.0 : 0.5);
    } else {
        n_minus_d2 = norm_cdf(-num / (params.b * std::sqrt(tau)));
    }
    return -rk * std::exp(-params.r * tau) * n_minus_d2;
}

McEstimate forward_rate_mc(double t, double u, double s_t, const MarketParams& params,
                           Stopping stopping, long n_paths, std::uint64_t seed, int n_threads) {
    params.validate();
    if (!(s_t > 0.0)) throw std::invalid_argument("forward_rate_mc: spot must be positive");
    if (u < t) throw std::domain_error("forward_rate_mc: u must not precede t");
    if (n_paths < 100) {
        throw std::domain_error("forward_rate_mc: need at least 100 paths for a standard error");
    }

    double censor = 1.0;
    if (stopping == Stopping::critical_time && u > critical_time(t, s_t, params)) censor = 0.0;

    const double tau = u - t;
    const double disc = -params.r * params.K * std::exp(-params.r * tau) * censor;

    if (tau == 0.0) {
        // Degenerate horizon: the integrand is deterministic.
        const double value = s_t < params.K ? disc : 0.0;
        return {value, 0.0, n_paths};
    }

    const double mu_tau = (params.carry() - 0.5 * params.b * params.b) * tau;
    const double vol_sqtau = params.b * std::sqrt(tau);
    const double log_k = std::log(params.K / s_t);

    std::vector<double> draws(static_cast<std::size_t>(n_paths));
    parallel_for(n_paths, n_threads, [&](long begin, long end) {
        for (long p = begin; p < end; ++p) {
            NormalStream z(seed, static_cast<std::uint64_t>(p));
            const double log_growth = mu_tau + vol_sqtau * z.next();
            draws[static_cast<std::size_t>(p)] = log_growth < log_k ? disc : 0.0;
        }
    });

    const MeanStdErr stat = mean_std_error(draws);
    return {stat.mean, stat.std_error, n_paths};
}

ValuationResult value_put_additive(double t, double s_t, const MarketParams& params,
                                   double quad_tol, int curve_nodes) {
    params.validate();
    if (!(s_t > 0.0)) throw std::invalid_argument("value_put_additive: spot must be positive");
    if (!(t >= 0.0) || !(t < params.T)) {
        throw std::invalid_argument("value_put_additive: requires 0 <= t < T");
    }

    ValuationResult out;
    out.intrinsic = std::max(params.K - s_t, 0.0);
    out.critical_time = critical_time(t, s_t, params, 1e-8, quad_tol);
    out.curve = ForwardCurve::sample(
        t, params.T, [&](double u) { return put_forward_rate(t, u, s_t, params); }, curve_nodes);

    double accrual = 0.0;
    if (out.critical_time > t) {
        accrual = integrate([&](double u) { return put_forward_rate(t, u, s_t, params); }, t,
                            out.critical_time, quad_tol);
    }
    out.price = out.intrinsic + accrual;
    out.below_intrinsic = out.price < out.intrinsic;
    return out;
}

double critical_time(double t, double s_t, const MarketParams& params, double root_tol,
                     double quad_tol, int scan_nodes) {
    params.validate();
    if (!(s_t > 0.0)) throw std::invalid_argument("critical_time: spot must be positive");
    if (!(t >= 0.0) || !(t < params.T)) {
        throw std::invalid_argument("critical_time: requires 0 <= t < T");
    }

    const double T = params.T;
    const auto phi = [&](double s) {
        if (s >= T) return 0.0;
        return integrate([&](double u) { return put_forward_rate(s, u, s_t, params); }, s, T,
                         quad_tol);
    };
    // Only an exact floating-point zero counts as "vanished": the criterion
    // integral can be strictly signed yet arbitrarily small (far out of the
    // money), and any positive tolerance would misread that as a stop. The
    // genuine degenerate regimes (zero rate, zero curve, the horizon itself)
    // all evaluate to exactly zero.
    const auto hit = find_first_zero(phi, t, T, root_tol, scan_nodes, 0.0);
    return hit.value_or(T);
}

std::vector<double> no_arb_drift_additive(const ForwardCurve& curve, double r) {
    curve.validate();
    if (!std::isfinite(r)) throw std::invalid_argument("no_arb_drift_additive: rate must be finite");
    std::vector<double> alpha(curve.rates().size());
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = r * curve.rates()[i];
    return alpha;
}

double spot_consistency_residual_additive(const GainProcess& g, double t, double s_t,
                                          const MarketParams& params, double h) {
    if (!g.payoff || !g.mu) throw std::invalid_argument("spot consistency: gain is incomplete");
    if (!(h > 0.0)) throw std::invalid_argument("spot consistency: h must be positive");
    const double lhs = put_forward_rate(t, t + h, s_t, params);
    const double rhs = g.mu(t, s_t) - params.r * g.payoff(s_t);
    return std::abs(lhs - rhs);
}

MartingaleStat evolve_curve_additive(const CurveEvolutionConfig& cfg) {
    cfg.curve0.validate();
    if (!cfg.dynamics.beta) throw std::invalid_argument("evolve_curve_additive: beta is not set");
    if (cfg.n_paths < 100) {
        throw std::domain_error("evolve_curve_additive: need at least 100 paths");
    }
    if (!std::isfinite(cfg.rate) || !std::isfinite(cfg.g0) || !std::isfinite(cfg.sigma_gain) ||
        !std::isfinite(cfg.drift_scale)) {
        throw std::invalid_argument("evolve_curve_additive: parameters must be finite");
    }

    const auto& us = cfg.curve0.maturities();
    const auto& f0 = cfg.curve0.rates();
    const int n = static_cast<int>(us.size()) - 1;  // steps; node k is time us[k]

    // Per-step factors. The curve compounds at drift_scale * r, the gain at
    // r; with drift_scale = 1 the two match and the discounted value
    // telescopes into an exact martingale.
    std::vector<double> dt(static_cast<std::size_t>(n)), sqdt(static_cast<std::size_t>(n));
    std::vector<double> curve_growth(static_cast<std::size_t>(n)),
        gain_growth(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        dt[k] = us[k + 1] - us[k];
        sqdt[k] = std::sqrt(dt[k]);
        curve_growth[k] = std::exp(cfg.drift_scale * cfg.rate * dt[k]);
        gain_growth[k] = std::exp(cfg.rate * dt[k]);
    }

    // beta(t_k, u_j) for j > k, flattened row by row.
    std::vector<std::size_t> row(static_cast<std::size_t>(n));
    std::size_t total = 0;
    for (int k = 0; k < n; ++k) {
        row[k] = total;
        total += static_cast<std::size_t>(n - k);
    }
    std::vector<double> beta_lat(total);
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j <= n; ++j) {
            beta_lat[row[k] + static_cast<std::size_t>(j - k - 1)] = cfg.dynamics.beta(us[k], us[j]);
        }
    }

    const double v0 = cfg.g0 + cfg.curve0.total_integral();
    const double disc = std::exp(-cfg.rate * (us[n] - us[0]));

    std::vector<double> drift(static_cast<std::size_t>(cfg.n_paths));
    parallel_for(cfg.n_paths, cfg.n_threads, [&](long begin, long end) {
        std::vector<double> f(f0.begin(), f0.end());
        for (long p = begin; p < end; ++p) {
            std::copy(f0.begin(), f0.end(), f.begin());
            NormalStream stream(cfg.seed, static_cast<std::uint64_t>(p));
            double gain = cfg.g0;
            for (int k = 0; k < n; ++k) {
                const double z = stream.next();
                const double shock = sqdt[k] * z;
                // Gain absorbs the trapezoid of the curve over the step, so
                // V = G + integral(f) is conserved in expectation.
                const double left_slab = 0.5 * dt[k] * (f[k] + f[k + 1]);
                gain = gain_growth[k] * (gain + left_slab) + cfg.sigma_gain * shock;
                const double* beta_row = beta_lat.data() + row[k];
                for (int j = k + 1; j <= n; ++j) {
                    f[j] = curve_growth[k] * f[j] + beta_row[j - k - 1] * shock;
                }
            }
            // At maturity the curve integral is empty: V_T = G_T.
            drift[static_cast<std::size_t>(p)] = disc * gain - v0;
        }
    });

    const MeanStdErr stat = mean_std_error(drift);
    return {stat.mean, stat.std_error, cfg.n_paths, v0};
}

}  // namespace amdrift
