#include "amdrift/multiplicative.hpp"

#include "amdrift/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace amdrift {

double value_multiplicative(double g_t, const ForwardCurve& curve) {
    curve.validate();
    if (!(g_t >= 0.0)) throw std::invalid_argument("value_multiplicative: gain must be >= 0");
    if (g_t == 0.0) return 0.0;
    return g_t * std::exp(-curve.total_integral());
}

double implied_forward_rate(const std::function<double(double)>& value_curve, double T, double h) {
    if (!value_curve) throw std::invalid_argument("implied_forward_rate: value curve is not set");
    if (!(h > 0.0)) throw std::invalid_argument("implied_forward_rate: h must be positive");
    const double up = value_curve(T + h);
    const double down = value_curve(T - h);
    if (!(up > 0.0) || !(down > 0.0)) {
        throw std::domain_error("implied_forward_rate: value must be positive near T");
    }
    return -(std::log(up) - std::log(down)) / (2.0 * h);
}

double no_arb_drift_mult(const std::function<double(double, double)>& beta,
                         const std::function<double(double)>& sigma_gain, double t, double T,
                         double quad_tol) {
    if (!beta || !sigma_gain) throw std::invalid_argument("no_arb_drift_mult: missing coefficient");
    if (!(t <= T)) throw std::invalid_argument("no_arb_drift_mult: requires t <= T");
    const double inner =
        t == T ? 0.0 : integrate([&](double u) { return beta(t, u); }, t, T, quad_tol);
    return beta(t, T) * (inner - sigma_gain(t));
}

GaussianPowerDynamics gaussian_power_dynamics(double a, const MarketParams& params, double beta) {
    params.validate();
    if (!(a > 0.0)) throw std::invalid_argument("gaussian_power_dynamics: exponent must be positive");
    if (!std::isfinite(beta)) {
        throw std::invalid_argument("gaussian_power_dynamics: beta must be finite");
    }
    const double sigma = a * params.b;
    const double r = params.r;
    const double T = params.T;

    GaussianPowerDynamics out;
    out.a = a;
    out.beta = beta;
    out.dynamics.alpha = [beta, sigma](double t, double u) {
        return beta * (beta * (u - t) - sigma);
    };
    out.dynamics.beta = [beta](double, double) { return beta; };
    out.dynamics.sigma_gain = [sigma](double) { return sigma; };
    out.gt.gamma = [r](double) { return r; };
    out.gt.theta = [sigma, beta, T](double s) { return sigma - beta * (T - s); };
    out.gt.maturity = T;
    return out;
}

PathSet evolve_value_mult(double v0, const GammaTheta& gt, const TimeGrid& grid, long n_paths,
                          std::uint64_t seed, int n_threads) {
    grid.validate();
    if (!(v0 > 0.0)) throw std::invalid_argument("evolve_value_mult: v0 must be positive");
    if (!gt.gamma || !gt.theta) throw std::invalid_argument("evolve_value_mult: incomplete coefficients");
    if (n_paths < 1) throw std::invalid_argument("evolve_value_mult: n_paths must be positive");

    const int steps = grid.n_steps;
    const double dt = grid.step();
    const double sqdt = std::sqrt(dt);
    std::vector<double> log_drift(static_cast<std::size_t>(steps)),
        vol(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        const double mid = grid.node(k) + 0.5 * dt;
        const double theta = gt.theta(mid);
        log_drift[k] = (gt.gamma(mid) - 0.5 * theta * theta) * dt;
        vol[k] = theta * sqdt;
    }

    PathSet out;
    out.grid = grid;
    out.n_paths = n_paths;
    out.seed = seed;
    out.values.resize(static_cast<std::size_t>(n_paths) * grid.nodes());

    parallel_for(n_paths, n_threads, [&](long begin, long end) {
        for (long p = begin; p < end; ++p) {
            NormalStream z(seed, static_cast<std::uint64_t>(p));
            double v = v0;
            out.at(p, 0) = v;
            for (int k = 0; k < steps; ++k) {
                v *= std::exp(log_drift[k] + vol[k] * z.next());
                out.at(p, k + 1) = v;
            }
        }
    });
    return out;
}

double spot_consistency_residual_mult(const GainProcess& g, const MarketParams& params, double h,
                                      double t) {
    params.validate();
    if (!g.payoff || !g.mu) throw std::invalid_argument("spot consistency: gain is incomplete");
    if (!(h > 0.0)) throw std::invalid_argument("spot consistency: h must be positive");

    const double gain = g.payoff(params.s0);
    if (!(gain > 0.0)) {
        throw std::invalid_argument("spot consistency: gain must be positive at the spot");
    }
    // Short-horizon value from the gain drift, coefficients along the frozen
    // spot; the interval is assumed inside the continuation region.
    const double excess =
        integrate([&](double u) { return g.mu(u, params.s0) - params.r; }, t, t + h, 1e-15);
    const double v_short = gain * std::exp(excess);
    const double f_tt = std::log(gain / v_short) / h;
    return std::abs(f_tt - (params.r - g.mu(t, params.s0)));
}

double critical_time_mult(const ForwardCurve& curve, double t, double T, double root_tol,
                          int scan_nodes) {
    curve.validate();
    if (!(t < T)) throw std::invalid_argument("critical_time_mult: requires t < T");

    double scale = 0.0;
    for (double f : curve.rates()) scale = std::max(scale, std::abs(f));
    const double zero_tol = 1e-12 * std::max(1.0, scale * (T - t));
    const auto hit = find_first_zero([&](double s) { return curve.integral(s, T); }, t, T,
                                     root_tol, scan_nodes, zero_tol);
    return hit.value_or(T);
}

GammaTheta gamma_theta_from_dynamics(const MultForwardDynamics& dyn, double r, double T,
                                     double alpha_scale, double quad_tol) {
    if (!dyn.alpha || !dyn.beta || !dyn.sigma_gain) {
        throw std::invalid_argument("gamma_theta_from_dynamics: incomplete dynamics");
    }
    GammaTheta out;
    out.maturity = T;
    out.theta = [dyn, T, quad_tol](double s) {
        const double big_b =
            s == T ? 0.0 : integrate([&](double u) { return dyn.beta(s, u); }, s, T, quad_tol);
        return dyn.sigma_gain(s) - big_b;
    };
    out.gamma = [dyn, r, T, alpha_scale, quad_tol](double s) {
        const double big_a =
            s == T ? 0.0 : integrate([&](double u) { return dyn.alpha(s, u); }, s, T, quad_tol);
        const double big_b =
            s == T ? 0.0 : integrate([&](double u) { return dyn.beta(s, u); }, s, T, quad_tol);
        return r - alpha_scale * big_a - dyn.sigma_gain(s) * big_b + 0.5 * big_b * big_b;
    };
    return out;
}

MartingaleStat discounted_value_drift_mult(double v0, const GammaTheta& gt, double r,
                                           const TimeGrid& grid, long n_paths, std::uint64_t seed,
                                           int n_threads) {
    if (n_paths < 100) {
        throw std::domain_error("discounted_value_drift_mult: need at least 100 paths");
    }
    const PathSet paths = evolve_value_mult(v0, gt, grid, n_paths, seed, n_threads);
    const double disc = std::exp(-r * (grid.t_end - grid.t_start));
    std::vector<double> drift(static_cast<std::size_t>(n_paths));
    for (long p = 0; p < n_paths; ++p) {
        drift[static_cast<std::size_t>(p)] = disc * paths.at(p, grid.n_steps) - v0;
    }
    const MeanStdErr stat = mean_std_error(drift);
    return {stat.mean, stat.std_error, n_paths, v0};
}

}  // namespace amdrift
