#include "amdrift/verify.hpp"

#include "amdrift/additive.hpp"
#include "amdrift/multiplicative.hpp"
#include "amdrift/oracles.hpp"
#include "amdrift/report.hpp"
#include "amdrift/rng.hpp"

#include <algorithm>
#include <cmath>

namespace amdrift {

namespace {

SuiteResult spot_consistency_suite(const VerifyConfig& cfg) {
    SuiteResult res{"spot-consistency", true, ""};
    const double h = 1e-6;

    double worst_add = 0.0;
    const GainProcess put = put_gain(cfg.params);
    for (double m : {0.6, 0.8, 1.2, 1.4}) {
        const double s = m * cfg.params.K;
        worst_add = std::max(
            worst_add, spot_consistency_residual_additive(put, 0.0, s, cfg.params, h));
    }

    double worst_mult = 0.0;
    for (double a : {1.0, 2.0, 3.0}) {
        const GainProcess power = power_gain(a, cfg.params);
        worst_mult = std::max(worst_mult, spot_consistency_residual_mult(power, cfg.params, h));
    }

    res.passed = worst_add < 1e-3 && worst_mult < 1e-6;
    res.detail = "additive residual " + format_number(worst_add) + " (limit 1e-3), multiplicative " +
                 format_number(worst_mult) + " (limit 1e-6) at h=1e-6";
    return res;
}

SuiteResult mc_forward_rate_suite(const VerifyConfig& cfg) {
    SuiteResult res{"mc-forward-rate", true, ""};
    double worst_gap = 0.0;
    int cells = 0;
    for (double m : {0.6, 0.8, 1.0, 1.2, 1.4}) {
        for (double frac : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            const double s = m * cfg.params.K;
            const double u = frac * cfg.params.T;
            const double closed = put_forward_rate(0.0, u, s, cfg.params);
            const McEstimate mc = forward_rate_mc(0.0, u, s, cfg.params, Stopping::none,
                                                  cfg.n_paths, cfg.seed + cells, cfg.n_threads);
            // When the exercise indicator never flips in the sample the
            // standard error collapses to zero while the true gap is the
            // rare-branch probability; the rule-of-three binomial bound
            // 3/n covers that, scaled by the indicator's payout.
            const double mag = cfg.params.r * cfg.params.K * std::exp(-cfg.params.r * u);
            const double band =
                3.0 * mc.std_error + 3.0 * mag / static_cast<double>(cfg.n_paths) + 1e-10;
            const double gap = std::abs(mc.value - closed);
            if (gap > band) res.passed = false;
            worst_gap = std::max(worst_gap, band > 0.0 ? gap / band : 0.0);
            ++cells;
        }
    }
    res.detail = "25 cells, worst |mc-closed| at " + format_number(worst_gap) +
                 " of the 3-standard-error band";
    return res;
}

SuiteResult martingale_additive_suite(const VerifyConfig& cfg) {
    SuiteResult res{"martingale-additive", true, ""};
    const MarketParams& p = cfg.params;
    const GainProcess put = put_gain(p);

    CurveEvolutionConfig ev;
    ev.curve0 = ForwardCurve::sample(
        0.0, p.T, [&](double u) { return put_forward_rate(0.0, u, p.s0, p); }, 101);
    ev.dynamics.beta = [b = cfg.beta](double, double) { return b; };
    ev.rate = p.r;
    ev.g0 = put.payoff(p.s0);
    ev.sigma_gain = put.sigma(0.0, p.s0);
    ev.n_paths = cfg.n_paths;
    ev.seed = cfg.seed;
    ev.drift_scale = cfg.negative_control ? 2.0 : 1.0;
    ev.n_threads = cfg.n_threads;

    const MartingaleStat stat = evolve_curve_additive(ev);
    res.passed = std::abs(stat.mean) <= 3.0 * stat.std_error;
    res.detail = "drift " + format_number(stat.mean) + " vs 3 SE = " +
                 format_number(3.0 * stat.std_error) + " (drift scale " +
                 format_number(ev.drift_scale) + ")";
    return res;
}

SuiteResult martingale_mult_suite(const VerifyConfig& cfg) {
    SuiteResult res{"martingale-multiplicative", true, ""};
    const MarketParams& p = cfg.params;
    const GaussianPowerDynamics dyn = gaussian_power_dynamics(cfg.exponent, p, cfg.beta);
    const double scale = cfg.negative_control ? 2.0 : 1.0;
    const GammaTheta gt = gamma_theta_from_dynamics(dyn.dynamics, p.r, p.T, scale);
    const double v0 = std::pow(p.s0, cfg.exponent);
    const TimeGrid grid(0.0, p.T, 100);
    const MartingaleStat stat =
        discounted_value_drift_mult(v0, gt, p.r, grid, cfg.n_paths, cfg.seed, cfg.n_threads);
    res.passed = std::abs(stat.mean) <= 3.0 * stat.std_error;
    res.detail = "drift " + format_number(stat.mean) + " vs 3 SE = " +
                 format_number(3.0 * stat.std_error) + " (drift scale " + format_number(scale) +
                 ")";
    return res;
}

SuiteResult decomposition_suite(const VerifyConfig& cfg) {
    SuiteResult res{"discrete-decomposition", true, ""};
    double worst = discrete_decomposition_check(cfg.params, cfg.decomp_steps).residual;

    // Deterministic parameter fuzz; ranges keep the lattice probability
    // inside (0, 1).
    Philox4x32 gen(cfg.seed, 0x6665757a);  // stream tag "fuzz"
    for (int i = 0; i < cfg.decomp_fuzz; ++i) {
        const auto w = gen(static_cast<std::uint64_t>(i));
        const auto unit = [](std::uint32_t v) { return (v + 0.5) * 0x1.0p-32; };
        MarketParams p;
        p.r = 0.1 * unit(w[0]);
        p.delta = 0.05 * unit(w[1]);
        p.b = 0.1 + 0.3 * unit(w[2]);
        p.K = 100.0;
        p.s0 = (0.5 + unit(w[3])) * p.K;
        p.T = 0.25 + 1.75 * unit(w[0] ^ w[2]);
        worst = std::max(worst, discrete_decomposition_check(p, cfg.decomp_steps).residual);
    }
    res.passed = worst <= 1e-12;
    res.detail = "worst residual " + format_number(worst) + " over " +
                 std::to_string(cfg.decomp_fuzz + 1) + " parameter sets at " +
                 std::to_string(cfg.decomp_steps) + " steps (limit 1e-12)";
    return res;
}

}  // namespace

std::vector<SuiteResult> run_verification(const VerifyConfig& cfg) {
    cfg.params.validate();
    std::vector<SuiteResult> out;
    out.push_back(spot_consistency_suite(cfg));
    out.push_back(mc_forward_rate_suite(cfg));
    out.push_back(martingale_additive_suite(cfg));
    out.push_back(martingale_mult_suite(cfg));
    out.push_back(decomposition_suite(cfg));
    return out;
}

}  // namespace amdrift
