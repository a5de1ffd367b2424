#include "amdrift/oracles.hpp"

#include "amdrift/additive.hpp"
#include "amdrift/numerics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amdrift {

namespace {

struct CrrLattice {
    double dt, up, down, prob, disc;
    int steps;
};

CrrLattice build_lattice(const MarketParams& params, int steps) {
    params.validate();
    if (steps < 1) throw std::invalid_argument("crr: steps must be positive");
    if (!(params.T > 0.0)) throw std::invalid_argument("crr: maturity must be positive");
    CrrLattice lat;
    lat.steps = steps;
    lat.dt = params.T / steps;
    lat.up = std::exp(params.b * std::sqrt(lat.dt));
    lat.down = 1.0 / lat.up;
    lat.prob = (std::exp(params.carry() * lat.dt) - lat.down) / (lat.up - lat.down);
    lat.disc = std::exp(-params.r * lat.dt);
    if (!(lat.prob > 0.0) || !(lat.prob < 1.0)) {
        throw std::domain_error("crr: step probability outside (0, 1); refine steps or raise vol");
    }
    return lat;
}

}  // namespace

CrrResult crr_american_put(const MarketParams& params, int steps) {
    const CrrLattice lat = build_lattice(params, steps);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    // Spot at (k, j) = s0 * up^j * down^(k-j) = s0 * up^(2j-k).
    std::vector<double> up_pow(static_cast<std::size_t>(2 * steps + 1));
    for (int i = 0; i <= 2 * steps; ++i) {
        up_pow[static_cast<std::size_t>(i)] = params.s0 * std::pow(lat.up, i - steps);
    }
    const auto spot = [&](int k, int j) { return up_pow[static_cast<std::size_t>(steps + 2 * j - k)]; };

    CrrResult out;
    out.steps = steps;
    out.exercise_boundary.assign(static_cast<std::size_t>(steps + 1), nan);

    std::vector<double> value(static_cast<std::size_t>(steps + 1));
    for (int j = 0; j <= steps; ++j) {
        const double intrinsic = std::max(params.K - spot(steps, j), 0.0);
        value[static_cast<std::size_t>(j)] = intrinsic;
        if (intrinsic > 0.0) out.exercise_boundary[static_cast<std::size_t>(steps)] = spot(steps, j);
    }

    for (int k = steps - 1; k >= 0; --k) {
        for (int j = 0; j <= k; ++j) {
            const double cont = lat.disc * (lat.prob * value[static_cast<std::size_t>(j + 1)] +
                                            (1.0 - lat.prob) * value[static_cast<std::size_t>(j)]);
            const double intrinsic = std::max(params.K - spot(k, j), 0.0);
            if (intrinsic >= cont && intrinsic > 0.0) {
                value[static_cast<std::size_t>(j)] = intrinsic;
                out.exercise_boundary[static_cast<std::size_t>(k)] = spot(k, j);
            } else {
                value[static_cast<std::size_t>(j)] = cont;
            }
        }
    }
    out.price = value[0];
    return out;
}

double bs_european_put(const MarketParams& params, double t) {
    params.validate();
    if (!(t <= params.T)) throw std::invalid_argument("bs_european_put: requires t <= T");
    const double tau = params.T - t;
    const double disc_k = params.K * std::exp(-params.r * tau);
    const double disc_s = params.s0 * std::exp(-params.delta * tau);
    const double width = params.b * std::sqrt(tau);
    if (width == 0.0) {
        // Deterministic limit: exercise is certain or worthless.
        return disc_s >= disc_k ? 0.0 : disc_k - disc_s;
    }
    const double d1 =
        (std::log(params.s0 / params.K) + (params.carry() + 0.5 * params.b * params.b) * tau) /
        width;
    const double d2 = d1 - width;
    return disc_k * norm_cdf(-d2) - disc_s * norm_cdf(-d1);
}

DecompositionReport discrete_decomposition_check(const MarketParams& params, int steps) {
    if (steps < 1) throw std::invalid_argument("decomposition: steps must be positive");
    if (steps > 12) {
        throw std::invalid_argument("decomposition: exhaustive enumeration capped at 12 steps");
    }
    const CrrLattice lat = build_lattice(params, steps);

    // Full value and exercise tables from backward induction; the same
    // tables define both sides of the identity.
    std::vector<std::vector<double>> value(static_cast<std::size_t>(steps + 1));
    std::vector<std::vector<bool>> exercise(static_cast<std::size_t>(steps + 1));
    std::vector<std::vector<double>> gain(static_cast<std::size_t>(steps + 1));
    for (int k = 0; k <= steps; ++k) {
        value[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(k + 1));
        exercise[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(k + 1), false);
        gain[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(k + 1));
        for (int j = 0; j <= k; ++j) {
            const double s = params.s0 * std::pow(lat.up, 2 * j - k);
            gain[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                std::max(params.K - s, 0.0);
        }
    }
    for (int j = 0; j <= steps; ++j) {
        const double g = gain[static_cast<std::size_t>(steps)][static_cast<std::size_t>(j)];
        value[static_cast<std::size_t>(steps)][static_cast<std::size_t>(j)] = g;
        exercise[static_cast<std::size_t>(steps)][static_cast<std::size_t>(j)] = true;
    }
    for (int k = steps - 1; k >= 0; --k) {
        for (int j = 0; j <= k; ++j) {
            const double cont =
                lat.disc *
                (lat.prob * value[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(j + 1)] +
                 (1.0 - lat.prob) * value[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(j)]);
            const double g = gain[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            if (g >= cont && g > 0.0) {
                value[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = g;
                exercise[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = true;
            } else {
                value[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = cont;
            }
        }
    }

    // Per-step discount factors e^{-r k dt}.
    std::vector<double> df(static_cast<std::size_t>(steps + 1));
    for (int k = 0; k <= steps; ++k) df[static_cast<std::size_t>(k)] = std::exp(-params.r * lat.dt * k);
    std::vector<double> p_pow(static_cast<std::size_t>(steps + 1)),
        q_pow(static_cast<std::size_t>(steps + 1));
    p_pow[0] = q_pow[0] = 1.0;
    for (int k = 1; k <= steps; ++k) {
        p_pow[static_cast<std::size_t>(k)] = p_pow[static_cast<std::size_t>(k - 1)] * lat.prob;
        q_pow[static_cast<std::size_t>(k)] = q_pow[static_cast<std::size_t>(k - 1)] * (1.0 - lat.prob);
    }

    // Enumerate every full path under the product measure; the walk stops
    // accumulating increments at the backward-induction stopping time, and
    // summing the full-path probabilities over the free suffix bits yields
    // the cylinder measure of each stopped prefix.
    double expect = 0.0, comp = 0.0;
    const unsigned long n_paths = 1ul << steps;
    for (unsigned long mask = 0; mask < n_paths; ++mask) {
        int ups = 0;
        double increments = 0.0;
        double prev = df[0] * gain[0][0];
        for (int k = 1; k <= steps; ++k) {
            if (exercise[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(ups)]) break;
            ups += static_cast<int>((mask >> (k - 1)) & 1ul);
            const double cur = df[static_cast<std::size_t>(k)] *
                               gain[static_cast<std::size_t>(k)][static_cast<std::size_t>(ups)];
            increments += cur - prev;
            prev = cur;
        }
        const int pop = std::popcount(mask);
        const double prob =
            p_pow[static_cast<std::size_t>(pop)] * q_pow[static_cast<std::size_t>(steps - pop)];
        const double y = prob * increments - comp;
        const double t = expect + y;
        comp = (t - expect) - y;
        expect = t;
    }

    DecompositionReport rep;
    rep.steps = steps;
    rep.lhs = value[0][0];
    rep.rhs = gain[0][0] + expect;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

ValuationReport comparison_report(const MarketParams& params, const std::vector<double>& spots,
                                  int crr_steps, double quad_tol) {
    params.validate();
    if (spots.empty()) throw std::invalid_argument("comparison_report: empty spot grid");

    ValuationReport rep;
    rep.params = params;
    rep.crr_steps = crr_steps;
    rep.rows.reserve(spots.size());
    for (double s : spots) {
        MarketParams at_spot = params;
        at_spot.s0 = s;
        ComparisonRow row;
        row.spot = s;
        row.intrinsic = std::max(params.K - s, 0.0);
        row.bs_put = bs_european_put(at_spot, 0.0);
        row.crr_put = crr_american_put(at_spot, crr_steps).price;
        const ValuationResult add = value_put_additive(0.0, s, at_spot, quad_tol);
        row.additive_put = add.price;
        row.critical_time = add.critical_time;
        row.deviation = row.additive_put - row.crr_put;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace amdrift
