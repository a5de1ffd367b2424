#include "amdrift/gain.hpp"

#include <cmath>
#include <stdexcept>

namespace amdrift {

void MarketParams::validate() const {
    if (!std::isfinite(r) || !std::isfinite(delta) || !std::isfinite(b) ||
        !std::isfinite(s0) || !std::isfinite(K) || !std::isfinite(T)) {
        throw std::invalid_argument("MarketParams: all fields must be finite");
    }
    if (s0 <= 0.0) throw std::invalid_argument("MarketParams: spot must be positive");
    if (K <= 0.0) throw std::invalid_argument("MarketParams: strike must be positive");
    if (b < 0.0) throw std::invalid_argument("MarketParams: volatility must be non-negative");
    if (T < 0.0) throw std::invalid_argument("MarketParams: maturity must be non-negative");
}

GainProcess put_gain(const MarketParams& p) {
    p.validate();
    const double K = p.K;
    const double carry = p.carry();
    const double b = p.b;
    GainProcess g;
    g.mode = GainMode::additive;
    g.payoff = [K](double s) { return s < K ? K - s : 0.0; };
    g.mu = [K, carry](double, double s) { return s < K ? -carry * s : 0.0; };
    g.sigma = [K, b](double, double s) { return s < K ? -b * s : 0.0; };
    return g;
}

GainProcess power_gain(double a, const MarketParams& p) {
    p.validate();
    if (!(a > 0.0)) throw std::invalid_argument("power_gain: exponent must be positive");
    const double mu = a * p.carry() + 0.5 * a * (a - 1.0) * p.b * p.b;
    const double sigma = a * p.b;
    GainProcess g;
    g.mode = GainMode::multiplicative;
    g.payoff = [a](double s) { return std::pow(s, a); };
    g.mu = [mu](double, double) { return mu; };
    g.sigma = [sigma](double, double) { return sigma; };
    return g;
}

PathSet gain_paths(const GainProcess& g, const PathSet& underlying) {
    if (!g.payoff) throw std::invalid_argument("gain_paths: payoff is not set");
    PathSet out = underlying;
    for (double& v : out.values) v = g.payoff(v);
    return out;
}

}  // namespace amdrift
