#include "amdrift/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace amdrift {

ForwardCurve::ForwardCurve(double t, std::vector<double> maturities, std::vector<double> rates)
    : t_(t), maturities_(std::move(maturities)), rates_(std::move(rates)) {
    validate();
}

ForwardCurve ForwardCurve::flat(double t, double horizon, double level, int n_nodes) {
    return sample(t, horizon, [level](double) { return level; }, n_nodes);
}

ForwardCurve ForwardCurve::sample(double t, double horizon,
                                  const std::function<double(double)>& rate, int n_nodes) {
    if (!rate) throw std::invalid_argument("ForwardCurve::sample: rate function is not set");
    if (n_nodes < 2) throw std::invalid_argument("ForwardCurve::sample: need at least 2 nodes");
    if (!(horizon > t)) throw std::invalid_argument("ForwardCurve::sample: horizon must exceed t");
    std::vector<double> us(static_cast<std::size_t>(n_nodes));
    std::vector<double> fs(static_cast<std::size_t>(n_nodes));
    const double h = (horizon - t) / (n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i) {
        // Pin the endpoints so horizon() is exact.
        double u = (i == n_nodes - 1) ? horizon : t + h * i;
        us[static_cast<std::size_t>(i)] = u;
        fs[static_cast<std::size_t>(i)] = rate(u);
    }
    return ForwardCurve(t, std::move(us), std::move(fs));
}

void ForwardCurve::validate() const {
    if (maturities_.size() < 2) {
        throw std::invalid_argument("ForwardCurve: need at least 2 nodes");
    }
    if (maturities_.size() != rates_.size()) {
        throw std::invalid_argument("ForwardCurve: maturities and rates differ in length");
    }
    if (!std::isfinite(t_)) throw std::invalid_argument("ForwardCurve: t must be finite");
    if (maturities_.front() != t_) {
        throw std::invalid_argument("ForwardCurve: first node must sit at t");
    }
    for (std::size_t i = 0; i < maturities_.size(); ++i) {
        if (!std::isfinite(maturities_[i]) || !std::isfinite(rates_[i])) {
            throw std::invalid_argument("ForwardCurve: nodes must be finite");
        }
        if (i > 0 && !(maturities_[i] > maturities_[i - 1])) {
            throw std::invalid_argument("ForwardCurve: maturities must be strictly increasing");
        }
    }
}

double ForwardCurve::value(double u) const {
    if (!std::isfinite(u)) throw std::invalid_argument("ForwardCurve::value: u must be finite");
    if (u <= maturities_.front()) return rates_.front();
    if (u >= maturities_.back()) return rates_.back();
    auto it = std::upper_bound(maturities_.begin(), maturities_.end(), u);
    const std::size_t hi = static_cast<std::size_t>(it - maturities_.begin());
    const std::size_t lo = hi - 1;
    const double w = (u - maturities_[lo]) / (maturities_[hi] - maturities_[lo]);
    return rates_[lo] + w * (rates_[hi] - rates_[lo]);
}

double ForwardCurve::integral(double a, double b) const {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("ForwardCurve::integral: bounds must be finite");
    }
    if (a > b) return -integral(b, a);
    const double lo_clamp = maturities_.front();
    const double hi_clamp = maturities_.back();
    a = std::clamp(a, lo_clamp, hi_clamp);
    b = std::clamp(b, lo_clamp, hi_clamp);
    if (a == b) return 0.0;
    // Trapezoid over each segment piece; exact because the interpolant is
    // linear between nodes.
    double acc = 0.0;
    double left = a;
    auto it = std::upper_bound(maturities_.begin(), maturities_.end(), a);
    std::size_t hi = static_cast<std::size_t>(it - maturities_.begin());
    if (hi == 0) hi = 1;
    while (left < b) {
        const double seg_end = (hi < maturities_.size()) ? maturities_[hi] : hi_clamp;
        const double right = std::min(seg_end, b);
        acc += 0.5 * (value(left) + value(right)) * (right - left);
        left = right;
        ++hi;
    }
    return acc;
}

}  // namespace amdrift
