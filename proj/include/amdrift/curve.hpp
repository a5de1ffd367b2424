#pragma once

#include <functional>
#include <vector>

namespace amdrift {

/// Term structure of forward exercise rates observed at a fixed valuation
/// time. Nodes span [t, horizon]; between nodes the curve is linear, and
/// integrals are computed exactly for that interpolant.
class ForwardCurve {
public:
    ForwardCurve() = default;
    ForwardCurve(double t, std::vector<double> maturities, std::vector<double> rates);

    /// Flat curve at `level` on [t, horizon] with `n_nodes` nodes.
    static ForwardCurve flat(double t, double horizon, double level, int n_nodes = 200);

    /// Samples `rate(u)` at `n_nodes` equally spaced maturities on
    /// [t, horizon].
    static ForwardCurve sample(double t, double horizon,
                               const std::function<double(double)>& rate,
                               int n_nodes = 200);

    void validate() const;

    double t() const { return t_; }
    double horizon() const { return maturities_.back(); }
    const std::vector<double>& maturities() const { return maturities_; }
    const std::vector<double>& rates() const { return rates_; }

    /// Interpolated rate at maturity u; u is clamped to [t, horizon].
    double value(double u) const;

    /// Exact integral of the interpolant over [a, b] within [t, horizon].
    double integral(double a, double b) const;

    /// Integral over the full span [t, horizon].
    double total_integral() const { return integral(t_, horizon()); }

private:
    double t_ = 0.0;
    std::vector<double> maturities_;
    std::vector<double> rates_;
};

}  // namespace amdrift
