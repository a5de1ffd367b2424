#pragma once

#include "amdrift/curve.hpp"
#include "amdrift/multiplicative.hpp"
#include "amdrift/oracles.hpp"

#include <string>
#include <utility>
#include <vector>

namespace amdrift {

/// Shortest text with 12 significant digits; stable across runs, so golden
/// files byte-compare.
std::string format_number(double x);

/// CSV with header `u,forward_rate` and one row per curve node. \n line
/// endings throughout.
std::string curve_csv(const ForwardCurve& curve);

/// CSV with header `spot,intrinsic,bs_put,crr_put,additive_put,critical_time,deviation`.
std::string comparison_csv(const ValuationReport& report);

/// CSV with header `s,gamma,theta` sampling the coefficients at n+1 uniform
/// points on [t0, gt.maturity].
std::string gamma_theta_csv(const GammaTheta& gt, double t0, int n);

/// Minimal ordered JSON object: keys render in insertion order, numbers via
/// format_number, strings escaped.
class JsonObject {
public:
    void add(const std::string& key, double value);
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, bool value);
    void add_raw(const std::string& key, const std::string& rendered);
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

/// Writes content to path via a temporary file and rename, so failures never
/// leave a partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace amdrift
