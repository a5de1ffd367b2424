#pragma once

#include "amdrift/gain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace amdrift {

struct VerifyConfig {
    MarketParams params{0.05, 0.0, 0.2, 100.0, 100.0, 1.0};
    double exponent = 2.0;   // power payoff for the multiplicative suites
    double beta = 0.1;       // forward-rate volatility for the martingale suites
    long n_paths = 100000;
    std::uint64_t seed = 20240901;
    int decomp_steps = 10;
    int decomp_fuzz = 20;
    double quad_tol = 1e-9;
    bool negative_control = false;  // doubles the drifts; the martingale suites must then fail
    int n_threads = 0;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;  // measured residuals / statistics
};

/// Runs the identity suites end to end: spot consistency (both models),
/// Monte Carlo vs closed-form forward rate, discounted-value martingale
/// drift (both models), and the exhaustive discrete decomposition.
std::vector<SuiteResult> run_verification(const VerifyConfig& cfg);

}  // namespace amdrift
