#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace amdrift {

/// Uniform time grid over [t_start, t_end], in years.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    int n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double t0, double t1, int n) : t_start(t0), t_end(t1), n_steps(n) { validate(); }

    void validate() const;
    double step() const { return (t_end - t_start) / n_steps; }
    double node(int k) const { return t_start + k * step(); }
    int nodes() const { return n_steps + 1; }
    bool single_point() const { return t_start == t_end; }
};

/// Matrix of simulated state paths on a uniform grid, with seed provenance.
/// Regenerating with the same seed reproduces values bit-exactly.
struct PathSet {
    TimeGrid grid;
    long n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // row-major, n_paths x (n_steps + 1)

    double at(long path, int k) const { return values[static_cast<std::size_t>(path) * grid.nodes() + k]; }
    double& at(long path, int k) { return values[static_cast<std::size_t>(path) * grid.nodes() + k]; }
};

/// Standard normal CDF via the complementary error function.
/// Absolute error below 1e-12 everywhere; throws std::domain_error on non-finite input.
double norm_cdf(double x);

/// Thrown when adaptive quadrature hits its subdivision cap without meeting
/// the requested tolerance. Carries the best estimate obtained so far.
struct QuadratureError : std::runtime_error {
    double best_estimate;
    QuadratureError(const std::string& msg, double best)
        : std::runtime_error(msg), best_estimate(best) {}
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Interval halving with the usual |S2-S1|/15 acceptance test; max_depth caps
/// the recursion (default 40 halvings). Cells cut off at the cap are kept as
/// long as the sum of their error estimates stays within tol, so integrable
/// endpoint kinks (sqrt-type behaviour) do not abort the integral; only a
/// genuinely unresolved remainder raises QuadratureError.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth = 40);

/// Bracketing bisection root finder. Returns a root location with bracket
/// width at most tol if g changes sign on [lo, hi]; std::nullopt otherwise.
std::optional<double> find_root(const std::function<double(double)>& g, double lo, double hi,
                                double tol);

/// Earliest zero of g on [lo, hi]: scans scan_nodes+1 uniform nodes left to
/// right, returns the first node with |g| <= zero_tol, or bisects the first
/// bracket with a strict sign change to width root_tol. std::nullopt when g
/// keeps one strict sign across the whole interval.
std::optional<double> find_first_zero(const std::function<double(double)>& g, double lo,
                                      double hi, double root_tol, int scan_nodes,
                                      double zero_tol);

/// Geometric Brownian motion paths, exact log-Euler stepping:
///   S_{k+1} = S_k * exp((drift - vol^2/2) dt + vol sqrt(dt) Z).
/// One RNG substream per path derived from (seed, path index); output is
/// bit-identical for any thread count.
PathSet simulate_gbm(double s0, double drift, double vol, const TimeGrid& grid, long n_paths,
                     std::uint64_t seed, int n_threads = 0);

/// Worker count used by path-parallel operations when the caller passes 0.
int default_threads();
void set_default_threads(int n);

/// Runs block(begin, end) over a fixed partition of [0, n). The partition
/// depends only on n, never on the thread count, and blocks write disjoint
/// state, so results match single-threaded execution bit for bit.
void parallel_for(long n, int n_threads, const std::function<void(long, long)>& block);

/// Mean and standard error of a sample, accumulated serially (Kahan) so the
/// result is independent of how the sample was produced.
struct MeanStdErr {
    double mean = 0.0;
    double std_error = 0.0;
};
MeanStdErr mean_std_error(const std::vector<double>& sample);

}  // namespace amdrift
