#include "amdrift/numerics.hpp"
#include "amdrift/rng.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace amdrift {

void TimeGrid::validate() const {
    if (!std::isfinite(t_start) || !std::isfinite(t_end))
        throw std::invalid_argument("TimeGrid: endpoints must be finite");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be positive");
    if (t_end < t_start) throw std::invalid_argument("TimeGrid: t_end < t_start");
}

double norm_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("norm_cdf: non-finite argument");
    // Phi(x) = erfc(-x / sqrt(2)) / 2; erfc avoids cancellation in the tails.
    return 0.5 * std::erfc(-x * 0.7071067811865476);
}

namespace {

double simpson(double fa, double fm, double fb, double h6) { return h6 * (fa + 4.0 * fm + fb); }

struct AdaptiveState {
    const std::function<double(double)>& f;
    int max_depth;
    // Error-estimate total of cells cut off at max_depth. Endpoint
    // singularities (sqrt-type kinks) can never meet the halved local
    // budget, yet their unresolved remainder is negligible; the integral is
    // accepted as long as this total stays within the requested tolerance.
    double capped_residual = 0.0;

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double h12 = (b - a) / 12.0;
        const double left = simpson(fa, flm, fm, h12);
        const double right = simpson(fm, frm, fb, h12);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        if (depth >= max_depth) {
            capped_residual += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
    if (a == b) return 0.0;

    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, (b - a) / 6.0);

    AdaptiveState state{f, max_depth};
    const double result = state.recurse(a, b, fa, fm, fb, whole, tol, 0);
    if (state.capped_residual > tol)
        throw QuadratureError("integrate: subdivision limit exceeded without convergence", result);
    return result;
}

std::optional<double> find_root(const std::function<double(double)>& g, double lo, double hi,
                                double tol) {
    if (!(lo < hi)) throw std::invalid_argument("find_root: requires lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");

    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0)) return std::nullopt;

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::optional<double> find_first_zero(const std::function<double(double)>& g, double lo, double hi,
                                      double root_tol, int scan_nodes, double zero_tol) {
    if (!(lo < hi)) throw std::invalid_argument("find_first_zero: requires lo < hi");
    if (scan_nodes < 1) throw std::invalid_argument("find_first_zero: scan_nodes must be positive");
    if (zero_tol < 0.0) throw std::invalid_argument("find_first_zero: zero_tol must be non-negative");

    const double h = (hi - lo) / scan_nodes;
    double x_prev = lo;
    double g_prev = g(lo);
    if (std::abs(g_prev) <= zero_tol) return lo;
    for (int i = 1; i <= scan_nodes; ++i) {
        const double x = (i == scan_nodes) ? hi : lo + h * i;
        const double gx = g(x);
        if (std::abs(gx) <= zero_tol) return x;
        if ((g_prev > 0.0) != (gx > 0.0)) return find_root(g, x_prev, x, root_tol);
        x_prev = x;
        g_prev = gx;
    }
    return std::nullopt;
}

double NormalStream::next() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    const auto words = gen_(block_++);
    const std::uint64_t a = (std::uint64_t{words[0]} << 32) | words[1];
    const std::uint64_t b = (std::uint64_t{words[2]} << 32) | words[3];
    // 53-bit uniforms; 1-u keeps the log argument in (0, 1].
    const double u1 = 1.0 - static_cast<double>(a >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
}

namespace {
std::atomic<int> g_default_threads{0};
}

int default_threads() {
    const int configured = g_default_threads.load();
    if (configured > 0) return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_threads(int n) { g_default_threads.store(n); }

void parallel_for(long n, int n_threads, const std::function<void(long, long)>& block) {
    if (n <= 0) return;
    int workers = n_threads > 0 ? n_threads : default_threads();
    if (workers > n) workers = static_cast<int>(n);
    if (workers <= 1) {
        block(0, n);
        return;
    }
    const long chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const long begin = w * chunk;
        const long end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&block, begin, end] { block(begin, end); });
    }
    for (auto& th : pool) th.join();
}

MeanStdErr mean_std_error(const std::vector<double>& sample) {
    const auto n = static_cast<double>(sample.size());
    if (sample.empty()) return {};

    double sum = 0.0, comp = 0.0;
    for (double x : sample) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / n;

    if (sample.size() < 2) return {mean, 0.0};
    double ss = 0.0, comp2 = 0.0;
    for (double x : sample) {
        const double d = x - mean;
        const double y = d * d - comp2;
        const double t = ss + y;
        comp2 = (t - ss) - y;
        ss = t;
    }
    const double var = ss / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

PathSet simulate_gbm(double s0, double drift, double vol, const TimeGrid& grid, long n_paths,
                     std::uint64_t seed, int n_threads) {
    grid.validate();
    if (!(s0 > 0.0)) throw std::invalid_argument("simulate_gbm: s0 must be positive");
    if (vol < 0.0) throw std::invalid_argument("simulate_gbm: vol must be non-negative");
    if (n_paths < 1) throw std::invalid_argument("simulate_gbm: n_paths must be positive");

    PathSet out;
    out.grid = grid;
    out.n_paths = n_paths;
    out.seed = seed;
    out.values.resize(static_cast<std::size_t>(n_paths) * grid.nodes());

    const double dt = grid.step();
    const double mu_dt = (drift - 0.5 * vol * vol) * dt;
    const double vol_sqdt = vol * std::sqrt(dt);
    const int steps = grid.n_steps;

    parallel_for(n_paths, n_threads, [&](long begin, long end) {
        for (long p = begin; p < end; ++p) {
            NormalStream z(seed, static_cast<std::uint64_t>(p));
            double s = s0;
            out.at(p, 0) = s;
            for (int k = 0; k < steps; ++k) {
                s *= std::exp(mu_dt + vol_sqdt * z.next());
                out.at(p, k + 1) = s;
            }
        }
    });
    return out;
}

}  // namespace amdrift
