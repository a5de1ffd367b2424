// amdrift: American option pricing through forward exercise-rate curves,
// with classical oracles (binomial tree, Black-Scholes, Monte Carlo) and
// built-in identity verification.
//
// Exit codes: 0 success, 1 verification/accuracy failure, 2 invalid input,
// 3 I/O failure.

#include "amdrift/additive.hpp"
#include "amdrift/multiplicative.hpp"
#include "amdrift/oracles.hpp"
#include "amdrift/report.hpp"
#include "amdrift/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

using amdrift::JsonObject;

struct RunConfig {
    double spot = 100.0;
    double strike = 100.0;
    double rate = 0.05;
    double div_yield = 0.0;
    double vol = 0.2;
    double maturity = 1.0;
    std::string model = "additive";
    double exponent = 1.0;
    double beta = 0.1;
    long paths = 100000;
    std::uint64_t seed = 20240901;
    double quad_tol = 1e-9;
    std::string output;
    std::string format;
    int threads = 0;
    int nodes = 200;
    int decomp_steps = 10;
    bool negative_control = false;
    bool gamma_theta = false;

    amdrift::MarketParams market() const {
        amdrift::MarketParams p;
        p.r = rate;
        p.delta = div_yield;
        p.b = vol;
        p.s0 = spot;
        p.K = strike;
        p.T = maturity;
        p.validate();
        return p;
    }
};

struct SubOptions {
    CLI::App* cmd = nullptr;
    std::map<std::string, CLI::Option*> by_key;
};

// Every subcommand shares one value struct; only the parsed subcommand
// writes, and provided flags later override the config file.
SubOptions register_common(CLI::App* sub, RunConfig& v, std::string& config_path) {
    SubOptions so;
    so.cmd = sub;
    sub->add_option("--config", config_path, "JSON config file; explicit flags win");
    so.by_key["spot"] = sub->add_option("--spot", v.spot, "Spot price");
    so.by_key["strike"] = sub->add_option("--strike", v.strike, "Strike price");
    so.by_key["rate"] = sub->add_option("--rate", v.rate, "Risk-free rate per year");
    so.by_key["div_yield"] = sub->add_option("--div-yield", v.div_yield, "Dividend yield per year");
    so.by_key["vol"] = sub->add_option("--vol", v.vol, "Volatility per sqrt(year)");
    so.by_key["maturity"] = sub->add_option("--maturity", v.maturity, "Maturity in years");
    so.by_key["model"] =
        sub->add_option("--model", v.model, "additive | multiplicative")
            ->check(CLI::IsMember({"additive", "multiplicative"}));
    so.by_key["exponent"] = sub->add_option("--exponent", v.exponent, "Power payoff exponent");
    so.by_key["beta"] = sub->add_option("--beta", v.beta, "Forward-rate volatility");
    so.by_key["paths"] = sub->add_option("--paths", v.paths, "Monte Carlo path count");
    so.by_key["seed"] = sub->add_option("--seed", v.seed, "RNG seed");
    so.by_key["quad_tol"] = sub->add_option("--quad-tol", v.quad_tol, "Quadrature tolerance");
    so.by_key["output"] = sub->add_option("--output", v.output, "Output file (default stdout)");
    so.by_key["format"] = sub->add_option("--format", v.format, "csv | json")
                              ->check(CLI::IsMember({"csv", "json"}));
    so.by_key["threads"] =
        sub->add_option("--threads", v.threads, "Worker threads (0 = all cores)");
    so.by_key["nodes"] = sub->add_option("--nodes", v.nodes, "Curve grid nodes");
    return so;
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot read " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    for (const auto& [key, val] : j.items()) {
        if (key == "spot") cfg.spot = val.get<double>();
        else if (key == "strike") cfg.strike = val.get<double>();
        else if (key == "rate") cfg.rate = val.get<double>();
        else if (key == "div_yield") cfg.div_yield = val.get<double>();
        else if (key == "vol") cfg.vol = val.get<double>();
        else if (key == "maturity") cfg.maturity = val.get<double>();
        else if (key == "model") cfg.model = val.get<std::string>();
        else if (key == "exponent") cfg.exponent = val.get<double>();
        else if (key == "beta") cfg.beta = val.get<double>();
        else if (key == "paths") cfg.paths = val.get<long>();
        else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
        else if (key == "quad_tol") cfg.quad_tol = val.get<double>();
        else if (key == "output") cfg.output = val.get<std::string>();
        else if (key == "format") cfg.format = val.get<std::string>();
        else if (key == "threads") cfg.threads = val.get<int>();
        else if (key == "nodes") cfg.nodes = val.get<int>();
        else if (key == "decomp_steps") cfg.decomp_steps = val.get<int>();
        else if (key == "negative_control") cfg.negative_control = val.get<bool>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (cfg.model != "additive" && cfg.model != "multiplicative") {
        throw std::invalid_argument("config: model must be additive or multiplicative");
    }
    if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json") {
        throw std::invalid_argument("config: format must be csv or json");
    }
}

void require_format(const RunConfig& cfg, const std::string& natural) {
    if (!cfg.format.empty() && cfg.format != natural) {
        throw std::invalid_argument("this command emits " + natural + " only");
    }
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.output.empty()) {
        std::cout << content;
        return;
    }
    amdrift::write_file_atomic(cfg.output, content);
}

std::string params_echo_json(const RunConfig& cfg) {
    JsonObject p;
    p.add("spot", cfg.spot);
    p.add("strike", cfg.strike);
    p.add("rate", cfg.rate);
    p.add("div_yield", cfg.div_yield);
    p.add("vol", cfg.vol);
    p.add("maturity", cfg.maturity);
    if (cfg.model == "multiplicative") {
        p.add("exponent", cfg.exponent);
        p.add("beta", cfg.beta);
    }
    return p.str();
}

/// Default multiplicative forward curve: flat at the spot-consistency level
/// r - mu, so the short-horizon value reproduces the gain drift. For
/// exponent 1 (the gain is the stock) the level is zero and the price equals
/// the spot.
amdrift::ForwardCurve default_mult_curve(const RunConfig& cfg, const amdrift::MarketParams& p) {
    const amdrift::GainProcess g = amdrift::power_gain(cfg.exponent, p);
    const double level = p.r - g.mu(0.0, p.s0);
    return amdrift::ForwardCurve::flat(0.0, p.T, level, cfg.nodes);
}

int cmd_price(const RunConfig& cfg) {
    require_format(cfg, "json");
    const amdrift::MarketParams p = cfg.market();
    JsonObject out;
    out.add("model", cfg.model);
    if (cfg.model == "additive") {
        const amdrift::ValuationResult res =
            amdrift::value_put_additive(0.0, p.s0, p, cfg.quad_tol, cfg.nodes);
        out.add("price", res.price);
        out.add("intrinsic", res.intrinsic);
        out.add("critical_time", res.critical_time);
        out.add("below_intrinsic", res.below_intrinsic);
    } else {
        const amdrift::ForwardCurve curve = default_mult_curve(cfg, p);
        const double gain = std::pow(p.s0, cfg.exponent);
        const double price = amdrift::value_multiplicative(gain, curve);
        out.add("price", price);
        out.add("intrinsic", gain);
        out.add("critical_time", amdrift::critical_time_mult(curve, 0.0, p.T));
        out.add("below_intrinsic", price < gain);
    }
    out.add_raw("params", params_echo_json(cfg));
    emit(cfg, out.str() + "\n");
    return 0;
}

int cmd_curve(const RunConfig& cfg) {
    require_format(cfg, "csv");
    const amdrift::MarketParams p = cfg.market();
    std::string csv;
    if (cfg.model == "additive") {
        const amdrift::ForwardCurve curve = amdrift::ForwardCurve::sample(
            0.0, p.T, [&](double u) { return amdrift::put_forward_rate(0.0, u, p.s0, p); },
            cfg.nodes);
        csv = amdrift::curve_csv(curve);
    } else if (cfg.gamma_theta) {
        const auto dyn = amdrift::gaussian_power_dynamics(cfg.exponent, p, cfg.beta);
        // nodes counts samples, the CSV helper counts intervals.
        csv = amdrift::gamma_theta_csv(dyn.gt, 0.0, cfg.nodes - 1);
    } else {
        csv = amdrift::curve_csv(default_mult_curve(cfg, p));
    }
    emit(cfg, csv);
    return 0;
}

int cmd_critical_time(const RunConfig& cfg) {
    require_format(cfg, "json");
    const amdrift::MarketParams p = cfg.market();
    double tc;
    if (cfg.model == "additive") {
        tc = amdrift::critical_time(0.0, p.s0, p, 1e-8, cfg.quad_tol);
    } else {
        tc = amdrift::critical_time_mult(default_mult_curve(cfg, p), 0.0, p.T);
    }
    JsonObject out;
    out.add("model", cfg.model);
    out.add("critical_time", tc);
    out.add("maturity", p.T);
    emit(cfg, out.str() + "\n");
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    if (cfg.decomp_steps < 1 || cfg.decomp_steps > 12) {
        throw std::invalid_argument("decomposition steps must lie in [1, 12]");
    }
    amdrift::VerifyConfig v;
    v.params = cfg.market();
    v.exponent = cfg.exponent;
    v.beta = cfg.beta;
    v.n_paths = cfg.paths;
    v.seed = cfg.seed;
    v.decomp_steps = cfg.decomp_steps;
    v.quad_tol = cfg.quad_tol;
    v.negative_control = cfg.negative_control;
    v.n_threads = cfg.threads;

    bool all_passed = true;
    for (const amdrift::SuiteResult& s : amdrift::run_verification(v)) {
        std::cout << (s.passed ? "[PASS] " : "[FAIL] ") << s.name << ": " << s.detail << "\n";
        all_passed = all_passed && s.passed;
    }
    return all_passed ? 0 : 1;
}

int cmd_compare(const RunConfig& cfg) {
    require_format(cfg, "csv");
    const amdrift::MarketParams p = cfg.market();
    std::vector<double> spots;
    for (double m : {0.6, 0.8, 1.0, 1.2, 1.4}) spots.push_back(m * p.K);
    const amdrift::ValuationReport rep =
        amdrift::comparison_report(p, spots, 5000, cfg.quad_tol);
    emit(cfg, amdrift::comparison_csv(rep));
    return 0;
}

int fail(int code, const std::string& message) {
    JsonObject err;
    err.add("error", message);
    err.add("code", static_cast<double>(code));
    std::cerr << err.str() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"American option pricing via forward exercise-rate curves"};
    app.require_subcommand(1);

    RunConfig values;
    std::string config_path;

    CLI::App* price = app.add_subcommand("price", "Price the option under the chosen model");
    CLI::App* curve = app.add_subcommand("curve", "Export the forward exercise-rate curve as CSV");
    CLI::App* critical = app.add_subcommand("critical-time", "Solve the exercise criterion");
    CLI::App* verify = app.add_subcommand("verify", "Run the identity verification suites");
    CLI::App* compare = app.add_subcommand("compare", "Model vs classical oracle price table");

    std::map<CLI::App*, SubOptions> options;
    for (CLI::App* sub : {price, curve, critical, verify, compare}) {
        options.emplace(sub, register_common(sub, values, config_path));
    }
    curve->add_flag("--gamma-theta", values.gamma_theta,
                    "Export value-evolution coefficients instead (multiplicative)");
    verify->add_option("--decomp-steps", values.decomp_steps,
                       "Tree depth for the exhaustive decomposition check (max 12)");
    verify->add_flag("--negative-control", values.negative_control,
                     "Double the no-arbitrage drifts; martingale suites must fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, std::string("argument error: ") + e.what());
    }

    CLI::App* active = app.get_subcommands().front();

    try {
        RunConfig cfg;  // defaults, then config file, then explicit flags
        if (!config_path.empty()) apply_config_file(config_path, cfg);
        const SubOptions& so = options.at(active);
        for (const auto& [key, opt] : so.by_key) {
            if (opt->count() == 0) continue;
            if (key == "spot") cfg.spot = values.spot;
            else if (key == "strike") cfg.strike = values.strike;
            else if (key == "rate") cfg.rate = values.rate;
            else if (key == "div_yield") cfg.div_yield = values.div_yield;
            else if (key == "vol") cfg.vol = values.vol;
            else if (key == "maturity") cfg.maturity = values.maturity;
            else if (key == "model") cfg.model = values.model;
            else if (key == "exponent") cfg.exponent = values.exponent;
            else if (key == "beta") cfg.beta = values.beta;
            else if (key == "paths") cfg.paths = values.paths;
            else if (key == "seed") cfg.seed = values.seed;
            else if (key == "quad_tol") cfg.quad_tol = values.quad_tol;
            else if (key == "output") cfg.output = values.output;
            else if (key == "format") cfg.format = values.format;
            else if (key == "threads") cfg.threads = values.threads;
            else if (key == "nodes") cfg.nodes = values.nodes;
        }
        if (active == curve && curve->count("--gamma-theta") > 0) {
            cfg.gamma_theta = values.gamma_theta;
        }
        if (active == verify) {
            if (verify->count("--decomp-steps") > 0) cfg.decomp_steps = values.decomp_steps;
            if (verify->count("--negative-control") > 0) {
                cfg.negative_control = values.negative_control;
            }
        }

        if (cfg.paths < 100) throw std::invalid_argument("paths must be at least 100");
        if (cfg.nodes < 2) throw std::invalid_argument("nodes must be at least 2");
        if (!(cfg.quad_tol > 0.0)) throw std::invalid_argument("quad-tol must be positive");
        if (cfg.threads < 0) throw std::invalid_argument("threads must be non-negative");
        if (cfg.threads > 0) amdrift::set_default_threads(cfg.threads);

        if (active == price) return cmd_price(cfg);
        if (active == curve) return cmd_curve(cfg);
        if (active == critical) return cmd_critical_time(cfg);
        if (active == verify) return cmd_verify(cfg);
        return cmd_compare(cfg);
    } catch (const nlohmann::json::exception& e) {
        return fail(2, std::string("config error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        return fail(2, e.what());
    } catch (const std::domain_error& e) {
        return fail(2, e.what());
    } catch (const amdrift::QuadratureError& e) {
        return fail(1, std::string("accuracy failure: ") + e.what());
    } catch (const std::runtime_error& e) {
        return fail(3, std::string("i/o failure: ") + e.what());
    }
}
