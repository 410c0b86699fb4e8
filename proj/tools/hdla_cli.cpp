// Command-line interface: simulate | verify <suite> | calc <quantity> | sweep.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdla/harness.hpp"
#include "hdla/observables.hpp"

namespace {

using namespace hdla;

std::vector<int> parse_grid(const std::string& spec) {
    // "a:b:step" inclusive grid
    std::vector<int> out;
    int a = 0, b = 0, step = 0;
    if (std::sscanf(spec.c_str(), "%d:%d:%d", &a, &b, &step) != 3 || step <= 0 || a > b)
        throw CLI::ValidationError("--n-grid expects a:b:step with step > 0");
    for (int n = a; n <= b; n += step) out.push_back(n);
    return out;
}

std::vector<std::uint64_t> parse_checkpoints(const std::string& spec) {
    std::vector<std::uint64_t> out;
    if (spec.rfind("pow2:", 0) == 0) {
        const auto sep = spec.find(':', 5);
        if (sep == std::string::npos)
            throw CLI::ValidationError("--checkpoints pow2 form is pow2:BASE:COUNT");
        const std::uint64_t base = std::stoull(spec.substr(5, sep - 5));
        const std::uint64_t count = std::stoull(spec.substr(sep + 1));
        if (base == 0) throw CLI::ValidationError("--checkpoints pow2 base must be positive");
        std::uint64_t t = base;
        for (std::uint64_t i = 0; i < count; ++i, t *= 2) out.push_back(t);
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

void emit_rows(const std::vector<harness::ReportRow>& rows, const std::string& out_path,
               const std::string& format) {
    if (out_path.empty()) return;
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output path: " + out_path);
    if (format == "json")
        harness::write_json(os, rows);
    else
        harness::write_csv(os, rows);
}

int finish(const harness::SuiteResult& res, const std::string& out_path,
           const std::string& format) {
    emit_rows(res.rows, out_path, format);
    for (const auto& f : res.failures) std::cout << "ASSERTION FAILED: " << f << "\n";
    std::cout << (res.passed() ? "all assertions passed" : "assertions failed") << " ("
              << res.rows.size() << " report rows)\n";
    return res.passed() ? 0 : 1;
}

void print_scalar(const std::string& name, const LogScalar& v) {
    if (v.is_zero()) {
        std::cout << name << " = 0\n";
        return;
    }
    std::cout << name << ": log = " << harness::format_value(v.log_value())
              << ", value = " << harness::format_value(v.value()) << "\n";
}

int run_calc(const std::string& quantity, std::int64_t n, std::int64_t k, int j, double t,
             double log_t, std::int64_t ell, std::int64_t x, double eps, double a,
             bool use_exponent, double cN, double cE, double cC, double cT) {
    using namespace hdla::theory;
    auto ctx = [&] {
        return use_exponent ? TheoryContext::from_exponent(n, a) : TheoryContext::from_eps(n, eps);
    };
    const LogScalar t_arg = std::isnan(log_t) ? LogScalar::from_value(t)
                                              : LogScalar::from_log(log_t);
    if (quantity == "tau") {
        const auto r = tau_k_eps(n, k, eps);
        std::cout << "tau_k_eps = " << harness::format_value(r.tau)
                  << "\nomega_k_eps = " << harness::format_value(r.omega) << "\n";
    } else if (quantity == "eta") {
        print_scalar("eta_exact", eta(n, ell, j, EtaMode::exact));
        try {
            print_scalar("eta_asymptotic", eta(n, ell, j, EtaMode::asymptotic));
        } catch (const std::exception& e) {
            std::cout << "eta_asymptotic: " << e.what() << "\n";
        }
    } else if (quantity == "zeta") {
        print_scalar("zeta", zeta(j, ctx()));
    } else if (quantity == "xi") {
        print_scalar("xi", xi(j, t_arg, ctx()));
    } else if (quantity == "mu0") {
        const auto c = ctx();
        print_scalar("mu0", c.mu0);
        if (c.mu1)
            print_scalar("mu1", *c.mu1);
        else
            std::cout << "mu1 <= 0 at this n\n";
    } else if (quantity == "j0") {
        const auto c = ctx();
        std::cout << "ell = " << c.ell << "\nk = " << c.k << "\nomega = "
                  << harness::format_value(c.omega) << "\nj0 = " << c.j0
                  << "\ntheta0 = " << harness::format_value(c.theta0) << "\n";
    } else if (quantity == "notall-bound") {
        std::cout << "notall_bound = " << harness::format_value(notall_bound(n, k)) << "\n";
    } else if (quantity == "conc-bound") {
        std::cout << "conc_bound = " << harness::format_value(conc_bound(cN, cE, cC, cT))
                  << "\nhoeffding_bound = " << harness::format_value(hoeffding_bound(cN, cC, cT))
                  << "\n";
    } else {
        throw CLI::ValidationError("unknown quantity: " + quantity);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffusion-limited aggregation on the Boolean lattice: simulator, "
                 "verification suites and closed-form calculator"};
    app.require_subcommand(1);

    int n = 20;
    std::string n_grid_spec;
    std::uint64_t trials = 100;
    std::uint64_t seed = harness::kPilotSeed;
    double eps = 0.01;
    double a_exponent = 0.45;
    std::string out_path, format = "csv", checkpoints_spec;
    int parallel = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--n", n, "dimension of the Boolean lattice");
        cmd->add_option("--n-grid", n_grid_spec, "inclusive grid a:b:step");
        cmd->add_option("--trials", trials, "independent trials");
        cmd->add_option("--seed", seed, "64-bit master seed")->envname("HDLA_SEED");
        cmd->add_option("--eps", eps, "density parameter of the reference times");
        cmd->add_option("--a", a_exponent, "path-length exponent");
        cmd->add_option("--out", out_path, "write report rows to this path");
        cmd->add_option("--format", format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--parallel", parallel, "worker count (0 = auto)");
        cmd->add_option("--checkpoints", checkpoints_spec,
                        "comma list or pow2:BASE:COUNT (relative times)");
    };

    auto* simulate = app.add_subcommand("simulate", "run trials to termination and summarize");
    add_common(simulate);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    verify->add_option("suite", suite, "fullness|notall|path|height|tend|xbound|identities|conc|rec1")
        ->required();
    add_common(verify);

    auto* calc = app.add_subcommand("calc", "evaluate a closed-form quantity");
    std::string quantity;
    calc->add_option("quantity", quantity, "tau|eta|zeta|xi|mu0|j0|notall-bound|conc-bound")
        ->required();
    std::int64_t calc_n = 10000, calc_k = 2, calc_ell = 50, calc_x = 0;
    int calc_j = 0;
    double calc_t = 0;
    double calc_log_t = std::numeric_limits<double>::quiet_NaN();
    bool use_exponent = false;
    double cN = 100, cE = 0.1, cC = 1.0, cT = 1.0;
    calc->add_option("--n", calc_n, "dimension");
    calc->add_option("--k", calc_k, "level");
    calc->add_option("--j", calc_j, "level offset");
    calc->add_option("--t", calc_t, "time argument");
    calc->add_option("--log-t", calc_log_t, "time argument given as a natural log");
    calc->add_option("--ell", calc_ell, "ell for eta");
    calc->add_option("--x", calc_x, "offset for the superfactorial ratio");
    calc->add_option("--eps", eps, "epsilon for derived exponents");
    calc->add_flag("--use-a", use_exponent, "derive the context from --a instead of --eps");
    calc->add_option("--a", a_exponent, "path-length exponent");
    calc->add_option("--N", cN, "sample count for conc-bound");
    calc->add_option("--E", cE, "mean bound for conc-bound");
    calc->add_option("--C", cC, "range bound for conc-bound");
    calc->add_option("--t-dev", cT, "deviation for conc-bound");

    auto* sweep = app.add_subcommand("sweep", "n-grid scaling studies (tend + path)");
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        harness::ExperimentConfig cfg;
        cfg.trials = trials;
        cfg.master_seed = seed;
        cfg.eps = eps;
        cfg.a_exponent = a_exponent;
        cfg.parallelism = parallel;
        if (!checkpoints_spec.empty()) cfg.checkpoints = parse_checkpoints(checkpoints_spec);
        cfg.n_grid = n_grid_spec.empty() ? std::vector<int>{n} : parse_grid(n_grid_spec);

        if (simulate->parsed()) {
            harness::SuiteResult res;
            for (int dim : cfg.n_grid) {
                std::vector<TrialRecord> records(cfg.trials);
                std::vector<double> lengths(cfg.trials);
                harness::parallel_trials(cfg.trials, cfg.master_seed, cfg.parallelism,
                                         [&](std::uint64_t i, Xoshiro256& rng) {
                                             ClusterState c(dim);
                                             RunSpec spec;
                                             spec.stop = StopRule::until_termination();
                                             records[i] = run(c, rng, spec);
                                             lengths[i] = obs::isolated_path_length(c);
                                         });
                double t_sum = 0, p_sum = 0;
                for (std::uint64_t i = 0; i < cfg.trials; ++i) {
                    const double te = static_cast<double>(*records[i].t_end);
                    res.rows.push_back({"simulate", dim, "trial/" + std::to_string(i), "t_end",
                                        te, std::nullopt, std::nullopt, std::nullopt});
                    res.rows.push_back({"simulate", dim, "trial/" + std::to_string(i),
                                        "isolated_path_length", lengths[i], std::nullopt,
                                        std::nullopt, std::nullopt});
                    t_sum += te;
                    p_sum += lengths[i];
                }
                const double mean_t = t_sum / static_cast<double>(cfg.trials);
                const double mean_p = p_sum / static_cast<double>(cfg.trials);
                res.rows.push_back({"simulate", dim, "aggregate", "mean_t_end", mean_t,
                                    std::nullopt, cfg.trials, cfg.master_seed});
                res.rows.push_back({"simulate", dim, "aggregate", "mean_isolated_path_length",
                                    mean_p, std::nullopt, cfg.trials, cfg.master_seed});
                std::cout << "n=" << dim << " trials=" << cfg.trials
                          << " mean T_end=" << harness::format_value(mean_t)
                          << " mean T_end/2^n="
                          << harness::format_value(mean_t / std::pow(2.0, dim))
                          << " mean isolated path=" << harness::format_value(mean_p) << "\n";
            }
            return finish(res, out_path, format);
        }
        if (verify->parsed()) return finish(harness::run_suite(suite, cfg), out_path, format);
        if (sweep->parsed()) {
            auto res = harness::tend_scaling(cfg);
            const auto paths = harness::path_suite(cfg);
            res.rows.insert(res.rows.end(), paths.rows.begin(), paths.rows.end());
            res.failures.insert(res.failures.end(), paths.failures.begin(), paths.failures.end());
            return finish(res, out_path, format);
        }
        if (calc->parsed())
            return run_calc(quantity, calc_n, calc_k, calc_j, calc_t, calc_log_t, calc_ell,
                            calc_x, eps, a_exponent, use_exponent, cN, cE, cC, cT);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
