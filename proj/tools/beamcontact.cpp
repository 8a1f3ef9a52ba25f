// Command-line front end: solve | study | certify | oracle.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "beamcontact/config.hpp"
#include "beamcontact/errors.hpp"
#include "beamcontact/harness.hpp"

namespace bc = beamcontact;

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    bool svg = false;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "Path to the key = value configuration file")->required();
    cmd->add_option("--out", args.out, "Output directory (overrides 'out' in the config)");
    cmd->add_flag("--svg", args.svg, "Also write an SVG plot of the solution");
    cmd->add_option("--jobs", args.jobs, "Parallel solves for studies")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "Seed for randomized checks (overrides 'seed')");
}

int run(const std::string& command, const CommonArgs& args) {
    auto cfg = bc::load_config(args.config);
    if (args.seed) cfg.seed = *args.seed;
    bc::RunOptions opts;
    opts.out_dir = args.out.empty() ? cfg.out : std::filesystem::path(args.out);
    opts.svg = args.svg;
    opts.jobs = args.jobs;

    if (command == "solve") {
        const auto r = bc::run_solve(cfg, opts);
        std::cout << fmt::format("solve: N={} iterations={} converged={} residual_inf={:.3e}\n",
                                 cfg.N, r.report.iterations, r.report.converged,
                                 r.report.residual_inf);
        return r.exit_code();
    }
    if (command == "study") {
        const auto t = bc::run_study(cfg, opts);
        std::cout << fmt::format("{:>6} {:>12} {:>14} {:>14} {:>8}\n", "N", "h", "error_2",
                                 "error_inf", "order");
        for (const auto& row : t.rows) {
            std::cout << fmt::format("{:>6} {:>12.6g} {:>14.6e} {:>14.6e} {:>8}\n", row.N, row.h,
                                     row.error_2, row.error_inf,
                                     row.observed_order ? fmt::format("{:.3f}", *row.observed_order)
                                                        : std::string("-"));
        }
        std::cout << fmt::format("reference N={} fitted order={:.3f} ({})\n", t.N_ref,
                                 t.fitted_order, t.exit_code() == 0 ? "ok" : "FAILED");
        return t.exit_code();
    }
    if (command == "certify") {
        const auto c = bc::run_certificates(cfg, opts);
        std::cout << fmt::format(
            "certify: N={} C={:.10g} spectral={:.10g} empirical={:.10g} eig_dev={} ({})\n", c.N,
            c.contraction_formula, c.contraction_spectral, c.empirical_ratio_max,
            c.max_eigenvalue_deviation ? fmt::format("{:.3e}", *c.max_eigenvalue_deviation)
                                       : std::string("n/a"),
            c.passed() ? "ok" : "FAILED");
        return c.exit_code();
    }
    const auto o = bc::run_oracle_compare(cfg, opts);
    std::cout << fmt::format("oracle: status={} K*maxintG={:.4g} discrepancy={:.3e} threshold={:.1e} ({})\n",
                             o.status, o.lipschitz_estimate, o.discrepancy, o.threshold,
                             o.passed() ? "ok" : "FAILED");
    return o.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourth-order beam contact BVP solver"};
    app.require_subcommand(1);
    CommonArgs args;
    for (const auto* name : {"solve", "study", "certify", "oracle"}) {
        add_common(app.add_subcommand(name), args);
    }
    app.get_subcommand("solve")->description("Single solve at N; writes solution.csv and report.json");
    app.get_subcommand("study")->description("Nested mesh-refinement convergence study over Ns");
    app.get_subcommand("certify")->description("Eigenvalue and contraction certificates at N");
    app.get_subcommand("oracle")->description("Cross-check against the continuous Green's-function oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : bc::kExitConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, args);
    } catch (const bc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return bc::kExitConfigError;
    } catch (const bc::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return bc::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bc::kExitFailure;
    }
}
