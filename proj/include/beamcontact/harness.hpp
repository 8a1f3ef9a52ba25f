#pragma once

// Drivers behind the command-line tool. Each one runs a complete task from
// a StudyConfig, writes its artifacts into the output directory and returns
// a summary whose exit_code() follows the CLI convention.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "beamcontact/config.hpp"
#include "beamcontact/discretize.hpp"
#include "beamcontact/solvers.hpp"

namespace beamcontact {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigError = 2,
    kExitUnconverged = 3,
    kExitCheckFailed = 4,
};

struct RunOptions {
    std::filesystem::path out_dir = "out";
    bool svg = false;
    unsigned jobs = 1;
};

struct SolveOutcome {
    Grid grid;
    std::vector<double> w;  ///< all N+2 nodes, boundary values included
    IterationReport report;
    double wall_time_s = 0.0;

    [[nodiscard]] int exit_code() const { return report.converged ? kExitOk : kExitUnconverged; }
};

/// Writes solution.csv, report.json and optionally solution.svg.
SolveOutcome run_solve(const StudyConfig& cfg, const RunOptions& opts);

struct ConvergenceRow {
    std::size_t N = 0;
    double h = 0.0;
    double error_2 = 0.0;           ///< sqrt(h) * ||W_N - W_ref||_2 at shared nodes
    double error_2_unscaled = 0.0;  ///< plain vector 2-norm
    double error_inf = 0.0;
    std::optional<double> observed_order;  ///< local slope against the previous row
    std::size_t iterations = 0;
    bool converged = false;
    double truncation_bound = 0.0;  ///< bound on the max-norm finite-difference remainder
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::size_t N_ref = 0;
    std::size_t reference_iterations = 0;
    bool reference_converged = false;
    double fitted_order = 0.0;  ///< least-squares slope of log error_2 vs log h
    double fitted_order_unscaled = 0.0;
    double max_abs_w5 = 0.0;
    bool roundoff_limited = false;
    bool monotone = false;

    [[nodiscard]] bool order_ok() const { return roundoff_limited || fitted_order >= 0.5; }
    [[nodiscard]] int exit_code() const;
};

/// Throws UsageError when Ns has fewer than 3 entries or is not nested in
/// the reference grid N_ref = 2 max(Ns) + 1.
ConvergenceTable run_study(const StudyConfig& cfg, const RunOptions& opts);

/// Least-squares slope of log(errors) against log(hs).
double fitted_slope(const std::vector<double>& hs, const std::vector<double>& errors);

struct CertificateReport {
    std::size_t N = 0;
    double K = 0.0;
    bool cholesky_ok = false;
    std::optional<double> max_eigenvalue_deviation;  ///< only for N <= 50
    double contraction_formula = 0.0;    ///< (b-a)^4 K / ((b-a)^4 K + 32)
    double contraction_spectral = 0.0;   ///< d / (d + lambda_min), closed-form lambda_min
    std::optional<double> contraction_spectral_numeric;
    double empirical_ratio_max = 0.0;
    std::size_t trials = 0;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] int exit_code() const { return passed() ? kExitOk : kExitCheckFailed; }
};

/// Eigenvalue, SPD and contraction certificates at N = cfg.N; writes
/// certificates.json.
CertificateReport run_certificates(const StudyConfig& cfg, const RunOptions& opts);

/// Contraction certificate pieces, shared with tests.
double empirical_contraction_ratio(const ContactMap& map, std::size_t trials, std::uint64_t seed,
                                   double spread);

struct OracleComparison {
    std::string status;  ///< "continuous" or "nested_fallback"
    double kernel_bound = 0.0;
    double lipschitz_estimate = 0.0;
    double discrepancy = 0.0;
    double threshold = 0.0;
    std::size_t oracle_iterations = 0;
    bool oracle_converged = false;
    bool bracket_held = false;

    [[nodiscard]] bool passed() const { return discrepancy < threshold; }
    [[nodiscard]] int exit_code() const { return passed() ? kExitOk : kExitCheckFailed; }
};

inline constexpr std::size_t kOraclePanels = 512;
inline constexpr std::size_t kOracleFiniteDifferenceN = 255;
inline constexpr double kOracleContractionLimit = 0.9;

/// Continuous Picard oracle vs the discrete solver, or a nested-grid
/// discrete comparison when K is too large for the oracle to contract.
/// Writes oracle.json and oracle.csv.
OracleComparison run_oracle_compare(const StudyConfig& cfg, const RunOptions& opts);

}  // namespace beamcontact
