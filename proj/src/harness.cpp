#include "beamcontact/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "beamcontact/dense_eigen.hpp"
#include "beamcontact/errors.hpp"
#include "beamcontact/greens.hpp"
#include "beamcontact/io.hpp"

namespace beamcontact {

namespace {

using io::Json;

constexpr double kMonotoneSlack = 1.10;
constexpr std::size_t kSpectrumMaxN = 50;
constexpr std::size_t kContractionTrials = 200;
constexpr double kEigenTolerance = 1e-8;
constexpr double kContractionSlack = 1e-12;
constexpr double kOracleThreshold = 1e-3;
constexpr double kFallbackThreshold = 5e-2;
constexpr std::size_t kFallbackCoarseN = 127;
// Max-norm bound of the first-row finite-difference remainder, in units of
// h^5 max|w^(5)|: (120 + 5 + 4*32 + 243) / 120.
constexpr double kTruncationConstant = 496.0 / 120.0;

SolveOptions options_from(const StudyConfig& cfg) {
    SolveOptions o;
    o.tol = cfg.tol;
    o.max_iter = cfg.max_iter;
    return o;
}

std::vector<double> with_boundary(const BVPSpec& spec, std::span<const double> interior) {
    std::vector<double> w;
    w.reserve(interior.size() + 2);
    w.push_back(spec.alpha1);
    w.insert(w.end(), interior.begin(), interior.end());
    w.push_back(spec.alpha2);
    return w;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Json problem_json(const StudyConfig& cfg) {
    Json j;
    j["a"] = cfg.spec.a;
    j["b"] = cfg.spec.b;
    j["alpha1"] = cfg.spec.alpha1;
    j["alpha2"] = cfg.spec.alpha2;
    j["beta1"] = cfg.spec.beta1;
    j["beta2"] = cfg.spec.beta2;
    j["K"] = cfg.K;
    j["g"] = cfg.g_text;
    return j;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------
// solve

SolveOutcome run_solve(const StudyConfig& cfg, const RunOptions& opts) {
    const auto contact = cfg.contact();
    SolveOutcome out;
    out.grid = build_grid(cfg.spec, cfg.N);

    const auto t0 = std::chrono::steady_clock::now();
    auto result = ave_solve(cfg.spec, contact, out.grid, options_from(cfg));
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report = std::move(result.report);
    out.w = with_boundary(cfg.spec, result.solution);

    const std::size_t n = out.w.size();
    std::vector<double> force(n), penetration(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = out.grid.nodes[i];
        g[i] = contact.g(x);
        force[i] = contact.force(x, out.w[i]);
        penetration[i] = std::max(out.w[i] - g[i], 0.0);
    }
    io::write_csv(opts.out_dir / "solution.csv",
                  {{"x", "w", "contact_force", "penetration"}, {out.grid.nodes, out.w, force, penetration}});

    Json report;
    report["command"] = "solve";
    report["problem"] = problem_json(cfg);
    report["N"] = cfg.N;
    report["h"] = out.grid.h;
    report["converged"] = out.report.converged;
    report["iterations"] = out.report.iterations;
    report["contraction_C"] = optional_json(out.report.contraction_C);
    report["tol"] = out.report.tol;
    report["residual_inf"] = out.report.residual_inf;
    report["step_norms"] = out.report.step_norms;
    report["apriori_bounds"] = out.report.apriori_bounds;
    report["wall_time_s"] = out.wall_time_s;
    io::write_json(opts.out_dir / "report.json", report);

    if (opts.svg) {
        io::write_svg(opts.out_dir / "solution.svg", "Beam deflection w and contact surface g",
                      out.grid.nodes, {{"w", out.w, "#1f77b4"}, {"g", g, "#d62728"}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// study

double fitted_slope(const std::vector<double>& hs, const std::vector<double>& errors) {
    if (hs.size() != errors.size() || hs.size() < 2) {
        throw UsageError("fitted_slope: need at least two matching samples");
    }
    const double n = static_cast<double>(hs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double lx = std::log(hs[i]);
        const double ly = std::log(std::max(errors[i], std::numeric_limits<double>::min()));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int ConvergenceTable::exit_code() const {
    const bool converged = reference_converged &&
                           std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
    if (!converged) return kExitUnconverged;
    return (order_ok() && monotone) ? kExitOk : kExitCheckFailed;
}

ConvergenceTable run_study(const StudyConfig& cfg, const RunOptions& opts) {
    const auto& Ns = cfg.Ns;
    if (Ns.size() < 3) {
        throw UsageError("study: the refinement ladder needs at least 3 entries");
    }
    ConvergenceTable table;
    table.N_ref = 2 * Ns.back() + 1;
    for (std::size_t N : Ns) {
        if ((table.N_ref + 1) % (N + 1) != 0) {
            throw UsageError("study: N = " + std::to_string(N) +
                             " is not nested in the reference grid N_ref = 2*max(Ns)+1 = " +
                             std::to_string(table.N_ref) +
                             "; choose N_k = 2^k (N_0 + 1) - 1 so that N_k + 1 divides N_ref + 1");
        }
    }

    const auto contact = cfg.contact();
    const auto solve_options = options_from(cfg);

    // Index 0..n-1 are the ladder, index n is the reference.
    std::vector<std::size_t> sizes(Ns.begin(), Ns.end());
    sizes.push_back(table.N_ref);
    std::vector<SolveResult> results(sizes.size());
    std::vector<Grid> grids(sizes.size());
    parallel_for(sizes.size(), opts.jobs, [&](std::size_t k) {
        grids[k] = build_grid(cfg.spec, sizes[k]);
        results[k] = ave_solve(cfg.spec, contact, grids[k], solve_options);
    });

    const auto& ref = results.back();
    const auto& ref_grid = grids.back();
    table.reference_iterations = ref.report.iterations;
    table.reference_converged = ref.report.converged;

    // w^(5) = -K (w' - g') (1 + sign(w - g)) on the reference solution.
    const auto w_ref = with_boundary(cfg.spec, ref.solution);
    for (std::size_t i = 0; i < w_ref.size(); ++i) {
        const double x = ref_grid.nodes[i];
        double dw;
        if (i == 0) {
            dw = (w_ref[1] - w_ref[0]) / ref_grid.h;
        } else if (i + 1 == w_ref.size()) {
            dw = (w_ref[i] - w_ref[i - 1]) / ref_grid.h;
        } else {
            dw = (w_ref[i + 1] - w_ref[i - 1]) / (2.0 * ref_grid.h);
        }
        const double gap = w_ref[i] - contact.g(x);
        const double sign = gap > 0 ? 1.0 : (gap < 0 ? -1.0 : 0.0);
        const double w5 = -cfg.K * (dw - contact.g_prime(x)) * (1.0 + sign);
        table.max_abs_w5 = std::max(table.max_abs_w5, std::abs(w5));
    }

    std::vector<double> hs, e2, e2u;
    // Errors below eps * cond(A_ref) * scale are indistinguishable from roundoff.
    const double s = std::sin(std::numbers::pi / (2.0 * static_cast<double>(table.N_ref + 1)));
    const double roundoff_floor = std::numeric_limits<double>::epsilon() / (s * s * s * s) *
                                  (1.0 + norm_inf(ref.solution));
    table.roundoff_limited = true;
    for (std::size_t k = 0; k < Ns.size(); ++k) {
        const std::size_t N = Ns[k];
        const std::size_t stride = (table.N_ref + 1) / (N + 1);
        ConvergenceRow row;
        row.N = N;
        row.h = grids[k].h;
        row.iterations = results[k].report.iterations;
        row.converged = results[k].report.converged;
        double s2 = 0.0, sinf = 0.0;
        for (std::size_t i = 1; i <= N; ++i) {
            const double d = results[k].solution[i - 1] - ref.solution[i * stride - 1];
            s2 += d * d;
            sinf = std::max(sinf, std::abs(d));
        }
        row.error_2_unscaled = std::sqrt(s2);
        row.error_2 = std::sqrt(row.h) * row.error_2_unscaled;
        row.error_inf = sinf;
        row.truncation_bound = kTruncationConstant * std::pow(row.h, 5) * table.max_abs_w5;
        if (row.error_inf > roundoff_floor) {
            table.roundoff_limited = false;
        }
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back();
            if (prev.error_2 > 0.0 && row.error_2 > 0.0) {
                row.observed_order = std::log(prev.error_2 / row.error_2) / std::log(prev.h / row.h);
            }
        }
        hs.push_back(row.h);
        e2.push_back(row.error_2);
        e2u.push_back(row.error_2_unscaled);
        table.rows.push_back(row);
    }
    table.fitted_order = fitted_slope(hs, e2);
    table.fitted_order_unscaled = fitted_slope(hs, e2u);

    table.monotone = true;
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        const auto& prev = table.rows[k - 1];
        const auto& cur = table.rows[k];
        const bool both_roundoff = prev.error_inf <= roundoff_floor &&
                                   cur.error_inf <= roundoff_floor;
        if (!both_roundoff && cur.error_2 > kMonotoneSlack * prev.error_2) {
            table.monotone = false;
        }
    }

    // Artifacts.
    io::CsvTable csv;
    csv.header = {"N", "h", "error_2", "error_2_unscaled", "error_inf", "observed_order",
                  "iterations", "truncation_bound"};
    csv.columns.resize(csv.header.size());
    for (const auto& r : table.rows) {
        csv.columns[0].push_back(static_cast<double>(r.N));
        csv.columns[1].push_back(r.h);
        csv.columns[2].push_back(r.error_2);
        csv.columns[3].push_back(r.error_2_unscaled);
        csv.columns[4].push_back(r.error_inf);
        csv.columns[5].push_back(r.observed_order.value_or(std::numeric_limits<double>::quiet_NaN()));
        csv.columns[6].push_back(static_cast<double>(r.iterations));
        csv.columns[7].push_back(r.truncation_bound);
    }
    io::write_csv(opts.out_dir / "study.csv", csv);

    Json doc;
    doc["command"] = "study";
    doc["problem"] = problem_json(cfg);
    doc["seed"] = cfg.seed;
    doc["reference"] = {
        {"method", "nested-grid solve at N_ref = 2*max(Ns)+1"},
        {"N_ref", table.N_ref},
        {"iterations", table.reference_iterations},
        {"converged", table.reference_converged},
    };
    doc["norm"] = "error_2 = sqrt(h) * ||W_N - W_ref||_2 over shared interior nodes";
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        rows.push_back({
            {"N", r.N},
            {"h", r.h},
            {"error_2", r.error_2},
            {"error_2_unscaled", r.error_2_unscaled},
            {"error_inf", r.error_inf},
            {"observed_order", optional_json(r.observed_order)},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"truncation_bound", r.truncation_bound},
        });
    }
    doc["rows"] = rows;
    doc["fitted_order"] = table.fitted_order;
    doc["fitted_order_unscaled"] = table.fitted_order_unscaled;
    doc["max_abs_w5"] = table.max_abs_w5;
    doc["roundoff_limited"] = table.roundoff_limited;
    doc["checks"] = {
        {"order_at_least_half", table.order_ok()},
        {"errors_non_increasing", table.monotone},
    };
    io::write_json(opts.out_dir / "study.json", doc);
    return table;
}

// ---------------------------------------------------------------------------
// certificates

double empirical_contraction_ratio(const ContactMap& map, std::size_t trials, std::uint64_t seed,
                                   double spread) {
    const auto surface = map.surface();
    const std::size_t N = surface.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> offset(-spread, spread);
    double worst = 0.0;
    std::vector<double> X(N), Y(N);
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < N; ++i) {
            X[i] = surface[i] + offset(rng);
            Y[i] = surface[i] + offset(rng);
        }
        const double denom = distance2(X, Y);
        if (denom == 0.0) continue;
        worst = std::max(worst, distance2(map.apply(X), map.apply(Y)) / denom);
    }
    return worst;
}

bool CertificateReport::passed() const {
    const bool spectrum_ok =
        !max_eigenvalue_deviation || *max_eigenvalue_deviation < kEigenTolerance;
    return cholesky_ok && spectrum_ok && empirical_ratio_max <= contraction_formula + kContractionSlack &&
           contraction_spectral <= contraction_formula + kContractionSlack;
}

CertificateReport run_certificates(const StudyConfig& cfg, const RunOptions& opts) {
    const auto contact = cfg.contact();
    const RightHandSide rhs = contact;
    const auto sys = build_system(cfg.spec, rhs, cfg.N);

    CertificateReport rep;
    rep.N = cfg.N;
    rep.K = cfg.K;
    try {
        sys.A.factorize();
        rep.cholesky_ok = true;
    } catch (const NumericalError&) {
        rep.cholesky_ok = false;
    }

    const auto lambda = eigenvalues_A(cfg.N);
    const double d = sys.grid.h4() * cfg.K / 2.0;
    rep.contraction_formula = contraction_constant(cfg.spec, cfg.K);
    rep.contraction_spectral = d > 0.0 ? d / (d + lambda.front()) : 0.0;
    if (cfg.N <= kSpectrumMaxN) {
        const auto numeric = symmetric_eigenvalues(sys.A.dense(), cfg.N);
        double dev = 0.0;
        for (std::size_t i = 0; i < cfg.N; ++i) {
            dev = std::max(dev, std::abs(numeric[i] - lambda[i]));
        }
        rep.max_eigenvalue_deviation = dev;
        rep.contraction_spectral_numeric = d > 0.0 ? d / (d + numeric.front()) : 0.0;
    }

    const ContactMap map(sys, cfg.K);
    double spread = 1.0;
    for (double g : sys.Gvec) spread = std::max(spread, 1.0 + std::abs(g));
    rep.trials = kContractionTrials;
    rep.empirical_ratio_max = empirical_contraction_ratio(map, rep.trials, cfg.seed, spread);

    Json doc;
    doc["command"] = "certify";
    doc["problem"] = problem_json(cfg);
    doc["N"] = rep.N;
    doc["seed"] = cfg.seed;
    doc["cholesky_ok"] = rep.cholesky_ok;
    doc["eigenvalues"] = {
        {"formula", "16 sin^4(i pi / (2(N+1)))"},
        {"max_deviation", optional_json(rep.max_eigenvalue_deviation)},
        {"tolerance", kEigenTolerance},
    };
    doc["contraction"] = {
        {"formula", rep.contraction_formula},
        {"spectral", rep.contraction_spectral},
        {"spectral_numeric", optional_json(rep.contraction_spectral_numeric)},
        {"margin", rep.contraction_formula - rep.contraction_spectral},
        {"empirical_ratio_max", rep.empirical_ratio_max},
        {"trials", rep.trials},
    };
    doc["passed"] = rep.passed();
    io::write_json(opts.out_dir / "certificates.json", doc);
    return rep;
}

// ---------------------------------------------------------------------------
// oracle

OracleComparison run_oracle_compare(const StudyConfig& cfg, const RunOptions& opts) {
    const auto contact = cfg.contact();
    const RightHandSide rhs = contact;
    const auto quad = make_quad_grid(cfg.spec, kOraclePanels);

    OracleComparison cmp;
    const auto rows = quad.green_row_integrals();
    cmp.kernel_bound = *std::max_element(rows.begin(), rows.end());
    cmp.lipschitz_estimate = cfg.K * cmp.kernel_bound;

    const auto fine_grid = build_grid(cfg.spec, kOracleFiniteDifferenceN);
    const auto fine = ave_solve(cfg.spec, contact, fine_grid, options_from(cfg));

    io::CsvTable csv;
    Json doc;
    doc["command"] = "oracle";
    doc["problem"] = problem_json(cfg);

    if (cmp.lipschitz_estimate < kOracleContractionLimit) {
        cmp.status = "continuous";
        cmp.threshold = kOracleThreshold;
        const auto picard = picard_reference_solve(cfg.spec, rhs, 0.0, quad, 1e-13, 10000);
        cmp.oracle_iterations = picard.report.iterations;
        cmp.oracle_converged = picard.report.converged;
        cmp.bracket_held = picard.report.bracket_held;
        const std::size_t stride = kOraclePanels / (kOracleFiniteDifferenceN + 1);
        std::vector<double> xs, w_fd, w_oracle;
        for (std::size_t i = 1; i <= kOracleFiniteDifferenceN; ++i) {
            const double a = fine.solution[i - 1];
            const double b = picard.solution.values[i * stride];
            cmp.discrepancy = std::max(cmp.discrepancy, std::abs(a - b));
            xs.push_back(fine_grid.nodes[i]);
            w_fd.push_back(a);
            w_oracle.push_back(b);
        }
        csv = {{"x", "w_discrete", "w_oracle"}, {xs, w_fd, w_oracle}};
        doc["oracle"] = {
            {"method", "Picard iteration on the Green's-function integral operator"},
            {"panels", kOraclePanels},
            {"iterations", cmp.oracle_iterations},
            {"converged", cmp.oracle_converged},
            {"bracket_held", cmp.bracket_held},
        };
        if (!cmp.oracle_converged) {
            cmp.discrepancy = std::numeric_limits<double>::infinity();
        }
    } else {
        cmp.status = "nested_fallback";
        cmp.threshold = kFallbackThreshold;
        const auto coarse_grid = build_grid(cfg.spec, kFallbackCoarseN);
        const auto coarse = ave_solve(cfg.spec, contact, coarse_grid, options_from(cfg));
        const std::size_t stride = (kOracleFiniteDifferenceN + 1) / (kFallbackCoarseN + 1);
        std::vector<double> xs, w_fine, w_coarse;
        for (std::size_t i = 1; i <= kFallbackCoarseN; ++i) {
            const double a = coarse.solution[i - 1];
            const double b = fine.solution[i * stride - 1];
            cmp.discrepancy = std::max(cmp.discrepancy, std::abs(a - b));
            xs.push_back(coarse_grid.nodes[i]);
            w_coarse.push_back(a);
            w_fine.push_back(b);
        }
        csv = {{"x", "w_coarse", "w_fine"}, {xs, w_coarse, w_fine}};
        doc["oracle"] = {
            {"method", "skipped: integral operator not contractive at this K; "
                       "compared N=127 against N=255 at shared nodes"},
            {"coarse_N", kFallbackCoarseN},
        };
    }
    doc["status"] = cmp.status;
    doc["kernel_bound"] = cmp.kernel_bound;
    doc["lipschitz_estimate"] = cmp.lipschitz_estimate;
    doc["contraction_limit"] = kOracleContractionLimit;
    doc["discrete_N"] = kOracleFiniteDifferenceN;
    doc["discrete_converged"] = fine.report.converged;
    doc["discrepancy_inf"] = cmp.discrepancy;
    doc["threshold"] = cmp.threshold;
    doc["passed"] = cmp.passed();
    io::write_csv(opts.out_dir / "oracle.csv", csv);
    io::write_json(opts.out_dir / "oracle.json", doc);
    return cmp;
}

}  // namespace beamcontact
