#include "beamcontact/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beamcontact/errors.hpp"

namespace beamcontact {

namespace {

constexpr std::size_t kStallWindow = 50;
constexpr double kMinDamping = 1.0 / 1024.0;
constexpr double kBlowUpFactor = 1e3;
constexpr std::size_t kValidationSamples = 1000;

void require_grid_matches(const BVPSpec& spec, const Grid& grid) {
    spec.validate();
    if (grid.a != spec.a || grid.b != spec.b || grid.nodes.size() != grid.N + 2) {
        throw UsageError("grid was not built from this problem");
    }
}

std::vector<double> initial_iterate(const SolveOptions& options, std::size_t N) {
    if (!options.initial) {
        return std::vector<double>(N, 0.0);
    }
    if (options.initial->size() != N) {
        throw UsageError("initial iterate has length " + std::to_string(options.initial->size()) +
                         ", expected " + std::to_string(N));
    }
    return *options.initial;
}

double resolve_tolerance(const SolveOptions& options, std::span<const double> Bbar) {
    const double tol = options.tol.value_or(default_tolerance(Bbar));
    if (!(tol > 0.0)) {
        throw UsageError("tolerance must be positive");
    }
    return tol;
}

void fill_apriori(IterationReport& report, double C) {
    if (report.step_norms.empty()) {
        return;
    }
    const double first = report.step_norms.front();
    report.apriori_bounds.resize(report.iterations);
    double power = C;
    for (std::size_t j = 1; j <= report.iterations; ++j) {
        report.apriori_bounds[j - 1] = power * first / (1.0 - C);
        power *= C;
    }
}

// Shared loop for the W and Z forms of the contraction. `map` applies one
// step. Returns the last iterate.
template <class Map>
std::vector<double> iterate_contraction(std::vector<double> x, const Map& map, double C,
                                        double tol, const SolveOptions& options,
                                        IterationReport& report) {
    const double certified = C / (1.0 - C);
    for (std::size_t j = 1; j <= options.max_iter; ++j) {
        auto next = map(x);
        const double step = distance2(next, x);
        if (!std::isfinite(step)) {
            throw NumericalError("fixed-point iterate became non-finite at iteration " +
                                     std::to_string(j),
                                 static_cast<std::ptrdiff_t>(j));
        }
        report.step_norms.push_back(step);
        report.iterations = j;
        x = std::move(next);
        if (options.observer) {
            options.observer(j, x);
        }
        if (step <= tol || certified * step <= tol) {
            report.converged = true;
            break;
        }
    }
    return x;
}

}  // namespace

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double distance2(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw UsageError("distance2: length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double default_tolerance(std::span<const double> Bbar) {
    return 1e-10 * (1.0 + norm2(Bbar));
}

double contraction_constant(const BVPSpec& spec, double K) {
    spec.validate();
    if (!(K >= 0.0) || !std::isfinite(K)) {
        throw UsageError("contraction_constant: K must be finite and >= 0");
    }
    const double L = spec.length();
    const double scaled = L * L * L * L * K;
    return scaled / (scaled + 32.0);
}

double apriori_bound(double C, std::span<const double> W1, std::span<const double> W0,
                     std::size_t j) {
    if (!(C >= 0.0 && C < 1.0)) {
        throw UsageError("apriori_bound: require 0 <= C < 1");
    }
    return std::pow(C, static_cast<double>(j)) * distance2(W1, W0) / (1.0 - C);
}

ContactMap::ContactMap(const DiscreteSystem& sys, double K)
    : shift_(sys.grid.h4() * K / 2.0), shifted_(sys.A.shifted(shift_)), surface_(sys.Gvec) {
    if (!(K >= 0.0)) {
        throw UsageError("ContactMap: K must be >= 0");
    }
    if (surface_.size() != sys.grid.N) {
        throw UsageError("ContactMap: system carries no sampled contact surface");
    }
    std::vector<double> rhs(sys.Bbar);
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        rhs[i] += shift_ * surface_[i];
    }
    affine_ = shifted_.solve(rhs);
}

std::vector<double> ContactMap::apply(std::span<const double> X) const {
    if (X.size() != surface_.size()) {
        throw UsageError("ContactMap::apply: length mismatch");
    }
    std::vector<double> gap(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        gap[i] = std::abs(X[i] - surface_[i]);
    }
    auto y = shifted_.solve(gap);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = affine_[i] - shift_ * y[i];
    }
    return y;
}

SolveResult ave_solve(const BVPSpec& spec, const PiecewiseLinearContact& contact, const Grid& grid,
                      const SolveOptions& options) {
    require_grid_matches(spec, grid);
    const RightHandSide rhs = contact;
    const auto sys = build_system(spec, rhs, grid.N);
    const ContactMap map(sys, contact.K);
    const double C = contraction_constant(spec, contact.K);
    const double tol = resolve_tolerance(options, sys.Bbar);

    IterationReport report;
    report.tol = tol;
    report.contraction_C = C;
    auto W = iterate_contraction(
        initial_iterate(options, grid.N), [&](const std::vector<double>& x) { return map.apply(x); },
        C, tol, options, report);
    fill_apriori(report, C);
    report.residual_inf = norm_inf(residual_discrete(sys, rhs, W));
    return {std::move(W), std::move(report)};
}

SolveResult ave_solve_z(const BVPSpec& spec, const PiecewiseLinearContact& contact,
                        const Grid& grid, const SolveOptions& options) {
    require_grid_matches(spec, grid);
    const RightHandSide rhs = contact;
    const auto sys = build_system(spec, rhs, grid.N);
    const double d = sys.grid.h4() * contact.K / 2.0;
    const BandedSPD shifted = sys.A.shifted(d);
    const double C = contraction_constant(spec, contact.K);
    const double tol = resolve_tolerance(options, sys.Bbar);

    // (A + dI)^{-1} (Bbar - A G)
    auto AG = sys.A.multiply(sys.Gvec);
    std::vector<double> rhs0(sys.Bbar);
    for (std::size_t i = 0; i < rhs0.size(); ++i) {
        rhs0[i] -= AG[i];
    }
    const auto affine = shifted.solve(rhs0);

    auto Z0 = initial_iterate(options, grid.N);
    for (std::size_t i = 0; i < Z0.size(); ++i) {
        Z0[i] -= sys.Gvec[i];
    }

    IterationReport report;
    report.tol = tol;
    report.contraction_C = C;
    auto step = [&](const std::vector<double>& z) {
        std::vector<double> absz(z.size());
        std::transform(z.begin(), z.end(), absz.begin(), [](double v) { return std::abs(v); });
        auto y = shifted.solve(absz);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = affine[i] - d * y[i];
        }
        return y;
    };
    auto Z = iterate_contraction(std::move(Z0), step, C, tol, options, report);
    fill_apriori(report, C);

    std::vector<double> W(Z);
    for (std::size_t i = 0; i < W.size(); ++i) {
        W[i] += sys.Gvec[i];
    }
    report.residual_inf = norm_inf(residual_discrete(sys, rhs, W));
    return {std::move(Z), std::move(report)};
}

SolveResult general_solve(const BVPSpec& spec, const RightHandSide& rhs, const Grid& grid,
                          const SolveOptions& options, double damping) {
    require_grid_matches(spec, grid);
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw UsageError("general_solve: damping must lie in (0, 1]");
    }
    const auto check = validate_rhs(rhs, spec, kValidationSamples, 0);
    if (check.monotonicity_violations > 0) {
        throw UsageError("general_solve: right-hand side is not non-increasing in y (" +
                         std::to_string(check.monotonicity_violations) + " sampled violations)");
    }

    const auto sys = build_system(spec, rhs, grid.N);
    const std::size_t N = grid.N;
    const double h4 = sys.grid.h4();
    const double M = upper_bound(rhs);
    const double tol = resolve_tolerance(options, sys.Bbar);

    // A^{-1} Bbar + A^{-1} h^4 (M + F_M(V)) = A^{-1} (Bbar + h^4 f(x, V))
    auto R = [&](std::span<const double> V) {
        std::vector<double> load(sys.Bbar);
        for (std::size_t i = 0; i < N; ++i) {
            load[i] += h4 * eval_rhs(rhs, sys.grid.nodes[i + 1], V[i]);
        }
        return sys.A.solve(load);
    };

    std::vector<double> V;
    if (options.initial) {
        V = initial_iterate(options, N);
    } else {
        std::vector<double> load(sys.Bbar);
        for (double& v : load) v += h4 * M;
        V = sys.A.solve(load);
    }

    IterationReport report;
    report.tol = tol;
    double theta = damping;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> anchor = V;
    std::size_t since_best = 0;

    for (std::size_t j = 1; j <= options.max_iter; ++j) {
        auto RV = R(V);
        const double fp = distance2(RV, V);
        report.iterations = j;

        if (!std::isfinite(fp) || (std::isfinite(best) && fp > kBlowUpFactor * best)) {
            // Too aggressive: restart from the best iterate with half the step.
            V = anchor;
            theta *= 0.5;
            since_best = 0;
            report.step_norms.push_back(0.0);
            if (theta < kMinDamping) break;
            continue;
        }
        if (fp <= tol) {
            report.step_norms.push_back(fp);
            V = std::move(RV);
            report.converged = true;
            if (options.observer) options.observer(j, V);
            break;
        }
        for (std::size_t i = 0; i < N; ++i) {
            V[i] += theta * (RV[i] - V[i]);
        }
        report.step_norms.push_back(theta * fp);
        if (options.observer) options.observer(j, V);

        if (fp < best) {
            best = fp;
            anchor = V;
            since_best = 0;
        } else if (++since_best >= kStallWindow) {
            theta *= 0.5;
            since_best = 0;
            best = std::numeric_limits<double>::infinity();
            if (theta < kMinDamping) break;
        }
    }
    report.damping = theta;
    report.residual_inf = norm_inf(residual_discrete(sys, rhs, V));
    return {std::move(V), std::move(report)};
}

std::vector<double> contact_forces(const PiecewiseLinearContact& contact, const Grid& grid,
                                   std::span<const double> W) {
    if (W.size() != grid.N) {
        throw UsageError("contact_forces: length mismatch");
    }
    std::vector<double> F(grid.N);
    for (std::size_t i = 0; i < grid.N; ++i) {
        F[i] = contact.force(grid.nodes[i + 1], W[i]);
    }
    return F;
}

}  // namespace beamcontact
