#include "beamcontact/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "beamcontact/errors.hpp"

namespace beamcontact {

namespace {

constexpr std::size_t kMaxReportedViolations = 8;

void require_finite(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("right-hand side evaluated at a non-finite point");
    }
}

// Power-basis coefficients of wbar in t = x - a.
std::array<double, 5> wbar_coefficients(const BVPSpec& spec, double M) {
    const double L = spec.length();
    return {
        spec.alpha1,
        (spec.alpha2 - spec.alpha1) / L - (spec.beta2 + 2.0 * spec.beta1) * L / 6.0 +
            M * L * L * L / 24.0,
        spec.beta1 / 2.0,
        (spec.beta2 - spec.beta1) / (6.0 * L) - M * L / 12.0,
        M / 24.0,
    };
}

}  // namespace

void BVPSpec::validate() const {
    for (double v : {a, b, alpha1, alpha2, beta1, beta2}) {
        if (!std::isfinite(v)) {
            throw UsageError("BVPSpec: all fields must be finite");
        }
    }
    if (!(b > a)) {
        throw UsageError("BVPSpec: require b > a");
    }
}

double PiecewiseLinearContact::force(double x, double y) const {
    require_finite(x, y);
    const double gap = y - g(x);
    return gap > 0.0 ? -K * gap : 0.0;
}

double eval_rhs(const RightHandSide& rhs, double x, double y) {
    require_finite(x, y);
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, GeneralMonotone>) {
                return f.eval(x, y);
            } else {
                return f.force(x, y);
            }
        },
        rhs);
}

double upper_bound(const RightHandSide& rhs) noexcept {
    if (const auto* general = std::get_if<GeneralMonotone>(&rhs)) {
        return general->M;
    }
    return 0.0;
}

GeneralMonotone as_general(const PiecewiseLinearContact& contact) {
    return GeneralMonotone{[contact](double x, double y) { return contact.force(x, y); }, 0.0};
}

ValidationReport validate_rhs(const RightHandSide& rhs, const BVPSpec& spec,
                              std::size_t n_samples, std::uint64_t seed) {
    spec.validate();
    if (n_samples == 0) {
        throw UsageError("validate_rhs: n_samples must be >= 1");
    }
    const double data_scale = std::max({std::abs(spec.alpha1), std::abs(spec.alpha2),
                                        std::abs(spec.beta1), std::abs(spec.beta2)});
    const double Y = 10.0 * (1.0 + data_scale);
    const double M = upper_bound(rhs);

    ValidationReport report;
    report.samples = n_samples;
    report.box = Y;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xs(spec.a, spec.b);
    std::uniform_real_distribution<double> ys(-Y, Y);

    for (std::size_t k = 0; k < n_samples; ++k) {
        const double x = xs(rng);
        double y1 = ys(rng);
        double y2 = ys(rng);
        if (y1 < y2) {
            std::swap(y1, y2);
        }
        const double f1 = eval_rhs(rhs, x, y1);
        const double f2 = eval_rhs(rhs, x, y2);
        const double slack = 1e-12 * (1.0 + std::abs(f1) + std::abs(f2));
        bool bad = false;
        if (f1 > f2 + slack) {
            ++report.monotonicity_violations;
            bad = true;
        }
        const double bound_slack = 1e-12 * (1.0 + std::abs(M));
        if (f1 > M + bound_slack || f2 > M + bound_slack) {
            ++report.bound_violations;
            bad = true;
        }
        if (bad && report.examples.size() < kMaxReportedViolations) {
            report.examples.push_back({x, y1, y2, f1, f2});
        }
    }
    return report;
}

double wbar(const BVPSpec& spec, double M, double x) {
    return wbar_derivative(spec, M, x, 0);
}

double wbar_derivative(const BVPSpec& spec, double M, double x, int order) {
    spec.validate();
    const double slack = 1e-12 * spec.length();
    if (!std::isfinite(x) || x < spec.a - slack || x > spec.b + slack) {
        throw DomainError("wbar: x outside [a, b]");
    }
    if (order < 0) {
        throw UsageError("wbar_derivative: negative order");
    }
    auto c = wbar_coefficients(spec, M);
    // Differentiate the power series `order` times.
    for (int d = 0; d < order; ++d) {
        for (std::size_t k = 0; k + 1 < c.size(); ++k) {
            c[k] = c[k + 1] * static_cast<double>(k + 1);
        }
        c.back() = 0.0;
    }
    const double t = x - spec.a;
    double value = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        value = value * t + *it;
    }
    return value;
}

}  // namespace beamcontact
