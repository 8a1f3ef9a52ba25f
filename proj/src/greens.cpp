#include "beamcontact/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamcontact/errors.hpp"

namespace beamcontact {

namespace {

void require_in_interval(double a, double b, double x, const char* what) {
    const double slack = 1e-12 * (b - a);
    if (!std::isfinite(x) || x < a - slack || x > b + slack) {
        throw DomainError(std::string(what) + ": argument outside [a, b]");
    }
}

double kernel(double a, double b, double x, double s) {
    if (s <= x) {
        return -(b - x) * (s - a) / (b - a);
    }
    return -(b - s) * (x - a) / (b - a);
}

void require_same_interval(const BVPSpec& spec, const QuadGrid& quad) {
    if (quad.a() != spec.a || quad.b() != spec.b) {
        throw UsageError("quadrature grid does not span the problem interval");
    }
}

double sup_distance(std::span<const double> x, std::span<const double> y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max(d, std::abs(x[i] - y[i]));
    }
    return d;
}

}  // namespace

QuadGrid::QuadGrid(double a, double b, std::size_t panels)
    : a_(a), b_(b), panels_(panels), cache_(std::make_shared<Cache>()) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        throw UsageError("QuadGrid: require finite b > a");
    }
    if (panels < 4 || panels % 2 != 0) {
        throw UsageError("QuadGrid: panel count must be even and >= 4");
    }
    const double h = (b - a) / static_cast<double>(panels);
    nodes_.resize(panels + 1);
    weights_.resize(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        nodes_[i] = a + static_cast<double>(i) * h;
        weights_[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    }
    nodes_.back() = b;
    weights_.front() = h / 3.0;
    weights_.back() = h / 3.0;
}

void QuadGrid::build_cache() const {
    const std::size_t n = nodes_.size();
    // Gt sampled at node pairs; symmetric.
    std::vector<double> gt(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            gt[i * n + k] = kernel(a_, b_, nodes_[i], nodes_[k]);
        }
    }
    auto& table = cache_->table;
    table.assign(n * n, 0.0);
    std::vector<double> weighted(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            weighted[k] = weights_[k] * gt[i * n + k];
        }
        for (std::size_t j = i; j < n; ++j) {
            double sum = 0.0;
            const double* col = &gt[j * n];  // Gt(t_k, x_j) = Gt(x_j, t_k)
            for (std::size_t k = 0; k < n; ++k) {
                sum += weighted[k] * col[k];
            }
            table[i * n + j] = sum;
            table[j * n + i] = sum;
        }
    }
    auto& rows = cache_->row_integrals;
    rows.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += weights_[j] * table[i * n + j];
        }
        rows[i] = sum;
    }
}

std::span<const double> QuadGrid::green_table() const {
    std::call_once(cache_->once, [this] { build_cache(); });
    return cache_->table;
}

std::span<const double> QuadGrid::green_row_integrals() const {
    std::call_once(cache_->once, [this] { build_cache(); });
    return cache_->row_integrals;
}

QuadGrid make_quad_grid(const BVPSpec& spec, std::size_t panels) {
    spec.validate();
    return QuadGrid(spec.a, spec.b, panels);
}

SampledFunction sample_wbar(const BVPSpec& spec, double M, const QuadGrid& quad) {
    require_same_interval(spec, quad);
    SampledFunction out{quad, std::vector<double>(quad.size())};
    for (std::size_t i = 0; i < quad.size(); ++i) {
        out.values[i] = wbar(spec, M, quad.nodes()[i]);
    }
    return out;
}

double green_tilde(const BVPSpec& spec, double x, double s) {
    spec.validate();
    require_in_interval(spec.a, spec.b, x, "green_tilde");
    require_in_interval(spec.a, spec.b, s, "green_tilde");
    return kernel(spec.a, spec.b, x, s);
}

double green_G(const BVPSpec& spec, const QuadGrid& quad, double x, double s) {
    spec.validate();
    require_same_interval(spec, quad);
    require_in_interval(spec.a, spec.b, x, "green_G");
    require_in_interval(spec.a, spec.b, s, "green_G");
    double sum = 0.0;
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const double t = quad.nodes()[k];
        sum += quad.weights()[k] * kernel(spec.a, spec.b, x, t) * kernel(spec.a, spec.b, t, s);
    }
    return sum;
}

SampledFunction apply_L(const BVPSpec& spec, const RightHandSide& rhs, double M,
                        const QuadGrid& quad, const SampledFunction& v) {
    require_same_interval(spec, quad);
    if (!(v.grid == quad) || v.values.size() != quad.size()) {
        throw UsageError("apply_L: input sampled on a different quadrature grid");
    }
    const std::size_t n = quad.size();
    const auto& nodes = quad.nodes();
    const auto& weights = quad.weights();

    std::vector<double> load(n);
    for (std::size_t j = 0; j < n; ++j) {
        load[j] = weights[j] * (eval_rhs(rhs, nodes[j], v.values[j]) - M);
    }

    const auto table = quad.green_table();
    SampledFunction out{quad, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += table[i * n + j] * load[j];
        }
        out.values[i] = wbar(spec, M, nodes[i]) + sum;
    }
    return out;
}

PicardResult picard_reference_solve(const BVPSpec& spec, const RightHandSide& rhs, double M,
                                    const QuadGrid& quad, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) {
        throw UsageError("picard_reference_solve: tol must be positive");
    }
    constexpr std::size_t kStallWindow = 10;

    const auto upper = sample_wbar(spec, M, quad);
    auto v = upper;

    OracleReport report;
    const auto rows = quad.green_row_integrals();
    report.kernel_bound = *std::max_element(rows.begin(), rows.end());
    const auto* contact = std::get_if<PiecewiseLinearContact>(&rhs);
    if (contact != nullptr) {
        report.lipschitz_estimate = contact->K * report.kernel_bound;
    }

    std::vector<double> lower;
    auto best = v;
    double best_step = std::numeric_limits<double>::infinity();
    std::size_t non_decreasing = 0;
    double max_ratio = 0.0;

    for (std::size_t it = 0; it < max_iter; ++it) {
        auto next = apply_L(spec, rhs, M, quad, v);
        if (lower.empty()) {
            lower = next.values;
        }
        const double step = sup_distance(next.values, v.values);
        if (!std::isfinite(step)) {
            throw NumericalError("picard_reference_solve: non-finite iterate");
        }
        if (!report.step_norms.empty()) {
            const double prev = report.step_norms.back();
            if (prev > 0.0) {
                max_ratio = std::max(max_ratio, step / prev);
            }
            non_decreasing = step >= prev ? non_decreasing + 1 : 0;
        }
        report.step_norms.push_back(step);
        report.iterations = it + 1;
        v = std::move(next);

        for (std::size_t i = 0; i < v.values.size(); ++i) {
            const double eps = 1e-12 * (1.0 + std::abs(upper.values[i]) + std::abs(lower[i]));
            if (v.values[i] > upper.values[i] + eps || v.values[i] < lower[i] - eps) {
                report.bracket_held = false;
            }
        }

        if (step < best_step) {
            best_step = step;
            best = v;
        }
        if (step < tol) {
            report.converged = true;
            break;
        }
        if (non_decreasing >= kStallWindow) {
            break;
        }
    }
    if (contact == nullptr) {
        report.lipschitz_estimate = max_ratio;
    }
    report.contractive = report.lipschitz_estimate < 1.0;
    return {report.converged ? v : best, report};
}

}  // namespace beamcontact
