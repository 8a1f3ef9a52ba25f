#pragma once

// Independent reference computations used only by tests. Nothing here goes
// through the banded factorization or the library's iteration loops.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

/// Fourth-difference matrix written out from the stencil rows.
inline Dense fourth_difference_matrix(std::size_t N) {
    Dense A(N, std::vector<double>(N, 0.0));
    const double stencil[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    for (std::size_t i = 0; i < N; ++i) {
        for (int k = -2; k <= 2; ++k) {
            const long j = static_cast<long>(i) + k;
            if (j >= 0 && j < static_cast<long>(N)) {
                A[i][static_cast<std::size_t>(j)] = stencil[k + 2];
            }
        }
    }
    // Ghost-node elimination of the moment condition: w_{-1} = 2 w_0 - w_1 + ...
    A[0][0] -= 1.0;
    A[N - 1][N - 1] -= 1.0;
    return A;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        }
        std::swap(A[c], A[p]);
        std::swap(b[c], b[p]);
        if (A[c][c] == 0.0) throw std::runtime_error("singular");
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return x;
}

inline Dense dense_inverse(const Dense& A) {
    const std::size_t n = A.size();
    Dense inv(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const auto col = dense_solve(A, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

inline std::vector<double> matvec(const Dense& A, const std::vector<double>& x) {
    std::vector<double> y(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
    }
    return y;
}

inline std::vector<double> flatten(const Dense& A) {
    std::vector<double> out;
    for (const auto& row : A) out.insert(out.end(), row.begin(), row.end());
    return out;
}

/// Solves the contact problem by plain iteration of the dense absolute value
/// map until the step stagnates at `stop`. Returns interior values.
inline std::vector<double> dense_contact_solution(double a, double b, double alpha1, double alpha2,
                                                  double beta1, double beta2, double K,
                                                  const std::function<double(double)>& g,
                                                  std::size_t N, double stop = 1e-12,
                                                  std::size_t max_iter = 1000000) {
    const double h = (b - a) / static_cast<double>(N + 1);
    const double h4 = h * h * h * h;
    auto f = [&](double x, double y) { return y > g(x) ? -K * (y - g(x)) : 0.0; };
    std::vector<double> B(N, 0.0);
    B[0] = -beta1 * h * h + 2 * alpha1 - h4 / 12 * f(a, alpha1);
    B[1] = -alpha1;
    B[N - 2] += -alpha2;
    B[N - 1] += -beta2 * h * h + 2 * alpha2 - h4 / 12 * f(b, alpha2);

    const double d = h4 * K / 2;
    auto A = fourth_difference_matrix(N);
    for (std::size_t i = 0; i < N; ++i) A[i][i] += d;
    const auto inv = dense_inverse(A);
    std::vector<double> G(N), rhs(N);
    for (std::size_t i = 0; i < N; ++i) {
        G[i] = g(a + static_cast<double>(i + 1) * h);
        rhs[i] = B[i] + d * G[i];
    }
    const auto c = matvec(inv, rhs);
    std::vector<double> W(N, 0.0), absgap(N);
    double prev_step = INFINITY;
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < N; ++i) absgap[i] = std::abs(W[i] - G[i]);
        const auto corr = matvec(inv, absgap);
        double step = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double next = c[i] - d * corr[i];
            step = std::max(step, std::abs(next - W[i]));
            W[i] = next;
        }
        if (step < stop || (step >= prev_step && step < 1e3 * stop)) break;
        prev_step = step;
    }
    return W;
}

/// int_a^b Gt(x,t) Gt(t,s) dt by the composite trapezoid rule with m panels.
inline double green_trapezoid(double a, double b, double x, double s, std::size_t m) {
    auto gt = [&](double p, double q) {
        return q <= p ? -(b - p) * (q - a) / (b - a) : -(b - q) * (p - a) / (b - a);
    };
    const double h = (b - a) / static_cast<double>(m);
    double sum = 0.5 * (gt(x, a) * gt(a, s) + gt(x, b) * gt(b, s));
    for (std::size_t k = 1; k < m; ++k) {
        const double t = a + static_cast<double>(k) * h;
        sum += gt(x, t) * gt(t, s);
    }
    return sum * h;
}

}  // namespace oracle
