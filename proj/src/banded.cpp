#include "beamcontact/banded.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "beamcontact/errors.hpp"

namespace beamcontact {

BandedSPD::BandedSPD(std::vector<double> diag, std::vector<double> off1, std::vector<double> off2)
    : diag_(std::move(diag)),
      off1_(std::move(off1)),
      off2_(std::move(off2)),
      factor_(std::make_shared<Factor>()) {
    const std::size_t n = diag_.size();
    if (n == 0) {
        throw UsageError("BandedSPD: empty matrix");
    }
    if (off1_.size() != (n > 0 ? n - 1 : 0) || off2_.size() != (n > 1 ? n - 2 : 0)) {
        throw UsageError("BandedSPD: band lengths must be N, N-1, N-2");
    }
}

std::span<const double> BandedSPD::band(int k) const {
    switch (std::abs(k)) {
        case 0: return diag_;
        case 1: return off1_;
        case 2: return off2_;
        default: throw UsageError("BandedSPD: band index outside [-2, 2]");
    }
}

double BandedSPD::at(std::size_t i, std::size_t j) const {
    const std::size_t lo = std::min(i, j);
    const std::size_t d = (i > j) ? i - j : j - i;
    if (i >= size() || j >= size()) {
        throw UsageError("BandedSPD: index out of range");
    }
    if (d > 2) {
        return 0.0;
    }
    return band(static_cast<int>(d))[lo];
}

std::vector<double> BandedSPD::dense() const {
    const std::size_t n = size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(n, i + 3); ++j) {
            out[i * n + j] = at(i, j);
        }
    }
    return out;
}

std::vector<double> BandedSPD::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) {
        throw UsageError("BandedSPD::multiply: length mismatch");
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag_[i] * x[i];
        if (i >= 1) s += off1_[i - 1] * x[i - 1];
        if (i >= 2) s += off2_[i - 2] * x[i - 2];
        if (i + 1 < n) s += off1_[i] * x[i + 1];
        if (i + 2 < n) s += off2_[i] * x[i + 2];
        y[i] = s;
    }
    return y;
}

double BandedSPD::norm_inf() const {
    const std::size_t n = size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::abs(diag_[i]);
        if (i >= 1) s += std::abs(off1_[i - 1]);
        if (i >= 2) s += std::abs(off2_[i - 2]);
        if (i + 1 < n) s += std::abs(off1_[i]);
        if (i + 2 < n) s += std::abs(off2_[i]);
        best = std::max(best, s);
    }
    return best;
}

BandedSPD BandedSPD::shifted(double sigma) const {
    auto diag = diag_;
    for (double& d : diag) {
        d += sigma;
    }
    return BandedSPD(std::move(diag), off1_, off2_);
}

void BandedSPD::compute_factor() const {
    const std::size_t n = size();
    auto& f = *factor_;
    std::vector<double> l0(n, 0.0), l1(n, 0.0), l2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2) {
            l2[i] = off2_[i - 2] / l0[i - 2];
        }
        if (i >= 1) {
            double s = off1_[i - 1];
            if (i >= 2) s -= l2[i] * l1[i - 1];
            l1[i] = s / l0[i - 1];
        }
        const double pivot = diag_[i] - l1[i] * l1[i] - l2[i] * l2[i];
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            throw NumericalError("banded Cholesky: non-positive pivot at row " + std::to_string(i),
                                 static_cast<std::ptrdiff_t>(i));
        }
        l0[i] = std::sqrt(pivot);
    }
    f.l0 = std::move(l0);
    f.l1 = std::move(l1);
    f.l2 = std::move(l2);
}

void BandedSPD::factorize() const {
    std::call_once(factor_->once, [this] { compute_factor(); });
}

std::vector<double> BandedSPD::solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) {
        throw UsageError("BandedSPD::solve: length mismatch");
    }
    factorize();
    const auto& f = *factor_;
    std::vector<double> y(rhs.begin(), rhs.end());
    // L z = rhs
    for (std::size_t i = 0; i < n; ++i) {
        double s = y[i];
        if (i >= 1) s -= f.l1[i] * y[i - 1];
        if (i >= 2) s -= f.l2[i] * y[i - 2];
        y[i] = s / f.l0[i];
    }
    // L^T y = z
    for (std::size_t k = n; k-- > 0;) {
        double s = y[k];
        if (k + 1 < n) s -= f.l1[k + 1] * y[k + 1];
        if (k + 2 < n) s -= f.l2[k + 2] * y[k + 2];
        y[k] = s / f.l0[k];
    }
    return y;
}

}  // namespace beamcontact
