#include "levyexit/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "levyexit/errors.hpp"
#include "levyexit/kernels.hpp"

namespace levyexit {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double DenseMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (double v : row(i)) s += std::abs(v);
        best = std::max(best, s);
    }
    return best;
}

double DenseMatrix::norm_one() const {
    std::vector<double> col(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto r = row(i);
        for (std::size_t j = 0; j < cols_; ++j) col[j] += std::abs(r[j]);
    }
    return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
    std::vector<double> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::dot(a.row(i), x);
    return y;
}

double norm_inf(std::span<const double> v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    if (n != lu_.cols()) throw ValidationError("LuFactorization: matrix must be square");
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    double scale = 0.0;
    for (double v : lu_.data()) {
        if (!std::isfinite(v)) throw NumericalError("LuFactorization: matrix has non-finite entries");
        scale = std::max(scale, std::abs(v));
    }
    const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
    min_pivot_ = std::numeric_limits<double>::infinity();
    max_pivot_ = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (!(best > tiny)) {
            std::ostringstream msg;
            msg << "LuFactorization: matrix is numerically singular; pivot " << best
                << " in column " << k << " of " << n << " (threshold " << tiny << ")";
            throw NumericalError(msg.str());
        }
        min_pivot_ = std::min(min_pivot_, best);
        max_pivot_ = std::max(max_pivot_, best);
        if (piv != k) {
            std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
            std::swap(perm_[k], perm_[piv]);
        }
        const double pivot = lu_(k, k);
        const auto pivot_tail = lu_.row(k).subspan(k + 1);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu_(i, k) / pivot;
            lu_(i, k) = l;
            if (l != 0.0) kernels::axpy(-l, pivot_tail, lu_.row(i).subspan(k + 1));
        }
    }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = lu_.row(i);
        y[i] = b[perm_[i]] - kernels::dot(r.first(i), std::span<const double>(y).first(i));
    }
    for (std::size_t ii = n; ii-- > 0;) {
        const auto r = lu_.row(ii);
        const double s = kernels::dot(r.subspan(ii + 1), std::span<const double>(y).subspan(ii + 1));
        y[ii] = (y[ii] - s) / r[ii];
    }
    return y;
}

std::vector<double> LuFactorization::solve_transpose(std::span<const double> b) const {
    // A^T x = b  <=>  U^T L^T P x = b.
    const std::size_t n = size();
    std::vector<double> z(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        z[i] /= lu_(i, i);
        const double zi = z[i];
        for (std::size_t j = i + 1; j < n; ++j) z[j] -= lu_(i, j) * zi;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        const double zi = z[ii];
        for (std::size_t j = 0; j < ii; ++j) z[j] -= lu_(ii, j) * zi;
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = z[i];
    return x;
}

double LuFactorization::inverse_norm_one_estimate() const {
    const std::size_t n = size();
    if (n == 0) return 0.0;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double estimate = 0.0;
    std::size_t last = n;
    for (int iter = 0; iter < 5; ++iter) {
        const auto y = solve(x);
        estimate = 0.0;
        for (double v : y) estimate += std::abs(v);
        std::vector<double> sgn(n);
        for (std::size_t i = 0; i < n; ++i) sgn[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        const auto z = solve_transpose(sgn);
        std::size_t jmax = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(z[i]) > std::abs(z[jmax])) jmax = i;
        }
        double ztx = 0.0;
        for (std::size_t i = 0; i < n; ++i) ztx += z[i] * x[i];
        if (std::abs(z[jmax]) <= ztx || jmax == last) break;
        std::fill(x.begin(), x.end(), 0.0);
        x[jmax] = 1.0;
        last = jmax;
    }
    return estimate;
}

}  // namespace levyexit
