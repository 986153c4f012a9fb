#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levyexit {

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    /// Max absolute row sum.
    [[nodiscard]] double norm_inf() const;
    /// Max absolute column sum.
    [[nodiscard]] double norm_one() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);
double norm_inf(std::span<const double> v);

/// LU factorization with partial (row) pivoting, PA = LU.
///
/// Throws NumericalError when a pivot is numerically zero relative to the
/// largest matrix entry; the message carries the column and pivot value.
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix a);

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;
    [[nodiscard]] std::vector<double> solve_transpose(std::span<const double> b) const;

    [[nodiscard]] std::size_t size() const { return lu_.rows(); }
    [[nodiscard]] double min_abs_pivot() const { return min_pivot_; }
    [[nodiscard]] double max_abs_pivot() const { return max_pivot_; }

    /// Hager/Higham estimate of ||A^{-1}||_1 (a lower bound, usually tight).
    [[nodiscard]] double inverse_norm_one_estimate() const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;  // row i of PA is row perm_[i] of A
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;
};

}  // namespace levyexit
