#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace twostep::linalg {

/// Dense vector of finite doubles. Finiteness is checked on construction.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t n, double value = 0.0);
    explicit DenseVector(std::vector<double> entries);
    DenseVector(std::initializer_list<double> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    double& operator[](std::size_t i) noexcept { return entries_[i]; }
    double operator[](std::size_t i) const noexcept { return entries_[i]; }

    double* data() noexcept { return entries_.data(); }
    const double* data() const noexcept { return entries_.data(); }
    std::span<double> span() noexcept { return entries_; }
    std::span<const double> span() const noexcept { return entries_; }

    auto begin() noexcept { return entries_.begin(); }
    auto end() noexcept { return entries_.end(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    const std::vector<double>& entries() const noexcept { return entries_; }

    static DenseVector ones(std::size_t n) { return DenseVector(n, 1.0); }

    friend bool operator==(const DenseVector&, const DenseVector&) = default;

private:
    std::vector<double> entries_;
};

DenseVector operator+(const DenseVector& x, const DenseVector& y);
DenseVector operator-(const DenseVector& x, const DenseVector& y);
DenseVector operator*(double alpha, const DenseVector& x);

/// Row-major dense matrix of finite doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * cols_ + j];
    }

    std::span<double> row(std::size_t i) noexcept { return {entries_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {entries_.data() + i * cols_, cols_};
    }

    double* data() noexcept { return entries_.data(); }
    const double* data() const noexcept { return entries_.data(); }

    DenseVector column(std::size_t j) const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

DenseVector operator*(const DenseMatrix& a, const DenseVector& x);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// Packed P·A = L·U with unit lower L. Pivots are stored as the sequence of
/// row interchanges applied during elimination.
class LuFactorization {
public:
    std::size_t dimension() const noexcept { return n_; }
    const DenseMatrix& packed() const noexcept { return lu_; }
    const std::vector<std::size_t>& interchanges() const noexcept { return swaps_; }

    /// Row i of P·A is row permutation()[i] of A.
    std::vector<std::size_t> permutation() const;

private:
    friend LuFactorization lu_factor(const DenseMatrix& a);

    std::size_t n_ = 0;
    DenseMatrix lu_;
    std::vector<std::size_t> swaps_;
};

/// Relative pivot threshold: a pivot below this times ‖A‖∞ is rank loss.
inline constexpr double kSingularityThreshold = 1e-13;

LuFactorization lu_factor(const DenseMatrix& a);
DenseVector lu_solve(const LuFactorization& f, const DenseVector& b);
/// Solves every column of b with the same substitution code as the vector overload.
DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& b);

double inf_norm(std::span<const double> x) noexcept;
double inf_norm(const DenseVector& x) noexcept;
double inf_norm(const DenseMatrix& a) noexcept;

DenseVector hadamard(const DenseVector& x, const DenseVector& y);

}  // namespace twostep::linalg
