#include "twostep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <cblas.h>
#include <lapacke.h>

#include "twostep/errors.hpp"

namespace twostep::linalg {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " +
                                std::to_string(b));
    }
}

}  // namespace

DenseVector::DenseVector(std::size_t n, double value) : entries_(n, value) {
    require_finite(std::span<const double>(&value, 1), "DenseVector");
}

DenseVector::DenseVector(std::vector<double> entries) : entries_(std::move(entries)) {
    require_finite(entries_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> entries) : entries_(entries) {
    require_finite(entries_, "DenseVector");
}

DenseVector operator+(const DenseVector& x, const DenseVector& y) {
    require_same_size(x.size(), y.size(), "vector +");
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
    return out;
}

DenseVector operator-(const DenseVector& x, const DenseVector& y) {
    require_same_size(x.size(), y.size(), "vector -");
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

DenseVector operator*(double alpha, const DenseVector& x) {
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i];
    return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), entries_(rows * cols, value) {
    require_finite(std::span<const double>(&value, 1), "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
    require_same_size(entries_.size(), rows * cols, "DenseMatrix storage");
    require_finite(entries_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require_same_size(r.size(), cols_, "DenseMatrix row");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    require_finite(entries_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseVector DenseMatrix::column(std::size_t j) const {
    DenseVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

DenseVector operator*(const DenseMatrix& a, const DenseVector& x) {
    require_same_size(a.cols(), x.size(), "matrix-vector product");
    DenseVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) sum += r[j] * x[j];
        out[i] = sum;
    }
    return out;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_size(a.cols(), b.rows(), "matrix product");
    DenseMatrix out(a.rows(), b.cols());
    if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return out;
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(b.cols()), static_cast<int>(a.cols()), 1.0, a.data(),
                static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), 0.0,
                out.data(), static_cast<int>(out.cols()));
    return out;
}

std::vector<std::size_t> LuFactorization::permutation() const {
    std::vector<std::size_t> perm(n_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_; ++i) std::swap(perm[i], perm[swaps_[i]]);
    return perm;
}

LuFactorization lu_factor(const DenseMatrix& a) {
    if (!a.square()) {
        throw DimensionMismatch("lu_factor: matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
    }
    const std::size_t n = a.rows();
    const double threshold = kSingularityThreshold * inf_norm(a);

    LuFactorization f;
    f.n_ = n;
    f.lu_ = a;
    f.swaps_.resize(n);
    if (n == 0) return f;

    std::vector<lapack_int> ipiv(n);
    const lapack_int info =
        LAPACKE_dgetrf(LAPACK_ROW_MAJOR, static_cast<lapack_int>(n), static_cast<lapack_int>(n),
                       f.lu_.data(), static_cast<lapack_int>(n), ipiv.data());
    if (info < 0) throw Error("lu_factor: dgetrf rejected argument " + std::to_string(-info));

    for (std::size_t i = 0; i < n; ++i) {
        f.swaps_[i] = static_cast<std::size_t>(ipiv[i] - 1);
        const double pivot = f.lu_(i, i);
        if (pivot == 0.0 || std::abs(pivot) < threshold) {
            throw SingularMatrix(i, pivot, threshold);
        }
    }
    return f;
}

namespace {

// In-place P·b, then L·y = P·b, then U·x = y.
void substitute(const LuFactorization& f, std::span<double> x) {
    const std::size_t n = f.dimension();
    const DenseMatrix& lu = f.packed();
    const auto& swaps = f.interchanges();
    for (std::size_t i = 0; i < n; ++i) {
        if (swaps[i] != i) std::swap(x[i], x[swaps[i]]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = lu.row(i);
        double sum = x[i];
        for (std::size_t j = 0; j < i; ++j) sum -= r[j] * x[j];
        x[i] = sum;
    }
    for (std::size_t i = n; i-- > 0;) {
        const auto r = lu.row(i);
        double sum = x[i];
        for (std::size_t j = i + 1; j < n; ++j) sum -= r[j] * x[j];
        x[i] = sum / r[i];
    }
}

}  // namespace

DenseVector lu_solve(const LuFactorization& f, const DenseVector& b) {
    require_same_size(f.dimension(), b.size(), "lu_solve");
    DenseVector x = b;
    substitute(f, x.span());
    return x;
}

DenseMatrix lu_solve(const LuFactorization& f, const DenseMatrix& b) {
    require_same_size(f.dimension(), b.rows(), "lu_solve");
    DenseMatrix x(b.rows(), b.cols());
    std::vector<double> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        substitute(f, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
    }
    return x;
}

double inf_norm(std::span<const double> x) noexcept {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double inf_norm(const DenseVector& x) noexcept { return inf_norm(x.span()); }

double inf_norm(const DenseMatrix& a) noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (double v : a.row(i)) sum += std::abs(v);
        m = std::max(m, sum);
    }
    return m;
}

DenseVector hadamard(const DenseVector& x, const DenseVector& y) {
    require_same_size(x.size(), y.size(), "hadamard");
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
    return out;
}

}  // namespace twostep::linalg
