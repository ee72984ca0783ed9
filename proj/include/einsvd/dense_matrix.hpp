#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "einsvd/errors.hpp"

namespace einsvd {

/// Dense column-major matrix of doubles.  Element (i, j) is stored at
/// data[i + rows*j]; indices here are 0-based, unlike tensor multi-indices,
/// because matrices in this library are internal workhorses rather than part
/// of the multi-index interface.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw shape_error("DenseMatrix: data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }

    [[nodiscard]] static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return data_[i + rows_ * j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i + rows_ * j]; }

    [[nodiscard]] std::span<double> data() { return data_; }
    [[nodiscard]] std::span<const double> data() const { return data_; }

    [[nodiscard]] std::span<double> col(std::size_t j) { return {data_.data() + rows_ * j, rows_}; }
    [[nodiscard]] std::span<const double> col(std::size_t j) const {
        return {data_.data() + rows_ * j, rows_};
    }

    [[nodiscard]] DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t i = 0; i < rows_; ++i)
                t(j, i) = (*this)(i, j);
        return t;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// c = a * b.  Per output element the sum runs over the inner index in
/// ascending order, so results are bitwise reproducible across runs.
[[nodiscard]] inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw shape_error("matmul: inner dimensions disagree (" + std::to_string(a.cols()) +
                          " vs " + std::to_string(b.rows()) + ")");
    DenseMatrix c(a.rows(), b.cols());
    // j-k-i loop order: the innermost update is an axpy over a full column,
    // which keeps the per-element accumulation order fixed (k ascending) and
    // lets the compiler vectorize the contiguous column access.
    for (std::size_t j = 0; j < b.cols(); ++j) {
        double* cj = c.col(j).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            const double* ak = a.col(k).data();
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

} // namespace einsvd
