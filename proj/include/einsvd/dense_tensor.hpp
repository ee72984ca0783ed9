#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "einsvd/shape.hpp"

namespace einsvd {

/// Dense real tensor of arbitrary order.  Elements are stored contiguously,
/// first index fastest (see Shape for the exact linearization).  Public
/// element access is 1-based.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero tensor of the given shape.
    explicit DenseTensor(Shape shape)
        : shape_(std::move(shape)), data_(shape_.element_count(), 0.0) {}

    /// Tensor with the given flat contents (first-index-fastest order).
    DenseTensor(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != shape_.element_count())
            throw shape_error("DenseTensor: data length " + std::to_string(data_.size()) +
                              " does not match shape " + shape_.to_string());
    }

    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] std::size_t order() const { return shape_.order(); }
    [[nodiscard]] std::size_t element_count() const { return data_.size(); }

    [[nodiscard]] double& at(std::span<const std::size_t> index) {
        return data_[shape_.linear_index(index)];
    }
    [[nodiscard]] double at(std::span<const std::size_t> index) const {
        return data_[shape_.linear_index(index)];
    }
    [[nodiscard]] double& at(std::initializer_list<std::size_t> index) {
        return data_[shape_.linear_index(std::span<const std::size_t>(index.begin(), index.size()))];
    }
    [[nodiscard]] double at(std::initializer_list<std::size_t> index) const {
        return data_[shape_.linear_index(std::span<const std::size_t>(index.begin(), index.size()))];
    }

    [[nodiscard]] std::span<double> data() { return data_; }
    [[nodiscard]] std::span<const double> data() const { return data_; }

    /// View of the same buffer under a different shape with identical element
    /// count.  The flat order is untouched, so this is the order-generalized
    /// "reshape" and costs one copy of the metadata only.
    [[nodiscard]] DenseTensor reshaped(Shape shape) const {
        if (shape.element_count() != data_.size())
            throw shape_error("DenseTensor::reshaped: element count mismatch (" +
                              shape_.to_string() + " -> " + shape.to_string() + ")");
        return DenseTensor(std::move(shape), data_);
    }

    // --- in-place arithmetic -------------------------------------------------

    DenseTensor& operator*=(double c) {
        for (double& x : data_) x *= c;
        return *this;
    }

    /// this += c * other (shapes must match).
    DenseTensor& add_scaled(const DenseTensor& other, double c) {
        require_same_shape(other, "add_scaled");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += c * other.data_[i];
        return *this;
    }

    DenseTensor& operator+=(const DenseTensor& other) { return add_scaled(other, 1.0); }
    DenseTensor& operator-=(const DenseTensor& other) { return add_scaled(other, -1.0); }

private:
    void require_same_shape(const DenseTensor& other, const char* op) const {
        if (shape_ != other.shape_)
            throw shape_error(std::string("DenseTensor::") + op + ": shape mismatch " +
                              shape_.to_string() + " vs " + other.shape_.to_string());
    }

    Shape shape_;
    std::vector<double> data_;
};

/// Euclidean inner product of two tensors with identical shape.
[[nodiscard]] inline double inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape())
        throw shape_error("inner: shape mismatch " + a.shape().to_string() +
                          " vs " + b.shape().to_string());
    double s = 0.0;
    std::span<const double> x = a.data(), y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

/// Frobenius norm, sqrt of the sum of squared entries.
[[nodiscard]] inline double frobenius_norm(const DenseTensor& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

/// Ordered collection of equally shaped tensors stored contiguously; the
/// stacking dimension acts as one extra trailing mode.  Used for the basis
/// stacks grown by the bidiagonalization iteration.  Slices are 1-based.
class TensorStack {
public:
    TensorStack() = default;

    explicit TensorStack(Shape slice_shape)
        : slice_shape_(std::move(slice_shape)),
          slice_elems_(slice_shape_.element_count()) {}

    [[nodiscard]] const Shape& slice_shape() const { return slice_shape_; }
    [[nodiscard]] std::size_t size() const { return count_; }
    [[nodiscard]] bool empty() const { return count_ == 0; }

    void push(const DenseTensor& t) {
        if (t.shape() != slice_shape_)
            throw shape_error("TensorStack::push: slice shape " + t.shape().to_string() +
                              " does not match stack slice shape " + slice_shape_.to_string());
        data_.insert(data_.end(), t.data().begin(), t.data().end());
        ++count_;
    }

    /// Drop all slices after the first n.
    void truncate(std::size_t n) {
        if (n > count_)
            throw index_error("TensorStack::truncate: " + std::to_string(n) +
                              " exceeds current size " + std::to_string(count_));
        count_ = n;
        data_.resize(n * slice_elems_);
    }

    /// Copy of slice i (1-based).
    [[nodiscard]] DenseTensor slice(std::size_t i) const {
        check_slice(i);
        const double* p = data_.data() + (i - 1) * slice_elems_;
        return DenseTensor(slice_shape_, std::vector<double>(p, p + slice_elems_));
    }

    [[nodiscard]] std::span<const double> slice_data(std::size_t i) const {
        check_slice(i);
        return {data_.data() + (i - 1) * slice_elems_, slice_elems_};
    }
    [[nodiscard]] std::span<double> slice_data(std::size_t i) {
        check_slice(i);
        return {data_.data() + (i - 1) * slice_elems_, slice_elems_};
    }

    /// Linear combination sum_i coeffs[i] * slice_i.  The number of
    /// coefficients must equal size().
    [[nodiscard]] DenseTensor combine(std::span<const double> coeffs) const {
        if (coeffs.size() != count_)
            throw shape_error("TensorStack::combine: " + std::to_string(coeffs.size()) +
                              " coefficients for " + std::to_string(count_) + " slices");
        DenseTensor out(slice_shape_);
        std::span<double> o = out.data();
        for (std::size_t i = 0; i < count_; ++i) {
            const double c = coeffs[i];
            const double* p = data_.data() + i * slice_elems_;
            for (std::size_t e = 0; e < slice_elems_; ++e) o[e] += c * p[e];
        }
        return out;
    }

    /// Contraction along the stacking mode with a matrix given in row-major
    /// logical terms: result has u_rows slices, slice_j = sum_i u(j,i)*slice_i.
    /// Equivalent to the mode-(d+1) product of the stacked order-(d+1) tensor
    /// with the matrix u.  `u` is passed as a flat span with element (j,i) at
    /// u[(j-1) + u_rows*(i-1)] (column-major), matching DenseMatrix storage.
    [[nodiscard]] TensorStack mode_product(std::span<const double> u, std::size_t u_rows) const {
        if (u.size() != u_rows * count_)
            throw shape_error("TensorStack::mode_product: matrix has " +
                              std::to_string(u.size()) + " entries, expected " +
                              std::to_string(u_rows) + "x" + std::to_string(count_));
        TensorStack out(slice_shape_);
        out.data_.assign(u_rows * slice_elems_, 0.0);
        out.count_ = u_rows;
        for (std::size_t i = 0; i < count_; ++i) {
            const double* p = data_.data() + i * slice_elems_;
            for (std::size_t j = 0; j < u_rows; ++j) {
                const double c = u[j + u_rows * i];
                double* o = out.data_.data() + j * slice_elems_;
                for (std::size_t e = 0; e < slice_elems_; ++e) o[e] += c * p[e];
            }
        }
        return out;
    }

    /// The stack as a single tensor of order d+1 whose last mode is the
    /// stacking index.  Contiguous storage makes this a metadata change.
    [[nodiscard]] DenseTensor to_tensor() const {
        if (count_ == 0)
            throw precondition_error("TensorStack::to_tensor: empty stack");
        return DenseTensor(slice_shape_.concat(Shape{count_}), data_);
    }

    [[nodiscard]] std::span<const double> data() const { return data_; }

private:
    void check_slice(std::size_t i) const {
        if (i < 1 || i > count_)
            throw index_error("TensorStack: slice " + std::to_string(i) +
                              " out of range [1, " + std::to_string(count_) + "]");
    }

    Shape slice_shape_;
    std::size_t slice_elems_ = 0;
    std::size_t count_ = 0;
    std::vector<double> data_;
};

} // namespace einsvd
