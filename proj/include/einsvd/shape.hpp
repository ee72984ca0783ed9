#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "einsvd/errors.hpp"

namespace einsvd {

/// Extent list of a dense tensor.  Order = number of modes; every extent is >= 1.
///
/// Multi-indices and mode numbers in the public interface are 1-based
/// throughout the library.  Internally elements are linearized
/// first-index-fastest: flat = (i1-1) + I1*(i2-1) + I1*I2*(i3-1) + ...,
/// the column-major layout generalized to arbitrary order.
class Shape {
public:
    Shape() = default;

    Shape(std::initializer_list<std::size_t> extents)
        : extents_(extents) { validate(); }

    explicit Shape(std::vector<std::size_t> extents)
        : extents_(std::move(extents)) { validate(); }

    [[nodiscard]] std::size_t order() const { return extents_.size(); }

    /// Extent of mode n (1-based).
    [[nodiscard]] std::size_t extent(std::size_t n) const {
        if (n < 1 || n > extents_.size())
            throw index_error("Shape::extent: mode " + std::to_string(n) +
                              " out of range for order " + std::to_string(extents_.size()));
        return extents_[n - 1];
    }

    [[nodiscard]] const std::vector<std::size_t>& extents() const { return extents_; }

    /// Total number of elements (product of extents; 1 for order 0).
    [[nodiscard]] std::size_t element_count() const {
        std::size_t n = 1;
        for (std::size_t e : extents_) n *= e;
        return n;
    }

    /// Flat offset of a 1-based multi-index, first index fastest.
    [[nodiscard]] std::size_t linear_index(std::span<const std::size_t> index) const {
        if (index.size() != extents_.size())
            throw index_error("Shape::linear_index: index of length " +
                              std::to_string(index.size()) + " for order " +
                              std::to_string(extents_.size()));
        std::size_t flat = 0;
        std::size_t stride = 1;
        for (std::size_t k = 0; k < extents_.size(); ++k) {
            if (index[k] < 1 || index[k] > extents_[k])
                throw index_error("Shape::linear_index: index " + std::to_string(index[k]) +
                                  " out of range [1, " + std::to_string(extents_[k]) +
                                  "] in mode " + std::to_string(k + 1));
            flat += (index[k] - 1) * stride;
            stride *= extents_[k];
        }
        return flat;
    }

    /// Shape formed by the modes [first, first+count) (1-based, inclusive start).
    [[nodiscard]] Shape sub(std::size_t first, std::size_t count) const {
        if (count > extents_.size() || first < 1 || first + count - 1 > extents_.size())
            throw index_error("Shape::sub: mode range out of bounds");
        return Shape(std::vector<std::size_t>(extents_.begin() + (first - 1),
                                              extents_.begin() + (first - 1) + count));
    }

    /// Concatenation: modes of *this followed by modes of other.
    [[nodiscard]] Shape concat(const Shape& other) const {
        std::vector<std::size_t> e = extents_;
        e.insert(e.end(), other.extents_.begin(), other.extents_.end());
        return Shape(std::move(e));
    }

    [[nodiscard]] std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < extents_.size(); ++k) {
            if (k) s += "x";
            s += std::to_string(extents_[k]);
        }
        return s.empty() ? "(scalar)" : s;
    }

    friend bool operator==(const Shape& a, const Shape& b) { return a.extents_ == b.extents_; }
    friend bool operator!=(const Shape& a, const Shape& b) { return !(a == b); }

private:
    void validate() const {
        for (std::size_t e : extents_)
            if (e == 0) throw shape_error("Shape: zero extent is not allowed");
    }

    std::vector<std::size_t> extents_;
};

/// Partition of a tensor's modes into leading "row" modes and trailing
/// "column" modes.  A tensor of order N+M with split (N, M) behaves, under
/// the product used throughout this library, like a matrix whose rows are
/// indexed by the first N modes and whose columns by the last M.
struct ModeSplit {
    std::size_t row_order = 0;
    std::size_t col_order = 0;

    friend bool operator==(const ModeSplit& a, const ModeSplit& b) {
        return a.row_order == b.row_order && a.col_order == b.col_order;
    }
    friend bool operator!=(const ModeSplit& a, const ModeSplit& b) { return !(a == b); }
};

} // namespace einsvd
