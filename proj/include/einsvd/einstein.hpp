#pragma once

#include <span>
#include <vector>

#include "einsvd/dense_tensor.hpp"
#include "einsvd/jacobi_svd.hpp"
#include "einsvd/tensor_ops.hpp"

namespace einsvd {

/// A dense tensor together with a partition of its modes into leading "row"
/// modes and trailing "column" modes.  The contraction product below treats
/// such a tensor exactly like the matrix obtained by split_unfold, which is
/// the bridge every algorithm in this library is built on:
///
///   unfold(a * b) == matmul(unfold(a), unfold(b))
class SplitTensor {
public:
    SplitTensor() = default;

    SplitTensor(DenseTensor tensor, std::size_t row_order)
        : tensor_(std::move(tensor)), split_{row_order, tensor_.order() - row_order} {
        if (row_order > tensor_.order())
            throw shape_error("SplitTensor: row order " + std::to_string(row_order) +
                              " exceeds tensor order " + std::to_string(tensor_.order()));
    }

    [[nodiscard]] const DenseTensor& tensor() const { return tensor_; }
    [[nodiscard]] DenseTensor& tensor() { return tensor_; }
    [[nodiscard]] const ModeSplit& split() const { return split_; }

    [[nodiscard]] Shape row_shape() const { return tensor_.shape().sub(1, split_.row_order); }
    [[nodiscard]] Shape col_shape() const {
        return tensor_.shape().sub(split_.row_order + 1, split_.col_order);
    }
    [[nodiscard]] std::size_t row_count() const { return row_shape().element_count(); }
    [[nodiscard]] std::size_t col_count() const { return col_shape().element_count(); }

    [[nodiscard]] DenseMatrix unfold() const { return split_unfold(tensor_, split_.row_order); }

private:
    DenseTensor tensor_;
    ModeSplit split_;
};

/// Contraction of the column modes of a against the row modes of b.
/// Requires a.col_shape() == b.row_shape(); the result carries a's row modes
/// followed by b's column modes.
[[nodiscard]] SplitTensor einstein_product(const SplitTensor& a, const SplitTensor& b);

/// Contract all column modes of a against a tensor shaped like a.col_shape();
/// returns a tensor shaped like a.row_shape().  This is the matrix-vector
/// case of the product and the workhorse of the iterative solvers — it runs
/// directly on the flat buffers without forming any unfolding.
[[nodiscard]] DenseTensor apply(const SplitTensor& a, const DenseTensor& x);

/// Generalized transpose: swaps the row-mode and column-mode blocks, so
/// unfold(transpose(a)) == unfold(a)^T.
[[nodiscard]] SplitTensor transpose(const SplitTensor& a);

/// Identity element for the contraction product over the given mode block:
/// shape (modes, modes), unfolding the identity matrix.
[[nodiscard]] SplitTensor identity_tensor(const Shape& modes);

/// Diagonal tensor in the definitional sense: entry (i, j) equals values[t]
/// when the first min(N, M) row and column indices agree (their multi-index,
/// enumerated first-index-fastest over the pairwise minimum extents, is t)
/// and every remaining index of the longer block equals 1; zero otherwise.
/// values must have one entry per diagonal slot.
[[nodiscard]] SplitTensor diagonal_tensor(const Shape& row_shape, const Shape& col_shape,
                                          std::span<const double> values);

/// One singular triplet (s, u, v) of a split tensor: a * v == s * u and
/// transpose(a) * u == s * v.  Iterative solvers additionally record the
/// residual estimate that backed the convergence decision.
struct SingularTriplet {
    double value = 0.0;
    DenseTensor left;    // shaped like the row-mode block
    DenseTensor right;   // shaped like the column-mode block
    double residual_estimate = 0.0;
    bool converged = true;
};

/// Full decomposition a = u * s_diag * transpose(v) with square orthogonal
/// factors u (row modes x row modes) and v (column modes x column modes).
/// s holds min(row_count, col_count) values in non-increasing order.
struct EinsteinSvd {
    SplitTensor u;
    std::vector<double> s;
    SplitTensor v;
};

/// Dense exact decomposition via the unfolding.  This is the reference
/// oracle: it materializes both square factors, so it is capped at
/// max(rows, cols) <= 4096 and rows*cols <= 2^24 elements; larger inputs
/// raise capacity_error.
[[nodiscard]] EinsteinSvd exact_einstein_svd(const SplitTensor& a);

/// All min(rows, cols) singular values, descending, without forming the
/// square factors.  Capped at rows*cols <= 2^24.
[[nodiscard]] std::vector<double> exact_singular_values(const SplitTensor& a);

/// First k singular triplets from the dense decomposition (thin factors
/// only).  Capped at rows*cols <= 2^24.
[[nodiscard]] std::vector<SingularTriplet> exact_top_triplets(const SplitTensor& a,
                                                              std::size_t k);

/// The diagonal middle factor of the decomposition materialized as a split
/// tensor shaped (row modes, col modes): the fold of the rectangular
/// diagonal matrix diag(s).  Consistent with the unfolding isomorphism for
/// every shape; coincides with diagonal_tensor when the paired extents agree.
[[nodiscard]] SplitTensor materialize_s(const EinsteinSvd& d, const Shape& row_shape,
                                        const Shape& col_shape);

/// u * s_diag * transpose(v) recombined into one tensor.
[[nodiscard]] SplitTensor reconstruct(const EinsteinSvd& d);

/// Rank-k recombination sum_{i<k} s_i * outer(u_i, v_i) of the first k
/// triplets.  triplets must be nonempty (shapes are taken from the first
/// entry); k may be 0, giving the zero tensor.
[[nodiscard]] SplitTensor truncated_reconstruct(std::span<const SingularTriplet> triplets,
                                                std::size_t k);

} // namespace einsvd
