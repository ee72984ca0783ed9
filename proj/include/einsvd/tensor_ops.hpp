#pragma once

#include "einsvd/dense_matrix.hpp"
#include "einsvd/dense_tensor.hpp"

namespace einsvd {

/// Mode-n unfolding (1-based n).  Row r of the result enumerates index i_n;
/// column c enumerates the remaining indices with the lower-numbered modes
/// fastest, i.e. c = sum_{k<n} (i_k-1)*s_k + sum_{k>n} (i_k-1)*s_k/I_n where
/// s_k is the first-index-fastest stride of mode k.
[[nodiscard]] DenseMatrix matricize(const DenseTensor& t, std::size_t n);

/// Inverse of matricize: rebuild a tensor of the given shape from its mode-n
/// unfolding.  Matrix dimensions must be I_n x (element_count / I_n).
[[nodiscard]] DenseTensor fold(const DenseMatrix& m, std::size_t n, const Shape& shape);

/// Mode-n product: contract mode n of t with the columns of u.
/// Result extent in mode n is u.rows(); requires u.cols() == extent(n).
/// Satisfies matricize(result, n) == matmul(u, matricize(t, n)).
[[nodiscard]] DenseTensor n_mode_product(const DenseTensor& t, const DenseMatrix& u, std::size_t n);

/// Reinterpret an order-(N+M) tensor as a matrix: rows enumerate the first
/// row_order modes, columns the remaining ones, both first-index-fastest.
/// Because tensor storage is itself first-index-fastest, the flat data is
/// reused verbatim — no element moves.
[[nodiscard]] DenseMatrix split_unfold(const DenseTensor& t, std::size_t row_order);

/// Inverse of split_unfold: wrap a matrix as a tensor whose leading modes
/// form the rows and trailing modes the columns.
[[nodiscard]] DenseTensor split_fold(const DenseMatrix& m, const Shape& row_shape,
                                     const Shape& col_shape);

} // namespace einsvd
