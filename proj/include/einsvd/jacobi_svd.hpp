#pragma once

#include <vector>

#include "einsvd/dense_matrix.hpp"

namespace einsvd {

/// Result of a dense singular value decomposition A = U diag(s) V^T.
/// s holds min(rows, cols) values in non-increasing order.  With thin == true
/// (the default for svd()), u is rows x min and v is cols x min; a full
/// decomposition pads u and v to square orthogonal matrices whose extra
/// columns complete the respective bases.
struct SmallSvd {
    DenseMatrix u;
    std::vector<double> s;
    DenseMatrix v;
};

/// Singular value decomposition by the one-sided Jacobi method: cyclic sweeps
/// of plane rotations orthogonalize the columns of the (possibly transposed)
/// input, the surviving column norms are the singular values.
///
/// Deterministic by construction: fixed (p, q) sweep order, fixed rotation
/// formulas, descending sort with ties broken by original position, and a
/// sign convention that makes the first nonzero entry of every left singular
/// vector nonnegative.
///
/// A sweep rotates only pairs with |<wp,wq>| > 1e-15 * ||wp|| * ||wq|| and the
/// iteration stops once a sweep performs no rotation.  More than 60 sweeps
/// raises numerical_error (in practice well under 20 are needed).
///
/// With full == true the factors are completed to square orthogonal matrices.
[[nodiscard]] SmallSvd svd(const DenseMatrix& a, bool full = false);

} // namespace einsvd
