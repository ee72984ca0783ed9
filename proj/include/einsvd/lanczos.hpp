#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "einsvd/einstein.hpp"

namespace einsvd {

/// A split tensor paired with its transpose and cached norm, so the two
/// contraction directions used by the iterative solvers are one call each.
/// The optional thread count parallelizes the applies over disjoint output
/// ranges; results are bitwise identical for any thread count because every
/// output element always accumulates its terms in the same order.
class EinsteinOperator {
public:
    explicit EinsteinOperator(SplitTensor a, std::size_t threads = 1);

    [[nodiscard]] const SplitTensor& tensor() const { return a_; }
    [[nodiscard]] double norm() const { return norm_; }
    [[nodiscard]] Shape row_shape() const { return a_.row_shape(); }
    [[nodiscard]] Shape col_shape() const { return a_.col_shape(); }

    /// a * x for x shaped like the column modes.
    [[nodiscard]] DenseTensor forward(const DenseTensor& x) const;
    /// transpose(a) * y for y shaped like the row modes.
    [[nodiscard]] DenseTensor adjoint(const DenseTensor& y) const;

private:
    SplitTensor a_;
    SplitTensor at_;
    double norm_ = 0.0;
    std::size_t threads_ = 1;
};

/// Partial bidiagonalization of a split tensor A after `steps` iterations:
///
///   forward:  A * p_j   == sum_i b(i, j) * q_i                (all j)
///   adjoint:  A^T * q_j == sum_i b(j, i) * p_i  (+ residual when j == steps)
///
/// p holds `steps` orthonormal column-mode tensors, q `steps` orthonormal
/// row-mode tensors, and b is the steps x steps projected matrix — upper
/// bidiagonal after a plain run, upper triangular with one extra spike
/// column after a restart.  `residual` is the unnormalized next p direction
/// with norm `beta`; beta == 0 means the iteration closed an invariant
/// subspace and the factorization is exact.
struct LanczosFactorization {
    TensorStack p;
    TensorStack q;
    DenseMatrix b;
    DenseTensor residual;
    double beta = 0.0;
    bool deflated = false;  // a breakdown was bridged with a random direction

    [[nodiscard]] std::size_t steps() const { return q.size(); }
};

/// Run `m` bidiagonalization steps from the unit starting tensor p1 (shaped
/// like the column modes; its norm may deviate from 1 by at most 1e-8).
///
/// Every new direction is reorthogonalized against its full stack with two
/// classical Gram-Schmidt passes, which keeps the bases orthonormal to
/// machine precision at the cost of O(m) extra inner products per step.
/// An exact breakdown is bridged by a deterministic seeded random direction
/// (the corresponding b entry stays 0); if no orthogonal direction is left
/// the factorization is returned truncated with beta == 0.
///
/// Requires 1 <= m <= min(row_count, col_count).
[[nodiscard]] LanczosFactorization elb(const EinsteinOperator& op, const DenseTensor& p1,
                                       std::size_t m);
[[nodiscard]] LanczosFactorization elb(const SplitTensor& a, const DenseTensor& p1,
                                       std::size_t m);

/// Turn singular triplets of the small projected matrix into approximate
/// triplets of A.  Column `first + i` (0-based) of the projected SVD yields
/// triplet i: value s, right = combination of the p stack by the right
/// vector, left = combination of the q stack by the left vector.  The
/// residual estimate beta * |last entry of the left vector| equals the
/// adjoint residual norm of the lifted triplet and is compared against
/// `threshold` to set the converged flag.
[[nodiscard]] std::vector<SingularTriplet> lift_triplets(const LanczosFactorization& f,
                                                         const SmallSvd& bsvd, std::size_t count,
                                                         double threshold, std::size_t first = 0);

/// One-shot approximation of the k largest triplets: m bidiagonalization
/// steps, SVD of the projected matrix, lift of the top k columns.  Triplets
/// come back in non-increasing order with converged flags judged against
/// epsilon * max(1, ||A||_F).  Requires k <= m.
[[nodiscard]] std::vector<SingularTriplet> aelb(const EinsteinOperator& op,
                                                const DenseTensor& p1, std::size_t m,
                                                std::size_t k, double epsilon = 1e-8);
[[nodiscard]] std::vector<SingularTriplet> aelb(const SplitTensor& a, const DenseTensor& p1,
                                                std::size_t m, std::size_t k,
                                                double epsilon = 1e-8);

/// ||a * right - value * left||_F, the forward residual of a triplet.
[[nodiscard]] double res_norm(const SplitTensor& a, const SingularTriplet& t);
[[nodiscard]] double res_norm(const EinsteinOperator& op, const SingularTriplet& t);

/// ||transpose(a) * left - value * right||_F, the adjoint residual.
[[nodiscard]] double adjoint_res_norm(const SplitTensor& a, const SingularTriplet& t);
[[nodiscard]] double adjoint_res_norm(const EinsteinOperator& op, const SingularTriplet& t);

/// Frobenius norm of all forward residuals stacked together:
/// sqrt(sum_i res_norm(a, t_i)^2).
[[nodiscard]] double gres_norm(const SplitTensor& a, std::span<const SingularTriplet> ts);
[[nodiscard]] double gres_norm(const EinsteinOperator& op, std::span<const SingularTriplet> ts);

} // namespace einsvd
