#pragma once

// Shared machinery for the bidiagonalization iteration and its restarted
// extension.  Internal to the library; not installed.

#include <cstdint>
#include <utility>

#include "einsvd/lanczos.hpp"
#include "einsvd/prng.hpp"

namespace einsvd::detail {

/// Twice-iterated classical Gram-Schmidt: subtract from t its component along
/// every slice of the stack, in slice order, then repeat once to push the
/// remaining overlap down to machine noise.  Returns the total coefficient
/// accumulated per slice, so t_in == sum_i coeff[i] * slice_i + t_out.
std::vector<double> reorthogonalize(DenseTensor& t, const TensorStack& stack);

/// Grows the two orthonormal stacks and the projected matrix one direction at
/// a time, alternating sides.  Handles both the fresh start (one p slice, no
/// q) and the restarted start (k+1 preloaded slices per side with the small
/// projected matrix already filled in).
class FactorizationBuilder {
public:
    FactorizationBuilder(const EinsteinOperator& op, std::size_t m, std::uint64_t deflation_seed)
        : op_(op), m_(m), b_(m, m),
          p_(op.col_shape()), q_(op.row_shape()),
          deflate_tol_(1e-14 * op.norm()), rng_(deflation_seed) {}

    void push_p(const DenseTensor& p) { p_.push(p); }

    void preload(const TensorStack& p, const TensorStack& q, const DenseMatrix& b_corner);

    /// Alternate steps until q holds m slices (or no orthogonal direction is
    /// left), then close with the unnormalized residual.
    [[nodiscard]] LanczosFactorization run();

private:
    bool q_step();
    bool p_step();
    bool fresh_direction(DenseTensor& t, const TensorStack& stack, std::size_t space_dim);

    const EinsteinOperator& op_;
    std::size_t m_;
    DenseMatrix b_;
    TensorStack p_;
    TensorStack q_;
    double deflate_tol_;
    Xorshift64Star rng_;
    bool deflated_ = false;
    bool exhausted_ = false;
};

} // namespace einsvd::detail
