#pragma once

#include <cstdint>

#include "einsvd/lanczos.hpp"

namespace einsvd {

/// Which end of the spectrum a restarted run tracks.
enum class Target { largest, smallest };

struct RestartConfig {
    std::size_t m = 15;             // factorization length per cycle
    std::size_t k = 4;              // number of triplets wanted (k < m)
    double epsilon = 1e-8;          // convergence: estimate <= epsilon * max(1, ||A||_F)
    std::size_t max_restarts = 1000;
    Target target = Target::largest;
    std::uint64_t seed = 42;        // default start direction + breakdown bridging
    std::size_t threads = 1;
};

struct RestartReport {
    std::size_t iterations = 0;     // factorization cycles consumed (>= 1)
    bool converged = false;
    std::vector<double> residual_estimates;  // one per returned triplet
    double gres = 0.0;              // stacked forward-residual norm
};

struct LbrResult {
    std::vector<SingularTriplet> triplets;   // non-increasing by value
    RestartReport report;
};

/// The compressed state a restart continues from: k kept Ritz triplets plus
/// one fresh direction per side.  p and q hold k+1 orthonormal slices (the
/// kept right/left tensors and the new directions last); b is the (k+1) x
/// (k+1) projected matrix with the kept values on the diagonal, the coupling
/// coefficients of the new left direction in the last column, and the
/// orthogonalization remainder in the corner.  The forward relation
/// A * p_j == sum_i b(i, j) * q_i holds for every slice.
struct AugmentedState {
    TensorStack p;
    TensorStack q;
    DenseMatrix b;
};

/// Compress a completed factorization to the kept Ritz triplets: the
/// normalized residual joins the p stack, its image under A is
/// orthogonalized against the kept left tensors to produce the new q slice,
/// and the recorded coefficients fill the spike column of b.  Requires a
/// nonzero closing residual (beta > 0) — a closed factorization is already
/// exact and has nothing to restart.
[[nodiscard]] AugmentedState build_augmented(const EinsteinOperator& op,
                                             const LanczosFactorization& f,
                                             std::span<const SingularTriplet> kept);

/// Resume the alternating iteration from an augmented state until the
/// factorization again has m slices per side.  The projected matrix stays
/// upper triangular: kept values and new diagonal entries, one spike column
/// from the augmentation, and the usual superdiagonal beyond it.
[[nodiscard]] LanczosFactorization extend_to_m(const EinsteinOperator& op,
                                               const AugmentedState& aug, std::size_t m,
                                               std::uint64_t deflation_seed);

/// Restarted bidiagonalization for the k extremal singular triplets: run m
/// steps, lift the k tracked Ritz triplets, and while any residual estimate
/// exceeds epsilon * max(1, ||A||_F) compress to the augmented state and
/// extend back to m slices.  Tracking follows cfg.target: the top k columns
/// of the projected SVD or the bottom k.
///
/// Stops after cfg.max_restarts cycles regardless; report.converged records
/// which way it ended and report.iterations how many cycles ran.  Overloads
/// without p1 draw the start direction from cfg.seed.
[[nodiscard]] LbrResult lbr(const EinsteinOperator& op, const DenseTensor& p1,
                            const RestartConfig& cfg);
[[nodiscard]] LbrResult lbr(const SplitTensor& a, const DenseTensor& p1,
                            const RestartConfig& cfg);
[[nodiscard]] LbrResult lbr(const SplitTensor& a, const RestartConfig& cfg);

/// Unit-norm pseudorandom start direction for the given mode block, filled
/// from the seeded generator and normalized.
[[nodiscard]] DenseTensor random_start(const Shape& shape, std::uint64_t seed);

} // namespace einsvd
