#pragma once

#include "einsvd/solvers.hpp"

namespace einsvd {

/// One truncation experiment: the rank-k recombination of a split tensor and
/// the fraction of its energy that was lost.
struct CompressionResult {
    SplitTensor approximation;
    std::size_t k = 0;
    double relative_error = 0.0;  // ||A - A_k||_F / ||A||_F (0 when ||A|| == 0)
    std::size_t iterations = 0;
    bool converged = true;
};

/// Approximate a with the k leading triplets obtained by the chosen method
/// and measure the error directly on the difference tensor.  k == 0 skips
/// the solver and yields the zero tensor (relative error 1 for nonzero a).
[[nodiscard]] CompressionResult compress(const SplitTensor& a, std::size_t k, Method method,
                                         const SolverParams& params);

} // namespace einsvd
