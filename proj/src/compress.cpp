#include "einsvd/compress.hpp"

#include <cmath>

namespace einsvd {

CompressionResult compress(const SplitTensor& a, std::size_t k, Method method,
                           const SolverParams& params) {
    const double norm_a = frobenius_norm(a.tensor());

    CompressionResult out;
    out.k = k;
    if (k == 0) {
        out.approximation =
            SplitTensor(DenseTensor(a.tensor().shape()), a.split().row_order);
        out.relative_error = norm_a == 0.0 ? 0.0 : 1.0;
        return out;
    }

    SolveSummary solve = top_triplets(a, k, method, params);
    out.iterations = solve.iterations;
    out.converged = solve.converged;
    out.approximation = truncated_reconstruct(solve.triplets, k);

    DenseTensor diff = a.tensor();
    diff -= out.approximation.tensor();
    out.relative_error = norm_a == 0.0 ? 0.0 : frobenius_norm(diff) / norm_a;
    return out;
}

} // namespace einsvd
