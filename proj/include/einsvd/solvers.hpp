#pragma once

#include "einsvd/ritz.hpp"

namespace einsvd {

/// How a pipeline obtains singular triplets.
///   exact — dense decomposition of the unfolding (reference quality, capped size)
///   lb    — one bidiagonalization pass of m steps, no restarts
///   ritz  — restarted bidiagonalization until the residual estimates converge
enum class Method { exact, lb, ritz };

[[nodiscard]] const char* method_name(Method m);
[[nodiscard]] Method parse_method(const std::string& name);

/// Knobs shared by the iterative methods; `exact` ignores everything but
/// the size cap it inherits from the dense decomposition.
struct SolverParams {
    std::size_t m = 15;
    double epsilon = 1e-8;
    std::size_t max_restarts = 1000;
    std::uint64_t seed = 42;
    Target target = Target::largest;
    std::size_t threads = 1;
};

struct SolveSummary {
    std::vector<SingularTriplet> triplets;
    std::size_t iterations = 0;  // factorization cycles (0 for exact, 1 for lb)
    bool converged = true;
};

/// k extremal singular triplets of a split tensor by the chosen method.
/// `lb` requires k <= m, `ritz` requires k < m; both draw their start
/// direction from params.seed.  For target == smallest only `exact` and
/// `ritz` are meaningful (a single pass has no way to settle the low end),
/// and `lb` is rejected.
[[nodiscard]] SolveSummary top_triplets(const SplitTensor& a, std::size_t k, Method method,
                                        const SolverParams& params);

} // namespace einsvd
