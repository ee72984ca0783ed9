#include "einsvd/solvers.hpp"

#include <algorithm>

namespace einsvd {

const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::lb: return "lb";
        case Method::ritz: return "ritz";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "exact") return Method::exact;
    if (name == "lb") return Method::lb;
    if (name == "ritz") return Method::ritz;
    throw precondition_error("unknown method '" + name + "' (expected exact, lb, or ritz)");
}

SolveSummary top_triplets(const SplitTensor& a, std::size_t k, Method method,
                          const SolverParams& params) {
    if (k < 1)
        throw precondition_error("top_triplets: k must be at least 1");
    SolveSummary out;
    switch (method) {
        case Method::exact: {
            if (params.target == Target::largest) {
                out.triplets = exact_top_triplets(a, k);
            } else {
                const SmallSvd m = svd(a.unfold());
                if (k > m.s.size())
                    throw precondition_error("top_triplets: k exceeds min dimension");
                const Shape rs = a.row_shape(), cs = a.col_shape();
                out.triplets.resize(k);
                for (std::size_t i = 0; i < k; ++i) {
                    const std::size_t col = m.s.size() - k + i;
                    out.triplets[i].value = m.s[col];
                    out.triplets[i].left = DenseTensor(
                        rs, std::vector<double>(m.u.col(col).begin(), m.u.col(col).end()));
                    out.triplets[i].right = DenseTensor(
                        cs, std::vector<double>(m.v.col(col).begin(), m.v.col(col).end()));
                }
            }
            out.iterations = 0;
            out.converged = true;
            break;
        }
        case Method::lb: {
            if (params.target != Target::largest)
                throw precondition_error("top_triplets: method lb only tracks the largest "
                                         "triplets; use ritz or exact for the smallest");
            EinsteinOperator op(a, params.threads);
            const DenseTensor p1 = random_start(op.col_shape(), params.seed);
            out.triplets = aelb(op, p1, params.m, k, params.epsilon);
            out.iterations = 1;
            out.converged = std::all_of(out.triplets.begin(), out.triplets.end(),
                                        [](const SingularTriplet& t) { return t.converged; });
            break;
        }
        case Method::ritz: {
            RestartConfig cfg;
            cfg.m = params.m;
            cfg.k = k;
            cfg.epsilon = params.epsilon;
            cfg.max_restarts = params.max_restarts;
            cfg.target = params.target;
            cfg.seed = params.seed;
            cfg.threads = params.threads;
            LbrResult r = lbr(a, cfg);
            out.triplets = std::move(r.triplets);
            out.iterations = r.report.iterations;
            out.converged = r.report.converged;
            break;
        }
    }
    return out;
}

} // namespace einsvd
