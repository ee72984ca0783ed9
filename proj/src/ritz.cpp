#include "einsvd/ritz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lanczos_internal.hpp"

namespace einsvd {

namespace {

constexpr std::uint64_t kAugmentSeed = 0xA46E317BD1C85EEDULL;
constexpr std::uint64_t kCycleSeedStride = 0x9E3779B97F4A7C15ULL;

} // namespace

AugmentedState build_augmented(const EinsteinOperator& op, const LanczosFactorization& f,
                               std::span<const SingularTriplet> kept) {
    if (kept.empty())
        throw precondition_error("build_augmented: no triplets kept");
    if (f.beta <= 0.0)
        throw precondition_error("build_augmented: factorization has a zero closing residual; "
                                 "nothing to restart");
    const std::size_t k = kept.size();

    AugmentedState aug;
    aug.p = TensorStack(op.col_shape());
    aug.q = TensorStack(op.row_shape());
    for (const SingularTriplet& t : kept) {
        aug.p.push(t.right);
        aug.q.push(t.left);
    }

    // New right direction: the normalized closing residual.  It is orthogonal
    // to the whole p stack by construction, so to every kept combination as
    // well; one cleanup pass only scrubs roundoff.
    DenseTensor p_next = f.residual;
    p_next *= 1.0 / f.beta;
    detail::reorthogonalize(p_next, aug.p);
    const double pn = frobenius_norm(p_next);
    if (pn <= 0.0)
        throw numerical_error("build_augmented: residual direction vanished");
    p_next *= 1.0 / pn;
    aug.p.push(p_next);

    // New left direction: the image of p_next, orthogonalized against the
    // kept left tensors.  The collected coefficients couple the kept values
    // to the new direction and form the spike column of the projected matrix
    // (they equal beta times the last entries of the kept left vectors, up to
    // roundoff).
    DenseTensor w = op.forward(p_next);
    const std::vector<double> rho = detail::reorthogonalize(w, aug.q);
    double gamma = frobenius_norm(w);
    aug.b = DenseMatrix(k + 1, k + 1);
    for (std::size_t i = 0; i < k; ++i) {
        aug.b(i, i) = kept[i].value;
        aug.b(i, k) = rho[i];
    }
    if (gamma <= 1e-14 * op.norm()) {
        Xorshift64Star rng(kAugmentSeed);
        for (int attempt = 0; attempt < 8; ++attempt) {
            w = normal_tensor(op.row_shape(), rng);
            detail::reorthogonalize(w, aug.q);
            const double n = frobenius_norm(w);
            if (n > 1e-3) { w *= 1.0 / n; break; }
        }
        gamma = 0.0;
    } else {
        w *= 1.0 / gamma;
    }
    aug.b(k, k) = gamma;
    aug.q.push(w);
    return aug;
}

LanczosFactorization extend_to_m(const EinsteinOperator& op, const AugmentedState& aug,
                                 std::size_t m, std::uint64_t deflation_seed) {
    if (aug.p.size() != aug.q.size() || aug.p.size() != aug.b.rows() ||
        aug.b.rows() != aug.b.cols())
        throw precondition_error("extend_to_m: inconsistent augmented state");
    if (aug.p.size() > m)
        throw precondition_error("extend_to_m: augmented state already has " +
                                 std::to_string(aug.p.size()) + " slices, more than m = " +
                                 std::to_string(m));
    detail::FactorizationBuilder builder(op, m, deflation_seed);
    builder.preload(aug.p, aug.q, aug.b);
    return builder.run();
}

DenseTensor random_start(const Shape& shape, std::uint64_t seed) {
    Xorshift64Star rng(seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        DenseTensor t = normal_tensor(shape, rng);
        const double n = frobenius_norm(t);
        if (n > 0.0) {
            t *= 1.0 / n;
            return t;
        }
    }
    throw numerical_error("random_start: generator returned a zero tensor repeatedly");
}

LbrResult lbr(const EinsteinOperator& op, const DenseTensor& p1, const RestartConfig& cfg) {
    const std::size_t limit = std::min(op.tensor().row_count(), op.tensor().col_count());
    if (cfg.k < 1 || cfg.k >= cfg.m)
        throw precondition_error("lbr: need 1 <= k < m (got k = " + std::to_string(cfg.k) +
                                 ", m = " + std::to_string(cfg.m) + ")");
    if (cfg.m > limit)
        throw precondition_error("lbr: m = " + std::to_string(cfg.m) +
                                 " exceeds min dimension " + std::to_string(limit));
    if (!(cfg.epsilon > 0.0))
        throw precondition_error("lbr: epsilon must be positive");
    if (cfg.max_restarts < 1)
        throw precondition_error("lbr: max_restarts must be at least 1");

    const double threshold = cfg.epsilon * std::max(1.0, op.norm());
    LanczosFactorization f = elb(op, p1, cfg.m);

    LbrResult out;
    for (std::size_t cycle = 1;; ++cycle) {
        const SmallSvd bsvd = svd(f.b);
        const std::size_t k_eff = std::min(cfg.k, f.steps());
        const std::size_t first = cfg.target == Target::largest ? 0 : f.steps() - k_eff;
        std::vector<SingularTriplet> kept = lift_triplets(f, bsvd, k_eff, threshold, first);

        out.report.iterations = cycle;
        const bool all_converged =
            std::all_of(kept.begin(), kept.end(),
                        [](const SingularTriplet& t) { return t.converged; });
        if (all_converged || cycle >= cfg.max_restarts || f.beta == 0.0) {
            out.report.converged = all_converged;
            out.triplets = std::move(kept);
            break;
        }
        const AugmentedState aug = build_augmented(op, f, kept);
        f = extend_to_m(op, aug, cfg.m, cfg.seed + kCycleSeedStride * cycle);
    }

    out.report.residual_estimates.reserve(out.triplets.size());
    for (const SingularTriplet& t : out.triplets)
        out.report.residual_estimates.push_back(t.residual_estimate);
    out.report.gres = gres_norm(op, out.triplets);
    return out;
}

LbrResult lbr(const SplitTensor& a, const DenseTensor& p1, const RestartConfig& cfg) {
    return lbr(EinsteinOperator(a, cfg.threads), p1, cfg);
}

LbrResult lbr(const SplitTensor& a, const RestartConfig& cfg) {
    EinsteinOperator op(a, cfg.threads);
    return lbr(op, random_start(op.col_shape(), cfg.seed), cfg);
}

} // namespace einsvd
