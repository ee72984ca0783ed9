#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "einsvd/prng.hpp"
#include "einsvd/ritz.hpp"

using namespace einsvd;

namespace {

double scale_of(const EinsteinOperator& op) { return std::max(1.0, op.norm()); }

void check_orthonormal(const TensorStack& s, double tol) {
    for (std::size_t i = 1; i <= s.size(); ++i)
        for (std::size_t j = i; j <= s.size(); ++j) {
            const double g = inner(s.slice(i), s.slice(j));
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= tol);
        }
}

// Forward relation of a (partial) factorization: A * p_j == sum_i b(i, j) q_i.
void check_forward(const EinsteinOperator& op, const TensorStack& p, const TensorStack& q,
                   const DenseMatrix& b, double tol) {
    for (std::size_t j = 1; j <= p.size(); ++j) {
        DenseTensor lhs = op.forward(p.slice(j));
        for (std::size_t i = 1; i <= q.size(); ++i)
            if (b(i - 1, j - 1) != 0.0) lhs.add_scaled(q.slice(i), -b(i - 1, j - 1));
        CHECK(frobenius_norm(lhs) <= tol);
    }
}

} // namespace

TEST_SUITE_BEGIN("ritz_restart");

TEST_CASE("augmented state compresses a factorization faithfully") {
    const SplitTensor a(normal_tensor(Shape{9, 6, 5, 4}, 301), 2);
    const EinsteinOperator op(a);
    const DenseTensor p1 = random_start(a.col_shape(), 302);
    const std::size_t m = 8, k = 3;

    const LanczosFactorization f = elb(op, p1, m);
    REQUIRE(f.beta > 0.0);
    const SmallSvd bsvd = svd(f.b);
    const std::vector<SingularTriplet> kept = lift_triplets(f, bsvd, k, 1e-8);
    const AugmentedState aug = build_augmented(op, f, kept);

    REQUIRE(aug.p.size() == k + 1);
    REQUIRE(aug.q.size() == k + 1);
    REQUIRE(aug.b.rows() == k + 1);
    REQUIRE(aug.b.cols() == k + 1);
    check_orthonormal(aug.p, 1e-12);
    check_orthonormal(aug.q, 1e-12);

    // Diagonal carries the kept values; everything below it is zero; the
    // spike column couples each kept left tensor to the new direction.
    for (std::size_t i = 0; i < k; ++i) {
        CHECK(aug.b(i, i) == doctest::Approx(kept[i].value).epsilon(1e-14));
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) CHECK(aug.b(i, j) == 0.0);
    }
    for (std::size_t j = 0; j <= k; ++j)
        for (std::size_t i = j + 1; i <= k; ++i) CHECK(aug.b(i, j) == 0.0);

    // The spike entries are the residual couplings beta * u_i(m) of the kept
    // triplets, recorded through the orthogonalization coefficients.
    for (std::size_t i = 0; i < k; ++i) {
        const double expect = f.beta * std::abs(bsvd.u(m - 1, i));
        CHECK(std::abs(aug.b(i, k)) ==
              doctest::Approx(expect).epsilon(1e-10).scale(scale_of(op)));
        CHECK(std::abs(aug.b(i, k)) == doctest::Approx(kept[i].residual_estimate)
                                           .epsilon(1e-10)
                                           .scale(scale_of(op)));
    }
    CHECK(aug.b(k, k) > 0.0);

    // Last p slice is the normalized residual; kept slices are the triplets.
    DenseTensor r = f.residual;
    r *= 1.0 / f.beta;
    r -= aug.p.slice(k + 1);
    CHECK(frobenius_norm(r) <= 1e-13);
    for (std::size_t i = 0; i < k; ++i) {
        DenseTensor dp = aug.p.slice(i + 1);
        dp -= kept[i].right;
        CHECK(frobenius_norm(dp) <= 1e-13);
        DenseTensor dq = aug.q.slice(i + 1);
        dq -= kept[i].left;
        CHECK(frobenius_norm(dq) <= 1e-13);
    }

    // The forward relation holds for all k + 1 slices.
    check_forward(op, aug.p, aug.q, aug.b, 1e-12 * scale_of(op));

    // A closed factorization cannot be restarted.
    LanczosFactorization closed = f;
    closed.beta = 0.0;
    CHECK_THROWS_AS((void)build_augmented(op, closed, kept), precondition_error);
    CHECK_THROWS_AS((void)build_augmented(op, f, {}), precondition_error);
}

TEST_CASE("extension restores a full-length spiked factorization") {
    const SplitTensor a(normal_tensor(Shape{9, 6, 5, 4}, 311), 2);
    const EinsteinOperator op(a);
    const DenseTensor p1 = random_start(a.col_shape(), 312);
    const std::size_t m = 8, k = 3;

    const LanczosFactorization f0 = elb(op, p1, m);
    const std::vector<SingularTriplet> kept = lift_triplets(f0, svd(f0.b), k, 1e-8);
    const AugmentedState aug = build_augmented(op, f0, kept);
    const LanczosFactorization f1 = extend_to_m(op, aug, m, 313);

    REQUIRE(f1.steps() == m);
    check_orthonormal(f1.p, 1e-12);
    check_orthonormal(f1.q, 1e-12);
    CHECK(f1.beta == doctest::Approx(frobenius_norm(f1.residual)).epsilon(1e-13));

    // Structure: upper triangular with the kept diagonal, one spike column
    // at index k, then a plain bidiagonal continuation.
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = j + 1; i < m; ++i) CHECK(f1.b(i, j) == 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (j != k) CHECK(f1.b(i, j) == 0.0);
    for (std::size_t j = k + 2; j < m; ++j)
        for (std::size_t i = k; i + 1 < j; ++i) CHECK(f1.b(i, j) == 0.0);

    // Both coupling relations hold on the extended factorization.
    check_forward(op, f1.p, f1.q, f1.b, 1e-12 * scale_of(op));
    for (std::size_t j = 1; j <= m; ++j) {
        DenseTensor rhs = op.adjoint(f1.q.slice(j));
        for (std::size_t i = 1; i <= m; ++i)
            if (f1.b(j - 1, i - 1) != 0.0) rhs.add_scaled(f1.p.slice(i), -f1.b(j - 1, i - 1));
        if (j == m) rhs -= f1.residual;
        CHECK(frobenius_norm(rhs) <= 1e-12 * scale_of(op));
    }

    // The first k + 1 slices are the augmented state, untouched.
    for (std::size_t i = 1; i <= k + 1; ++i) {
        DenseTensor dp = f1.p.slice(i);
        dp -= aug.p.slice(i);
        CHECK(frobenius_norm(dp) == 0.0);
    }

    CHECK_THROWS_AS((void)extend_to_m(op, aug, k, 314), precondition_error);
}

TEST_CASE("restarted run converges to the exact leading triplets") {
    const SplitTensor a(normal_tensor(Shape{20, 10, 20, 10}, 321), 2);
    const EinsteinOperator op(a);
    const std::vector<double> exact = exact_singular_values(a);

    RestartConfig cfg;
    cfg.m = 15;
    cfg.k = 4;
    cfg.epsilon = 1e-9;
    const LbrResult r = lbr(a, cfg);

    REQUIRE(r.triplets.size() == 4);
    CHECK(r.report.converged);
    CHECK(r.report.iterations >= 1);
    REQUIRE(r.report.residual_estimates.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(r.triplets[i].value - exact[i]) <= 1e-8 * exact[0]);
        CHECK(r.triplets[i].converged);
        CHECK(r.report.residual_estimates[i] <= 1e-9 * scale_of(op));
        CHECK(res_norm(op, r.triplets[i]) <= 1e-9 * scale_of(op));
        CHECK(adjoint_res_norm(op, r.triplets[i]) <= 1e-8 * scale_of(op));
        CHECK(frobenius_norm(r.triplets[i].left) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(frobenius_norm(r.triplets[i].right) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 0; i + 1 < 4; ++i)
        CHECK(r.triplets[i].value >= r.triplets[i + 1].value);
    CHECK(r.report.gres == doctest::Approx(gres_norm(op, r.triplets)).epsilon(1e-13));
}

TEST_CASE("a single cycle with an impossible tolerance equals the one-shot run") {
    const SplitTensor a(normal_tensor(Shape{8, 7, 6, 4}, 331), 2);
    const DenseTensor p1 = random_start(a.col_shape(), 332);

    RestartConfig cfg;
    cfg.m = 6;
    cfg.k = 3;
    cfg.epsilon = 1e-300;  // nothing converges: exactly one cycle runs
    cfg.max_restarts = 1;
    const LbrResult r = lbr(a, p1, cfg);
    const std::vector<SingularTriplet> one = aelb(a, p1, 6, 3, 1e-300);

    CHECK(r.report.iterations == 1);
    CHECK(!r.report.converged);
    REQUIRE(r.triplets.size() == one.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(r.triplets[i].value == one[i].value);
        CHECK(std::memcmp(r.triplets[i].right.data().data(), one[i].right.data().data(),
                          one[i].right.element_count() * sizeof(double)) == 0);
        CHECK(std::memcmp(r.triplets[i].left.data().data(), one[i].left.data().data(),
                          one[i].left.element_count() * sizeof(double)) == 0);
    }
}

TEST_CASE("restarts recover the smallest triplets") {
    const SplitTensor a(normal_tensor(Shape{20, 10, 20, 10}, 341), 2);
    const std::vector<double> exact = exact_singular_values(a);
    const std::size_t n = exact.size();

    RestartConfig cfg;
    cfg.m = 15;
    cfg.k = 2;
    cfg.target = Target::smallest;
    cfg.epsilon = 1e-9;
    cfg.max_restarts = 4000;
    const LbrResult r = lbr(a, cfg);

    REQUIRE(r.triplets.size() == 2);
    // Non-increasing order: the smaller of the two comes last.
    CHECK(r.triplets[0].value >= r.triplets[1].value);
    CHECK(std::abs(r.triplets[1].value - exact[n - 1]) <= 1e-6 * exact[n - 1] + 1e-12);
    CHECK(std::abs(r.triplets[0].value - exact[n - 2]) <= 1e-6 * exact[n - 2] + 1e-12);
    if (r.report.converged) {
        const EinsteinOperator op(a);
        for (const SingularTriplet& t : r.triplets)
            CHECK(adjoint_res_norm(op, t) <= 1e-8 * scale_of(op));
    }
}

TEST_CASE("known diagonal spectrum converges in the first cycle") {
    std::vector<double> d(12);
    for (std::size_t i = 0; i < 12; ++i) d[i] = static_cast<double>(12 - i);
    const SplitTensor a = diagonal_tensor(Shape{3, 4}, Shape{3, 4}, d);

    RestartConfig cfg;
    cfg.m = 12;  // full depth: everything is exact immediately
    cfg.k = 3;
    const LbrResult r = lbr(a, cfg);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 1);
    REQUIRE(r.triplets.size() == 3);
    CHECK(r.triplets[0].value == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(r.triplets[1].value == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(r.triplets[2].value == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("the tracked Ritz value never degrades across restarts") {
    const SplitTensor a(normal_tensor(Shape{25, 12, 25, 12}, 351), 2);
    const DenseTensor p1 = random_start(a.col_shape(), 352);
    const double s1 = exact_singular_values(a)[0];

    RestartConfig cfg;
    cfg.m = 6;
    cfg.k = 2;
    cfg.epsilon = 1e-300;
    double prev = 0.0;
    for (std::size_t cycles : {1, 2, 4, 8, 16}) {
        cfg.max_restarts = cycles;
        const LbrResult r = lbr(a, p1, cfg);
        CHECK(r.report.iterations == cycles);
        CHECK(r.triplets[0].value >= prev - 1e-12);
        CHECK(r.triplets[0].value <= s1 + 1e-10);
        prev = r.triplets[0].value;
    }
    CHECK(std::abs(prev - s1) <= 1e-9 * s1);
}

TEST_CASE("restart runs are reproducible and honor thread counts") {
    const SplitTensor a(normal_tensor(Shape{12, 8, 6, 4}, 361), 2);
    RestartConfig cfg;
    cfg.m = 8;
    cfg.k = 3;
    cfg.seed = 77;

    const LbrResult r1 = lbr(a, cfg);
    const LbrResult r2 = lbr(a, cfg);
    RestartConfig threaded = cfg;
    threaded.threads = 3;
    const LbrResult r3 = lbr(a, threaded);
    REQUIRE(r1.triplets.size() == r2.triplets.size());
    REQUIRE(r1.triplets.size() == r3.triplets.size());
    for (std::size_t i = 0; i < r1.triplets.size(); ++i) {
        CHECK(std::memcmp(r1.triplets[i].right.data().data(),
                          r2.triplets[i].right.data().data(),
                          r1.triplets[i].right.element_count() * sizeof(double)) == 0);
        CHECK(std::memcmp(r1.triplets[i].right.data().data(),
                          r3.triplets[i].right.data().data(),
                          r1.triplets[i].right.element_count() * sizeof(double)) == 0);
        CHECK(r1.triplets[i].value == r2.triplets[i].value);
        CHECK(r1.triplets[i].value == r3.triplets[i].value);
    }

    // A different seed starts elsewhere but lands on the same values.
    RestartConfig other = cfg;
    other.seed = 1234;
    const LbrResult r4 = lbr(a, other);
    for (std::size_t i = 0; i < r1.triplets.size(); ++i)
        CHECK(r4.triplets[i].value == doctest::Approx(r1.triplets[i].value).epsilon(1e-9));
}

TEST_CASE("configuration bounds are enforced") {
    const SplitTensor a(normal_tensor(Shape{6, 5, 6, 5}, 371), 2);
    RestartConfig cfg;

    cfg.m = 5;
    cfg.k = 5;  // k must stay below m
    CHECK_THROWS_AS((void)lbr(a, cfg), precondition_error);
    cfg.k = 0;
    CHECK_THROWS_AS((void)lbr(a, cfg), precondition_error);
    cfg.k = 2;
    cfg.m = 31;  // exceeds the minimum dimension
    CHECK_THROWS_AS((void)lbr(a, cfg), precondition_error);
    cfg.m = 5;
    cfg.epsilon = -1.0;
    CHECK_THROWS_AS((void)lbr(a, cfg), precondition_error);
    cfg.epsilon = 1e-8;
    cfg.max_restarts = 0;
    CHECK_THROWS_AS((void)lbr(a, cfg), precondition_error);
}

TEST_CASE("random start directions are unit norm and seed-stable") {
    const DenseTensor s1 = random_start(Shape{5, 4}, 99);
    const DenseTensor s2 = random_start(Shape{5, 4}, 99);
    const DenseTensor s3 = random_start(Shape{5, 4}, 100);
    CHECK(frobenius_norm(s1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::memcmp(s1.data().data(), s2.data().data(),
                      s1.element_count() * sizeof(double)) == 0);
    double diff = 0.0;
    for (std::size_t x = 0; x < s1.element_count(); ++x)
        diff = std::max(diff, std::abs(s1.data()[x] - s3.data()[x]));
    CHECK(diff > 1e-3);
}

TEST_SUITE_END();
