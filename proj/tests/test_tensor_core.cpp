#include <doctest.h>

#include <vector>

#include "einsvd/prng.hpp"
#include "einsvd/tensor_ops.hpp"

using namespace einsvd;

namespace {

// Tensor whose entry at (i1, i2, ...) is the decimal stacking i1*100 + i2*10
// + ..., handy for spotting misplaced elements at a glance.
DenseTensor decimal_tensor(const Shape& shape) {
    DenseTensor t(shape);
    std::vector<std::size_t> idx(shape.order(), 1);
    for (std::size_t flat = 0; flat < shape.element_count(); ++flat) {
        double v = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) v = v * 10.0 + static_cast<double>(idx[k]);
        t.at(std::span<const std::size_t>(idx)) = v;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (++idx[k] <= shape.extent(k + 1)) break;
            idx[k] = 1;
        }
    }
    return t;
}

// Independent mode-n index map, straight from the unfolding definition:
// column = 1 + sum_{k != n} (i_k - 1) * J_k with J_k the product of the
// extents of the earlier modes excluding n.  No shared code with the library
// implementation.
std::pair<std::size_t, std::size_t> oracle_position(const Shape& shape, std::size_t n,
                                                    const std::vector<std::size_t>& idx) {
    std::size_t col = 0;
    std::size_t weight = 1;
    for (std::size_t k = 1; k <= shape.order(); ++k) {
        if (k == n) continue;
        col += (idx[k - 1] - 1) * weight;
        weight *= shape.extent(k);
    }
    return {idx[n - 1] - 1, col};  // 0-based matrix position
}

void check_matricize_against_oracle(const Shape& shape) {
    const DenseTensor t = normal_tensor(shape, 99);
    for (std::size_t n = 1; n <= shape.order(); ++n) {
        const DenseMatrix m = matricize(t, n);
        REQUIRE(m.rows() == shape.extent(n));
        REQUIRE(m.cols() == shape.element_count() / shape.extent(n));
        std::vector<std::size_t> idx(shape.order(), 1);
        for (std::size_t flat = 0; flat < shape.element_count(); ++flat) {
            const auto [r, c] = oracle_position(shape, n, idx);
            REQUIRE(m(r, c) == t.at(std::span<const std::size_t>(idx)));
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (++idx[k] <= shape.extent(k + 1)) break;
                idx[k] = 1;
            }
        }
        // Round trip back to the tensor.
        const DenseTensor back = fold(m, n, shape);
        for (std::size_t i = 0; i < t.element_count(); ++i)
            REQUIRE(back.data()[i] == t.data()[i]);
    }
}

} // namespace

TEST_SUITE_BEGIN("tensor_core");

TEST_CASE("shape basics and linearization") {
    const Shape s{3, 4, 2};
    CHECK(s.order() == 3);
    CHECK(s.extent(1) == 3);
    CHECK(s.extent(3) == 2);
    CHECK(s.element_count() == 24);
    CHECK(s.to_string() == "3x4x2");

    // First index fastest: (1,1,1) -> 0, (2,1,1) -> 1, (1,2,1) -> 3,
    // (1,1,2) -> 12, (3,4,2) -> 23.
    const std::vector<std::size_t> i000{1, 1, 1}, i100{2, 1, 1}, i010{1, 2, 1}, i001{1, 1, 2},
        last{3, 4, 2};
    CHECK(s.linear_index(i000) == 0);
    CHECK(s.linear_index(i100) == 1);
    CHECK(s.linear_index(i010) == 3);
    CHECK(s.linear_index(i001) == 12);
    CHECK(s.linear_index(last) == 23);

    CHECK((s.sub(1, 2) == Shape{3, 4}));
    CHECK((s.sub(3, 1) == Shape{2}));
    CHECK((Shape{3, 4}.concat(Shape{2}) == s));

    CHECK_THROWS_AS((void)(Shape{3, 0, 2}), shape_error);
    CHECK_THROWS_AS((void)s.extent(4), index_error);
    const std::vector<std::size_t> bad{4, 1, 1};
    CHECK_THROWS_AS((void)s.linear_index(bad), index_error);
    const std::vector<std::size_t> short_idx{1, 1};
    CHECK_THROWS_AS((void)s.linear_index(short_idx), index_error);
}

TEST_CASE("element access is 1-based and round trips") {
    DenseTensor t(Shape{2, 3});
    t.at({1, 1}) = 11.0;
    t.at({2, 3}) = 23.0;
    CHECK(t.at({1, 1}) == 11.0);
    CHECK(t.at({2, 3}) == 23.0);
    CHECK(t.data()[0] == 11.0);
    CHECK(t.data()[5] == 23.0);
    CHECK_THROWS_AS((void)t.at({0, 1}), index_error);
    CHECK_THROWS_AS((void)t.at({1, 4}), index_error);
}

TEST_CASE("inner product and Frobenius norm on fixed values") {
    const DenseTensor a(Shape{3}, {1.0, 2.0, 3.0});
    const DenseTensor b(Shape{3}, {4.0, 5.0, 6.0});
    CHECK(inner(a, b) == 32.0);

    const DenseTensor c(Shape{2, 2}, {1.0, 2.0, 2.0, 4.0});
    CHECK(frobenius_norm(c) == 5.0);

    const DenseTensor wrong(Shape{4});
    CHECK_THROWS_AS((void)inner(a, wrong), shape_error);
}

TEST_CASE("matricize matches hand-derived positions") {
    const DenseTensor t = decimal_tensor(Shape{3, 4, 2});

    const DenseMatrix m1 = matricize(t, 1);
    // Entry (2, 5) of the 3x8 mode-1 unfolding (1-based) is t(2, 1, 2).
    CHECK(m1(1, 4) == 212.0);

    const DenseMatrix m2 = matricize(t, 2);
    // Entry (3, 4) of the 4x6 mode-2 unfolding is t(1, 3, 2).
    CHECK(m2(2, 3) == 132.0);

    const DenseMatrix m3 = matricize(t, 3);
    // Entry (2, 11) of the 2x12 mode-3 unfolding is t(2, 4, 2).
    CHECK(m3(1, 10) == 242.0);
}

TEST_CASE("matricize and fold agree with the enumeration oracle") {
    check_matricize_against_oracle(Shape{3, 4, 2});
    check_matricize_against_oracle(Shape{2, 3, 4, 2});
    check_matricize_against_oracle(Shape{5});
    check_matricize_against_oracle(Shape{1, 6, 1});
}

TEST_CASE("fold validates dimensions") {
    CHECK_THROWS_AS((void)fold(DenseMatrix(3, 7), 1, Shape{3, 4, 2}), shape_error);
    CHECK_THROWS_AS((void)fold(DenseMatrix(4, 6), 4, Shape{3, 4, 2}), index_error);
}

TEST_CASE("n_mode_product equals the matricize route") {
    const Shape shape{3, 4, 2};
    const DenseTensor t = normal_tensor(shape, 7);
    Xorshift64Star rng(8);
    for (std::size_t n = 1; n <= 3; ++n) {
        DenseMatrix u(5, shape.extent(n));
        for (double& x : u.data()) x = rng.next_normal();

        const DenseTensor direct = n_mode_product(t, u, n);
        CHECK(direct.shape().extent(n) == 5);

        // Independent route: unfold, multiply, fold back.
        const DenseMatrix via = matmul(u, matricize(t, n));
        std::vector<std::size_t> extents = shape.extents();
        extents[n - 1] = 5;
        const DenseTensor expected = fold(via, n, Shape(extents));
        for (std::size_t i = 0; i < expected.element_count(); ++i)
            CHECK(direct.data()[i] == doctest::Approx(expected.data()[i]).epsilon(1e-13));
    }
    CHECK_THROWS_AS((void)n_mode_product(t, DenseMatrix(5, 9), 1), shape_error);
}

TEST_CASE("split_unfold reuses the flat layout verbatim") {
    const Shape shape{2, 3, 4, 2};
    const DenseTensor t = normal_tensor(shape, 12);
    const DenseMatrix m = split_unfold(t, 2);
    REQUIRE(m.rows() == 6);
    REQUIRE(m.cols() == 8);
    // Element (r, c) of the unfolding sits at flat offset r + rows*c, which
    // is exactly the tensor's own flat order.
    for (std::size_t c = 0; c < 8; ++c)
        for (std::size_t r = 0; r < 6; ++r)
            CHECK(m(r, c) == t.data()[r + 6 * c]);

    // Against the multi-index definition: row and column are the
    // first-index-fastest ranks of the two index blocks.
    CHECK(m(0, 0) == t.at({1, 1, 1, 1}));
    CHECK(m(1, 0) == t.at({2, 1, 1, 1}));
    CHECK(m(2, 0) == t.at({1, 2, 1, 1}));
    CHECK(m(0, 1) == t.at({1, 1, 2, 1}));
    CHECK(m(0, 4) == t.at({1, 1, 1, 2}));
    CHECK(m(5, 7) == t.at({2, 3, 4, 2}));

    const DenseTensor back = split_fold(m, Shape{2, 3}, Shape{4, 2});
    for (std::size_t i = 0; i < t.element_count(); ++i)
        CHECK(back.data()[i] == t.data()[i]);

    CHECK_THROWS_AS((void)split_unfold(t, 5), shape_error);
    CHECK_THROWS_AS((void)split_fold(m, Shape{2, 3}, Shape{4, 3}), shape_error);
}

TEST_CASE("tensor arithmetic helpers") {
    DenseTensor a(Shape{2, 2}, {1.0, 2.0, 3.0, 4.0});
    const DenseTensor b(Shape{2, 2}, {10.0, 20.0, 30.0, 40.0});
    a.add_scaled(b, 0.5);
    CHECK(a.data()[0] == 6.0);
    CHECK(a.data()[3] == 24.0);
    a *= 2.0;
    CHECK(a.data()[0] == 12.0);

    const DenseTensor r = a.reshaped(Shape{4});
    CHECK(r.order() == 1);
    CHECK(r.data()[2] == a.data()[2]);
    CHECK_THROWS_AS((void)a.reshaped(Shape{5}), shape_error);
}

TEST_CASE("tensor stack slices, combinations, and contraction") {
    TensorStack stack(Shape{2, 2});
    CHECK(stack.empty());
    stack.push(DenseTensor(Shape{2, 2}, {1.0, 0.0, 0.0, 0.0}));
    stack.push(DenseTensor(Shape{2, 2}, {0.0, 1.0, 0.0, 0.0}));
    stack.push(DenseTensor(Shape{2, 2}, {0.0, 0.0, 1.0, 1.0}));
    REQUIRE(stack.size() == 3);
    CHECK(stack.slice(2).data()[1] == 1.0);
    CHECK_THROWS_AS((void)stack.slice(0), index_error);
    CHECK_THROWS_AS((void)stack.slice(4), index_error);
    CHECK_THROWS_AS(stack.push(DenseTensor(Shape{2, 3})), shape_error);

    // combine is the weighted sum of slices.
    const std::vector<double> w{2.0, 3.0, -1.0};
    const DenseTensor c = stack.combine(w);
    CHECK(c.data()[0] == 2.0);
    CHECK(c.data()[1] == 3.0);
    CHECK(c.data()[2] == -1.0);
    CHECK(c.data()[3] == -1.0);

    // Contraction along the stacking mode: slice j of the result is the
    // combination of the input slices by row j of the matrix.
    DenseMatrix u(2, 3);
    u(0, 0) = 1.0; u(0, 1) = 2.0; u(0, 2) = 3.0;
    u(1, 0) = -1.0; u(1, 1) = 0.0; u(1, 2) = 1.0;
    const TensorStack prod = stack.mode_product(u.data(), 2);
    REQUIRE(prod.size() == 2);
    const DenseTensor row0 = stack.combine(std::vector<double>{1.0, 2.0, 3.0});
    const DenseTensor row1 = stack.combine(std::vector<double>{-1.0, 0.0, 1.0});
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(prod.slice(1).data()[i] == row0.data()[i]);
        CHECK(prod.slice(2).data()[i] == row1.data()[i]);
    }

    // And it agrees with the (d+1)-mode product of the stacked tensor.
    const DenseTensor stacked = stack.to_tensor();
    REQUIRE((stacked.shape() == Shape{2, 2, 3}));
    const DenseTensor via = n_mode_product(stacked, u, 3);
    const DenseTensor direct = prod.to_tensor();
    for (std::size_t i = 0; i < via.element_count(); ++i)
        CHECK(direct.data()[i] == doctest::Approx(via.data()[i]).epsilon(1e-14));

    TensorStack trunc = stack;
    trunc.truncate(1);
    CHECK(trunc.size() == 1);
    CHECK(trunc.slice(1).data()[0] == 1.0);
    CHECK_THROWS_AS(trunc.truncate(2), index_error);
}

TEST_SUITE_END();
