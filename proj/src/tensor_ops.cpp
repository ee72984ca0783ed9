#include "einsvd/tensor_ops.hpp"

namespace einsvd {

namespace {

// Stride of mode n (1-based) and the product of extents above it.
struct ModeGeometry {
    std::size_t below;  // product of extents of modes < n   (stride of mode n)
    std::size_t extent; // extent of mode n
    std::size_t above;  // product of extents of modes > n
};

ModeGeometry geometry(const Shape& shape, std::size_t n) {
    if (n < 1 || n > shape.order())
        throw index_error("mode " + std::to_string(n) + " out of range for order " +
                          std::to_string(shape.order()));
    ModeGeometry g{1, shape.extent(n), 1};
    for (std::size_t k = 1; k < n; ++k) g.below *= shape.extent(k);
    for (std::size_t k = n + 1; k <= shape.order(); ++k) g.above *= shape.extent(k);
    return g;
}

} // namespace

DenseMatrix matricize(const DenseTensor& t, std::size_t n) {
    const ModeGeometry g = geometry(t.shape(), n);
    DenseMatrix m(g.extent, g.below * g.above);
    std::span<const double> src = t.data();
    // Tensor flat index decomposes as a + below*(i + extent*b); the matrix
    // column collapses (a, b) to a + below*b.
    for (std::size_t b = 0; b < g.above; ++b)
        for (std::size_t i = 0; i < g.extent; ++i)
            for (std::size_t a = 0; a < g.below; ++a)
                m(i, a + g.below * b) = src[a + g.below * (i + g.extent * b)];
    return m;
}

DenseTensor fold(const DenseMatrix& m, std::size_t n, const Shape& shape) {
    const ModeGeometry g = geometry(shape, n);
    if (m.rows() != g.extent || m.cols() != g.below * g.above)
        throw shape_error("fold: matrix " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " does not match mode-" +
                          std::to_string(n) + " unfolding of " + shape.to_string());
    DenseTensor t(shape);
    std::span<double> dst = t.data();
    for (std::size_t b = 0; b < g.above; ++b)
        for (std::size_t i = 0; i < g.extent; ++i)
            for (std::size_t a = 0; a < g.below; ++a)
                dst[a + g.below * (i + g.extent * b)] = m(i, a + g.below * b);
    return t;
}

DenseTensor n_mode_product(const DenseTensor& t, const DenseMatrix& u, std::size_t n) {
    const ModeGeometry g = geometry(t.shape(), n);
    if (u.cols() != g.extent)
        throw shape_error("n_mode_product: matrix has " + std::to_string(u.cols()) +
                          " columns but mode " + std::to_string(n) + " has extent " +
                          std::to_string(g.extent));

    std::vector<std::size_t> out_extents = t.shape().extents();
    out_extents[n - 1] = u.rows();
    DenseTensor out(Shape(std::move(out_extents)));

    std::span<const double> src = t.data();
    std::span<double> dst = out.data();
    // For each fixed pair (a, b) of surrounding indices the operation is a
    // matrix-vector product along mode n.  Contraction index ascends, so
    // every output element has a fixed accumulation order.
    for (std::size_t b = 0; b < g.above; ++b) {
        const std::size_t src_base = g.below * g.extent * b;
        const std::size_t dst_base = g.below * u.rows() * b;
        for (std::size_t j = 0; j < u.rows(); ++j) {
            double* o = dst.data() + dst_base + g.below * j;
            for (std::size_t i = 0; i < g.extent; ++i) {
                const double c = u(j, i);
                if (c == 0.0) continue;
                const double* p = src.data() + src_base + g.below * i;
                for (std::size_t a = 0; a < g.below; ++a) o[a] += c * p[a];
            }
        }
    }
    return out;
}

DenseMatrix split_unfold(const DenseTensor& t, std::size_t row_order) {
    if (row_order > t.order())
        throw shape_error("split_unfold: row order " + std::to_string(row_order) +
                          " exceeds tensor order " + std::to_string(t.order()));
    const std::size_t rows = t.shape().sub(1, row_order).element_count();
    const std::size_t cols = t.element_count() / rows;
    return DenseMatrix(rows, cols,
                       std::vector<double>(t.data().begin(), t.data().end()));
}

DenseTensor split_fold(const DenseMatrix& m, const Shape& row_shape, const Shape& col_shape) {
    if (m.rows() != row_shape.element_count() || m.cols() != col_shape.element_count())
        throw shape_error("split_fold: matrix " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " does not match shapes " +
                          row_shape.to_string() + " | " + col_shape.to_string());
    return DenseTensor(row_shape.concat(col_shape),
                       std::vector<double>(m.data().begin(), m.data().end()));
}

} // namespace einsvd
