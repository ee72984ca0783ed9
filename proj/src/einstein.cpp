#include "einsvd/einstein.hpp"

#include <algorithm>
#include <string>

namespace einsvd {

namespace {

constexpr std::size_t kOracleElementCap = std::size_t{1} << 24;
constexpr std::size_t kOracleSideCap = 4096;

void require_contractible(const SplitTensor& a, const SplitTensor& b) {
    if (a.col_shape() != b.row_shape())
        throw shape_error("einstein_product: column modes " + a.col_shape().to_string() +
                          " do not match row modes " + b.row_shape().to_string());
}

void require_oracle_size(const SplitTensor& a, bool square_factors) {
    const std::size_t r = a.row_count(), c = a.col_count();
    if (r * c > kOracleElementCap)
        throw capacity_error("exact decomposition: unfolding " + std::to_string(r) + "x" +
                             std::to_string(c) + " exceeds the element cap of " +
                             std::to_string(kOracleElementCap));
    if (square_factors && std::max(r, c) > kOracleSideCap)
        throw capacity_error("exact decomposition: side " + std::to_string(std::max(r, c)) +
                             " exceeds the square-factor cap of " +
                             std::to_string(kOracleSideCap));
}

} // namespace

SplitTensor einstein_product(const SplitTensor& a, const SplitTensor& b) {
    require_contractible(a, b);
    const DenseMatrix c = matmul(a.unfold(), b.unfold());
    return SplitTensor(split_fold(c, a.row_shape(), b.col_shape()), a.split().row_order);
}

DenseTensor apply(const SplitTensor& a, const DenseTensor& x) {
    if (x.shape() != a.col_shape())
        throw shape_error("apply: operand shape " + x.shape().to_string() +
                          " does not match column modes " + a.col_shape().to_string());
    const std::size_t rows = a.row_count();
    const std::size_t cols = a.col_count();
    DenseTensor y(a.row_shape());
    std::span<const double> ta = a.tensor().data();
    std::span<const double> tx = x.data();
    std::span<double> ty = y.data();
    // Column-major matrix-vector product on the flat buffers; the column
    // index ascends, so each output element accumulates in a fixed order.
    for (std::size_t c = 0; c < cols; ++c) {
        const double xc = tx[c];
        if (xc == 0.0) continue;
        const double* col = ta.data() + rows * c;
        for (std::size_t r = 0; r < rows; ++r) ty[r] += col[r] * xc;
    }
    return y;
}

SplitTensor transpose(const SplitTensor& a) {
    const std::size_t rows = a.row_count();
    const std::size_t cols = a.col_count();
    DenseTensor out(a.col_shape().concat(a.row_shape()));
    std::span<const double> src = a.tensor().data();
    std::span<double> dst = out.data();
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r)
            dst[c + cols * r] = src[r + rows * c];
    return SplitTensor(std::move(out), a.split().col_order);
}

SplitTensor identity_tensor(const Shape& modes) {
    const std::size_t n = modes.element_count();
    return SplitTensor(split_fold(DenseMatrix::identity(n), modes, modes), modes.order());
}

SplitTensor diagonal_tensor(const Shape& row_shape, const Shape& col_shape,
                            std::span<const double> values) {
    const std::size_t paired = std::min(row_shape.order(), col_shape.order());
    std::size_t slots = 1;
    for (std::size_t k = 1; k <= paired; ++k)
        slots *= std::min(row_shape.extent(k), col_shape.extent(k));
    if (values.size() != slots)
        throw shape_error("diagonal_tensor: " + std::to_string(values.size()) +
                          " values for " + std::to_string(slots) + " diagonal slots");

    DenseTensor t(row_shape.concat(col_shape));
    // Walk the diagonal multi-index (d_1, ..., d_paired) first-index-fastest
    // over the pairwise minimum extents; each slot sets one entry with both
    // index blocks equal to the diagonal index, padded with 1s.
    std::vector<std::size_t> index(row_shape.order() + col_shape.order(), 1);
    std::vector<std::size_t> diag(paired, 1);
    for (std::size_t slot = 0; slot < slots; ++slot) {
        for (std::size_t k = 0; k < paired; ++k) {
            index[k] = diag[k];
            index[row_shape.order() + k] = diag[k];
        }
        t.at(std::span<const std::size_t>(index)) = values[slot];
        for (std::size_t k = 0; k < paired; ++k) {
            if (++diag[k] <= std::min(row_shape.extent(k + 1), col_shape.extent(k + 1)))
                break;
            diag[k] = 1;
        }
    }
    return SplitTensor(std::move(t), row_shape.order());
}

EinsteinSvd exact_einstein_svd(const SplitTensor& a) {
    require_oracle_size(a, true);
    const SmallSvd m = svd(a.unfold(), /*full=*/true);
    EinsteinSvd out;
    const Shape rs = a.row_shape(), cs = a.col_shape();
    out.u = SplitTensor(split_fold(m.u, rs, rs), rs.order());
    out.s = m.s;
    out.v = SplitTensor(split_fold(m.v, cs, cs), cs.order());
    return out;
}

std::vector<double> exact_singular_values(const SplitTensor& a) {
    require_oracle_size(a, false);
    return svd(a.unfold()).s;
}

std::vector<SingularTriplet> exact_top_triplets(const SplitTensor& a, std::size_t k) {
    require_oracle_size(a, false);
    const SmallSvd m = svd(a.unfold());
    if (k > m.s.size())
        throw precondition_error("exact_top_triplets: k = " + std::to_string(k) +
                                 " exceeds min dimension " + std::to_string(m.s.size()));
    const Shape rs = a.row_shape(), cs = a.col_shape();
    std::vector<SingularTriplet> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i].value = m.s[i];
        out[i].left = DenseTensor(rs, std::vector<double>(m.u.col(i).begin(), m.u.col(i).end()));
        out[i].right = DenseTensor(cs, std::vector<double>(m.v.col(i).begin(), m.v.col(i).end()));
        out[i].residual_estimate = 0.0;
        out[i].converged = true;
    }
    return out;
}

SplitTensor materialize_s(const EinsteinSvd& d, const Shape& row_shape, const Shape& col_shape) {
    const std::size_t rows = row_shape.element_count();
    const std::size_t cols = col_shape.element_count();
    if (d.s.size() != std::min(rows, cols))
        throw shape_error("materialize_s: value count does not match the requested shapes");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < d.s.size(); ++i) m(i, i) = d.s[i];
    return SplitTensor(split_fold(m, row_shape, col_shape), row_shape.order());
}

SplitTensor reconstruct(const EinsteinSvd& d) {
    const Shape rs = d.u.row_shape(), cs = d.v.row_shape();
    const std::size_t rows = rs.element_count();
    const std::size_t cols = cs.element_count();
    // u * diag(s): scale the first min(rows, cols) columns, drop the rest.
    const DenseMatrix um = d.u.unfold();
    DenseMatrix us(rows, cols);
    for (std::size_t j = 0; j < d.s.size(); ++j) {
        std::span<const double> src = um.col(j);
        std::span<double> dst = us.col(j);
        for (std::size_t i = 0; i < rows; ++i) dst[i] = src[i] * d.s[j];
    }
    const DenseMatrix rec = matmul(us, d.v.unfold().transposed());
    return SplitTensor(split_fold(rec, rs, cs), rs.order());
}

SplitTensor truncated_reconstruct(std::span<const SingularTriplet> triplets, std::size_t k) {
    if (triplets.empty())
        throw precondition_error("truncated_reconstruct: no triplets given");
    if (k > triplets.size())
        throw precondition_error("truncated_reconstruct: k = " + std::to_string(k) +
                                 " exceeds the " + std::to_string(triplets.size()) +
                                 " available triplets");
    const Shape rs = triplets[0].left.shape();
    const Shape cs = triplets[0].right.shape();
    const std::size_t rows = rs.element_count();
    const std::size_t cols = cs.element_count();
    DenseTensor out(rs.concat(cs));
    std::span<double> dst = out.data();
    for (std::size_t i = 0; i < k; ++i) {
        if (triplets[i].left.shape() != rs || triplets[i].right.shape() != cs)
            throw shape_error("truncated_reconstruct: triplet " + std::to_string(i + 1) +
                              " has inconsistent shapes");
        std::span<const double> u = triplets[i].left.data();
        std::span<const double> v = triplets[i].right.data();
        const double s = triplets[i].value;
        for (std::size_t c = 0; c < cols; ++c) {
            const double sv = s * v[c];
            double* o = dst.data() + rows * c;
            for (std::size_t r = 0; r < rows; ++r) o[r] += sv * u[r];
        }
    }
    return SplitTensor(std::move(out), rs.order());
}

} // namespace einsvd
