#include "einsvd/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "lanczos_internal.hpp"

namespace einsvd {

namespace {

// Seed for the direction used to bridge an exact breakdown in elb.  Any fixed
// value works; it only has to be the same on every run.
constexpr std::uint64_t kBreakdownSeed = 0x1B11D1A60FDA7A5EULL;

void matvec_rows(std::span<const double> a, std::span<const double> x, std::span<double> y,
                 std::size_t rows, std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
        double acc = 0.0;
        const double* row = a.data() + r;
        for (std::size_t c = 0; c < x.size(); ++c) acc += row[rows * c] * x[c];
        y[r] = acc;
    }
}

// Same element-wise sums as apply(), split over disjoint output row ranges.
DenseTensor apply_threaded(const SplitTensor& a, const DenseTensor& x, std::size_t threads) {
    const std::size_t rows = a.row_count();
    DenseTensor y(a.row_shape());
    const std::size_t used = std::min<std::size_t>(threads, rows);
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (std::size_t t = 0; t < used; ++t) {
        const std::size_t r0 = rows * t / used;
        const std::size_t r1 = rows * (t + 1) / used;
        pool.emplace_back(matvec_rows, a.tensor().data(), x.data(), y.data(), rows, r0, r1);
    }
    for (std::thread& th : pool) th.join();
    return y;
}

} // namespace

EinsteinOperator::EinsteinOperator(SplitTensor a, std::size_t threads)
    : a_(std::move(a)), at_(transpose(a_)), norm_(frobenius_norm(a_.tensor())),
      threads_(threads) {
    if (threads == 0)
        throw precondition_error("EinsteinOperator: thread count must be at least 1");
}

DenseTensor EinsteinOperator::forward(const DenseTensor& x) const {
    return threads_ > 1 ? apply_threaded(a_, x, threads_) : apply(a_, x);
}

DenseTensor EinsteinOperator::adjoint(const DenseTensor& y) const {
    return threads_ > 1 ? apply_threaded(at_, y, threads_) : apply(at_, y);
}

namespace detail {

std::vector<double> reorthogonalize(DenseTensor& t, const TensorStack& stack) {
    std::vector<double> total(stack.size(), 0.0);
    std::span<double> td = t.data();
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 1; i <= stack.size(); ++i) {
            std::span<const double> s = stack.slice_data(i);
            double c = 0.0;
            for (std::size_t e = 0; e < td.size(); ++e) c += td[e] * s[e];
            for (std::size_t e = 0; e < td.size(); ++e) td[e] -= c * s[e];
            total[i - 1] += c;
        }
    }
    return total;
}

void FactorizationBuilder::preload(const TensorStack& p, const TensorStack& q,
                                   const DenseMatrix& b_corner) {
    p_ = p;
    q_ = q;
    for (std::size_t j = 0; j < b_corner.cols(); ++j)
        for (std::size_t i = 0; i < b_corner.rows(); ++i)
            b_(i, j) = b_corner(i, j);
}

bool FactorizationBuilder::fresh_direction(DenseTensor& t, const TensorStack& stack,
                                           std::size_t space_dim) {
    if (stack.size() >= space_dim) return false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        t = normal_tensor(stack.slice_shape(), rng_);
        reorthogonalize(t, stack);
        const double n = frobenius_norm(t);
        if (n > 1e-3) {
            t *= 1.0 / n;
            return true;
        }
    }
    throw numerical_error("bidiagonalization: failed to draw a direction orthogonal to the "
                          "current basis");
}

bool FactorizationBuilder::q_step() {
    const std::size_t j = q_.size() + 1;  // index of the new left direction
    DenseTensor w = op_.forward(p_.slice(j));
    reorthogonalize(w, q_);
    const double alpha = frobenius_norm(w);
    if (alpha <= deflate_tol_) {
        // A*p_j already lies in the span of the current q stack; the diagonal
        // entry is exactly 0 and any orthogonal continuation direction works.
        if (!fresh_direction(w, q_, op_.tensor().row_count())) {
            exhausted_ = true;
            return false;
        }
        deflated_ = true;
        b_(j - 1, j - 1) = 0.0;
    } else {
        w *= 1.0 / alpha;
        b_(j - 1, j - 1) = alpha;
    }
    q_.push(w);
    return true;
}

bool FactorizationBuilder::p_step() {
    const std::size_t j = q_.size();  // completed column; new p gets index j+1
    DenseTensor r = op_.adjoint(q_.slice(j));
    reorthogonalize(r, p_);
    const double beta = frobenius_norm(r);
    if (beta <= deflate_tol_) {
        if (!fresh_direction(r, p_, op_.tensor().col_count())) {
            exhausted_ = true;
            return false;
        }
        deflated_ = true;
        b_(j - 1, j) = 0.0;
    } else {
        r *= 1.0 / beta;
        b_(j - 1, j) = beta;
    }
    p_.push(r);
    return true;
}

LanczosFactorization FactorizationBuilder::run() {
    while (q_.size() < m_ && !exhausted_) {
        if (q_.size() < p_.size())
            q_step();
        else
            p_step();
    }

    LanczosFactorization f;
    const std::size_t steps = q_.size();
    if (steps == 0)
        throw numerical_error("bidiagonalization: no step could be completed");
    p_.truncate(steps);
    if (steps < m_) {
        DenseMatrix shrunk(steps, steps);
        for (std::size_t j = 0; j < steps; ++j)
            for (std::size_t i = 0; i < steps; ++i)
                shrunk(i, j) = b_(i, j);
        b_ = std::move(shrunk);
    }

    // Closing residual: the unnormalized direction that p_{steps+1} would
    // take.  Orthogonalizing against the complete p stack makes its norm the
    // genuine off-factorization defect (zero when an invariant subspace
    // closed).
    DenseTensor r = op_.adjoint(q_.slice(steps));
    reorthogonalize(r, p_);
    f.beta = frobenius_norm(r);
    f.residual = std::move(r);
    f.p = std::move(p_);
    f.q = std::move(q_);
    f.b = std::move(b_);
    f.deflated = deflated_;
    return f;
}

} // namespace detail

namespace {

DenseTensor checked_unit_start(const EinsteinOperator& op, const DenseTensor& p1) {
    if (p1.shape() != op.col_shape())
        throw shape_error("elb: starting tensor shaped " + p1.shape().to_string() +
                          " does not match the column modes " + op.col_shape().to_string());
    const double n = frobenius_norm(p1);
    if (std::abs(n - 1.0) > 1e-8)
        throw precondition_error("elb: starting tensor must have unit norm (got " +
                                 std::to_string(n) + ")");
    DenseTensor unit = p1;
    unit *= 1.0 / n;
    return unit;
}

} // namespace

LanczosFactorization elb(const EinsteinOperator& op, const DenseTensor& p1, std::size_t m) {
    const std::size_t limit = std::min(op.tensor().row_count(), op.tensor().col_count());
    if (m < 1 || m > limit)
        throw precondition_error("elb: m = " + std::to_string(m) +
                                 " outside [1, " + std::to_string(limit) + "]");
    detail::FactorizationBuilder builder(op, m, kBreakdownSeed);
    builder.push_p(checked_unit_start(op, p1));
    return builder.run();
}

LanczosFactorization elb(const SplitTensor& a, const DenseTensor& p1, std::size_t m) {
    return elb(EinsteinOperator(a), p1, m);
}

std::vector<SingularTriplet> lift_triplets(const LanczosFactorization& f, const SmallSvd& bsvd,
                                           std::size_t count, double threshold,
                                           std::size_t first) {
    const std::size_t steps = f.steps();
    if (bsvd.u.rows() != steps || bsvd.v.rows() != steps)
        throw shape_error("lift_triplets: projected SVD does not match a " +
                          std::to_string(steps) + "-step factorization");
    if (first + count > bsvd.s.size())
        throw precondition_error("lift_triplets: columns [" + std::to_string(first) + ", " +
                                 std::to_string(first + count) + ") exceed the " +
                                 std::to_string(bsvd.s.size()) + " available");
    std::vector<SingularTriplet> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t col = first + i;
        out[i].value = bsvd.s[col];
        out[i].right = f.p.combine(bsvd.v.col(col));
        out[i].left = f.q.combine(bsvd.u.col(col));
        out[i].residual_estimate = f.beta * std::abs(bsvd.u(steps - 1, col));
        out[i].converged = out[i].residual_estimate <= threshold;
    }
    return out;
}

std::vector<SingularTriplet> aelb(const EinsteinOperator& op, const DenseTensor& p1,
                                  std::size_t m, std::size_t k, double epsilon) {
    if (k < 1 || k > m)
        throw precondition_error("aelb: k = " + std::to_string(k) + " outside [1, m = " +
                                 std::to_string(m) + "]");
    if (!(epsilon > 0.0))
        throw precondition_error("aelb: epsilon must be positive");
    const LanczosFactorization f = elb(op, p1, m);
    const SmallSvd bsvd = svd(f.b);
    const double threshold = epsilon * std::max(1.0, op.norm());
    return lift_triplets(f, bsvd, std::min(k, f.steps()), threshold);
}

std::vector<SingularTriplet> aelb(const SplitTensor& a, const DenseTensor& p1, std::size_t m,
                                  std::size_t k, double epsilon) {
    return aelb(EinsteinOperator(a), p1, m, k, epsilon);
}

double res_norm(const SplitTensor& a, const SingularTriplet& t) {
    DenseTensor r = apply(a, t.right);
    r.add_scaled(t.left, -t.value);
    return frobenius_norm(r);
}

double res_norm(const EinsteinOperator& op, const SingularTriplet& t) {
    DenseTensor r = op.forward(t.right);
    r.add_scaled(t.left, -t.value);
    return frobenius_norm(r);
}

double adjoint_res_norm(const SplitTensor& a, const SingularTriplet& t) {
    return adjoint_res_norm(EinsteinOperator(a), t);
}

double adjoint_res_norm(const EinsteinOperator& op, const SingularTriplet& t) {
    DenseTensor r = op.adjoint(t.left);
    r.add_scaled(t.right, -t.value);
    return frobenius_norm(r);
}

double gres_norm(const SplitTensor& a, std::span<const SingularTriplet> ts) {
    double sum = 0.0;
    for (const SingularTriplet& t : ts) {
        const double r = res_norm(a, t);
        sum += r * r;
    }
    return std::sqrt(sum);
}

double gres_norm(const EinsteinOperator& op, std::span<const SingularTriplet> ts) {
    double sum = 0.0;
    for (const SingularTriplet& t : ts) {
        const double r = res_norm(op, t);
        sum += r * r;
    }
    return std::sqrt(sum);
}

} // namespace einsvd
