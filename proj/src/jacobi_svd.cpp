#include "einsvd/jacobi_svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "einsvd/errors.hpp"

namespace einsvd {

namespace {

constexpr double kRotationTol = 1e-15;
constexpr int kMaxSweeps = 60;

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// One-sided Jacobi on a tall-or-square matrix (rows >= cols).  On return the
// columns of w are mutually orthogonal and w_original = w * v^T.
void orthogonalize_columns(DenseMatrix& w, DenseMatrix& v) {
    const std::size_t n = w.cols();
    v = DenseMatrix::identity(n);
    if (n < 2) return;

    // Squared column norms are cached and updated with the closed-form effect
    // of each rotation (app -= t*apq, aqq += t*apq); a fresh recompute at the
    // top of every sweep removes any accumulated drift.
    std::vector<double> sq(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) sq[j] = dot(w.col(j), w.col(j));
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                std::span<double> wp = w.col(p), wq = w.col(q);
                const double apq = dot(wp, wq);
                if (std::abs(apq) <= kRotationTol * std::sqrt(sq[p]) * std::sqrt(sq[q]))
                    continue;

                // Rotation angle that zeroes the (p, q) entry of the Gram
                // matrix: tan solves t^2 + 2*tau*t - 1 = 0, smaller root.
                const double tau = (sq[q] - sq[p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                for (std::size_t i = 0; i < w.rows(); ++i) {
                    const double xp = wp[i], xq = wq[i];
                    wp[i] = c * xp - s * xq;
                    wq[i] = s * xp + c * xq;
                }
                std::span<double> vp = v.col(p), vq = v.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double xp = vp[i], xq = vq[i];
                    vp[i] = c * xp - s * xq;
                    vq[i] = s * xp + c * xq;
                }
                sq[p] -= t * apq;
                sq[q] += t * apq;
                rotated = true;
            }
        }
        if (!rotated) return;
    }
    throw numerical_error("svd: one-sided Jacobi did not converge within " +
                          std::to_string(kMaxSweeps) + " sweeps on a " +
                          std::to_string(w.rows()) + "x" + std::to_string(n) + " matrix");
}

// Append orthonormal columns to u (m x t, orthonormal) until it is m x target.
// Candidates are the canonical basis vectors in order; each is orthogonalized
// twice against the current columns and accepted when a significant residual
// remains.  The residual-mass argument guarantees target - t acceptances.
DenseMatrix complete_basis(const DenseMatrix& u, std::size_t target) {
    const std::size_t m = u.rows();
    const std::size_t t = u.cols();
    DenseMatrix full(m, target);
    for (std::size_t j = 0; j < t; ++j)
        std::copy(u.col(j).begin(), u.col(j).end(), full.col(j).begin());

    std::size_t have = t;
    std::vector<double> work(m);
    for (std::size_t cand = 0; cand < m && have < target; ++cand) {
        std::fill(work.begin(), work.end(), 0.0);
        work[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < have; ++j) {
                const double c = dot(work, full.col(j));
                std::span<const double> fj = full.col(j);
                for (std::size_t i = 0; i < m; ++i) work[i] -= c * fj[i];
            }
        }
        const double norm = std::sqrt(dot(work, work));
        if (norm < 1e-4) continue;
        std::span<double> dst = full.col(have);
        for (std::size_t i = 0; i < m; ++i) dst[i] = work[i] / norm;
        ++have;
    }
    if (have < target)
        throw numerical_error("svd: failed to complete an orthonormal basis");
    return full;
}

void require_finite(const DenseMatrix& a) {
    for (double x : a.data())
        if (!std::isfinite(x))
            throw numerical_error("svd: input contains a non-finite value");
}

} // namespace

SmallSvd svd(const DenseMatrix& a, bool full) {
    require_finite(a);
    const bool transposed = a.rows() < a.cols();
    DenseMatrix w = transposed ? a.transposed() : a;
    const std::size_t m = w.rows();
    const std::size_t n = w.cols();

    DenseMatrix v;
    orthogonalize_columns(w, v);

    // Column norms are the singular values; sort them descending, keeping the
    // original position as tie-breaker so equal values have a fixed order.
    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(dot(w.col(j), w.col(j)));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    SmallSvd out;
    out.s.resize(n);
    out.u = DenseMatrix(m, n);
    out.v = DenseMatrix(n, n);
    std::size_t zero_cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = perm[j];
        out.s[j] = norms[src];
        std::span<const double> wj = w.col(src);
        std::span<double> uj = out.u.col(j);
        if (norms[src] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) uj[i] = wj[i] / norms[src];
        } else {
            ++zero_cols;  // column vanished; direction filled in below
        }
        std::copy(v.col(src).begin(), v.col(src).end(), out.v.col(j).begin());
    }
    if (zero_cols > 0) {
        // Exactly zero columns carry no direction of their own.  Complete the
        // nonzero part of u to an orthonormal set and use the new columns.
        DenseMatrix nonzero(m, n - zero_cols);
        for (std::size_t j = 0; j < n - zero_cols; ++j)
            std::copy(out.u.col(j).begin(), out.u.col(j).end(), nonzero.col(j).begin());
        DenseMatrix completed = complete_basis(nonzero, n);
        for (std::size_t j = n - zero_cols; j < n; ++j)
            std::copy(completed.col(j).begin(), completed.col(j).end(), out.u.col(j).begin());
    }

    if (full) {
        out.u = complete_basis(out.u, m);
        // v is already n x n (square) here.
    }
    if (transposed) std::swap(out.u, out.v);

    // Sign convention on the final orientation: the first nonzero entry of
    // each left singular vector is nonnegative.  Paired columns flip together
    // so the product is unchanged; basis-completion columns beyond the value
    // count flip alone.
    for (std::size_t j = 0; j < out.u.cols(); ++j) {
        std::span<double> uj = out.u.col(j);
        double lead = 0.0;
        for (double x : uj)
            if (x != 0.0) { lead = x; break; }
        if (lead < 0.0) {
            for (double& x : uj) x = -x;
            if (j < out.s.size())
                for (double& x : out.v.col(j)) x = -x;
        }
    }
    return out;
}

} // namespace einsvd
