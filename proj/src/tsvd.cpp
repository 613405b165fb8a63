#include "pdkit/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

namespace pdkit {

namespace {

double column_dot(const Matrix& m, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, a) * m(r, b);
    return s;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
// vanish are replaced by orthonormal completions against the identity basis.
Matrix orthonormalize(Matrix y) {
    const std::size_t m = y.rows(), l = y.cols();
    for (std::size_t j = 0; j < l; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                double d = column_dot(y, i, j);
                for (std::size_t r = 0; r < m; ++r) y(r, j) -= d * y(r, i);
            }
        }
        double norm = std::sqrt(column_dot(y, j, j));
        if (norm > 1e-12) {
            for (std::size_t r = 0; r < m; ++r) y(r, j) /= norm;
            continue;
        }
        // Degenerate column: substitute the first identity vector that keeps
        // the basis independent.
        bool placed = false;
        for (std::size_t e = 0; e < m && !placed; ++e) {
            for (std::size_t r = 0; r < m; ++r) y(r, j) = (r == e) ? 1.0 : 0.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < j; ++i) {
                    double d = column_dot(y, i, j);
                    for (std::size_t r = 0; r < m; ++r) y(r, j) -= d * y(r, i);
                }
            }
            norm = std::sqrt(column_dot(y, j, j));
            if (norm > 1e-6) {
                for (std::size_t r = 0; r < m; ++r) y(r, j) /= norm;
                placed = true;
            }
        }
        if (!placed) throw NumericError("orthonormalize: could not complete basis");
    }
    return y;
}

struct SmallSvd {
    Matrix u;                   // p x r
    std::vector<double> sigma;  // r = min(p, q)
    Matrix v;                   // q x r
};

// One-sided Jacobi on a tall matrix (rows >= cols): rotate column pairs of G
// until mutually orthogonal; column norms become the singular values and the
// accumulated rotations the right singular vectors.
SmallSvd jacobi_svd_tall(const Matrix& m_in) {
    Matrix g = m_in;
    const std::size_t rows = g.rows(), cols = g.cols();
    Matrix v = Matrix::identity(cols);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < cols; ++i) {
            for (std::size_t j = i + 1; j < cols; ++j) {
                double a = column_dot(g, i, i);
                double b = column_dot(g, j, j);
                double c = column_dot(g, i, j);
                if (std::abs(c) <= 1e-15 * std::sqrt(a * b) || c == 0.0) continue;
                rotated = true;
                double zeta = (b - a) / (2.0 * c);
                double t = std::copysign(1.0, zeta) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                for (std::size_t r = 0; r < rows; ++r) {
                    double gi = g(r, i), gj = g(r, j);
                    g(r, i) = cs * gi - sn * gj;
                    g(r, j) = sn * gi + cs * gj;
                }
                for (std::size_t r = 0; r < cols; ++r) {
                    double vi = v(r, i), vj = v(r, j);
                    v(r, i) = cs * vi - sn * vj;
                    v(r, j) = sn * vi + cs * vj;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(cols);
    for (std::size_t j = 0; j < cols; ++j) sigma[j] = std::sqrt(column_dot(g, j, j));

    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SmallSvd out;
    out.sigma.resize(cols);
    out.u = Matrix(rows, cols);
    out.v = Matrix(cols, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        for (std::size_t r = 0; r < cols; ++r) out.v(r, j) = v(r, src);
        if (sigma[src] > 1e-300) {
            for (std::size_t r = 0; r < rows; ++r) out.u(r, j) = g(r, src) / sigma[src];
        }
    }
    // Null-space columns of U get orthonormal completions so U stays orthonormal.
    for (std::size_t j = 0; j < cols; ++j) {
        if (out.sigma[j] > 1e-300) continue;
        out.sigma[j] = 0.0;
        for (std::size_t e = 0; e < rows; ++e) {
            for (std::size_t r = 0; r < rows; ++r) out.u(r, j) = (r == e) ? 1.0 : 0.0;
            for (std::size_t i = 0; i < cols; ++i) {
                if (i == j) continue;
                double d = column_dot(out.u, i, j);
                for (std::size_t r = 0; r < rows; ++r) out.u(r, j) -= d * out.u(r, i);
            }
            double norm = std::sqrt(column_dot(out.u, j, j));
            if (norm > 1e-6) {
                for (std::size_t r = 0; r < rows; ++r) out.u(r, j) /= norm;
                break;
            }
        }
    }
    return out;
}

SmallSvd small_svd(const Matrix& m) {
    if (m.rows() >= m.cols()) return jacobi_svd_tall(m);
    SmallSvd t = jacobi_svd_tall(m.transpose());
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

}  // namespace

TruncatedFactors truncated_svd(const Matrix& A, std::size_t k, std::size_t oversampling,
                               std::size_t power_iters, std::uint64_t seed) {
    const std::size_t m = A.rows(), n = A.cols();
    const std::size_t min_dim = std::min(m, n);
    if (k < 1 || k > min_dim)
        throw UsageError("truncated_svd: RankOutOfRange, k=" + std::to_string(k) +
                         " must lie in [1, " + std::to_string(min_dim) + "]");
    if (!A.all_finite()) throw NumericError("truncated_svd: NonFiniteInput");

    const std::size_t l = std::min(k + oversampling, min_dim);

    // When the sketch already spans the full inner dimension, or the problem
    // is small enough that a dense decomposition is cheap, go exact: the
    // randomized sketch is only an approximation when l < min(m, n), and the
    // truncation error must match the discarded spectrum exactly.
    const bool exact = l >= min_dim || min_dim <= 64;

    TruncatedFactors out;
    out.k = k;
    if (exact) {
        SmallSvd small = small_svd(A);
        out.sigma.assign(small.sigma.begin(),
                         small.sigma.begin() + static_cast<std::ptrdiff_t>(k));
        out.U = Matrix(m, k);
        out.V = Matrix(n, k);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t r = 0; r < m; ++r) out.U(r, c) = small.u(r, c);
            for (std::size_t r = 0; r < n; ++r) out.V(r, c) = small.v(r, c);
        }
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Matrix omega(n, l);
        for (auto& v : omega.data()) v = gauss(rng);

        Matrix q = orthonormalize(A.mul(omega));
        const Matrix at = A.transpose();
        for (std::size_t it = 0; it < power_iters; ++it) {
            Matrix z = orthonormalize(at.mul(q));
            q = orthonormalize(A.mul(z));
        }

        SmallSvd small = small_svd(q.transpose().mul(A));  // l x n projection
        out.sigma.assign(small.sigma.begin(),
                         small.sigma.begin() + static_cast<std::ptrdiff_t>(k));
        Matrix u_small(q.cols(), k);
        out.V = Matrix(n, k);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t r = 0; r < q.cols(); ++r) u_small(r, c) = small.u(r, c);
            for (std::size_t r = 0; r < n; ++r) out.V(r, c) = small.v(r, c);
        }
        out.U = q.mul(u_small);
    }
    for (auto& s : out.sigma) s = std::max(s, 0.0);

    // Sign convention: largest-magnitude entry of each V column made positive.
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (std::abs(out.V(r, c)) > best) {
                best = std::abs(out.V(r, c));
                arg = r;
            }
        }
        if (out.V(arg, c) < 0.0) {
            for (std::size_t r = 0; r < n; ++r) out.V(r, c) = -out.V(r, c);
            for (std::size_t r = 0; r < m; ++r) out.U(r, c) = -out.U(r, c);
        }
    }
    return out;
}

Matrix project(const TruncatedFactors& factors, const Matrix& X) {
    if (X.cols() != factors.V.rows())
        throw UsageError("project: DimensionMismatch, X has " + std::to_string(X.cols()) +
                         " columns but V expects " + std::to_string(factors.V.rows()));
    return X.mul(factors.V);
}

Matrix reconstruct(const TruncatedFactors& factors) {
    return factors.U.mul_diag(factors.sigma).mul(factors.V.transpose());
}

double frobenius_error(const Matrix& A, const TruncatedFactors& factors) {
    if (A.rows() != factors.U.rows() || A.cols() != factors.V.rows())
        throw UsageError("frobenius_error: DimensionMismatch");
    Matrix recon = reconstruct(factors);
    double s = 0.0;
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < A.cols(); ++c) {
            double d = A(r, c) - recon(r, c);
            s += d * d;
        }
    return std::sqrt(s);
}

void dump_spectrum(const std::vector<double>& sigma, std::ostream& out) {
    char buf[64];
    for (double s : sigma) {
        std::snprintf(buf, sizeof(buf), "%.17g", s);
        out << buf << "\n";
    }
}

}  // namespace pdkit
