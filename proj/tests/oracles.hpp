#pragma once

// Test-only oracles, deliberately independent of the library's numeric paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracles {

// Cyclic Jacobi eigensolver for a symmetric matrix, row-major storage.
// Returns eigenvalues sorted descending.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.rbegin(), eig.rend());
    return eig;
}

// Singular values of a row-major m x n matrix via eigenvalues of A^T A.
inline std::vector<double> singular_values(const std::vector<double>& a, std::size_t m,
                                           std::size_t n) {
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < m; ++r) s += a[r * n + i] * a[r * n + j];
            gram[i * n + j] = s;
        }
    auto eig = symmetric_eigenvalues(std::move(gram), n);
    for (auto& e : eig) e = std::sqrt(std::max(e, 0.0));
    return eig;
}

// O(n^2) Mann-Whitney AUC: pairwise comparisons with 0.5 credit for ties.
inline double pairwise_auc(const std::vector<int>& y, const std::vector<double>& scores) {
    double wins = 0.0;
    std::size_t n_pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!y[i]) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j]) continue;
            ++n_pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(n_pairs);
}

// Dense Gaussian elimination without pivoting tricks shared with the library:
// plain elimination with row swaps, used to cross-check OLS coefficients.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace oracles
