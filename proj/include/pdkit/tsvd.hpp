#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pdkit/matrix.hpp"

namespace pdkit {

// Rank-k factorization A ~= U diag(sigma) V^T. U is m x k, V is n x k,
// sigma non-negative and non-increasing, U^T U = V^T V = I_k.
struct TruncatedFactors {
    Matrix U;
    std::vector<double> sigma;
    Matrix V;
    std::size_t k = 0;
};

// Randomized range finder (Gaussian test matrix, subspace power iterations)
// followed by an exact one-sided Jacobi SVD of the projected matrix.
// Deterministic for a fixed seed.
TruncatedFactors truncated_svd(const Matrix& A, std::size_t k, std::size_t oversampling = 10,
                               std::size_t power_iters = 2, std::uint64_t seed = 0);

// X * V: the reduced representation. Apply the train-fitted V to any frame.
Matrix project(const TruncatedFactors& factors, const Matrix& X);

// U * diag(sigma) * V^T.
Matrix reconstruct(const TruncatedFactors& factors);

// ||A - reconstruct(factors)||_F.
double frobenius_error(const Matrix& A, const TruncatedFactors& factors);

// One singular value per line, 17 significant digits.
void dump_spectrum(const std::vector<double>& sigma, std::ostream& out);

}  // namespace pdkit
