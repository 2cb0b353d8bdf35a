#pragma once

#include <utility>

#include "ttcross/dense_tensor.hpp"

namespace ttcross {

/// Compact SVD A = W * diag(sigma) * V^T with p = min(m,n) triples,
/// singular values nonincreasing. Sign convention: the largest-magnitude
/// component of each column of W is nonnegative.
struct Svd {
    Matrix w;       // m x p
    Vector sigma;   // p, nonincreasing
    Matrix v;       // n x p
};

Svd svd(const Eigen::Ref<const Matrix>& a);

/// tau-truncated pseudoinverse: V * diag(g(sigma)) * W^T with
/// g(s) = 1/s when s > max(tau, 1e-13 * sigma_max), else 0. tau = 0 gives the
/// Moore-Penrose pseudoinverse up to the machine cutoff, which guards against
/// blow-up on numerically singular inputs.
Matrix pinv_tau(const Eigen::Ref<const Matrix>& a, double tau);

/// Best rank-r approximation and its Frobenius residual sqrt(sum_{i>r} s_i^2).
std::pair<Matrix, double> best_rank_r(const Eigen::Ref<const Matrix>& a, index_t r);

/// Largest singular value.
double spectral_norm(const Eigen::Ref<const Matrix>& a);

namespace detail {
/// Relative machine cutoff applied inside pinv_tau even at tau = 0.
inline constexpr double kPinvMachineCutoff = 1e-13;
}  // namespace detail

}  // namespace ttcross
