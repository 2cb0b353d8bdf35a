#pragma once

#include "ttcross/linalg.hpp"

namespace ttcross {

/// Selected row and column indices for a skeleton decomposition, |I| == |J|.
struct CurSelection {
    std::vector<index_t> rows;  // I
    std::vector<index_t> cols;  // J
};

/// A(:,J) * pinv_tau(A(I,J), tau) * A(I,:).
Matrix cur(const Eigen::Ref<const Matrix>& a, const CurSelection& sel, double tau);

struct MaxvolResult {
    std::vector<index_t> rows;  // sorted ascending
    bool converged = true;
    int swaps = 0;
};

namespace detail {
inline constexpr double kMaxvolTol = 1e-2;       // dominance tolerance
inline constexpr int kMaxvolDefaultIters = 200;  // swap budget
}  // namespace detail

/// Row subset of locally maximal volume for a full-column-rank B (m x r):
/// after return every entry of B * B(rows,:)^{-1} has magnitude <= 1 + tol.
/// Starts from pivoted-LU rows and performs greedy row swaps.
MaxvolResult maxvol(const Eigen::Ref<const Matrix>& b, int max_iters = detail::kMaxvolDefaultIters);

/// Alternating maxvol on singular bases: J starts from the r' largest-norm
/// columns; each sweep updates I from the left basis of A(:,J) and J from the
/// right basis of A(I,:). Deterministic.
CurSelection select_indices_matrix(const Eigen::Ref<const Matrix>& a, index_t r_prime, int sweeps);

/// Explicit constants of the matrix cross error bound for A = A_r + F:
///   |A - C U^+ R|_F <= (w + v + 3wv + 1)|F|_F + (w + v + wv + 1) u |F|_F^2
/// with w = |[W(I,:)]^+|_2, v = |[V(J,:)]^+|_2 from the compact SVD of A_r and
/// u = |U^+|_2.
struct CurBoundReport {
    double w = 0.0;
    double v = 0.0;
    double u = 0.0;
    double f_fro = 0.0;          // |A - A_r|_F
    double rhs = 0.0;            // bound value
    double observed_fro = 0.0;   // |A - C U^+ R|_F at tau = 0
};

/// Requires rank(A_r(I,J)) == r: sigma_r(A_r(I,J)) > 1e-10 * sigma_max(A).
CurBoundReport cur_error_bound(const Eigen::Ref<const Matrix>& a, index_t r, const CurSelection& sel);

}  // namespace ttcross
