#pragma once

#include "ttcross/index_sets.hpp"
#include "ttcross/oracle.hpp"
#include "ttcross/tt.hpp"

namespace ttcross {

struct CrossStats {
    index_t queries = 0;      // distinct oracle entries touched during the run
    int sweeps_run = 0;       // pivot sweeps, including the two finalization passes
    std::vector<double> pivot_residuals;  // per-sweep max |residual|
    std::vector<std::string> warnings;
};

/// Sampled submatrix through the oracle; rows over (d_1..d_k), cols over the
/// rest, entry (s,t) at the concatenated multi-index.
Matrix oracle_gather(ElementOracle& oracle, const std::vector<MultiIndex>& rows,
                     const std::vector<MultiIndex>& cols);

/// Assemble the TT cross approximation
///   G_k(:,i_k,:) = T(I^{<=k-1}, i_k, I^{>k}) * pinv_tau(T(I^{<=k}, I^{>k}), tau_k)
/// for k < N and G_N(:,i_N,1) = T(I^{<=N-1}, i_N), querying only the cross
/// fiber blocks (plus the intersections themselves when the sets are not
/// nested). Throws degenerate_core_error when every singular value of an
/// intersection matrix is truncated away.
TTTensor build_cores(ElementOracle& oracle, const NestedIndexSets& sets,
                     const std::vector<double>& tau);

namespace detail {
inline constexpr int kDefaultMaxSweeps = 8;
inline constexpr double kStopTolFactor = 1e-14;  // times the largest |entry| seen
}  // namespace detail

/// Greedy nested pivot search. Starting from a random seeded index chain, it
/// sweeps bonds alternately left-to-right and right-to-left; at bond k it
/// queries the supercore block T(I^{<=k-1}, i_k, i_{k+1}, I^{>k+1}), measures
/// the residual against the current cross interpolant on that block and
/// greedily adds (or swaps in, guarded by intersection volume) the entry of
/// maximum absolute residual, keeping the sets nested. Per-bond set sizes are
/// clamped to min(r', prod_{j<=k} d_j, prod_{j>k} d_j).
///
/// `restrict_candidates` > 0 limits the residual search to that many
/// deterministically subsampled rows and columns per block (0 = full search).
std::pair<NestedIndexSets, CrossStats> greedy_select(ElementOracle& oracle, index_t r_prime,
                                                     int max_sweeps, const std::vector<double>& tau,
                                                     std::uint64_t seed,
                                                     index_t restrict_candidates = 0);

struct CrossResult {
    TTTensor tt;
    NestedIndexSets sets;
    CrossStats stats;
};

/// greedy_select followed by build_cores with tau_k = tau for every bond.
CrossResult cross_approximate(ElementOracle& oracle, index_t r_prime, double tau,
                              int max_sweeps = detail::kDefaultMaxSweeps, std::uint64_t seed = 0);

}  // namespace ttcross
