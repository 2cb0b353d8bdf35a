#pragma once

#include <optional>

#include "ttcross/index_sets.hpp"
#include "ttcross/dense_tensor.hpp"

namespace ttcross {

/// Per-unfolding breakdown of the bound quantities.
struct BoundPerK {
    index_t k = 0;
    double epsilon_k = 0.0;   // best rank-r_k residual of the k-th unfolding
    double w_k = 0.0;         // |[W_(k)(I^{<=k},:)]^+|_2
    double v_k = 0.0;         // |[V_(k)(I^{>k},:)]^+|_2
    double c_k = 0.0;         // |[T^<k>(I^{<=k},I^{>k})]^+|_2 (noisy T when given)
    bool rank_check = false;  // rank(T_{r_k}^<k>(I^{<=k},I^{>k})) == r_k
    double kappa_col = 0.0;   // |T^<k>(:,I^{>k}) U^{-1}|_2 when U is invertible
    double kappa_row = 0.0;   // |U^{-1} T^<k>(I^{<=k},:)|_2
};

/// Closed-form quantities of the tensor error bounds against a fully known
/// tensor. The rhs_shape value tracks the bound only up to the universal
/// constant the comparison hides, so it is a shape diagnostic,
/// not a certified bound; rhs_kappa has explicit constants but holds for the
/// existential selection only. kappa is absent when an intersection matrix is
/// too ill-conditioned to invert.
struct BoundReport {
    double epsilon = 0.0;
    index_t r_max = 0;
    std::optional<double> kappa;
    double a = 0.0;
    double c = 0.0;
    double epsilon_bar = 0.0;   // epsilon + |E|_F (== epsilon when E absent)
    std::optional<double> rhs_kappa;
    double rhs_shape = 0.0;
    double observed_fro = 0.0;  // filled by callers that hold a reconstruction
    std::vector<BoundPerK> per_k;
};

/// epsilon of the ranks: max_k |T^<k> - T^<k>_{r_k}|_F, with the per-k values.
std::pair<double, std::vector<double>> epsilon_of(const DenseTensor& t,
                                                  const std::vector<index_t>& ranks);

/// max_k of |T^<k>(:,I^{>k}) U_k^{-1}|_2 and |U_k^{-1} T^<k>(I^{<=k},:)|_2.
/// Requires every intersection matrix to be square and invertible
/// (1/cond > 1e-12); throws precondition_error naming the offending bond.
double kappa_of(const DenseTensor& t, const NestedIndexSets& sets);

struct SelectionQuantities {
    double a = 0.0;
    double c = 0.0;
    std::vector<bool> rank_check;
    std::vector<BoundPerK> per_k;
};

/// a and c of the deterministic bound; never throws, rank_check reports
/// whether the per-bond precondition holds.
SelectionQuantities selection_quantities(const DenseTensor& t, const std::vector<index_t>& ranks,
                               const NestedIndexSets& sets);

/// Noisy variant: c is evaluated on the intersections of T + E and
/// epsilon_bar = epsilon + |E|_F. rhs_shape is filled with the
/// noise-inflated shape value.
BoundReport noisy_bound_quantities(const DenseTensor& t, const DenseTensor& e,
                            const std::vector<index_t>& ranks, const NestedIndexSets& sets);

/// One-stop report: selection quantities plus kappa and rhs_kappa when the
/// intersections are invertible. `e` may be null for exact measurements.
BoundReport evaluate_bounds(const DenseTensor& t, const DenseTensor* e,
                            const std::vector<index_t>& ranks, const NestedIndexSets& sets);

}  // namespace ttcross
