#pragma once

#include "ttcross/common.hpp"

namespace ttcross {

/// Interpolation sets for a TT cross approximation of an order-N tensor:
/// left[k-1] holds I^{<=k} (multi-indices over d_1..d_k) and right[k-1] holds
/// I^{>k} (multi-indices over d_{k+1}..d_N), for k = 1..N-1. Per level,
/// |I^{<=k}| == |I^{>k}|. When `nested` is set, every member of I^{<=k}
/// extends a member of I^{<=k-1} by one index and symmetrically on the right.
struct NestedIndexSets {
    std::vector<std::vector<MultiIndex>> left;
    std::vector<std::vector<MultiIndex>> right;
    bool nested = true;

    index_t order() const { return static_cast<index_t>(left.size()) + 1; }
    std::vector<index_t> sizes() const {
        std::vector<index_t> s;
        s.reserve(left.size());
        for (const auto& l : left) s.push_back(static_cast<index_t>(l.size()));
        return s;
    }
};

/// Structural nestedness check (both families).
bool is_nested(const NestedIndexSets& sets);

/// Ranges, duplicates, matching sizes; nestedness only when claimed.
void validate_sets(const NestedIndexSets& sets, const std::vector<index_t>& dims);

}  // namespace ttcross
