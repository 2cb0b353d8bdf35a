#pragma once

#include <functional>
#include <memory>
#include <unordered_map>

#include "ttcross/dense_tensor.hpp"

namespace ttcross {

/// Counted access to single tensor entries. Every value is cached by flat
/// offset, so repeated queries return the identical value (noise stays frozen
/// per index) and query_count() reports distinct indices touched.
class ElementOracle {
public:
    using Fn = std::function<double(index_t flat)>;

    ElementOracle(std::vector<index_t> dims, Fn fn);

    const std::vector<index_t>& dims() const { return dims_; }
    index_t order() const { return static_cast<index_t>(dims_.size()); }
    index_t total_elements() const { return total_; }

    double query(const MultiIndex& mi);
    double query_flat(index_t flat);

    /// Distinct indices touched so far.
    index_t query_count() const { return static_cast<index_t>(cache_.size()); }

private:
    std::vector<index_t> dims_;
    index_t total_;
    Fn fn_;
    std::unordered_map<index_t, double> cache_;
};

/// Oracle over a fully known tensor (shared, not copied).
std::shared_ptr<ElementOracle> make_dense_oracle(std::shared_ptr<const DenseTensor> t);

/// Wrap an oracle with frozen additive noise: query(idx) = base(idx) +
/// mu * e(idx), where e(idx) is a standard-normal deviate determined by
/// (seed, idx) alone. The induced error tensor is therefore well defined and
/// can be materialized with materialize_noise.
std::shared_ptr<ElementOracle> noisy_oracle(std::shared_ptr<ElementOracle> base, double mu,
                                            std::uint64_t seed);

/// The full e(idx) tensor matching noisy_oracle's deviates, entry for entry.
DenseTensor materialize_noise(const std::vector<index_t>& dims, std::uint64_t seed);

}  // namespace ttcross
