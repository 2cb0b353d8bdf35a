#include "ttcross/oracle.hpp"

#include <cmath>

namespace ttcross {

double gaussian_at(std::uint64_t seed, std::uint64_t counter) {
    const double u1 = uniform01_at(seed, 2 * counter);
    const double u2 = uniform01_at(seed, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

ElementOracle::ElementOracle(std::vector<index_t> dims, Fn fn)
    : dims_(std::move(dims)), total_(product(dims_)), fn_(std::move(fn)) {
    if (dims_.empty()) throw std::invalid_argument("ElementOracle: empty dimension vector");
    for (index_t d : dims_)
        if (d < 1) throw std::invalid_argument("ElementOracle: every dimension must be >= 1");
    if (!fn_) throw std::invalid_argument("ElementOracle: null element function");
}

double ElementOracle::query(const MultiIndex& mi) {
    if (!in_range(mi, dims_)) throw std::invalid_argument("ElementOracle::query: index out of range");
    return query_flat(linearize(mi, dims_));
}

double ElementOracle::query_flat(index_t flat) {
    if (flat < 0 || flat >= total_)
        throw std::invalid_argument("ElementOracle::query_flat: index out of range");
    auto it = cache_.find(flat);
    if (it != cache_.end()) return it->second;
    const double v = fn_(flat);
    cache_.emplace(flat, v);
    return v;
}

std::shared_ptr<ElementOracle> make_dense_oracle(std::shared_ptr<const DenseTensor> t) {
    if (!t) throw std::invalid_argument("make_dense_oracle: null tensor");
    return std::make_shared<ElementOracle>(t->dims(),
                                           [t](index_t flat) { return t->at_flat(flat); });
}

std::shared_ptr<ElementOracle> noisy_oracle(std::shared_ptr<ElementOracle> base, double mu,
                                            std::uint64_t seed) {
    if (!base) throw std::invalid_argument("noisy_oracle: null base oracle");
    if (mu < 0.0) throw std::invalid_argument("noisy_oracle: mu must be >= 0");
    return std::make_shared<ElementOracle>(base->dims(), [base, mu, seed](index_t flat) {
        return base->query_flat(flat) + mu * gaussian_at(seed, static_cast<std::uint64_t>(flat));
    });
}

DenseTensor materialize_noise(const std::vector<index_t>& dims, std::uint64_t seed) {
    DenseTensor e(dims);
    const index_t n = e.size();
    for (index_t i = 0; i < n; ++i) e.at_flat(i) = gaussian_at(seed, static_cast<std::uint64_t>(i));
    return e;
}

}  // namespace ttcross
