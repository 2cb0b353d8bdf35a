#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttcross {

using index_t = std::int64_t;

/// Exceeding a configured memory/element budget (densification, bounds).
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An intersection matrix whose singular values were all truncated away.
class degenerate_core_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical precondition (rank or invertibility check) does not hold.
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A multi-index (i_1,...,i_k), 0-based. Dimension vectors are passed
/// explicitly where range checks happen.
struct MultiIndex {
    std::vector<index_t> idx;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<index_t> i) : idx(std::move(i)) {}

    index_t size() const { return static_cast<index_t>(idx.size()); }
    index_t operator[](std::size_t k) const { return idx[k]; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.idx == b.idx; }
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.idx <=> b.idx; }
};

inline index_t product(std::span<const index_t> dims) {
    index_t p = 1;
    for (index_t d : dims) p *= d;
    return p;
}

inline bool in_range(const MultiIndex& mi, std::span<const index_t> dims) {
    if (static_cast<std::size_t>(mi.size()) != dims.size()) return false;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (mi.idx[k] < 0 || mi.idx[k] >= dims[k]) return false;
    return true;
}

/// Column-major linearization: i_1 fastest-varying.
inline index_t linearize(std::span<const index_t> idx, std::span<const index_t> dims) {
    index_t off = 0, stride = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        off += idx[k] * stride;
        stride *= dims[k];
    }
    return off;
}

inline index_t linearize(const MultiIndex& mi, std::span<const index_t> dims) {
    return linearize(std::span<const index_t>(mi.idx), dims);
}

inline MultiIndex delinearize(index_t off, std::span<const index_t> dims) {
    MultiIndex mi;
    mi.idx.resize(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
        mi.idx[k] = off % dims[k];
        off /= dims[k];
    }
    return mi;
}

/// Concatenation (i_1..i_k) ++ (i_{k+1}..i_N).
inline MultiIndex concat(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex out;
    out.idx.reserve(a.idx.size() + b.idx.size());
    out.idx.insert(out.idx.end(), a.idx.begin(), a.idx.end());
    out.idx.insert(out.idx.end(), b.idx.begin(), b.idx.end());
    return out;
}

// --- counter-based deterministic random numbers ------------------------------
//
// A hashed counter scheme so that the value at (seed, counter) is independent
// of query order. Used for frozen measurement noise and synthetic tensors.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

inline double uniform01_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(counter));
    // 53-bit mantissa in (0,1]; never exactly 0 so log() below is safe
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal deviate, a pure function of (seed, counter).
double gaussian_at(std::uint64_t seed, std::uint64_t counter);

}  // namespace ttcross
