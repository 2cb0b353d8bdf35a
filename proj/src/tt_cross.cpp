#include "ttcross/tt_cross.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

#include "ttcross/linalg.hpp"

namespace ttcross {

// ---------------------------------------------------------------------------
// index sets

bool is_nested(const NestedIndexSets& sets) {
    const std::size_t nb = sets.left.size();
    if (sets.right.size() != nb) return false;
    auto contains = [](const std::vector<MultiIndex>& v, const MultiIndex& m) {
        return std::find(v.begin(), v.end(), m) != v.end();
    };
    for (std::size_t k = 1; k < nb; ++k)
        for (const auto& m : sets.left[k]) {
            MultiIndex prefix(std::vector<index_t>(m.idx.begin(), m.idx.end() - 1));
            if (!contains(sets.left[k - 1], prefix)) return false;
        }
    for (std::size_t k = 0; k + 1 < nb; ++k)
        for (const auto& m : sets.right[k]) {
            MultiIndex suffix(std::vector<index_t>(m.idx.begin() + 1, m.idx.end()));
            if (!contains(sets.right[k + 1], suffix)) return false;
        }
    return true;
}

void validate_sets(const NestedIndexSets& sets, const std::vector<index_t>& dims) {
    const index_t n = static_cast<index_t>(dims.size());
    if (n < 2) {
        if (!sets.left.empty() || !sets.right.empty())
            throw std::invalid_argument("index sets: an order-1 tensor has no bonds");
        return;
    }
    if (static_cast<index_t>(sets.left.size()) != n - 1 ||
        static_cast<index_t>(sets.right.size()) != n - 1)
        throw std::invalid_argument("index sets: need N-1 left and right levels");

    auto check_group = [&](const std::vector<MultiIndex>& g, std::span<const index_t> d,
                           const char* side) {
        if (g.empty()) throw std::invalid_argument(std::string("index sets: empty ") + side + " level");
        for (const auto& m : g)
            if (!in_range(m, d))
                throw std::invalid_argument(std::string("index sets: ") + side +
                                            " member out of range or of wrong length");
        std::vector<MultiIndex> s = g;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument(std::string("index sets: duplicate ") + side + " member");
    };
    for (index_t k = 1; k <= n - 1; ++k) {
        const auto& l = sets.left[static_cast<std::size_t>(k - 1)];
        const auto& r = sets.right[static_cast<std::size_t>(k - 1)];
        if (l.size() != r.size())
            throw std::invalid_argument("index sets: |I^{<=k}| != |I^{>k}| at bond " + std::to_string(k));
        check_group(l, std::span<const index_t>(dims.data(), static_cast<std::size_t>(k)), "left");
        check_group(r, std::span<const index_t>(dims.data() + k, static_cast<std::size_t>(n - k)),
                    "right");
    }
    if (sets.nested && !is_nested(sets))
        throw std::invalid_argument("index sets: marked nested but the structure is not");
}

// ---------------------------------------------------------------------------
// gathering and core assembly

Matrix oracle_gather(ElementOracle& oracle, const std::vector<MultiIndex>& rows,
                     const std::vector<MultiIndex>& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t s = 0; s < rows.size(); ++s)
            out(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) =
                oracle.query(concat(rows[s], cols[c]));
    return out;
}

TTTensor build_cores(ElementOracle& oracle, const NestedIndexSets& sets,
                     const std::vector<double>& tau) {
    const auto& dims = oracle.dims();
    const index_t n = oracle.order();

    std::vector<TTCore> cores;
    cores.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        TTCore c(1, dims[0], 1);
        for (index_t i = 0; i < dims[0]; ++i) c.data()[i] = oracle.query_flat(i);
        cores.push_back(std::move(c));
        return TTTensor(std::move(cores));
    }

    if (sets.left.empty() || sets.right.empty())
        throw std::invalid_argument("build_cores: empty index sets");
    validate_sets(sets, dims);
    if (static_cast<index_t>(tau.size()) != n - 1)
        throw std::invalid_argument("build_cores: need N-1 truncation thresholds");
    for (double t : tau)
        if (t < 0.0) throw std::invalid_argument("build_cores: tau must be >= 0");

    const std::vector<MultiIndex> empty_prefix{MultiIndex{}};
    index_t r_prev = 1;
    for (index_t k = 1; k <= n - 1; ++k) {
        const auto& prefixes = (k == 1) ? empty_prefix : sets.left[static_cast<std::size_t>(k - 2)];
        const auto& rowset = sets.left[static_cast<std::size_t>(k - 1)];
        const auto& colset = sets.right[static_cast<std::size_t>(k - 1)];
        const index_t dk = dims[static_cast<std::size_t>(k - 1)];

        // fiber block rows (prefix, i_k), prefix fastest: matches the core's
        // left unfolding layout, so one GEMM fills the core
        std::vector<MultiIndex> rows;
        rows.reserve(prefixes.size() * static_cast<std::size_t>(dk));
        for (index_t i = 0; i < dk; ++i)
            for (const auto& p : prefixes) {
                MultiIndex m = p;
                m.idx.push_back(i);
                rows.push_back(std::move(m));
            }
        const Matrix b = oracle_gather(oracle, rows, colset);
        const Matrix u = oracle_gather(oracle, rowset, colset);

        const Svd udec = svd(u);
        const double smax = udec.sigma.size() > 0 ? udec.sigma(0) : 0.0;
        if (smax <= tau[static_cast<std::size_t>(k - 1)] || smax == 0.0)
            throw degenerate_core_error("build_cores: every singular value of the intersection at bond " +
                                        std::to_string(k) + " is truncated");

        TTCore core(r_prev, dk, static_cast<index_t>(rowset.size()));
        core.left_unfold().noalias() = b * pinv_tau(u, tau[static_cast<std::size_t>(k - 1)]);
        cores.push_back(std::move(core));
        r_prev = static_cast<index_t>(rowset.size());
    }

    const auto& prefixes = sets.left[static_cast<std::size_t>(n - 2)];
    const index_t dn = dims[static_cast<std::size_t>(n - 1)];
    TTCore last(r_prev, dn, 1);
    for (index_t i = 0; i < dn; ++i)
        for (std::size_t s = 0; s < prefixes.size(); ++s) {
            MultiIndex m = prefixes[s];
            m.idx.push_back(i);
            last.data()[static_cast<index_t>(s) + r_prev * i] = oracle.query(m);
        }
    cores.push_back(std::move(last));
    return TTTensor(std::move(cores));
}

// ---------------------------------------------------------------------------
// greedy pivot search

namespace {

enum class Phase { Grow, RightOnly, LeftOnly };

struct GreedyState {
    ElementOracle* oracle = nullptr;
    std::vector<index_t> dims;
    index_t n = 0;
    index_t r_prime = 0;
    const std::vector<double>* tau = nullptr;
    index_t restrict_candidates = 0;
    std::uint64_t seed = 0;

    // left[0] and right[n] hold a single empty multi-index (the I^{<=0} and
    // I^{>N} conventions); levels 1..n-1 are the working sets
    std::vector<std::vector<MultiIndex>> left;
    std::vector<std::vector<MultiIndex>> right;

    double running_max = 0.0;
    bool changed = false;
    double sweep_max_resid = 0.0;
    std::uint64_t visit_counter = 0;
    std::vector<std::string> warnings;

    double stop_tol() const { return detail::kStopTolFactor * running_max; }

    double qentry(const MultiIndex& row, const MultiIndex& col) {
        const double v = oracle->query(concat(row, col));
        running_max = std::max(running_max, std::abs(v));
        return v;
    }
};

std::vector<MultiIndex> extend_left(const std::vector<MultiIndex>& prefixes, index_t d) {
    std::vector<MultiIndex> out;
    out.reserve(prefixes.size() * static_cast<std::size_t>(d));
    for (index_t i = 0; i < d; ++i)
        for (const auto& p : prefixes) {
            MultiIndex m = p;
            m.idx.push_back(i);
            out.push_back(std::move(m));
        }
    return out;
}

std::vector<MultiIndex> extend_right(const std::vector<MultiIndex>& suffixes, index_t d) {
    std::vector<MultiIndex> out;
    out.reserve(suffixes.size() * static_cast<std::size_t>(d));
    for (const auto& q : suffixes)
        for (index_t i = 0; i < d; ++i) {
            MultiIndex m;
            m.idx.reserve(q.idx.size() + 1);
            m.idx.push_back(i);
            m.idx.insert(m.idx.end(), q.idx.begin(), q.idx.end());
            out.push_back(std::move(m));
        }
    return out;
}

// keep all currently selected members, then a seeded sample of the rest
std::vector<MultiIndex> subsample_space(const std::vector<MultiIndex>& space,
                                        const std::vector<MultiIndex>& keep, index_t limit,
                                        std::uint64_t salt) {
    if (limit <= 0 || static_cast<index_t>(space.size()) <= limit) return space;
    std::vector<char> chosen(space.size(), 0);
    for (const auto& m : keep) {
        auto it = std::find(space.begin(), space.end(), m);
        if (it != space.end()) chosen[static_cast<std::size_t>(it - space.begin())] = 1;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (!chosen[i]) rest.push_back(i);
    std::mt19937_64 rng(salt);
    std::shuffle(rest.begin(), rest.end(), rng);
    index_t have = static_cast<index_t>(space.size() - rest.size());
    for (std::size_t i = 0; i < rest.size() && have < limit; ++i, ++have) chosen[rest[i]] = 1;
    std::vector<MultiIndex> out;
    for (std::size_t i = 0; i < space.size(); ++i)
        if (chosen[i]) out.push_back(space[i]);
    return out;
}

Matrix gather_sub(const Matrix& s, const std::vector<index_t>& rows, const std::vector<index_t>& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s(rows[r], cols[c]);
    return out;
}

double abs_volume(const Matrix& s, const std::vector<index_t>& rows, const std::vector<index_t>& cols) {
    return std::abs(gather_sub(s, rows, cols).partialPivLu().determinant());
}

void visit_bond(GreedyState& st, index_t k, Phase phase) {
    const index_t dk = st.dims[static_cast<std::size_t>(k - 1)];
    const index_t dk1 = st.dims[static_cast<std::size_t>(k)];
    auto& lvl_left = st.left[static_cast<std::size_t>(k)];
    auto& lvl_right = st.right[static_cast<std::size_t>(k)];

    std::vector<MultiIndex> rowsp = extend_left(st.left[static_cast<std::size_t>(k - 1)], dk);
    std::vector<MultiIndex> colsp = extend_right(st.right[static_cast<std::size_t>(k + 1)], dk1);
    ++st.visit_counter;
    if (st.restrict_candidates > 0) {
        rowsp = subsample_space(rowsp, lvl_left, st.restrict_candidates,
                                mix_seed(st.seed, 2 * st.visit_counter));
        colsp = subsample_space(colsp, lvl_right, st.restrict_candidates,
                                mix_seed(st.seed, 2 * st.visit_counter + 1));
    }

    Matrix s(static_cast<Eigen::Index>(rowsp.size()), static_cast<Eigen::Index>(colsp.size()));
    for (std::size_t c = 0; c < colsp.size(); ++c)
        for (std::size_t r = 0; r < rowsp.size(); ++r)
            s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                st.qentry(rowsp[r], colsp[c]);

    // project the current sets onto the (possibly rebuilt) spaces
    auto project = [](const std::vector<MultiIndex>& members, const std::vector<MultiIndex>& space) {
        std::vector<index_t> pos;
        for (const auto& m : members) {
            auto it = std::find(space.begin(), space.end(), m);
            if (it != space.end()) pos.push_back(static_cast<index_t>(it - space.begin()));
        }
        return pos;
    };
    std::vector<index_t> rowsel = project(lvl_left, rowsp);
    std::vector<index_t> colsel = project(lvl_right, colsp);

    index_t target = 0;
    switch (phase) {
        case Phase::Grow:
            target = std::min<index_t>(st.r_prime,
                                       std::min<index_t>(static_cast<index_t>(rowsp.size()),
                                                         static_cast<index_t>(colsp.size())));
            break;
        case Phase::RightOnly:
            target = std::min<index_t>(static_cast<index_t>(lvl_left.size()),
                                       static_cast<index_t>(colsp.size()));
            break;
        case Phase::LeftOnly:
            target = std::min<index_t>(static_cast<index_t>(lvl_right.size()),
                                       static_cast<index_t>(rowsp.size()));
            break;
    }
    const bool update_rows = phase != Phase::RightOnly;
    const bool update_cols = phase != Phase::LeftOnly;
    if (update_rows && static_cast<index_t>(rowsel.size()) > target) rowsel.resize(target);
    if (update_cols && static_cast<index_t>(colsel.size()) > target) colsel.resize(target);

    const double tk = (*st.tau)[static_cast<std::size_t>(k - 1)];
    auto compute_residual = [&]() -> Matrix {
        if (rowsel.empty() || colsel.empty()) return s;
        Matrix sub_u = gather_sub(s, rowsel, colsel);
        Matrix sc(s.rows(), static_cast<Eigen::Index>(colsel.size()));
        for (std::size_t c = 0; c < colsel.size(); ++c) sc.col(static_cast<Eigen::Index>(c)) = s.col(colsel[c]);
        Matrix sr(static_cast<Eigen::Index>(rowsel.size()), s.cols());
        for (std::size_t r = 0; r < rowsel.size(); ++r) sr.row(static_cast<Eigen::Index>(r)) = s.row(rowsel[r]);
        Matrix interp = (sc * pinv_tau(sub_u, tk)) * sr;
        return s - interp;
    };

    auto is_sel = [](const std::vector<index_t>& v, index_t x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };

    const bool was_full = static_cast<index_t>(rowsel.size()) == target &&
                          static_cast<index_t>(colsel.size()) == target;

    // growth: one pivot at a time, always from the entry of largest residual
    while ((update_rows && static_cast<index_t>(rowsel.size()) < target) ||
           (update_cols && static_cast<index_t>(colsel.size()) < target)) {
        const bool need_row = update_rows && static_cast<index_t>(rowsel.size()) < target;
        const bool need_col = update_cols && static_cast<index_t>(colsel.size()) < target;
        const Matrix res = compute_residual();
        index_t best_r = -1, best_c = -1;
        double best = -1.0;
        for (Eigen::Index c = 0; c < res.cols(); ++c) {
            if (need_col && is_sel(colsel, c)) continue;
            for (Eigen::Index r = 0; r < res.rows(); ++r) {
                if (need_row && is_sel(rowsel, r)) continue;
                const double m = std::abs(res(r, c));
                if (m > best) {
                    best = m;
                    best_r = r;
                    best_c = c;
                }
            }
        }
        if (best_r < 0) {
            st.warnings.push_back("greedy_select: no admissible pivot at bond " + std::to_string(k));
            break;
        }
        st.sweep_max_resid = std::max(st.sweep_max_resid, best);
        if (need_row) rowsel.push_back(best_r);
        if (need_col) colsel.push_back(best_c);
        st.changed = true;
    }

    // improvement: try to swap in the largest-residual entry, accepting only
    // a strict gain in intersection volume
    if (phase == Phase::Grow && was_full && target >= 1) {
        const Matrix res = compute_residual();
        index_t cand_r = -1, cand_c = -1;
        double mag = 0.0, mag_all = 0.0;
        for (Eigen::Index c = 0; c < res.cols(); ++c)
            for (Eigen::Index r = 0; r < res.rows(); ++r) {
                const double m = std::abs(res(r, c));
                mag_all = std::max(mag_all, m);
                if (is_sel(rowsel, r) && is_sel(colsel, c)) continue;
                if (m > mag) {
                    mag = m;
                    cand_r = r;
                    cand_c = c;
                }
            }
        st.sweep_max_resid = std::max(st.sweep_max_resid, mag_all);

        if (cand_r >= 0 && mag > st.stop_tol()) {
            const bool row_new = !is_sel(rowsel, cand_r);
            const bool col_new = !is_sel(colsel, cand_c);
            const double current = abs_volume(s, rowsel, colsel);
            double best = current * (1.0 + 1e-12);
            int best_u = -1, best_v = -1;
            const int m = static_cast<int>(target);
            if (row_new)
                for (int u = 0; u < m; ++u) {
                    auto rows2 = rowsel;
                    rows2[static_cast<std::size_t>(u)] = cand_r;
                    const double vol = abs_volume(s, rows2, colsel);
                    if (vol > best) {
                        best = vol;
                        best_u = u;
                        best_v = -1;
                    }
                }
            if (col_new)
                for (int v = 0; v < m; ++v) {
                    auto cols2 = colsel;
                    cols2[static_cast<std::size_t>(v)] = cand_c;
                    const double vol = abs_volume(s, rowsel, cols2);
                    if (vol > best) {
                        best = vol;
                        best_u = -1;
                        best_v = v;
                    }
                }
            if (row_new && col_new)
                for (int u = 0; u < m; ++u)
                    for (int v = 0; v < m; ++v) {
                        auto rows2 = rowsel;
                        auto cols2 = colsel;
                        rows2[static_cast<std::size_t>(u)] = cand_r;
                        cols2[static_cast<std::size_t>(v)] = cand_c;
                        const double vol = abs_volume(s, rows2, cols2);
                        if (vol > best) {
                            best = vol;
                            best_u = u;
                            best_v = v;
                        }
                    }
            if (best_u >= 0 || best_v >= 0) {
                if (best_u >= 0) rowsel[static_cast<std::size_t>(best_u)] = cand_r;
                if (best_v >= 0) colsel[static_cast<std::size_t>(best_v)] = cand_c;
                st.changed = true;
            }
        }
    }

    auto members_of = [](const std::vector<MultiIndex>& space, const std::vector<index_t>& pos) {
        std::vector<MultiIndex> out;
        out.reserve(pos.size());
        for (index_t p : pos) out.push_back(space[static_cast<std::size_t>(p)]);
        return out;
    };
    if (update_rows) lvl_left = members_of(rowsp, rowsel);
    if (update_cols) lvl_right = members_of(colsp, colsel);
}

}  // namespace

std::pair<NestedIndexSets, CrossStats> greedy_select(ElementOracle& oracle, index_t r_prime,
                                                     int max_sweeps, const std::vector<double>& tau,
                                                     std::uint64_t seed, index_t restrict_candidates) {
    const auto& dims = oracle.dims();
    const index_t n = oracle.order();
    if (r_prime < 1) throw std::invalid_argument("greedy_select: r_prime must be >= 1");
    if (max_sweeps < 1) throw std::invalid_argument("greedy_select: max_sweeps must be >= 1");

    CrossStats stats;
    const index_t q0 = oracle.query_count();
    NestedIndexSets out;
    if (n < 2) {
        return {out, stats};
    }
    if (static_cast<index_t>(tau.size()) != n - 1)
        throw std::invalid_argument("greedy_select: need N-1 truncation thresholds");

    GreedyState st;
    st.oracle = &oracle;
    st.dims = dims;
    st.n = n;
    st.r_prime = r_prime;
    st.tau = &tau;
    st.restrict_candidates = restrict_candidates;
    st.seed = seed;

    // random nested seed chain
    std::mt19937_64 rng(mix_seed(seed, 0xC305A1));
    std::vector<index_t> chain(static_cast<std::size_t>(n));
    for (index_t j = 0; j < n; ++j) {
        std::uniform_int_distribution<index_t> dist(0, dims[static_cast<std::size_t>(j)] - 1);
        chain[static_cast<std::size_t>(j)] = dist(rng);
    }
    st.left.assign(static_cast<std::size_t>(n + 1), {});
    st.right.assign(static_cast<std::size_t>(n + 1), {});
    st.left[0] = {MultiIndex{}};
    st.right[static_cast<std::size_t>(n)] = {MultiIndex{}};
    for (index_t k = 1; k <= n - 1; ++k) {
        st.left[static_cast<std::size_t>(k)] = {
            MultiIndex(std::vector<index_t>(chain.begin(), chain.begin() + k))};
        st.right[static_cast<std::size_t>(k)] = {
            MultiIndex(std::vector<index_t>(chain.begin() + k, chain.end()))};
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        st.changed = false;
        st.sweep_max_resid = 0.0;
        if (sweep % 2 == 0)
            for (index_t k = 1; k <= n - 1; ++k) visit_bond(st, k, Phase::Grow);
        else
            for (index_t k = n - 1; k >= 1; --k) visit_bond(st, k, Phase::Grow);
        stats.pivot_residuals.push_back(st.sweep_max_resid);
        ++stats.sweeps_run;
        if (!st.changed) break;
    }

    // finalization: rebuild the right family bottom-up, then the left family
    // top-down, so both are nested against their final neighbours
    for (index_t k = n - 1; k >= 1; --k) visit_bond(st, k, Phase::RightOnly);
    ++stats.sweeps_run;
    for (index_t k = 1; k <= n - 1; ++k) visit_bond(st, k, Phase::LeftOnly);
    ++stats.sweeps_run;

    out.left.assign(st.left.begin() + 1, st.left.begin() + static_cast<std::ptrdiff_t>(n));
    out.right.assign(st.right.begin() + 1, st.right.begin() + static_cast<std::ptrdiff_t>(n));
    for (index_t k = 0; k < n - 1; ++k) {
        auto& l = out.left[static_cast<std::size_t>(k)];
        auto& r = out.right[static_cast<std::size_t>(k)];
        if (l.size() != r.size()) {
            st.warnings.push_back("greedy_select: unequal set sizes at bond " + std::to_string(k + 1) +
                                  ", trimming");
            const std::size_t m = std::min(l.size(), r.size());
            l.resize(m);
            r.resize(m);
        }
    }
    out.nested = is_nested(out);
    if (!out.nested) st.warnings.push_back("greedy_select: finalization left non-nested sets");

    stats.warnings = std::move(st.warnings);
    stats.queries = oracle.query_count() - q0;
    return {std::move(out), std::move(stats)};
}

CrossResult cross_approximate(ElementOracle& oracle, index_t r_prime, double tau, int max_sweeps,
                              std::uint64_t seed) {
    if (tau < 0.0) throw std::invalid_argument("cross_approximate: tau must be >= 0");
    const index_t n = oracle.order();
    const index_t q0 = oracle.query_count();
    const std::vector<double> tauv(static_cast<std::size_t>(std::max<index_t>(n - 1, 0)), tau);
    auto [sets, stats] = greedy_select(oracle, r_prime, max_sweeps, tauv, seed);
    TTTensor tt = build_cores(oracle, sets, tauv);
    stats.queries = oracle.query_count() - q0;
    return {std::move(tt), std::move(sets), std::move(stats)};
}

}  // namespace ttcross
