#include "ttcross/matrix_cross.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

namespace ttcross {

static void check_selection(const Eigen::Ref<const Matrix>& a, const CurSelection& sel) {
    if (sel.rows.empty() || sel.rows.size() != sel.cols.size())
        throw std::invalid_argument("cur: selection must be nonempty with |I| == |J|");
    auto distinct_in_range = [](const std::vector<index_t>& v, index_t n) {
        std::vector<index_t> s = v;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
        return s.front() >= 0 && s.back() < n;
    };
    if (!distinct_in_range(sel.rows, a.rows()) || !distinct_in_range(sel.cols, a.cols()))
        throw std::invalid_argument("cur: selection indices out of range or duplicated");
}

static Matrix take_rows(const Eigen::Ref<const Matrix>& a, const std::vector<index_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
    for (std::size_t s = 0; s < rows.size(); ++s) out.row(static_cast<Eigen::Index>(s)) = a.row(rows[s]);
    return out;
}

static Matrix take_cols(const Eigen::Ref<const Matrix>& a, const std::vector<index_t>& cols) {
    Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t s = 0; s < cols.size(); ++s) out.col(static_cast<Eigen::Index>(s)) = a.col(cols[s]);
    return out;
}

static Matrix take_block(const Eigen::Ref<const Matrix>& a, const std::vector<index_t>& rows,
                         const std::vector<index_t>& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (std::size_t t = 0; t < cols.size(); ++t)
            out(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = a(rows[s], cols[t]);
    return out;
}

Matrix cur(const Eigen::Ref<const Matrix>& a, const CurSelection& sel, double tau) {
    check_selection(a, sel);
    const Matrix c = take_cols(a, sel.cols);
    const Matrix u = take_block(a, sel.rows, sel.cols);
    const Matrix r = take_rows(a, sel.rows);
    // left-associated product; tt_cross::build_cores performs the identical
    // GEMMs so the N=2 reduction is bit-exact
    Matrix left = c * pinv_tau(u, tau);
    return left * r;
}

MaxvolResult maxvol(const Eigen::Ref<const Matrix>& b, int max_iters) {
    const Eigen::Index m = b.rows(), r = b.cols();
    if (m < r || r < 1) throw std::invalid_argument("maxvol: need m >= r >= 1");

    Eigen::FullPivLU<Matrix> lu(b);
    if (lu.rank() < r) throw std::invalid_argument("maxvol: B is rank-deficient");

    // pivoted-LU start: the first r rows of the row permutation
    std::vector<index_t> rows(static_cast<std::size_t>(r));
    const auto& perm = lu.permutationP().indices();
    // permutationP maps original row i to position perm(i); invert it
    std::vector<index_t> inv(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) inv[static_cast<std::size_t>(perm(i))] = i;
    for (Eigen::Index i = 0; i < r; ++i) rows[static_cast<std::size_t>(i)] = inv[static_cast<std::size_t>(i)];

    MaxvolResult res;
    res.rows = rows;
    auto square = [&](const std::vector<index_t>& idx) {
        Matrix s(r, r);
        for (Eigen::Index i = 0; i < r; ++i) s.row(i) = b.row(idx[static_cast<std::size_t>(i)]);
        return s;
    };

    for (int it = 0; it < max_iters; ++it) {
        Matrix c = square(res.rows).transpose().partialPivLu().solve(b.transpose()).transpose();
        Eigen::Index imax = 0, jmax = 0;
        double best = 0.0;
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index i = 0; i < m; ++i)
                if (std::abs(c(i, j)) > best) {
                    best = std::abs(c(i, j));
                    imax = i;
                    jmax = j;
                }
        if (best <= 1.0 + detail::kMaxvolTol) {
            std::sort(res.rows.begin(), res.rows.end());
            return res;
        }
        res.rows[static_cast<std::size_t>(jmax)] = imax;
        ++res.swaps;
    }
    res.converged = false;
    std::sort(res.rows.begin(), res.rows.end());
    return res;
}

CurSelection select_indices_matrix(const Eigen::Ref<const Matrix>& a, index_t r_prime, int sweeps) {
    if (r_prime < 1 || r_prime > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("select_indices_matrix: r_prime out of range");

    // initial J: the r' columns of largest Euclidean norm, lowest index on ties
    std::vector<index_t> order(static_cast<std::size_t>(a.cols()));
    std::iota(order.begin(), order.end(), 0);
    Vector norms = a.colwise().norm();
    std::stable_sort(order.begin(), order.end(),
                     [&](index_t x, index_t y) { return norms(x) > norms(y); });
    CurSelection sel;
    sel.cols.assign(order.begin(), order.begin() + r_prime);
    std::sort(sel.cols.begin(), sel.cols.end());

    for (int s = 0; s < sweeps; ++s) {
        sel.rows = maxvol(svd(take_cols(a, sel.cols)).w).rows;
        sel.cols = maxvol(svd(take_rows(a, sel.rows)).v).rows;
    }
    if (sel.rows.empty()) sel.rows = maxvol(svd(take_cols(a, sel.cols)).w).rows;
    return sel;
}

CurBoundReport cur_error_bound(const Eigen::Ref<const Matrix>& a, index_t r, const CurSelection& sel) {
    check_selection(a, sel);
    auto [ar, f_fro] = best_rank_r(a, r);
    const Svd dec = svd(ar);

    const Matrix ur = take_block(ar, sel.rows, sel.cols);
    const Svd ur_dec = svd(ur);
    const double smax_a = spectral_norm(a);
    if (ur_dec.sigma.size() < r || ur_dec.sigma(static_cast<Eigen::Index>(r - 1)) <= 1e-10 * smax_a)
        throw precondition_error("cur_error_bound: rank(A_r(I,J)) < r");

    const auto rr = static_cast<Eigen::Index>(r);
    CurBoundReport rep;
    rep.f_fro = f_fro;
    rep.w = spectral_norm(pinv_tau(take_rows(dec.w.leftCols(rr), sel.rows), 0.0));
    rep.v = spectral_norm(pinv_tau(take_rows(dec.v.leftCols(rr), sel.cols), 0.0));
    rep.u = spectral_norm(pinv_tau(take_block(a, sel.rows, sel.cols), 0.0));
    rep.rhs = (rep.w + rep.v + 3.0 * rep.w * rep.v + 1.0) * f_fro +
              (rep.w + rep.v + rep.w * rep.v + 1.0) * rep.u * f_fro * f_fro;
    rep.observed_fro = (a - cur(a, sel, 0.0)).norm();
    return rep;
}

}  // namespace ttcross
