#include "ttcross/bounds.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "ttcross/linalg.hpp"
#include "ttcross/tt.hpp"

namespace ttcross {

namespace {

index_t ceil_log2(index_t n) {
    index_t l = 0;
    index_t p = 1;
    while (p < n) {
        p *= 2;
        ++l;
    }
    return l;
}

void check_budget(const DenseTensor& t) {
    if (t.size() > detail::kDenseElementBudget)
        throw budget_error("bounds: tensor exceeds the desk-scale element budget");
}

std::vector<index_t> row_positions(const std::vector<MultiIndex>& members,
                                   std::span<const index_t> dims) {
    std::vector<index_t> pos;
    pos.reserve(members.size());
    for (const auto& m : members) pos.push_back(linearize(m, dims));
    return pos;
}

Matrix pick_rows(const Eigen::Ref<const Matrix>& a, const std::vector<index_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = a.row(rows[i]);
    return out;
}

Matrix pick_cols(const Eigen::Ref<const Matrix>& a, const std::vector<index_t>& cols) {
    Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = a.col(cols[i]);
    return out;
}

double shape_value(double a, double c, double r, double eps, index_t n, bool noisy) {
    const double l = static_cast<double>(ceil_log2(n));
    const double a2 = a * a;
    const double base = a2 * r + a2 * c * r * eps + a2 * c * c * eps * eps;
    const double tail = noisy ? a2 * eps + a2 * c * eps * eps + a2 * c * c * eps * eps
                              : a2 * eps + a2 * c * eps * eps + a2 * c * c * eps * eps * eps;
    return std::pow(base, l - 1.0) * tail;
}

}  // namespace

std::pair<double, std::vector<double>> epsilon_of(const DenseTensor& t,
                                                  const std::vector<index_t>& ranks) {
    check_budget(t);
    const index_t n = t.order();
    if (static_cast<index_t>(ranks.size()) != n - 1)
        throw std::invalid_argument("epsilon_of: need N-1 ranks");
    std::vector<double> per_k;
    per_k.reserve(ranks.size());
    double eps = 0.0;
    for (index_t k = 1; k <= n - 1; ++k) {
        const auto a = unfold(t, k);
        const index_t rk = ranks[static_cast<std::size_t>(k - 1)];
        if (rk < 1 || rk > std::min(a.rows(), a.cols()))
            throw std::invalid_argument("epsilon_of: rank out of range at bond " + std::to_string(k));
        const Svd dec = svd(a);
        const double resid = dec.sigma.tail(dec.sigma.size() - rk).norm();
        per_k.push_back(resid);
        eps = std::max(eps, resid);
    }
    return {eps, std::move(per_k)};
}

double kappa_of(const DenseTensor& t, const NestedIndexSets& sets) {
    check_budget(t);
    const auto& dims = t.dims();
    const index_t n = t.order();
    NestedIndexSets unchecked = sets;
    unchecked.nested = false;  // kappa does not require nestedness
    validate_sets(unchecked, dims);

    double kappa = 0.0;
    for (index_t k = 1; k <= n - 1; ++k) {
        const auto a = unfold(t, k);
        const auto rows = row_positions(sets.left[static_cast<std::size_t>(k - 1)],
                                        std::span<const index_t>(dims.data(), static_cast<std::size_t>(k)));
        const auto cols = row_positions(sets.right[static_cast<std::size_t>(k - 1)],
                                        std::span<const index_t>(dims.data() + k,
                                                                 static_cast<std::size_t>(n - k)));
        Matrix u(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows.size(); ++i)
                u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(rows[i], cols[j]);

        const Svd udec = svd(u);
        const double smax = udec.sigma(0);
        const double smin = udec.sigma(udec.sigma.size() - 1);
        if (smax <= 0.0 || smin / smax <= 1e-12)
            throw precondition_error("kappa_of: intersection matrix at bond " + std::to_string(k) +
                                     " is numerically singular");

        Eigen::PartialPivLU<Matrix> lu(u);
        Eigen::PartialPivLU<Matrix> lut(u.transpose());
        const Matrix cu = lut.solve(pick_cols(a, cols).transpose()).transpose();
        const Matrix ur = lu.solve(pick_rows(a, rows));
        kappa = std::max({kappa, spectral_norm(cu), spectral_norm(ur)});
    }
    return kappa;
}

namespace {

SelectionQuantities quantities_impl(const DenseTensor& t, const DenseTensor* e,
                               const std::vector<index_t>& ranks, const NestedIndexSets& sets) {
    check_budget(t);
    const auto& dims = t.dims();
    const index_t n = t.order();
    if (static_cast<index_t>(ranks.size()) != n - 1)
        throw std::invalid_argument("bound quantities: need N-1 ranks");
    NestedIndexSets unchecked = sets;
    unchecked.nested = false;
    validate_sets(unchecked, dims);
    if (e && e->dims() != dims) throw std::invalid_argument("bound quantities: noise dims mismatch");

    SelectionQuantities out;
    for (index_t k = 1; k <= n - 1; ++k) {
        const auto a = unfold(t, k);
        const index_t rk = ranks[static_cast<std::size_t>(k - 1)];
        if (rk < 1 || rk > std::min(a.rows(), a.cols()))
            throw std::invalid_argument("bound quantities: rank out of range at bond " +
                                        std::to_string(k));
        const Svd dec = svd(a);
        const auto rows = row_positions(sets.left[static_cast<std::size_t>(k - 1)],
                                        std::span<const index_t>(dims.data(), static_cast<std::size_t>(k)));
        const auto cols = row_positions(sets.right[static_cast<std::size_t>(k - 1)],
                                        std::span<const index_t>(dims.data() + k,
                                                                 static_cast<std::size_t>(n - k)));

        const Matrix wi = pick_rows(dec.w.leftCols(rk), rows);
        const Matrix vj = pick_rows(dec.v.leftCols(rk), cols);

        BoundPerK row;
        row.k = k;
        row.epsilon_k = dec.sigma.tail(dec.sigma.size() - rk).norm();
        row.w_k = spectral_norm(pinv_tau(wi, 0.0));
        row.v_k = spectral_norm(pinv_tau(vj, 0.0));

        // intersection of the (noisy) tensor
        Matrix u(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows.size(); ++i)
                u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(rows[i], cols[j]);
        if (e) {
            const auto em = unfold(*e, k);
            for (std::size_t j = 0; j < cols.size(); ++j)
                for (std::size_t i = 0; i < rows.size(); ++i)
                    u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += em(rows[i], cols[j]);
        }
        row.c_k = spectral_norm(pinv_tau(u, 0.0));

        // rank(T_{r_k}(I,J)) == r_k, checked against sigma_max of the unfolding
        const Matrix ur = wi * dec.sigma.head(rk).asDiagonal() * vj.transpose();
        const Svd ur_dec = svd(ur);
        row.rank_check = ur_dec.sigma.size() >= rk &&
                         ur_dec.sigma(static_cast<Eigen::Index>(rk - 1)) > 1e-10 * dec.sigma(0);

        out.per_k.push_back(row);
        out.rank_check.push_back(row.rank_check);
        out.a = std::max({out.a, row.w_k, row.v_k});
        out.c = std::max(out.c, row.c_k);
    }
    return out;
}

}  // namespace

SelectionQuantities selection_quantities(const DenseTensor& t, const std::vector<index_t>& ranks,
                               const NestedIndexSets& sets) {
    return quantities_impl(t, nullptr, ranks, sets);
}

BoundReport noisy_bound_quantities(const DenseTensor& t, const DenseTensor& e,
                            const std::vector<index_t>& ranks, const NestedIndexSets& sets) {
    SelectionQuantities q = quantities_impl(t, &e, ranks, sets);
    auto [eps, eps_k] = epsilon_of(t, ranks);

    BoundReport rep;
    rep.epsilon = eps;
    rep.r_max = *std::max_element(ranks.begin(), ranks.end());
    rep.a = q.a;
    rep.c = q.c;
    rep.epsilon_bar = eps + e.frobenius_norm();
    rep.rhs_shape = shape_value(q.a, q.c, static_cast<double>(rep.r_max), rep.epsilon_bar,
                                     t.order(), /*noisy=*/true);
    rep.per_k = std::move(q.per_k);
    return rep;
}

BoundReport evaluate_bounds(const DenseTensor& t, const DenseTensor* e,
                            const std::vector<index_t>& ranks, const NestedIndexSets& sets) {
    BoundReport rep;
    if (e) {
        rep = noisy_bound_quantities(t, *e, ranks, sets);
    } else {
        SelectionQuantities q = selection_quantities(t, ranks, sets);
        auto [eps, eps_k] = epsilon_of(t, ranks);
        rep.epsilon = eps;
        rep.r_max = *std::max_element(ranks.begin(), ranks.end());
        rep.a = q.a;
        rep.c = q.c;
        rep.epsilon_bar = eps;
        rep.rhs_shape = shape_value(q.a, q.c, static_cast<double>(rep.r_max), eps, t.order(),
                                         /*noisy=*/false);
        rep.per_k = std::move(q.per_k);
    }
    try {
        const double kappa = kappa_of(t, sets);
        rep.kappa = kappa;
        const double l = static_cast<double>(ceil_log2(t.order()));
        rep.rhs_kappa = (std::pow(3.0 * kappa, l) - 1.0) / (3.0 * kappa - 1.0) *
                       (static_cast<double>(rep.r_max) + 1.0) * rep.epsilon;
        for (index_t k = 1; k <= t.order() - 1; ++k) {
            // recompute the per-bond kappa factors for the table
            const auto a = unfold(t, k);
            const auto& dims = t.dims();
            const auto rows = row_positions(sets.left[static_cast<std::size_t>(k - 1)],
                                            std::span<const index_t>(dims.data(),
                                                                     static_cast<std::size_t>(k)));
            const auto cols = row_positions(
                sets.right[static_cast<std::size_t>(k - 1)],
                std::span<const index_t>(dims.data() + k, static_cast<std::size_t>(t.order() - k)));
            Matrix u(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t j = 0; j < cols.size(); ++j)
                for (std::size_t i = 0; i < rows.size(); ++i)
                    u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(rows[i], cols[j]);
            Eigen::PartialPivLU<Matrix> lu(u);
            Eigen::PartialPivLU<Matrix> lut(u.transpose());
            const Matrix cu = lut.solve(pick_cols(a, cols).transpose()).transpose();
            const Matrix ur = lu.solve(pick_rows(a, rows));
            rep.per_k[static_cast<std::size_t>(k - 1)].kappa_col = spectral_norm(cu);
            rep.per_k[static_cast<std::size_t>(k - 1)].kappa_row = spectral_norm(ur);
        }
    } catch (const precondition_error&) {
        // kappa stays absent; the report is still valid
    }
    return rep;
}

}  // namespace ttcross
