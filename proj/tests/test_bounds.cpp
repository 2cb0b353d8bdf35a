#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "ttcross/bounds.hpp"
#include "ttcross/linalg.hpp"
#include "ttcross/oracle.hpp"
#include "ttcross/tt_cross.hpp"

using namespace ttcross;

namespace {

TTTensor random_tt(const std::vector<index_t>& dims, const std::vector<index_t>& ranks,
                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<TTCore> cores;
    index_t rl = 1;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        const index_t rr = j + 1 < dims.size() ? ranks[j] : 1;
        TTCore c(rl, dims[j], rr);
        for (index_t i = 0; i < c.size(); ++i) c.data()[i] = g(rng);
        cores.push_back(std::move(c));
        rl = rr;
    }
    return TTTensor(std::move(cores));
}

DenseTensor random_tensor(std::vector<index_t> dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    DenseTensor t(dims);
    for (index_t i = 0; i < t.size(); ++i) t.at_flat(i) = g(rng);
    return t;
}

NestedIndexSets greedy_sets(const DenseTensor& t, index_t r_prime, std::uint64_t seed) {
    auto shared = std::make_shared<DenseTensor>(t);
    auto o = make_dense_oracle(shared);
    const std::vector<double> tau(static_cast<std::size_t>(t.order() - 1), 0.0);
    return greedy_select(*o, r_prime, 8, tau, seed).first;
}

}  // namespace

TEST_CASE("epsilon_of") {
    SUBCASE("exact TT tensor at its ranks") {
        DenseTensor t = tt_to_dense(random_tt({3, 3, 3}, {2, 2}, 3));
        auto [eps, per_k] = epsilon_of(t, {2, 2});
        CHECK(eps <= 1e-10 * t.frobenius_norm());
    }
    SUBCASE("unit-norm additive part bounds epsilon by eta") {
        DenseTensor tr = tt_to_dense(random_tt({3, 3, 3}, {2, 2}, 5));
        tr.vec() /= tr.frobenius_norm();
        DenseTensor f = random_tensor({3, 3, 3}, 7);
        f.vec() /= f.frobenius_norm();
        const double eta = 1e-3;
        DenseTensor t = tr;
        t.vec() += eta * f.vec();
        auto [eps, per_k] = epsilon_of(t, {2, 2});
        CHECK(eps <= eta * (1 + 1e-12));  // best rank-r beats T_r itself
    }
    SUBCASE("per-bond values match an independent full SVD") {
        DenseTensor t = random_tensor({2, 2, 2}, 9);
        auto [eps, per_k] = epsilon_of(t, {1, 1});
        double expect_max = 0.0;
        for (index_t k = 1; k <= 2; ++k) {
            const Svd dec = svd(unfold(t, k));
            const double resid = dec.sigma.tail(dec.sigma.size() - 1).norm();
            CHECK(per_k[static_cast<std::size_t>(k - 1)] == doctest::Approx(resid).epsilon(1e-12));
            expect_max = std::max(expect_max, resid);
        }
        CHECK(eps == doctest::Approx(expect_max).epsilon(1e-12));
    }
}

TEST_CASE("kappa_of") {
    SUBCASE("identity matrix with a full selection gives kappa = 1") {
        DenseTensor t({2, 2}, {1.0, 0.0, 0.0, 1.0});
        NestedIndexSets sets;
        sets.left = {{MultiIndex({0}), MultiIndex({1})}};
        sets.right = {{MultiIndex({0}), MultiIndex({1})}};
        CHECK(kappa_of(t, sets) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("kappa is always >= 1") {
        for (std::uint64_t s = 0; s < 5; ++s) {
            DenseTensor t = tt_to_dense(random_tt({3, 3, 3}, {2, 2}, 100 + s));
            NestedIndexSets sets = greedy_sets(t, 2, s);
            CHECK(kappa_of(t, sets) >= 1.0 - 1e-12);
        }
    }
    SUBCASE("matches brute-force dense evaluation") {
        DenseTensor t = random_tensor({3, 3, 3}, 11);
        NestedIndexSets sets = greedy_sets(t, 2, 13);
        const double kappa = kappa_of(t, sets);
        double expect = 0.0;
        for (index_t k = 1; k <= 2; ++k) {
            const Matrix a = unfold(t, k);
            const Matrix u = gather(t, k, sets.left[static_cast<std::size_t>(k - 1)],
                                    sets.right[static_cast<std::size_t>(k - 1)]);
            std::vector<index_t> rd(t.dims().begin(), t.dims().begin() + k);
            std::vector<index_t> cd(t.dims().begin() + k, t.dims().end());
            Matrix c(a.rows(), u.cols()), r(u.rows(), a.cols());
            for (std::size_t j = 0; j < sets.right[static_cast<std::size_t>(k - 1)].size(); ++j)
                c.col(static_cast<Eigen::Index>(j)) =
                    a.col(linearize(sets.right[static_cast<std::size_t>(k - 1)][j], cd));
            for (std::size_t i = 0; i < sets.left[static_cast<std::size_t>(k - 1)].size(); ++i)
                r.row(static_cast<Eigen::Index>(i)) =
                    a.row(linearize(sets.left[static_cast<std::size_t>(k - 1)][i], rd));
            const Matrix uinv = u.inverse();
            expect = std::max({expect, spectral_norm(c * uinv), spectral_norm(uinv * r)});
        }
        CHECK(kappa == doctest::Approx(expect).epsilon(1e-10));
    }
    SUBCASE("scale invariance") {
        DenseTensor t = random_tensor({2, 3, 2}, 17);
        NestedIndexSets sets = greedy_sets(t, 2, 19);
        const double k1 = kappa_of(t, sets);
        DenseTensor scaled = t;
        scaled.vec() *= -37.5;
        CHECK(kappa_of(scaled, sets) == doctest::Approx(k1).epsilon(1e-10));
    }
    SUBCASE("singular intersection raises a precondition error naming the bond") {
        DenseTensor t({2, 2}, {1.0, 0.0, 0.0, 0.0});
        NestedIndexSets sets;
        sets.left = {{MultiIndex({0}), MultiIndex({1})}};
        sets.right = {{MultiIndex({0}), MultiIndex({1})}};
        try {
            kappa_of(t, sets);
            FAIL("expected precondition_error");
        } catch (const precondition_error& ex) {
            CHECK(std::string(ex.what()).find("bond 1") != std::string::npos);
        }
    }
}

TEST_CASE("selection_quantities") {
    SUBCASE("canonical singular vectors on their support give a = 1") {
        // diag-like order-2 tensor: unfolding singular vectors are canonical
        DenseTensor t({3, 3}, {4.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1e-7});
        NestedIndexSets sets;
        sets.left = {{MultiIndex({0}), MultiIndex({1})}};
        sets.right = {{MultiIndex({0}), MultiIndex({1})}};
        auto q = selection_quantities(t, {2}, sets);
        CHECK(q.a == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(q.rank_check[0]);
    }
    SUBCASE("c of a well-conditioned diagonal intersection") {
        DenseTensor t({3, 3}, {2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0});
        NestedIndexSets sets;
        sets.left = {{MultiIndex({0}), MultiIndex({1})}};
        sets.right = {{MultiIndex({0}), MultiIndex({1})}};
        auto q = selection_quantities(t, {2}, sets);
        CHECK(q.c == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("matches an independent recomputation on a random instance") {
        DenseTensor t = random_tensor({3, 3, 3}, 23);
        NestedIndexSets sets = greedy_sets(t, 2, 29);
        auto q = selection_quantities(t, {2, 2}, sets);
        double a_expect = 0.0, c_expect = 0.0;
        for (index_t k = 1; k <= 2; ++k) {
            const Svd dec = svd(unfold(t, k));
            std::vector<index_t> rd(t.dims().begin(), t.dims().begin() + k);
            std::vector<index_t> cd(t.dims().begin() + k, t.dims().end());
            Matrix wi(2, 2), vj(2, 2);
            for (int i = 0; i < 2; ++i) {
                wi.row(i) = dec.w
                                .row(linearize(sets.left[static_cast<std::size_t>(k - 1)]
                                                        [static_cast<std::size_t>(i)],
                                               rd))
                                .leftCols(2);
                vj.row(i) = dec.v
                                .row(linearize(sets.right[static_cast<std::size_t>(k - 1)]
                                                         [static_cast<std::size_t>(i)],
                                               cd))
                                .leftCols(2);
            }
            a_expect = std::max({a_expect, spectral_norm(pinv_tau(wi, 0.0)),
                                 spectral_norm(pinv_tau(vj, 0.0))});
            const Matrix u = gather(t, k, sets.left[static_cast<std::size_t>(k - 1)],
                                    sets.right[static_cast<std::size_t>(k - 1)]);
            c_expect = std::max(c_expect, spectral_norm(pinv_tau(u, 0.0)));
        }
        CHECK(q.a == doctest::Approx(a_expect).epsilon(1e-9));
        CHECK(q.c == doctest::Approx(c_expect).epsilon(1e-9));
    }
    SUBCASE("rank_check monotonicity under set enlargement on exact TT tensors") {
        for (std::uint64_t s = 0; s < 5; ++s) {
            DenseTensor t = tt_to_dense(random_tt({2, 3, 2}, {2, 2}, 300 + s));
            NestedIndexSets small = greedy_sets(t, 2, s);
            auto shared = std::make_shared<DenseTensor>(t);
            auto o = make_dense_oracle(shared);
            NestedIndexSets big = greedy_select(*o, 3, 8, {0.0, 0.0}, s).first;
            auto qs = selection_quantities(t, {2, 2}, small);
            auto qb = selection_quantities(t, {2, 2}, big);
            int fail_small = 0, fail_big = 0;
            for (bool b : qs.rank_check) fail_small += b ? 0 : 1;
            for (bool b : qb.rank_check) fail_big += b ? 0 : 1;
            CHECK(fail_big <= fail_small);
        }
    }
}

TEST_CASE("noisy_bound_quantities") {
    DenseTensor t = random_tensor({3, 3, 3}, 31);
    NestedIndexSets sets = greedy_sets(t, 2, 37);

    SUBCASE("zero noise reduces to the exact-measurement quantities") {
        DenseTensor zero(t.dims());
        BoundReport rep = noisy_bound_quantities(t, zero, {2, 2}, sets);
        auto q3 = selection_quantities(t, {2, 2}, sets);
        CHECK(rep.a == q3.a);
        CHECK(rep.c == q3.c);
        CHECK(rep.epsilon_bar == rep.epsilon);
    }
    SUBCASE("doubling the noise doubles epsilon_bar - epsilon") {
        DenseTensor e = random_tensor(t.dims(), 41);
        BoundReport r1 = noisy_bound_quantities(t, e, {2, 2}, sets);
        DenseTensor e2 = e;
        e2.vec() *= 2.0;
        BoundReport r2 = noisy_bound_quantities(t, e2, {2, 2}, sets);
        CHECK(r2.epsilon_bar - r2.epsilon ==
              doctest::Approx(2.0 * (r1.epsilon_bar - r1.epsilon)).epsilon(1e-12));
    }
    SUBCASE("per-bond c matches brute-force pinv norms of the noisy blocks") {
        DenseTensor e = random_tensor(t.dims(), 43);
        e.vec() *= 0.01;
        BoundReport rep = noisy_bound_quantities(t, e, {2, 2}, sets);
        for (index_t k = 1; k <= 2; ++k) {
            Matrix u = gather(t, k, sets.left[static_cast<std::size_t>(k - 1)],
                              sets.right[static_cast<std::size_t>(k - 1)]) +
                       gather(e, k, sets.left[static_cast<std::size_t>(k - 1)],
                              sets.right[static_cast<std::size_t>(k - 1)]);
            CHECK(rep.per_k[static_cast<std::size_t>(k - 1)].c_k ==
                  doctest::Approx(spectral_norm(pinv_tau(u, 0.0))).epsilon(1e-10));
        }
    }
}

TEST_CASE("tau-pinv perturbation inequalities") {
    // |A(:,J) pinv_tau(A(I,J))|_2 <= |[W(I,:)]^+|_2 + (1 + |[W(I,:)]^+|_2)
    //                                * |pinv_tau(A(I,J))|_2 |F(:,J)|_F
    // and its transpose twin, for A = A_r + F
    std::mt19937_64 rng(47);
    std::normal_distribution<double> g;
    auto rand_mat = [&](Eigen::Index m, Eigen::Index n) {
        Matrix a(m, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < m; ++i) a(i, j) = g(rng);
        return a;
    };
    int done = 0;
    while (done < 40) {
        const Eigen::Index m = 6, n = 7, r = 2;
        Matrix ar = rand_mat(m, r) * rand_mat(r, n);
        Matrix f = 0.05 * rand_mat(m, n);
        Matrix a = ar + f;
        const Svd dec = svd(ar);
        std::vector<index_t> ri = {0, 1, 2, 3, 4, 5}, ci = {0, 1, 2, 3, 4, 5, 6};
        std::shuffle(ri.begin(), ri.end(), rng);
        std::shuffle(ci.begin(), ci.end(), rng);
        const std::vector<index_t> sel_i(ri.begin(), ri.begin() + 2);
        const std::vector<index_t> sel_j(ci.begin(), ci.begin() + 2);

        Matrix wi(2, static_cast<Eigen::Index>(r)), vj(2, static_cast<Eigen::Index>(r));
        Matrix aij(2, 2), acj(m, 2), air(2, n), fcj(m, 2), fir(2, n);
        for (int i = 0; i < 2; ++i) {
            wi.row(i) = dec.w.row(sel_i[static_cast<std::size_t>(i)]).leftCols(r);
            vj.row(i) = dec.v.row(sel_j[static_cast<std::size_t>(i)]).leftCols(r);
            air.row(i) = a.row(sel_i[static_cast<std::size_t>(i)]);
            fir.row(i) = f.row(sel_i[static_cast<std::size_t>(i)]);
        }
        for (int j = 0; j < 2; ++j) {
            acj.col(j) = a.col(sel_j[static_cast<std::size_t>(j)]);
            fcj.col(j) = f.col(sel_j[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                aij(i, j) = a(sel_i[static_cast<std::size_t>(i)], sel_j[static_cast<std::size_t>(j)]);

        const double w_norm = spectral_norm(pinv_tau(wi, 0.0));
        const double v_norm = spectral_norm(pinv_tau(vj, 0.0));
        if (w_norm > 1e6 || v_norm > 1e6) continue;  // keep the instances well posed

        for (double tau : {0.0, 1e-3, 1e-1}) {
            const Matrix p = pinv_tau(aij, tau);
            const double p_norm = spectral_norm(p);
            CHECK(spectral_norm(acj * p) <=
                  (w_norm + (1.0 + w_norm) * p_norm * fcj.norm()) * (1 + 1e-9));
            CHECK(spectral_norm(p * air) <=
                  (v_norm + (1.0 + v_norm) * p_norm * fir.norm()) * (1 + 1e-9));
        }
        ++done;
    }

    // noisy extension: A~ = A_r + E + F
    done = 0;
    while (done < 25) {
        const Eigen::Index m = 6, n = 6, r = 2;
        Matrix ar = rand_mat(m, r) * rand_mat(r, n);
        Matrix f = 0.05 * rand_mat(m, n);
        Matrix e = 0.02 * rand_mat(m, n);
        Matrix at = ar + f + e;
        const Svd dec = svd(ar);
        std::vector<index_t> ri = {0, 1, 2, 3, 4, 5}, ci = {0, 1, 2, 3, 4, 5};
        std::shuffle(ri.begin(), ri.end(), rng);
        std::shuffle(ci.begin(), ci.end(), rng);
        const std::vector<index_t> sel_i(ri.begin(), ri.begin() + 2);
        const std::vector<index_t> sel_j(ci.begin(), ci.begin() + 2);

        Matrix wi(2, r), vj(2, r), uij(2, 2), ucj(m, 2), uir(2, n);
        Matrix fcj(m, 2), ecj(m, 2), fir(2, n), eir(2, n);
        for (int i = 0; i < 2; ++i) {
            wi.row(i) = dec.w.row(sel_i[static_cast<std::size_t>(i)]).leftCols(r);
            vj.row(i) = dec.v.row(sel_j[static_cast<std::size_t>(i)]).leftCols(r);
            uir.row(i) = at.row(sel_i[static_cast<std::size_t>(i)]);
            fir.row(i) = f.row(sel_i[static_cast<std::size_t>(i)]);
            eir.row(i) = e.row(sel_i[static_cast<std::size_t>(i)]);
        }
        for (int j = 0; j < 2; ++j) {
            ucj.col(j) = at.col(sel_j[static_cast<std::size_t>(j)]);
            fcj.col(j) = f.col(sel_j[static_cast<std::size_t>(j)]);
            ecj.col(j) = e.col(sel_j[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                uij(i, j) = at(sel_i[static_cast<std::size_t>(i)], sel_j[static_cast<std::size_t>(j)]);

        const double w_norm = spectral_norm(pinv_tau(wi, 0.0));
        const double v_norm = spectral_norm(pinv_tau(vj, 0.0));
        if (w_norm > 1e6 || v_norm > 1e6) continue;

        for (double tau : {0.0, 1e-2}) {
            const Matrix p = pinv_tau(uij, tau);
            const double p_norm = spectral_norm(p);
            CHECK(spectral_norm(ucj * p) <=
                  (w_norm + (1.0 + w_norm) * p_norm * (ecj.norm() + fcj.norm())) * (1 + 1e-9));
            CHECK(spectral_norm(p * uir) <=
                  (v_norm + (1.0 + v_norm) * p_norm * (eir.norm() + fir.norm())) * (1 + 1e-9));
        }
        ++done;
    }
}

TEST_CASE("evaluate_bounds") {
    DenseTensor t = tt_to_dense(random_tt({3, 3, 3}, {2, 2}, 61));
    NestedIndexSets sets = greedy_sets(t, 2, 67);
    BoundReport rep = evaluate_bounds(t, nullptr, {2, 2}, sets);
    CHECK(rep.kappa.has_value());
    CHECK(rep.rhs_kappa.has_value());
    CHECK(rep.r_max == 2);
    CHECK(rep.per_k.size() == 2);
    // exact TT tensor: epsilon ~ 0 so the kappa-based bound collapses as well
    CHECK(rep.epsilon <= 1e-10 * t.frobenius_norm());
    CHECK(*rep.rhs_kappa <= 1e-8 * t.frobenius_norm());
}
