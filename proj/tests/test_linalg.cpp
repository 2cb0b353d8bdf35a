#include <doctest.h>

#include <random>

#include "ttcross/linalg.hpp"

using namespace ttcross;

namespace {

Matrix random_matrix(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix a(m, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i) a(i, j) = g(rng);
    return a;
}

Matrix random_rank_r(Eigen::Index m, Eigen::Index n, Eigen::Index r, std::uint64_t seed) {
    return random_matrix(m, r, seed) * random_matrix(r, n, seed + 1);
}

}  // namespace

TEST_CASE("svd basics") {
    SUBCASE("diagonal") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 3.0;
        a(1, 1) = 1.0;
        Svd dec = svd(a);
        CHECK(dec.sigma(0) == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(dec.sigma(1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK((dec.w - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK((dec.v - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("zero matrix") {
        Svd dec = svd(Matrix::Zero(2, 3));
        CHECK(dec.sigma.size() == 2);
        CHECK(dec.sigma(0) == 0.0);
        CHECK(dec.sigma(1) == 0.0);
    }
    SUBCASE("reconstruction, orthogonality, ordering on random input") {
        for (std::uint64_t s : {1, 2, 3}) {
            Matrix a = random_matrix(5, 4, s);
            Svd dec = svd(a);
            CHECK((a - dec.w * dec.sigma.asDiagonal() * dec.v.transpose()).norm() <=
                  1e-10 * std::max(1.0, a.norm()));
            CHECK((dec.w.transpose() * dec.w - Matrix::Identity(4, 4)).norm() <= 1e-10);
            CHECK((dec.v.transpose() * dec.v - Matrix::Identity(4, 4)).norm() <= 1e-10);
            for (Eigen::Index i = 0; i + 1 < dec.sigma.size(); ++i)
                CHECK(dec.sigma(i) >= dec.sigma(i + 1));
        }
    }
    SUBCASE("non-finite input") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(svd(a), std::invalid_argument);
    }
    SUBCASE("large input passes the same contract") {
        Matrix a = random_matrix(64, 40, 9);
        Svd dec = svd(a);
        CHECK((a - dec.w * dec.sigma.asDiagonal() * dec.v.transpose()).norm() <=
              1e-10 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("pinv_tau") {
    SUBCASE("threshold semantics on a diagonal matrix") {
        Matrix a = Matrix::Zero(3, 3);
        a(0, 0) = 3.0;
        a(1, 1) = 1.0;
        a(2, 2) = 0.5;
        Matrix p = pinv_tau(a, 0.7);
        CHECK(p(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(p(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p(2, 2) == 0.0);
    }
    SUBCASE("tau = 0 on an invertible diagonal") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 2.0;
        a(1, 1) = 4.0;
        Matrix p = pinv_tau(a, 0.0);
        CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(p(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("operator bound |pinv_tau(A, tau)|_2 <= 1/tau") {
        for (std::uint64_t s = 0; s < 20; ++s) {
            Matrix a = random_matrix(4 + s % 3, 3 + s % 4, s);
            for (double tau : {1e-6, 1e-4, 1e-2, 1.0}) {
                CHECK(spectral_norm(pinv_tau(a, tau)) <= 1.0 / tau);
            }
        }
    }
    SUBCASE("Moore-Penrose identities at tau = 0 for full-rank input") {
        for (std::uint64_t s : {4, 5, 6}) {
            Matrix a = random_matrix(5, 3, s);
            Matrix p = pinv_tau(a, 0.0);
            CHECK((a * p * a - a).norm() <= 1e-9 * a.norm());
            CHECK((p * a * p - p).norm() <= 1e-9 * p.norm());
        }
    }
    SUBCASE("spectral norm nonincreasing in tau") {
        Matrix a = random_matrix(6, 6, 77);
        double prev = std::numeric_limits<double>::infinity();
        for (double tau : {0.0, 1e-8, 1e-4, 1e-2, 0.5, 2.0}) {
            const double cur = spectral_norm(pinv_tau(a, tau));
            CHECK(cur <= prev * (1 + 1e-12));
            prev = cur;
        }
    }
    SUBCASE("negative tau") { CHECK_THROWS_AS(pinv_tau(Matrix::Identity(2, 2), -1.0), std::invalid_argument); }
}

TEST_CASE("best_rank_r") {
    SUBCASE("diagonal") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 3.0;
        a(1, 1) = 1.0;
        auto [ar, resid] = best_rank_r(a, 1);
        CHECK(ar(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(ar(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(resid == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("exactly rank-r input is recovered") {
        Matrix a = random_rank_r(6, 5, 2, 10);
        auto [ar, resid] = best_rank_r(a, 2);
        CHECK(resid <= 1e-10 * a.norm());
        CHECK((a - ar).norm() <= 1e-9 * a.norm());
    }
    SUBCASE("Pythagoras against the full spectrum") {
        Matrix a = random_matrix(6, 6, 21);
        auto [ar, resid] = best_rank_r(a, 3);
        // independent check: residual^2 + |A_r|_F^2 == |A|_F^2
        CHECK(resid * resid + ar.squaredNorm() ==
              doctest::Approx(a.squaredNorm()).epsilon(1e-9));
        // and the residual matches the tail of the spectrum computed separately
        Svd dec = svd(a);
        double tail = 0.0;
        for (Eigen::Index i = 3; i < dec.sigma.size(); ++i) tail += dec.sigma(i) * dec.sigma(i);
        CHECK(resid == doctest::Approx(std::sqrt(tail)).epsilon(1e-10));
    }
    SUBCASE("optimality spot check against random same-rank competitors") {
        Matrix a = random_matrix(7, 5, 31);
        auto [ar, resid] = best_rank_r(a, 2);
        for (std::uint64_t s = 0; s < 10; ++s) {
            Matrix b = random_rank_r(7, 5, 2, 100 + s);
            CHECK((a - ar).norm() <= (a - b).norm() * (1 + 1e-12));
        }
    }
    SUBCASE("r out of range") {
        CHECK_THROWS_AS(best_rank_r(Matrix::Identity(3, 3), 0), std::invalid_argument);
        CHECK_THROWS_AS(best_rank_r(Matrix::Identity(3, 3), 4), std::invalid_argument);
    }
}

TEST_CASE("spectral_norm") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    CHECK(spectral_norm(a) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(spectral_norm(Matrix::Zero(3, 2)) == 0.0);

    Svd dec = svd(random_matrix(6, 4, 41));
    CHECK(spectral_norm(dec.w) == doctest::Approx(1.0).epsilon(1e-10));
}
