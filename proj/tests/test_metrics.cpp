#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "memk/error.hpp"
#include "memk/metrics.hpp"
#include "memk/rng.hpp"
#include "testutil.hpp"

using namespace memk;

TEST_CASE("average_ranks examples") {
    CHECK(average_ranks({10, 20, 30}) == std::vector<double>{1, 2, 3});
    CHECK(average_ranks({5, 5, 9}) == std::vector<double>{1.5, 1.5, 3});
    CHECK(average_ranks({7}) == std::vector<double>{1});
    CHECK(average_ranks({1, 1, 2, 2, 3, 3, 4, 5, 5}) ==
          std::vector<double>{1.5, 1.5, 3.5, 3.5, 5.5, 5.5, 7, 8.5, 8.5});
}

TEST_CASE("average_ranks always sums to N(N+1)/2") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 1 + rng.bounded(40);
        std::vector<double> values(n);
        for (double& v : values) v = static_cast<double>(rng.bounded(8)); // force ties
        std::vector<double> ranks = average_ranks(values);
        double sum = 0.0;
        for (double r : ranks) sum += r;
        CHECK(sum == doctest::Approx(0.5 * n * (n + 1)).epsilon(1e-12));
    }
}

TEST_CASE("spearman examples") {
    CHECK(spearman({{1, 2, 3, 4}, {1, 2, 3, 4}}) == doctest::Approx(1.0));
    CHECK(spearman({{4, 3, 2, 1}, {1, 2, 3, 4}}) == doctest::Approx(-1.0));
    // monotone agreement, different spacing
    CHECK(spearman({{0.1, 0.4, 0.2, 0.9}, {1, 3, 2, 4}}) == doctest::Approx(1.0));
}

TEST_CASE("spearman rejects zero rank variance") {
    CHECK_THROWS_WITH_AS(spearman({{1, 1, 1}, {1, 2, 3}}), doctest::Contains("zero variance"),
                         Error);
    CHECK_THROWS_AS(spearman({{1, 2, 3}, {4, 4, 4}}), Error);
    CHECK_THROWS_AS(spearman({{1}, {1}}), Error); // N < 2
}

TEST_CASE("pearson examples") {
    std::vector<double> xs = {1, 2, 5, 9.5};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2 * x + 1);
    CHECK(pearson({xs, ys}) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> neg;
    for (double x : xs) neg.push_back(-x);
    CHECK(pearson({xs, neg}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pearson({{1, 2, 3, 4}, {2, 1, 4, 3}}) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(pearson({{1, 1}, {1, 2}}), Error);
}

TEST_CASE("mse examples") {
    CHECK(mse({{0.3, 0.7}, {0.3, 0.7}}) == 0.0);
    CHECK(mse({{0.0}, {1.0}}) == 1.0);
    CHECK(mse({{0.2, 0.9}, {0.5, 0.5}}) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK_THROWS_AS(mse({{1, 2}, {1}}), Error);
}

TEST_CASE("metrics reject non-finite inputs") {
    CHECK_THROWS_AS(spearman({{1, std::nan("")}, {1, 2}}), Error);
    CHECK_THROWS_AS(mse({{1, 2}, {1, INFINITY}}), Error);
}

TEST_CASE("spearman and pearson are symmetric") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const size_t n = 2 + rng.bounded(20);
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.bounded(6));
            b[i] = static_cast<double>(rng.bounded(6));
        }
        if (testutil::is_constant(a) || testutil::is_constant(b)) continue;
        CHECK(spearman({a, b}) == spearman({b, a}));
        CHECK(pearson({a, b}) == doctest::Approx(pearson({b, a})).epsilon(1e-15));
    }
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 3 + rng.bounded(40);
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            // coarse grid keeps exact ties exact after cubing
            a[i] = static_cast<double>(rng.bounded(1000)) / 1000.0;
            b[i] = static_cast<double>(rng.bounded(1000)) / 1000.0;
        }
        if (testutil::is_constant(a) || testutil::is_constant(b)) continue;
        std::vector<double> cubed(n);
        for (size_t i = 0; i < n; ++i) cubed[i] = a[i] * a[i] * a[i] + 5.0;
        CHECK(std::abs(spearman({a, b}) - spearman({cubed, b})) < 1e-12);
    }
}

TEST_CASE("pearson is invariant under positive affine maps") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 3 + rng.bounded(30);
        std::vector<double> a(n), b(n), scaled(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = rng.normal(0, 1);
            b[i] = rng.normal(0, 1);
            scaled[i] = 3.5 * a[i] + 11.0;
        }
        CHECK(std::abs(pearson({a, b}) - pearson({scaled, b})) < 1e-12);
    }
}

TEST_CASE("metrics are equivariant under a shared permutation") {
    Rng rng(31);
    std::vector<double> a, b;
    for (int i = 0; i < 25; ++i) {
        a.push_back(static_cast<double>(rng.bounded(10)));
        b.push_back(rng.uniform());
    }
    std::vector<size_t> perm(a.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<double> pa(a.size()), pb(b.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        pa[i] = a[perm[i]];
        pb[i] = b[perm[i]];
    }
    CHECK(spearman({pa, pb}) == doctest::Approx(spearman({a, b})).epsilon(1e-13));
    CHECK(pearson({pa, pb}) == doctest::Approx(pearson({a, b})).epsilon(1e-13));
    CHECK(mse({pa, pb}) == doctest::Approx(mse({a, b})).epsilon(1e-13));
}

// Exhaustive agreement with the independent pairwise-counting oracle on
// short integer sequences (the acceptance suite extends this to length 6).
TEST_CASE("brute-force oracle agreement, exhaustive length <= 4") {
    for (size_t n = 2; n <= 4; ++n) {
        const size_t alphabet = n; // values 1..n give every order/tie pattern
        size_t total = 1;
        for (size_t i = 0; i < 2 * n; ++i) total *= alphabet;
        for (size_t code = 0; code < total; ++code) {
            size_t c = code;
            std::vector<double> a(n), b(n);
            for (size_t i = 0; i < n; ++i) {
                a[i] = static_cast<double>(c % alphabet + 1);
                c /= alphabet;
            }
            for (size_t i = 0; i < n; ++i) {
                b[i] = static_cast<double>(c % alphabet + 1);
                c /= alphabet;
            }
            const bool degenerate = testutil::is_constant(a) || testutil::is_constant(b);
            if (degenerate) {
                CHECK_THROWS_AS(spearman({a, b}), Error);
                continue;
            }
            const double got = spearman({a, b});
            const double want = testutil::spearman_bruteforce(a, b);
            REQUIRE(std::abs(got - want) < 1e-12);
            REQUIRE(std::abs(pearson({a, b}) - testutil::pearson_bruteforce(a, b)) < 1e-12);
            REQUIRE(std::abs(mse({a, b}) - testutil::mse_bruteforce(a, b)) < 1e-12);
        }
    }
}
