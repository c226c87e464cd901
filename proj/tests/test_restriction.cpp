#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "x3der/restriction.hpp"

using namespace x3der;
using testutil::Rng;

namespace {
const RatField Q;

MultiArrangement<Rat> points(std::vector<std::vector<Rat>> forms, std::vector<int> m) {
    return MultiArrangement<Rat>(2, std::move(forms), std::move(m));
}
}  // namespace

TEST_CASE("exponents of four points with multiplicities (3,3,1,1)") {
    // points x, z, x+z, x+alpha*z: exponents jump at alpha = -1
    auto run = [&](long a) {
        return p1_exponents(
            Q, points({{Q.one(), Q.zero()}, {Q.zero(), Q.one()}, {Q.one(), Q.one()}, {Q.one(), Q.of_int(a)}},
                      {3, 3, 1, 1}));
    };
    CHECK(run(-1) == std::pair<int, int>{3, 5});
    for (long a : {2L, 3L, 5L}) CHECK(run(a) == std::pair<int, int>{4, 4});
}

TEST_CASE("three points with multiplicities (n,n,1)") {
    for (int n = 1; n <= 6; ++n) {
        auto e = p1_exponents(
            Q, points({{Q.one(), Q.zero()}, {Q.zero(), Q.one()}, {Q.of_int(2), Q.of_int(3)}}, {n, n, 1}));
        CHECK(e == std::pair<int, int>{n, n + 1});
    }
}

TEST_CASE("degenerate point counts") {
    CHECK(p1_exponents(Q, points({{Q.one(), Q.zero()}}, {4})) == std::pair<int, int>{0, 4});
    CHECK(p1_exponents(Q, points({{Q.one(), Q.zero()}, {Q.zero(), Q.one()}}, {2, 5})) ==
          std::pair<int, int>{2, 5});
    CHECK_THROWS_AS(p1_exponents(Q, x3_arrangement(Q, Q.of_int(2))), invalid_input);
}

TEST_CASE("exponent sum and max multiplicity bounds") {
    Rng rng(73);
    PrimeField F7(7);
    auto run = [&](auto field) {
        using K = typename decltype(field)::Scalar;
        for (int trial = 0; trial < 15; ++trial) {
            int npts = 1 + rng() % 4;
            std::vector<std::vector<K>> forms;
            std::vector<int> mult;
            for (int i = 0; i < npts && static_cast<int>(forms.size()) < npts; ++i) {
                std::vector<K> f = {testutil::random_scalar(field, rng), field.one()};
                if (i == 0) f = {field.one(), field.zero()};
                bool dup = false;
                for (const auto& g : forms) dup = dup || proportional(f, g);
                if (!dup) {
                    forms.push_back(f);
                    mult.push_back(1 + rng() % 4);
                }
            }
            MultiArrangement<K> p(2, forms, mult);
            auto [e1, e2] = p1_exponents(field, p);
            CHECK(e1 + e2 == p.weight());
            CHECK(e1 <= e2);
            int maxm = *std::max_element(mult.begin(), mult.end());
            CHECK(maxm <= e2);
        }
    };
    run(Q);
    run(F7);
}

TEST_CASE("rank-3 freeness test") {
    // no X3 realization is free
    for (long a : {-1L, 2L, 3L}) {
        auto arr = x3_arrangement(Q, Q.of_int(a));
        for (int h = 0; h < 6; ++h) CHECK(!yoshinaga3_free(Q, arr, h));
    }
    // the boolean arrangement is free with exponents (1,1)
    MultiArrangement<Rat> b(
        3, {{Q.one(), Q.zero(), Q.zero()}, {Q.zero(), Q.one(), Q.zero()}, {Q.zero(), Q.zero(), Q.one()}},
        {1, 1, 1});
    CHECK(yoshinaga3_free(Q, b, 0));
    CHECK_THROWS_AS(yoshinaga3_free(Q, b.with_mult({2, 1, 1}), 0), invalid_input);
    CHECK_THROWS_AS(yoshinaga3_free(Q, b, 7), invalid_input);
}

TEST_CASE("grid-line examples") {
    GridLineSpec<Rat> g;
    g.a = {Q.of_int(1), Q.of_int(2)};
    g.b = {Q.of_int(-1), Q.of_int(-2)};
    g.A = Q.one();
    g.B = Q.one();
    g.C = Q.zero();
    CHECK(grid_line_free(g));
    CHECK(yoshinaga3_free(Q, assemble_grid_arrangement(Q, g), 2 * g.n() + 1));

    g.b = {Q.of_int(-1), Q.of_int(5)};
    CHECK(!grid_line_free(g));
    CHECK(!yoshinaga3_free(Q, assemble_grid_arrangement(Q, g), 2 * g.n() + 1));

    GridLineSpec<Rat> single;
    single.a = {Q.of_int(3)};
    single.b = {Q.of_int(4)};
    single.A = Q.one();
    single.B = Q.one();
    single.C = Q.of_int(-7);
    CHECK(grid_line_free(single));
    single.C = Q.of_int(1);
    CHECK(!grid_line_free(single));
}

TEST_CASE("grid spec validation") {
    GridLineSpec<Rat> g;
    g.a = {Q.of_int(1), Q.of_int(1)};
    g.b = {Q.of_int(2), Q.of_int(3)};
    g.A = Q.one();
    g.B = Q.one();
    g.C = Q.zero();
    CHECK_THROWS_AS(grid_line_free(g), invalid_input);
    g.a = {Q.of_int(1), Q.of_int(2)};
    g.A = Q.zero();
    CHECK_THROWS_AS(grid_line_free(g), invalid_input);
}

TEST_CASE("grid-line test matches the rank-3 criterion on random specs") {
    Rng rng(79);
    PrimeField F7(7);
    auto run = [&](auto field, int trials) {
        using K = typename decltype(field)::Scalar;
        for (int trial = 0; trial < trials; ++trial) {
            int n = 1 + rng() % 4;
            GridLineSpec<K> g;
            auto fill = [&](std::vector<K>& vals) {
                while (static_cast<int>(vals.size()) < n) {
                    auto c = testutil::random_scalar(field, rng, 4);
                    bool dup = false;
                    for (const auto& v : vals) dup = dup || v == c;
                    if (!dup) vals.push_back(c);
                }
            };
            fill(g.a);
            fill(g.b);
            g.A = testutil::random_nonzero(field, rng, 3);
            g.B = testutil::random_nonzero(field, rng, 3);
            g.C = testutil::random_scalar(field, rng, 3);
            auto arr = assemble_grid_arrangement(field, g);
            CHECK(grid_line_free(g) == yoshinaga3_free(field, arr, 2 * n + 1));
            CHECK(char_poly(arr).coeffs == grid_line_char_poly(g));
        }
    };
    run(Q, 20);
    run(F7, 20);
}
