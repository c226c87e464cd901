#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "test_util.hpp"
#include "x3der/extension.hpp"

using namespace x3der;
using testutil::Rng;

namespace {
const RatField Q;

ExtensionSpec<Rat> basic_spec() { return {Q.of_int(-1), 1, {Q.one()}}; }
}  // namespace

TEST_CASE("building the orbit extension") {
    auto arr = build_extension(Q, basic_spec());
    REQUIRE(arr.size() == 10);
    CHECK(arr.nvars() == 4);
    CHECK(arr.rank() == 4);
    // x - w, x + w, y - w, y + w, z + w, z - w, x + y, x + z, y + z, w
    CHECK(arr.form(0) == std::vector<Rat>{Q.one(), Q.zero(), Q.zero(), -Q.one()});
    CHECK(arr.form(1) == std::vector<Rat>{Q.one(), Q.zero(), Q.zero(), Q.one()});
    CHECK(arr.form(4) == std::vector<Rat>{Q.zero(), Q.zero(), Q.one(), Q.one()});
    CHECK(arr.form(6) == std::vector<Rat>{Q.one(), Q.one(), Q.zero(), Q.zero()});
    CHECK(arr.form(9) == std::vector<Rat>{Q.zero(), Q.zero(), Q.zero(), Q.one()});

    PrimeField F7(7);
    ExtensionSpec<Fp> spec7{F7.of_int(2), 1, {F7.one()}};  // order 3
    CHECK(build_extension(F7, spec7).size() == 13);

    ExtensionSpec<Fp> spec7b{F7.of_int(2), 2, {F7.one(), F7.of_int(3)}};
    CHECK(build_extension(F7, spec7b).size() == 22);
}

TEST_CASE("invalid extension specs") {
    CHECK_THROWS_AS(build_extension(Q, ExtensionSpec<Rat>{Q.of_int(2), 1, {Q.one()}}), invalid_input);
    CHECK_THROWS_AS(build_extension(Q, ExtensionSpec<Rat>{Q.of_int(1), 1, {Q.one()}}),
                    degenerate_moduli);
    // -1 lies in the orbit of 1, so t = 2 with constants 1, -1 collides
    CHECK_THROWS_AS(build_extension(Q, ExtensionSpec<Rat>{Q.of_int(-1), 2, {Q.one(), Q.of_int(-1)}}),
                    invalid_input);
    CHECK_THROWS_AS(build_extension(Q, ExtensionSpec<Rat>{Q.of_int(-1), 1, {Q.zero()}}), invalid_input);
}

TEST_CASE("the basic extension verifies as free") {
    auto arr = build_extension(Q, basic_spec());
    auto rep = verify_extension(Q, arr, 9);
    CHECK(rep.ok);
    CHECK(rep.restriction_ok);
    REQUIRE(rep.alpha);
    CHECK(*rep.alpha == Q.of_int(-1));
    CHECK(rep.restricted_mult == std::vector<int>{2, 2, 2, 1, 1, 1});
    CHECK(rep.restriction_classified == Freeness::Free);
    CHECK(!rep.simple_restriction_free);
    // three grid flats, three 3-plane boolean flats, and three 4-plane
    // flats of the shape {z+w, z-w, x+y, w}
    REQUIRE(rep.locals.size() == 9);
    int grid_count = 0;
    for (const auto& c : rep.locals) {
        CHECK(c.free);
        if (c.grid_route) ++grid_count;
    }
    CHECK(grid_count == 3);
}

TEST_CASE("a perturbed extension fails local freeness with a pinpointed flat") {
    auto arr = build_extension(Q, basic_spec());
    auto forms = arr.forms();
    forms[0] = {Q.one(), Q.zero(), Q.zero(), Q.of_int(-3)};  // x - w becomes x - 3w
    MultiArrangement<Rat> bad(4, forms, arr.mults());
    auto rep = verify_extension(Q, bad, 9);
    CHECK(!rep.ok);
    CHECK(rep.restriction_ok);  // the Ziegler restriction is unchanged
    bool some_local_failed = false;
    for (const auto& c : rep.locals) some_local_failed = some_local_failed || !c.free;
    CHECK(some_local_failed);
    CHECK(rep.failure.find("localization") != std::string::npos);
}

TEST_CASE("Ziegler multiplicities of extensions by fiber counting") {
    PrimeField F7(7);
    ExtensionSpec<Fp> spec{F7.of_int(2), 2, {F7.one(), F7.of_int(3)}};  // m = 3, t = 2, n = 6
    auto arr = build_extension(F7, spec);
    CHECK(arr.size() == 3 * 6 + 4);
    auto rest = ziegler_restriction(arr, arr.size() - 1);
    REQUIRE(rest.size() == 6);
    std::multiset<int> mults(rest.mults().begin(), rest.mults().end());
    CHECK(mults == std::multiset<int>{6, 6, 6, 1, 1, 1});
}

TEST_CASE("the verification grid from small orders") {
    PrimeField F7(7);
    // order 2 over Q, t in {1,2}
    for (int t = 1; t <= 2; ++t) {
        ExtensionSpec<Rat> spec{Q.of_int(-1), t, {}};
        spec.constants = t == 1 ? std::vector<Rat>{Q.one()} : std::vector<Rat>{Q.one(), Q.of_int(3)};
        auto arr = build_extension(Q, spec);
        CHECK(verify_extension(Q, arr, arr.size() - 1).ok);
    }
    // orders 2 and 3 over F7
    for (std::uint32_t a : {6u, 2u}) {
        for (int t = 1; t <= 2; ++t) {
            ExtensionSpec<Fp> spec{F7.of_int(a), t, {}};
            spec.constants = t == 1 ? std::vector<Fp>{F7.one()} : std::vector<Fp>{F7.one(), F7.of_int(3)};
            auto arr = build_extension(F7, spec);
            CHECK(verify_extension(F7, arr, arr.size() - 1).ok);
        }
    }
}

TEST_CASE("terao trace") {
    auto arr = build_extension(Q, basic_spec());
    auto tr = terao_trace(Q, arr, 9);
    REQUIRE(tr.steps.size() == 4);
    CHECK(tr.all_pass);
    for (const auto& s : tr.steps) CHECK(s.pass);
    CHECK(tr.steps[0].detail.find("n = 2") != std::string::npos);
    CHECK(tr.steps[2].detail.find("m = ord(alpha) = 2") != std::string::npos);

    // t = 2 at order 2: n = 4
    ExtensionSpec<Rat> spec{Q.of_int(-1), 2, {Q.one(), Q.of_int(3)}};
    auto arr2 = build_extension(Q, spec);
    auto tr2 = terao_trace(Q, arr2, arr2.size() - 1);
    CHECK(tr2.all_pass);
    CHECK(tr2.steps[0].detail.find("n = 4") != std::string::npos);

    // the perturbed arrangement pinpoints the failing lattice condition
    auto forms = arr.forms();
    forms[0] = {Q.one(), Q.zero(), Q.zero(), Q.of_int(-3)};
    auto tr3 = terao_trace(Q, MultiArrangement<Rat>(4, forms, arr.mults()), 9);
    CHECK(!tr3.all_pass);
    CHECK(!tr3.steps[1].pass);
    CHECK(tr3.steps[1].detail.find("flat") != std::string::npos);
}

TEST_CASE("no valid spec exists when n is 1 modulo the order") {
    PrimeField F7(7);
    // ord(2) = 3 in F7; n = 4 = 1 mod 3 is not a free multiplicity
    CHECK(classify_predicted(F7, F7.of_int(2), {4, 4, 4, 1, 1, 1}) == Freeness::NotFree);
    // ord(-1) = 2 over Q; n = 3 = 1 mod 2
    CHECK(classify_predicted(Q, Q.of_int(-1), {3, 3, 3, 1, 1, 1}) == Freeness::NotFree);
}

TEST_CASE("translation offsets do not change any verdict") {
    Rng rng(83);
    auto arr = build_extension(Q, basic_spec());
    for (int trial = 0; trial < 4; ++trial) {
        // push offsets A, B, C onto the three tilted forms via a translation
        Mat<Rat> t = Mat<Rat>::identity(4, Q.one());
        t(0, 3) = testutil::random_scalar(Q, rng, 3);
        t(1, 3) = testutil::random_scalar(Q, rng, 3);
        t(2, 3) = testutil::random_scalar(Q, rng, 3);
        auto moved = transform(arr, t);
        auto rep = verify_extension(Q, moved, 9);
        CHECK(rep.ok == verify_extension(Q, arr, 9).ok);
        CHECK(rep.restricted_mult == std::vector<int>{2, 2, 2, 1, 1, 1});
        auto back = normalize_extension_translation(Q, moved);
        CHECK(back.forms() == arr.forms());
    }
}

TEST_CASE("direct rank-4 Saito certification") {
    auto arr = build_extension(Q, basic_spec());
    auto cert = saito_certify_rank4(Q, arr);
    CHECK(cert.certified);
    CHECK(cert.exponents == std::vector<int>{1, 3, 3, 3});
    REQUIRE(cert.saito_scalar);
    CHECK(!cert.saito_scalar->is_zero());
}
