#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "x3der/field.hpp"

using namespace x3der;

TEST_CASE("rationals are normalized") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(2, 4).str() == "1/2");
    CHECK(Rat(-6, 3).str() == "-2");
    CHECK(Rat(0, 5).is_zero());
    CHECK_THROWS_AS(Rat(1, 0), invalid_input);
    CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
    CHECK((Rat(2, 3) * Rat(3, 2)).is_one());
    CHECK(Rat(5, 7).inv() == Rat(7, 5));
    CHECK_THROWS_AS(Rat().inv(), invalid_input);
}

TEST_CASE("rational parsing") {
    RatField Q;
    CHECK(Q.parse("3/4") == Rat(3, 4));
    CHECK(Q.parse("-7") == Q.of_int(-7));
    CHECK(Q.parse("2/4") == Rat(1, 2));
    CHECK_THROWS_AS(Q.parse("1/0"), invalid_input);
    CHECK_THROWS_AS(Q.parse("abc"), invalid_input);
}

TEST_CASE("prime field arithmetic") {
    PrimeField F7(7);
    CHECK((F7.of_int(3) + F7.of_int(5)).rep() == 1);
    CHECK((F7.of_int(3) * F7.of_int(5)).rep() == 1);
    CHECK(F7.of_int(-2).rep() == 5);
    CHECK(F7.of_int(3).inv().rep() == 5);
    CHECK((-F7.of_int(2)).rep() == 5);
    CHECK(F7.parse("2/3") == F7.of_int(2) * F7.of_int(3).inv());
    CHECK_THROWS_AS(F7.of_int(0).inv(), invalid_input);
    CHECK_THROWS_AS(PrimeField(8), invalid_input);
    // the field layer accepts p = 2; only the moduli layer needs more elements
    PrimeField F2(2);
    CHECK((F2.of_int(1) + F2.of_int(1)).is_zero());
}

TEST_CASE("default-constructed zeros adopt a modulus") {
    PrimeField F5(5);
    Fp z;  // field-less zero
    CHECK((z + F5.of_int(3)).rep() == 3);
    CHECK((z * F5.of_int(3)).is_zero());
    CHECK(z == F5.zero());
}

TEST_CASE("multiplicative orders") {
    RatField Q;
    CHECK(multiplicative_order(Q, Q.of_int(-1)) == 2);
    CHECK(multiplicative_order(Q, Q.of_int(1)) == 1);
    CHECK(multiplicative_order(Q, Q.of_int(2)) == 0);   // infinite
    CHECK(multiplicative_order(Q, Q.parse("2/3")) == 0);
    PrimeField F7(7);
    CHECK(multiplicative_order(F7, F7.of_int(2)) == 3);
    CHECK(multiplicative_order(F7, F7.of_int(3)) == 6);
    CHECK(multiplicative_order(F7, F7.of_int(6)) == 2);
}

TEST_CASE("field config round trip") {
    CHECK(FieldConfig::parse("Q").str() == "Q");
    CHECK(FieldConfig::parse("Fp:7").str() == "Fp:7");
    CHECK(FieldConfig::parse("Fp:11").p == 11);
    CHECK_THROWS_AS(FieldConfig::parse("Fp:9"), invalid_input);
    CHECK_THROWS_AS(FieldConfig::parse("R"), invalid_input);
    bool rational = with_field(FieldConfig::parse("Q"),
                               [](auto f) { return std::is_same_v<decltype(f), RatField>; });
    CHECK(rational);
}
