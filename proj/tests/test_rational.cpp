#include "harmonic/rational.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using harmonic::BigInt;
using harmonic::BigRational;

TEST_CASE("construction normalizes to lowest terms", "[rational]") {
    BigRational q(BigInt(6), BigInt(-8));
    CHECK(q.numerator() == -3);
    CHECK(q.denominator() == 4);

    CHECK(BigRational(BigInt(0), BigInt(-7)) == BigRational(0));
    CHECK(BigRational(BigInt(0), BigInt(-7)).denominator() == 1);

    CHECK(BigRational(BigInt(42), BigInt(6)).str() == "7");
    CHECK_THROWS_AS(BigRational(BigInt(1), BigInt(0)), std::domain_error);
}

TEST_CASE("text format round trip", "[rational]") {
    CHECK(BigRational(-1, 120).str() == "-1/120");
    CHECK(BigRational(0).str() == "0");
    CHECK(BigRational(5).str() == "5");
    CHECK(BigRational::parse("140051/17459442") == BigRational(140051, 17459442));
    CHECK(BigRational::parse("-7/960") == BigRational(-7, 960));
    CHECK(BigRational::parse("0") == BigRational(0));

    CHECK_THROWS_AS(BigRational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(BigRational::parse("1/"), std::invalid_argument);
    CHECK_THROWS_AS(BigRational::parse("1/2/3"), std::invalid_argument);
    CHECK_THROWS_AS(BigRational::parse("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(BigRational::parse("1/0"), std::domain_error);

    harmonic::test::RationalGen gen(20240901);
    for (int i = 0; i < 200; ++i) {
        BigRational q = gen.next();
        CHECK(BigRational::parse(q.str()) == q);
    }
}

TEST_CASE("arithmetic agrees with cross-multiplication identities", "[rational]") {
    harmonic::test::RationalGen gen(987654321);
    for (int i = 0; i < 300; ++i) {
        BigRational a = gen.next();
        BigRational b = gen.next_nonzero();
        BigRational c = gen.next();

        // (a/b) * b == a and (a*b)/b == a: exactness through a second path
        CHECK((a / b) * b == a);
        CHECK((a * b) / b == a);
        // sum and product against the definition over a common denominator
        BigRational sum(a.numerator() * b.denominator() + b.numerator() * a.denominator(),
                        a.denominator() * b.denominator());
        CHECK(a + b == sum);
        CHECK(a + b - b == a);
        CHECK((a + b) * c == a * c + b * c);

        CHECK(boost::multiprecision::gcd((a * b).numerator(), (a * b).denominator()) == 1);
        CHECK((a * b).denominator() > 0);
    }
    CHECK_THROWS_AS(BigRational(1) / BigRational(0), std::domain_error);
}

TEST_CASE("ordering and pow", "[rational]") {
    CHECK(BigRational(-1, 2) < BigRational(1, 3));
    CHECK(BigRational(2, 3) < BigRational(3, 4));
    CHECK(BigRational(7, 2).pow(2) == BigRational(49, 4));
    CHECK(BigRational(2, 3).pow(-2) == BigRational(9, 4));
    CHECK(BigRational(5).pow(0) == BigRational(1));
    CHECK_THROWS_AS(BigRational(0).pow(-1), std::domain_error);

    CHECK(BigRational(-3, 7).abs() == BigRational(3, 7));
    CHECK(BigRational(-3, 7).sign() == -1);
    CHECK(BigRational(0).sign() == 0);
}
