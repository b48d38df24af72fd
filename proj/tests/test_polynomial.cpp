#include <doctest.h>

#include "nilprob/polynomial.hpp"

using namespace nilprob;

TEST_CASE("polynomial arithmetic and evaluation") {
    IntPolynomial x = IntPolynomial::variable(2, 0);
    IntPolynomial y = IntPolynomial::variable(2, 1);
    IntPolynomial p = x * x + y * IntPolynomial::constant(2, Rational(3)) -
                      IntPolynomial::constant(2, Rational(1, 2));
    std::vector<Rational> args{Rational(2), Rational(5)};
    CHECK(p.eval(args) == Rational(4) + Rational(15) - Rational(1, 2));
    CHECK(p.total_degree() == 2);
    CHECK(p.degree_in(0) == 2);
    CHECK(p.degree_in(1) == 1);
    CHECK(p.denominator_lcm() == BigInt(2));

    IntPolynomial zero = p - p;
    CHECK(zero.is_zero());
}

TEST_CASE("integer-valued evaluation catches non-integers") {
    // n(n-1)/2 is integer valued even though coefficients are halves
    IntPolynomial n = IntPolynomial::variable(1, 0);
    IntPolynomial tri = n * (n - IntPolynomial::constant(1, Rational(1))) *
                        IntPolynomial::constant(1, Rational(1, 2));
    for (std::int64_t v : {-5, -1, 0, 1, 2, 7}) {
        std::vector<BigInt> a{BigInt(v)};
        CHECK(tri.eval_int(a) == BigInt(v * (v - 1) / 2));
    }
    IntPolynomial half = n * IntPolynomial::constant(1, Rational(1, 2));
    std::vector<BigInt> odd{BigInt(3)};
    CHECK_THROWS_AS(half.eval_int(odd), NonIntegerResult);
}

TEST_CASE("modular evaluation inverts coefficient denominators") {
    IntPolynomial n = IntPolynomial::variable(1, 0);
    IntPolynomial tri = n * (n - IntPolynomial::constant(1, Rational(1))) *
                        IntPolynomial::constant(1, Rational(1, 2));
    // against exact evaluation, mod 5 (coprime to 2)
    for (long long v = 0; v < 5; ++v) {
        std::vector<long long> a{v};
        std::vector<BigInt> ab{BigInt(v)};
        long long exact = tri.eval_int(ab).to_i64() % 5;
        CHECK(tri.eval_mod(a, 5) == (exact + 5) % 5);
    }
    std::vector<long long> a{1};
    CHECK_THROWS_AS(tri.eval_mod(a, 4), NotCoprime);
}

TEST_CASE("polynomial parser") {
    PolynomialParser p1("v1 + w1 + v3*w2", {"v1", "v2", "v3", "w1", "w2", "w3"});
    IntPolynomial mu1 = p1.parse();
    std::vector<Rational> args{Rational(1), Rational(2), Rational(3),
                               Rational(4), Rational(5), Rational(6)};
    CHECK(mu1.eval(args) == Rational(1 + 4 + 15));

    PolynomialParser p2("1/2*n^2 - 1/2*n", {"n"});
    IntPolynomial q = p2.parse();
    std::vector<Rational> three{Rational(3)};
    CHECK(q.eval(three) == Rational(3));

    PolynomialParser p3("(x + 1)^2 - x^2 - 2*x - 1", {"x"});
    CHECK(p3.parse().is_zero());

    PolynomialParser p4("x1^2*x2 - 5", {"x1", "x2"});
    IntPolynomial r = p4.parse();
    std::vector<Rational> a2{Rational(2), Rational(3)};
    CHECK(r.eval(a2) == Rational(7));

    CHECK_THROWS_AS(PolynomialParser("q + 1", {"x"}).parse(), ParseError);
    CHECK_THROWS_AS(PolynomialParser("x /", {"x"}).parse(), ParseError);
    CHECK_THROWS_AS(PolynomialParser("1/x", {"x"}).parse(), ParseError);
    CHECK_THROWS_AS(PolynomialParser("x ^", {"x"}).parse(), ParseError);
    CHECK_THROWS_AS(PolynomialParser("x 1", {"x"}).parse(), ParseError);
}
