#include <doctest.h>

#include <gmpxx.h>

#include <cmath>
#include <random>

#include "advwb/exact_weight.hpp"
#include "advwb/rational.hpp"

using namespace advwb;

namespace {

mpq_class as_mpq(const Rational& r) {
    mpq_class q(static_cast<long>(r.num()), static_cast<unsigned long>(r.den()));
    q.canonicalize();
    return q;
}

}  // namespace

TEST_SUITE("numeric") {

TEST_CASE("rational arithmetic agrees with GMP") {
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(1, 40);
    for (int k = 0; k < 2000; ++k) {
        const Rational a(num(rng), den(rng));
        const Rational b(num(rng), den(rng));
        const mpq_class qa = as_mpq(a), qb = as_mpq(b);
        CHECK(as_mpq(a + b) == qa + qb);
        CHECK(as_mpq(a - b) == qa - qb);
        CHECK(as_mpq(a * b) == qa * qb);
        if (!b.is_zero()) CHECK(as_mpq(a / b) == qa / qb);
        CHECK(((a <=> b) < 0) == (qa < qb));
    }
}

TEST_CASE("rational normal form and text") {
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(6, -4).den() == 2);
    CHECK(Rational(10, 3).to_string() == "10/3");
    CHECK(Rational(4, 2).to_string() == "2");
    CHECK(Rational::parse("-7/14") == Rational(-1, 2));
    CHECK(Rational::parse(" 5 ") == Rational(5));
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational::parse("1/x"));
}

TEST_CASE("rational overflow is reported") {
    const Rational big(INT64_MAX / 2);
    CHECK_THROWS_AS(big * big, OverflowError);
}

TEST_CASE("square splitting") {
    CHECK(split_square(72) == std::pair<std::int64_t, std::int64_t>{6, 2});
    CHECK(split_square(39) == std::pair<std::int64_t, std::int64_t>{1, 39});
    CHECK(split_square(1) == std::pair<std::int64_t, std::int64_t>{1, 1});
    for (std::int64_t n = 1; n < 3000; ++n) {
        const auto [k, r] = split_square(n);
        CHECK(k * k * r == n);
        for (std::int64_t p = 2; p * p <= r; ++p) CHECK(r % (p * p) != 0);
    }
}

TEST_CASE("weights in q*sqrt(r) form") {
    const auto root2 = ExactWeight::sqrt_of(Rational(2));
    CHECK(root2.radicand() == 2);
    CHECK((root2 * root2) == ExactWeight(2));
    CHECK(ExactWeight::sqrt_of(Rational(9, 2)).to_string() == "3/2*sqrt(2)");
    CHECK(ExactWeight::sqrt_of(Rational(4, 39)).to_string() == "2/39*sqrt(39)");
    CHECK((ExactWeight::sqrt_of(Rational(39)) / 2).to_string() == "1/2*sqrt(39)");
    CHECK(ExactWeight::sqrt_of(Rational(39)).reciprocal() == ExactWeight::with_root(Rational(1, 39), Rational(39)));
    CHECK(ExactWeight(Rational(25, 4)).sqrt() == ExactWeight(Rational(5, 2)));
    CHECK(ExactWeight(Rational(2)).sqrt() == root2);
    CHECK_FALSE(root2.sqrt().has_value());
    CHECK(ExactWeight().to_string() == "0");
    CHECK(ExactWeight().radicand() == 1);
    CHECK_THROWS(ExactWeight(Rational(-1)));
}

TEST_CASE("weight ordering matches the real values") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> small(1, 30);
    for (int k = 0; k < 1000; ++k) {
        const auto a = ExactWeight::with_root(Rational(small(rng), small(rng)), Rational(small(rng)));
        const auto b = ExactWeight::with_root(Rational(small(rng), small(rng)), Rational(small(rng)));
        const double da = a.to_double(), db = b.to_double();
        if (std::abs(da - db) > 1e-12) CHECK(((a <=> b) < 0) == (da < db));
        CHECK(a.square().to_double() == doctest::Approx(da * da));
    }
}

TEST_CASE("weight text round trip") {
    for (const char* s : {"0", "5/2", "sqrt(2)", "3/2*sqrt(2)", "2/39*sqrt(39)"}) {
        CHECK(ExactWeight::parse(s).to_string() == s);
    }
    CHECK(ExactWeight::parse("sqrt(1/2)") == ExactWeight::with_root(Rational(1, 2), Rational(2)));
    CHECK_THROWS(ExactWeight::parse("sqrt(2"));
}

TEST_CASE("like radicands add, unlike ones do not") {
    const auto r2 = ExactWeight::sqrt_of(Rational(2));
    CHECK(ExactWeight::try_add(r2, r2 * 2) == r2 * 3);
    CHECK_FALSE(ExactWeight::try_add(r2, ExactWeight(1)).has_value());
    RadicalSum s;
    s.add(r2);
    s.add(ExactWeight(1));
    CHECK_FALSE(s.exact().has_value());
    CHECK(s.to_double() == doctest::Approx(1 + std::sqrt(2.0)));
    s.add(RadicalSum(r2));
    CHECK(s.to_string() == "1 + 2*sqrt(2)");
}

TEST_CASE("quantities stay exact when they can") {
    const Quantity half(ExactWeight(Rational(1, 2)));
    CHECK(half.is_exact());
    CHECK(half.to_string() == "1/2 (0.500000)");
    CHECK((half * half).same_as(Quantity(ExactWeight(Rational(1, 4)))));
    CHECK(half.sqrt().to_string() == "1/2*sqrt(2) (0.707107)");
    const Quantity approx = Quantity::approximate(0.5 + 1e-12);
    CHECK_FALSE(approx.is_exact());
    CHECK(approx.same_as(half));
    CHECK(approx.to_string() == "0.500000 (approx)");
    CHECK(Quantity(ExactWeight::sqrt_of(Rational(2))).sqrt().to_string().find("approx") != std::string::npos);
}

}  // TEST_SUITE
