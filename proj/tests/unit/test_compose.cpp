#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "advwb/compose.hpp"

using namespace advwb;

namespace {

// Side-independent lookups on a scheme, as doubles.
struct Lookup {
    const WeightScheme& s;
    std::map<Index, double> wt;

    explicit Lookup(const WeightScheme& scheme) : s(scheme) {
        for (const auto& p : s.pairs()) {
            wt[p.x] += p.w.to_double();
            wt[p.y] += p.w.to_double();
        }
    }
    bool zero_side(Index u) const { return s.function()(u) == 0; }
    double w(Index u, Index v) const {
        auto p = zero_side(u) ? s.find_pair(u, v) : s.find_pair(v, u);
        return p ? s.pairs()[*p].w.to_double() : 0.0;
    }
    // w'(u, v, var) whichever side u is on.
    double wp(Index u, Index v, unsigned var) const {
        if (zero_side(u)) return s.directional(*s.find_pair(u, v), var).forward.to_double();
        return s.directional(*s.find_pair(v, u), var).backward.to_double();
    }
};

Index block_of(Index x, unsigned j, unsigned n, unsigned m) {
    return (x >> ((n - j) * m)) & ((Index{1} << m) - 1);
}

// Every pair weight and directional weight of `c` against the product rule.
void check_against_product_rule(const ComposedScheme& c) {
    const Lookup outer(c.outer), inner(c.inner);
    const unsigned n = c.blocks, m = c.block_arity;
    const auto& s = c.scheme;
    for (std::size_t p = 0; p < s.pairs().size(); ++p) {
        const Index x = s.pairs()[p].x, y = s.pairs()[p].y;
        Index xr = 0, yr = 0;
        for (unsigned j = 1; j <= n; ++j) {
            xr = (xr << 1) | static_cast<Index>(inner.s.function()(block_of(x, j, n, m)));
            yr = (yr << 1) | static_cast<Index>(inner.s.function()(block_of(y, j, n, m)));
        }
        double w = outer.w(xr, yr);
        for (unsigned j = 1; j <= n; ++j) {
            const Index xj = block_of(x, j, n, m), yj = block_of(y, j, n, m);
            w *= xj == yj ? inner.wt.at(xj) : inner.w(xj, yj);
        }
        REQUIRE(s.pairs()[p].w.to_double() == doctest::Approx(w).epsilon(1e-12));
        for (unsigned i = 1; i <= n * m; ++i) {
            const unsigned i1 = (i - 1) / m + 1, i2 = (i - 1) % m + 1;
            const Index xj = block_of(x, i1, n, m), yj = block_of(y, i1, n, m);
            if (xj == yj || ((xj ^ yj) & var_bit(m, i2)) == 0) continue;
            const double tilt = std::sqrt(outer.wp(xr, yr, i1) / outer.wp(yr, xr, i1) * inner.wp(xj, yj, i2) /
                                          inner.wp(yj, xj, i2));
            const auto d = s.directional(p, i);
            CHECK(d.forward.to_double() == doctest::Approx(w * tilt).epsilon(1e-12));
            CHECK(d.backward.to_double() == doctest::Approx(w / tilt).epsilon(1e-12));
        }
    }
}

}  // namespace

TEST_SUITE("compose") {

TEST_CASE("block positions") {
    CHECK(block_index(1, 4, 2).i1 == 1);
    CHECK(block_index(1, 4, 2).i2 == 1);
    CHECK(block_index(16, 4, 2).i1 == 4);
    CHECK(block_index(16, 4, 2).i2 == 4);
    CHECK(block_index(6, 4, 2).i1 == 2);
    CHECK(block_index(6, 4, 2).i2 == 2);
    CHECK(block_index(27, 3, 3).i1 == 3);
    CHECK(block_index(27, 3, 3).i2 == 9);
    CHECK_THROWS(block_index(17, 4, 2));
}

TEST_CASE("three-variable scheme composed with itself") {
    const auto g = builtin_scheme("lemma6_g");
    const auto c = compose_scheme(g, g);
    CHECK(c.scheme.arity() == 9);
    CHECK(c.scheme.function() == iterate(builtins::nae_g(), 2));
    CHECK(c.scheme.pairs().size() == 4896);
    check_against_product_rule(c);
    CHECK(verify(c.scheme).valid);
    const auto lr = loads(c.scheme);
    CHECK(lr.bound.same_as(Quantity(ExactWeight(Rational(9, 2)))));
    CHECK(lr.bound.same_as(predicted_bound(loads(g).bound, 2)));
    CHECK(check_all_slice_weights(c).holds());
    CHECK(check_all_weight_products(c).holds());
    CHECK(check_load_bound(c, lr).holds);
    for (Index x : c.scheme.a()) {
        for (unsigned i = 1; i <= 9; ++i) CHECK(check_slice_loads(c, x, i).holds());
    }
}

TEST_CASE("mixed composition follows the product rule") {
    const auto f = builtin_scheme("lemma3_f");
    const auto g = builtin_scheme("lemma6_g");
    const auto c = compose_scheme(f, g);
    CHECK(c.scheme.arity() == 12);
    check_against_product_rule(c);
    CHECK(verify(c.scheme).valid);
    CHECK(check_all_weight_products(c).holds());
    const auto lr = loads(c.scheme);
    CHECK(check_load_bound(c, lr).holds);
    CHECK(lr.v_max.value() <= loads(f).v_max.value() * loads(g).v_max.value() + 1e-12);
}

TEST_CASE("composition needs balanced inputs") {
    const auto h = builtin_scheme("lemma7_h");
    const auto g = builtin_scheme("lemma6_g");
    CHECK_THROWS(compose_scheme(g, h));
    CHECK_THROWS_AS(compose_scheme(builtin_scheme("lemma3_f"), builtin_scheme("lemma3_f").scaled(2, 1)),
                    std::invalid_argument);
}

TEST_CASE("predicted bounds") {
    const Quantity five_halves(ExactWeight(Rational(5, 2)));
    CHECK(predicted_bound(five_halves, 2).exact()->to_string() == "25/4");
    CHECK(predicted_bound(five_halves, 5).value() == doctest::Approx(std::pow(2.5, 5)));
    const Quantity root(ExactWeight::sqrt_of(Rational(9, 2)));
    CHECK(predicted_bound(root, 2).exact()->to_string() == "9/2");
}

}  // TEST_SUITE
