#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "advwb/matchings.hpp"

using namespace advwb;

namespace {

std::set<std::pair<Index, Index>> pair_set(const MatchingSet& ms) {
    auto r = ms.relation();
    return {r.begin(), r.end()};
}

// Largest number of partners of one input that differ from it at one
// variable, per side, counted directly.
std::pair<std::size_t, std::size_t> brute_l(const MatchingSet& ms) {
    const unsigned n = ms.f.arity();
    std::map<std::pair<Index, unsigned>, std::size_t> count;
    for (const auto& [x, y] : ms.relation()) {
        for (unsigned i = 0; i < n; ++i) {
            if (((x ^ y) >> i) & 1) {
                ++count[{x, i}];
                ++count[{y, i}];
            }
        }
    }
    std::size_t l = 0, l2 = 0;
    for (const auto& [key, c] : count) (ms.f(key.first) ? l2 : l) = std::max(ms.f(key.first) ? l2 : l, c);
    return {l, l2};
}

}  // namespace

TEST_SUITE("matchings") {

TEST_CASE("first base matching") {
    const auto f = builtins::ambainis_f();
    const auto& first = first_base_matching();
    CHECK(first.size() == 8);
    for (const auto& [one, zero] : first) {
        CHECK(f(one) == 1);
        CHECK(f(zero) == 0);
        CHECK(std::popcount(one ^ zero) == 1);
    }
    const auto ms = build_matchings(1, 1);
    std::vector<Index> order;
    for (const auto& p : first) order.push_back(p.first);
    CHECK(format_pair_listing(ms, 1, order) ==
          "(0011, 0001), (0101, 1101), (1100, 1110), (1010, 0010), (0100, 0110), (1000, 0000), (0111, 1111), "
          "(1011, 1001)");
}

TEST_CASE("base matchings") {
    const auto f = builtins::ambainis_f();
    for (int set : {1, 2}) {
        CAPTURE(set);
        const auto ms = build_matchings(1, set);
        CHECK(ms.count() == 3);
        const auto pairs = pair_set(ms);
        CHECK(pairs.size() == 24);
        // Matchings 1 and 2 together are the single-variable neighbours.
        for (int k = 1; k <= 2; ++k) {
            for (const auto& [zero, one] : ms.matching(k)) CHECK(std::popcount(zero ^ one) == 1);
        }
        // Matching 3 flips the two sensitive variables of one side.
        for (const auto& [zero, one] : ms.matching(3)) {
            const Index side = set == 1 ? one : zero;
            const auto [sens, insens] = sensitive_partition(f, side);
            CHECK((zero ^ one) == var_mask(4, sens));
        }
        const auto c = check_matchings(ms);
        CHECK(c.valid_pairs);
        CHECK(c.bijective);
        CHECK(c.disjoint);
        CHECK(c.params.m == 3);
        CHECK(c.params.m2 == 3);
        const auto [l, l2] = brute_l(ms);
        CHECK(c.params.l == l);
        CHECK(c.params.l2 == l2);
        CHECK(c.params.l == (set == 1 ? 1U : 2U));
        CHECK(c.params.l2 == (set == 1 ? 2U : 1U));
        CHECK(c.params.bound.exact()->to_string() == "3/2*sqrt(2)");
    }
}

TEST_CASE("second level follows the recursive rule") {
    const auto f = builtins::ambainis_f();
    const std::set<std::pair<Index, Index>> base[2] = {pair_set(build_matchings(1, 1)),
                                                       pair_set(build_matchings(1, 2))};
    for (int set : {1, 2}) {
        CAPTURE(set);
        const auto ms = build_matchings(2, set);
        CHECK(ms.count() == 9);
        CHECK(ms.zeros.size() == 32768);
        for (std::size_t k = 1; k <= 9; ++k) {
            for (const auto& [zero, one] : ms.matching(k)) {
                Index zr = 0, or_ = 0;
                for (unsigned j = 1; j <= 4; ++j) {
                    const Index zj = block_value(zero, j, 4, 4), oj = block_value(one, j, 4, 4);
                    zr = (zr << 1) | static_cast<Index>(f(zj));
                    or_ = (or_ << 1) | static_cast<Index>(f(oj));
                    if (zj == oj) continue;
                    const auto inner = f(zj) == 0 ? std::pair{zj, oj} : std::pair{oj, zj};
                    REQUIRE((base[0].count(inner) || base[1].count(inner)));
                }
                REQUIRE(base[set - 1].count({zr, or_}) == 1);
            }
        }
        const auto c = check_matchings(ms);
        CHECK(c.valid_pairs);
        CHECK(c.bijective);
        CHECK(c.disjoint);
        CHECK(c.params.m == 9);
        CHECK(c.params.m2 == 9);
        CHECK(c.params.l == (set == 1 ? 1U : 4U));
        CHECK(c.params.l2 == (set == 1 ? 4U : 1U));
        CHECK(c.params.bound.exact()->to_string() == "9/2");
    }
}

TEST_CASE("export orientation") {
    const auto one = build_matchings(1, 1);
    std::ostringstream a;
    export_matching(one, 1, a);
    std::istringstream in(a.str());
    Index x = 0, y = 0;
    int lines = 0;
    while (in >> x >> y) {
        CHECK(one.f(x) == 0);
        CHECK(one.f(y) == 1);
        ++lines;
    }
    CHECK(lines == 8);

    const auto two = build_matchings(1, 2);
    std::ostringstream b;
    export_matching(two, 2, b);
    std::istringstream in2(b.str());
    in2 >> x >> y;
    CHECK(two.f(x) == 1);
    CHECK(two.f(y) == 0);
}

TEST_CASE("limits") {
    CHECK_THROWS_AS(build_matchings(3, 1), CapacityError);
    CHECK_THROWS(build_matchings(1, 3));
    CHECK_THROWS(build_matchings(0, 1));
}

}  // TEST_SUITE
