#include "advwb/matchings.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace advwb {

namespace {

constexpr unsigned kBaseArity = 4;

Index bits(const char* s) {
    return Assignment::parse(s).index();
}

std::size_t position(const std::vector<Index>& v, Index x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) throw std::logic_error("input missing from preimage");
    return static_cast<std::size_t>(it - v.begin());
}

MatchingSet empty_set(unsigned depth, int set, BooleanFunction f) {
    auto zeros = f.preimage(0);
    auto ones = f.preimage(1);
    return MatchingSet{depth, set, std::move(f), std::move(zeros), std::move(ones), {}, {}};
}

// Fills the inverse arrays; fails unless every matching is a bijection.
void finish(MatchingSet& ms) {
    if (ms.zeros.size() != ms.ones.size()) throw std::logic_error("preimages differ in size; no perfect matching");
    constexpr std::uint32_t kUnset = UINT32_MAX;
    ms.one_to_zero.assign(ms.count(), std::vector<std::uint32_t>(ms.ones.size(), kUnset));
    for (std::size_t k = 0; k < ms.count(); ++k) {
        for (std::size_t z = 0; z < ms.zeros.size(); ++z) {
            auto& slot = ms.one_to_zero[k][ms.zero_to_one[k][z]];
            if (slot != kUnset) throw std::logic_error("matching " + std::to_string(k + 1) + " is not injective");
            slot = static_cast<std::uint32_t>(z);
        }
    }
}

MatchingSet build_base(int set) {
    const auto f = builtins::ambainis_f();
    MatchingSet ms = empty_set(1, set, f);
    ms.zero_to_one.assign(3, std::vector<std::uint32_t>(ms.zeros.size()));
    for (const auto& [one, zero] : first_base_matching()) {
        // The second matching takes the other single-variable neighbour.
        Index other = 0;
        for (unsigned v = 1; v <= kBaseArity; ++v) {
            const Index y = one ^ var_bit(kBaseArity, v);
            if (f(y) == 0 && y != zero) other = y;
        }
        ms.zero_to_one[0][position(ms.zeros, zero)] = static_cast<std::uint32_t>(position(ms.ones, one));
        ms.zero_to_one[1][position(ms.zeros, other)] = static_cast<std::uint32_t>(position(ms.ones, one));
    }
    for (Index x : set == 1 ? ms.ones : ms.zeros) {
        const Index y = x ^ var_mask(kBaseArity, sensitive_partition(f, x).first);
        const Index zero = set == 1 ? y : x;
        const Index one = set == 1 ? x : y;
        ms.zero_to_one[2][position(ms.zeros, zero)] = static_cast<std::uint32_t>(position(ms.ones, one));
    }
    finish(ms);
    return ms;
}

MatchingSet build_level(unsigned depth, int set) {
    if (depth == 1) return build_base(set);
    const MatchingSet top = build_base(set);
    const MatchingSet inner[2] = {build_level(depth - 1, 1), build_level(depth - 1, 2)};
    const unsigned n = kBaseArity;
    const unsigned m = inner[0].f.arity();
    MatchingSet ms = empty_set(depth, set, iterate(top.f, depth));
    const std::size_t per_group = inner[0].count();
    ms.zero_to_one.assign(3 * per_group, std::vector<std::uint32_t>(ms.zeros.size()));
    const auto& g = inner[0].f;
    for (std::size_t z = 0; z < ms.zeros.size(); ++z) {
        const Index a = ms.zeros[z];
        Index ar = 0;
        for (unsigned j = 1; j <= n; ++j) {
            if (g(block_value(a, j, n, m))) ar |= var_bit(n, j);
        }
        for (std::size_t group = 1; group <= 3; ++group) {
            const Index br = top.partner_of_zero(group, ar);
            for (std::size_t k = 1; k <= per_group; ++k) {
                Index b = a;
                for (unsigned j = 1; j <= n; ++j) {
                    if (((ar ^ br) & var_bit(n, j)) == 0) continue;
                    const Index aj = block_value(a, j, n, m);
                    // Inferred case split: a zero block recurses within the same set,
                    // a one block within the mirrored set.
                    const bool block_zero = (ar & var_bit(n, j)) == 0;
                    const int inner_set = block_zero ? set : 3 - set;
                    const auto& im = inner[inner_set - 1];
                    const Index bj = block_zero ? im.partner_of_zero(k, aj) : im.partner_of_one(k, aj);
                    b = with_block(b, j, n, m, bj);
                }
                // Matching (group - 1) * 3^(d-1) + k.
                ms.zero_to_one[(group - 1) * per_group + k - 1][z] =
                    static_cast<std::uint32_t>(position(ms.ones, b));
            }
        }
    }
    finish(ms);
    return ms;
}

}  // namespace

const std::vector<std::pair<Index, Index>>& first_base_matching() {
    // Each one-input with one of its two zero-valued single-flip neighbours.
    static const std::vector<std::pair<Index, Index>> pairs = {
        {bits("0011"), bits("0001")}, {bits("0101"), bits("1101")}, {bits("1100"), bits("1110")},
        {bits("1010"), bits("0010")}, {bits("0100"), bits("0110")}, {bits("1000"), bits("0000")},
        {bits("0111"), bits("1111")}, {bits("1011"), bits("1001")},
    };
    return pairs;
}

Index MatchingSet::partner_of_zero(std::size_t k, Index zero) const {
    return ones[zero_to_one.at(k - 1)[position(zeros, zero)]];
}

Index MatchingSet::partner_of_one(std::size_t k, Index one) const {
    return zeros[one_to_zero.at(k - 1)[position(ones, one)]];
}

std::vector<std::pair<Index, Index>> MatchingSet::matching(std::size_t k) const {
    std::vector<std::pair<Index, Index>> out;
    const auto& map = zero_to_one.at(k - 1);
    out.reserve(zeros.size());
    for (std::size_t z = 0; z < zeros.size(); ++z) out.emplace_back(zeros[z], ones[map[z]]);
    return out;
}

Relation MatchingSet::relation() const {
    Relation r;
    r.reserve(count() * zeros.size());
    for (std::size_t k = 1; k <= count(); ++k) {
        auto m = matching(k);
        r.insert(r.end(), m.begin(), m.end());
    }
    return r;
}

MatchingSet build_matchings(unsigned depth, int set) {
    if (set != 1 && set != 2) throw std::invalid_argument("matching set must be 1 or 2");
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    if (depth > kMaxMatchingDepth) {
        throw CapacityError("matchings are materialized up to depth " + std::to_string(kMaxMatchingDepth));
    }
    return build_level(depth, set);
}

MatchingCheck check_matchings(const MatchingSet& ms) {
    MatchingCheck out;
    Relation r = ms.relation();
    out.valid_pairs = std::all_of(r.begin(), r.end(), [&](const auto& p) {
        return ms.f(p.first) == 0 && ms.f(p.second) == 1;
    });
    out.bijective = true;
    for (std::size_t k = 0; k < ms.count(); ++k) {
        std::vector<std::uint8_t> hit(ms.ones.size(), 0);
        for (auto pos : ms.zero_to_one[k]) hit[pos] = 1;
        out.bijective = out.bijective && std::all_of(hit.begin(), hit.end(), [](auto h) { return h != 0; });
    }
    out.params = relation_bound(ms.f, ms.zeros, ms.ones, r);
    std::sort(r.begin(), r.end());
    out.disjoint = std::adjacent_find(r.begin(), r.end()) == r.end();
    return out;
}

void export_matching(const MatchingSet& ms, std::size_t k, std::ostream& out) {
    for (const auto& [zero, one] : ms.matching(k)) {
        if (ms.set == 1) {
            out << zero << ' ' << one << '\n';
        } else {
            out << one << ' ' << zero << '\n';
        }
    }
}

std::string format_pair_listing(const MatchingSet& ms, std::size_t k, std::span<const Index> ones_order) {
    const unsigned n = ms.f.arity();
    std::string out;
    for (Index one : ones_order) {
        if (!out.empty()) out += ", ";
        out += "(" + Assignment(n, one).to_string() + ", " + Assignment(n, ms.partner_of_one(k, one)).to_string() + ")";
    }
    return out;
}

}  // namespace advwb
