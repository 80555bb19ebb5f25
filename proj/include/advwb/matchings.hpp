#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advwb/adversary.hpp"
#include "advwb/boolfn.hpp"

namespace advwb {

/// Deepest level materialized (f^2 has 16 variables).
inline constexpr unsigned kMaxMatchingDepth = 2;

/// 3^d perfect matchings between the zero-inputs and one-inputs of f^d for
/// the four-variable base function.
///
/// Set 1 keeps each zero-input's variables covered by one partner only
/// (l = 1, l' = 2^d); set 2 is its mirror (l = 2^d, l' = 1).
struct MatchingSet {
    unsigned depth = 0;
    int set = 1;
    BooleanFunction f;
    std::vector<Index> zeros;  // sorted preimage of 0
    std::vector<Index> ones;   // sorted preimage of 1
    // [k][position in zeros] -> position in ones, and the inverse.
    std::vector<std::vector<std::uint32_t>> zero_to_one;
    std::vector<std::vector<std::uint32_t>> one_to_zero;

    std::size_t count() const { return zero_to_one.size(); }
    /// Matching k is 1-based.
    Index partner_of_zero(std::size_t k, Index zero) const;
    Index partner_of_one(std::size_t k, Index one) const;
    /// Pairs (zero-input, one-input) of matching k, by zero-input.
    std::vector<std::pair<Index, Index>> matching(std::size_t k) const;
    /// Union of all matchings as (zero-input, one-input) pairs.
    Relation relation() const;
};

/// Base level: matchings 1 and 2 pair each one-input with its two
/// single-variable neighbours; matching 3 flips both variables sensitive for
/// the one-input (set 1) or for the zero-input (set 2). Level d: the k-th
/// matching of group g takes the reduced pair from base matching g and, in
/// each differing block, the k-th matching of level d-1. The level-(d-1) set
/// is the same set when the block of the zero-input is itself a zero-input,
/// otherwise the other set; agreeing blocks are copied.
MatchingSet build_matchings(unsigned depth, int set);

/// The first base matching as (one-input, zero-input) pairs, in the order in
/// which it is defined.
const std::vector<std::pair<Index, Index>>& first_base_matching();

struct MatchingCheck {
    bool valid_pairs = false;  // every pair joins a zero-input and a one-input
    bool bijective = false;    // every matching is perfect
    bool disjoint = false;     // no pair in two matchings
    RelationBound params;      // m, m', l, l' of the union
};

MatchingCheck check_matchings(const MatchingSet& ms);

/// Writes matching k as "x_index y_index" lines; set 1 puts the zero-input
/// first, set 2 the one-input.
void export_matching(const MatchingSet& ms, std::size_t k, std::ostream& out);

/// "(p, q), (p, q), ..." with p running over `ones_order` and q its partner
/// in matching k, as bit strings.
std::string format_pair_listing(const MatchingSet& ms, std::size_t k, std::span<const Index> ones_order);

}  // namespace advwb
