#pragma once

#include <cstddef>

#include "advwb/adversary.hpp"

namespace advwb {

/// Largest composed arity that compose_scheme materializes.
inline constexpr unsigned kMaxComposedArity = 16;

/// Position of global variable i (1-based, out of n^d) as block i1 in [1, n]
/// and offset i2 in [1, n^(d-1)] within it.
struct BlockIndex {
    unsigned i1;
    unsigned i2;
};

BlockIndex block_index(unsigned i, unsigned n, unsigned d);

/// Scheme for g^d built from a scheme for g and one for g^(d-1), together
/// with what it was built from.
struct ComposedScheme {
    WeightScheme scheme;
    WeightScheme outer;
    WeightScheme inner;
    LoadReport outer_loads;
    LoadReport inner_loads;
    unsigned blocks = 0;       // n, the outer arity
    unsigned block_arity = 0;  // arity of g^(d-1)

    /// Block-value vector (g^(d-1)(x^1), ..., g^(d-1)(x^n)).
    Index reduce(Index x) const;
    Index block(Index x, unsigned j) const { return block_value(x, j, blocks, block_arity); }
};

/// Product construction. Relation: (x, y) is related when the reduced
/// inputs are related in the outer scheme, differing blocks are related in
/// the inner scheme and agreeing blocks are equal. Pair weights multiply the
/// outer weight, the inner weights of differing blocks and the inner total
/// weights of agreeing blocks. Directional weights tilt the pair weight by
/// the square roots of the outer and inner direction ratios.
///
/// Both inputs must be balanced, and each directional ratio must have an
/// exact square root in q*sqrt(r) form.
ComposedScheme compose_scheme(const WeightScheme& outer, const WeightScheme& inner);

struct IdentityCheck {
    std::size_t checked = 0;
    std::size_t failed = 0;
    bool holds() const { return failed == 0; }
};

/// Sum of w_d(x, y) over partners y with reduced value z equals
/// w_1(x~, z) * prod_j wt_(d-1)(x^j). x may lie on either side.
bool check_slice_weights(const ComposedScheme& c, Index x, Index z);
IdentityCheck check_all_slice_weights(const ComposedScheme& c);

/// wt_d(x) = wt_1(x~) * prod_j wt_(d-1)(x^j).
bool check_weight_product(const ComposedScheme& c, Index x);
IdentityCheck check_all_weight_products(const ComposedScheme& c);

/// For every slice of partners of x sharing the reduced value z and every
/// variable outside block i1: the slice's load at i is at most
/// v_(d-1) * sqrt(w'_1(x~, z, i1) / w'_1(z, x~, i1)) times its weight.
IdentityCheck check_slice_loads(const ComposedScheme& c, Index x, unsigned var);

/// Every v(x, i) / wt(x) of the composed scheme is at most v_1 * v_(d-1).
struct LoadBoundCheck {
    bool holds = false;
    Quantity limit;
    Quantity max_ratio_a;
    Quantity max_ratio_b;
};
LoadBoundCheck check_load_bound(const ComposedScheme& c, const LoadReport& composed);

/// base_bound^depth.
Quantity predicted_bound(const Quantity& base_bound, unsigned depth);

}  // namespace advwb
