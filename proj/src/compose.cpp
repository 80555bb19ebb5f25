#include "advwb/compose.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "advwb/parallel.hpp"

namespace advwb {

BlockIndex block_index(unsigned i, unsigned n, unsigned d) {
    if (n == 0 || d == 0) throw std::invalid_argument("block_index needs n, d >= 1");
    std::uint64_t m = 1;
    for (unsigned k = 1; k < d; ++k) {
        m *= n;
        if (m > (1u << 30)) throw std::out_of_range("block_index: n^d too large");
    }
    if (i < 1 || i > n * m) throw std::out_of_range("variable index out of range");
    return {static_cast<unsigned>((i - 1) / m + 1), static_cast<unsigned>((i - 1) % m + 1)};
}

Index ComposedScheme::reduce(Index x) const {
    const auto& g = inner.function();
    Index r = 0;
    for (unsigned j = 1; j <= blocks; ++j) {
        if (g(block(x, j))) r |= var_bit(blocks, j);
    }
    return r;
}

namespace {

// Position of `var` among the set bits of `diff`, counting from variable 1.
std::size_t rank_in(unsigned arity, Index diff, unsigned var) {
    const Index bit = var_bit(arity, var);
    return static_cast<std::size_t>(std::popcount(diff & ~((bit << 1) - 1)));
}

// sqrt(w'(x,y,i) / w'(y,x,i)) for every pair and differing variable.
std::vector<std::vector<ExactWeight>> direction_tilts(const WeightScheme& s) {
    std::vector<std::vector<ExactWeight>> out(s.pairs().size());
    std::vector<Directional> dirs;
    for (std::size_t k = 0; k < out.size(); ++k) {
        s.directional(k, dirs);
        for (const auto& d : dirs) {
            auto root = (d.forward / d.backward).sqrt();
            if (!root) {
                throw std::domain_error("directional ratio " + (d.forward / d.backward).to_string() +
                                        " has no square root of the form q*sqrt(r)");
            }
            out[k].push_back(*root);
        }
    }
    return out;
}

class ComposedSource : public DirectionalSource {
public:
    ComposedSource(WeightScheme outer, WeightScheme inner)
        : outer_(std::move(outer)),
          inner_(std::move(inner)),
          n_(outer_.arity()),
          m_(inner_.arity()),
          outer_tilt_(direction_tilts(outer_)),
          inner_tilt_(direction_tilts(inner_)) {}

    void fill(const WeightScheme& s, std::size_t pair, std::vector<Directional>& out) const override {
        const auto& p = s.pairs()[pair];
        const auto& g = inner_.function();
        Index xr = 0, yr = 0;
        for (unsigned j = 1; j <= n_; ++j) {
            if (g(block_value(p.x, j, n_, m_))) xr |= var_bit(n_, j);
            if (g(block_value(p.y, j, n_, m_))) yr |= var_bit(n_, j);
        }
        const std::size_t op = *outer_.find_pair(xr, yr);
        out.clear();
        for (unsigned j = 1; j <= n_; ++j) {
            if (((xr ^ yr) & var_bit(n_, j)) == 0) continue;
            const ExactWeight& outer_tilt = outer_tilt_[op][rank_in(n_, xr ^ yr, j)];
            const Index xb = block_value(p.x, j, n_, m_);
            const Index yb = block_value(p.y, j, n_, m_);
            // Inner pairs are stored zero-side first; from x's side the tilt
            // is inverted when x's block is the one-side element.
            const bool x_zero = (xr & var_bit(n_, j)) == 0;
            const std::size_t ip = x_zero ? *inner_.find_pair(xb, yb) : *inner_.find_pair(yb, xb);
            const auto& tilts = inner_tilt_[ip];
            for (std::size_t t = 0; t < tilts.size(); ++t) {
                const ExactWeight tilt = outer_tilt * (x_zero ? tilts[t] : tilts[t].reciprocal());
                out.push_back({p.w * tilt, p.w / tilt});
            }
        }
    }

private:
    WeightScheme outer_;
    WeightScheme inner_;
    unsigned n_, m_;
    std::vector<std::vector<ExactWeight>> outer_tilt_;
    std::vector<std::vector<ExactWeight>> inner_tilt_;
};

ExactWeight exact_of(const Quantity& q, const char* what) {
    if (!q.is_exact()) throw std::domain_error(std::string(what) + " is not exact");
    return *q.exact();
}

// Total weight of an inner-scheme element on the given side.
ExactWeight side_weight(const WeightScheme& s, const LoadReport& r, Index e, bool zero_side) {
    auto pos = zero_side ? s.a_position(e) : s.b_position(e);
    if (!pos) throw std::logic_error("block is not an element of the inner scheme");
    return exact_of((zero_side ? r.a.wt : r.b.wt)[*pos], "inner total weight");
}

struct Partner {
    Index other;
    std::size_t pair;
};

// Partners of an element of either side of a scheme.
std::vector<Partner> partners(const WeightScheme& s, Index e, bool zero_side) {
    std::vector<Partner> out;
    const auto pairs = s.pairs();
    if (zero_side) {
        auto [lo, hi] = s.pairs_of(e);
        for (std::size_t k = lo; k < hi; ++k) out.push_back({pairs[k].y, k});
        return out;
    }
    const auto by_y = s.pairs_by_y();
    auto lo = std::lower_bound(by_y.begin(), by_y.end(), e, [&](std::uint32_t k, Index v) { return pairs[k].y < v; });
    for (auto it = lo; it != by_y.end() && pairs[*it].y == e; ++it) out.push_back({pairs[*it].x, *it});
    return out;
}

bool on_zero_side(const ComposedScheme& c, Index x) {
    if (c.scheme.a_position(x)) return true;
    if (c.scheme.b_position(x)) return false;
    throw std::invalid_argument("input is not an element of the composed scheme");
}

bool at_most(const Quantity& a, const Quantity& b) {
    if (a.is_exact() && b.is_exact()) return *a.exact() <= *b.exact();
    return a.value() <= b.value() + kTolerance;
}

// prod_j wt_(d-1)(x^j), each block on the side given by x~.
ExactWeight block_weight_product(const ComposedScheme& c, Index x, Index xr) {
    ExactWeight prod(1);
    for (unsigned j = 1; j <= c.blocks; ++j) {
        prod *= side_weight(c.inner, c.inner_loads, c.block(x, j), (xr & var_bit(c.blocks, j)) == 0);
    }
    return prod;
}

}  // namespace

ComposedScheme compose_scheme(const WeightScheme& outer, const WeightScheme& inner) {
    const unsigned n = outer.arity();
    const unsigned m = inner.arity();
    if (static_cast<std::uint64_t>(n) * m > kMaxComposedArity) {
        throw CapacityError("composed arity " + std::to_string(n * m) + " exceeds the materialization limit " +
                            std::to_string(kMaxComposedArity));
    }
    ComposedScheme c{outer, outer, inner, loads(outer), loads(inner), n, m};
    if (!is_balanced(c.outer_loads) || !is_balanced(c.inner_loads)) {
        throw std::invalid_argument("composition needs balanced schemes (equal maximum loads on both sides)");
    }

    const auto& ia = inner.a();
    const auto& ib = inner.b();
    std::vector<ExactWeight> wt_a(ia.size()), wt_b(ib.size());
    for (std::size_t k = 0; k < ia.size(); ++k) wt_a[k] = exact_of(c.inner_loads.a.wt[k], "inner total weight");
    for (std::size_t k = 0; k < ib.size(); ++k) wt_b[k] = exact_of(c.inner_loads.b.wt[k], "inner total weight");
    std::vector<std::vector<Partner>> adj_a(ia.size()), adj_b(ib.size());
    for (std::size_t k = 0; k < ia.size(); ++k) adj_a[k] = partners(inner, ia[k], true);
    for (std::size_t k = 0; k < ib.size(); ++k) adj_b[k] = partners(inner, ib[k], false);

    // Elements whose block pattern is r: block j from the inner A if r_j = 0,
    // else from the inner B.
    auto expand = [&](std::span<const Index> patterns) {
        std::vector<Index> out;
        for (Index r : patterns) {
            std::vector<Index> partial{0};
            for (unsigned j = 1; j <= n; ++j) {
                const auto& pool = (r & var_bit(n, j)) ? ib : ia;
                std::vector<Index> next;
                next.reserve(partial.size() * pool.size());
                for (Index prefix : partial) {
                    for (Index v : pool) next.push_back((prefix << m) | v);
                }
                partial = std::move(next);
            }
            out.insert(out.end(), partial.begin(), partial.end());
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    std::vector<Index> a = expand(outer.a());
    std::vector<Index> b = expand(outer.b());

    std::vector<std::vector<WeightScheme::Pair>> per_x(a.size());
    parallel_chunks(a.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const Index x = a[k];
            Index xr = 0;
            std::vector<std::size_t> block_pos(n + 1);
            for (unsigned j = 1; j <= n; ++j) {
                const Index xb = block_value(x, j, n, m);
                auto pa = inner.a_position(xb);
                if (pa) {
                    block_pos[j] = *pa;
                } else {
                    block_pos[j] = *inner.b_position(xb);
                    xr |= var_bit(n, j);
                }
            }
            auto& out = per_x[k];
            for (const auto& op : partners(outer, xr, true)) {
                const Index zr = op.other;
                ExactWeight base = outer.pairs()[op.pair].w;
                std::vector<unsigned> differ;
                for (unsigned j = 1; j <= n; ++j) {
                    const bool zero = (xr & var_bit(n, j)) == 0;
                    if (((xr ^ zr) & var_bit(n, j)) == 0) {
                        base *= zero ? wt_a[block_pos[j]] : wt_b[block_pos[j]];
                    } else {
                        differ.push_back(j);
                    }
                }
                // All combinations of inner partners on the differing blocks.
                std::vector<std::pair<Index, ExactWeight>> partial{{x, base}};
                for (unsigned j : differ) {
                    const bool zero = (xr & var_bit(n, j)) == 0;
                    const auto& choices = zero ? adj_a[block_pos[j]] : adj_b[block_pos[j]];
                    std::vector<std::pair<Index, ExactWeight>> next;
                    next.reserve(partial.size() * choices.size());
                    for (const auto& [y, w] : partial) {
                        for (const auto& ch : choices) {
                            next.push_back({with_block(y, j, n, m, ch.other), w * inner.pairs()[ch.pair].w});
                        }
                    }
                    partial = std::move(next);
                }
                for (const auto& [y, w] : partial) out.push_back({x, y, w});
            }
            std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) { return p.y < q.y; });
        }
    });
    std::size_t total = 0;
    for (const auto& v : per_x) total += v.size();
    std::vector<WeightScheme::Pair> pairs;
    pairs.reserve(total);
    for (auto& v : per_x) {
        pairs.insert(pairs.end(), v.begin(), v.end());
        std::vector<WeightScheme::Pair>().swap(v);
    }

    std::vector<BooleanFunction> inners(n, inner.function());
    BooleanFunction g = compose(outer.function(), inners);
    auto source = std::make_shared<ComposedSource>(outer, inner);
    c.scheme = WeightScheme(std::move(g), std::move(a), std::move(b), std::move(pairs), std::move(source));
    c.scheme.set_name(outer.name() + " o " + inner.name());
    return c;
}

bool check_slice_weights(const ComposedScheme& c, Index x, Index z) {
    const bool zero = on_zero_side(c, x);
    const Index xr = c.reduce(x);
    auto op = zero ? c.outer.find_pair(xr, z) : c.outer.find_pair(z, xr);
    if (!op) throw std::invalid_argument("reduced inputs are not related in the outer scheme");
    RadicalSum lhs;
    for (const auto& p : partners(c.scheme, x, zero)) {
        if (c.reduce(p.other) == z) lhs.add(c.scheme.pairs()[p.pair].w);
    }
    const ExactWeight rhs = c.outer.pairs()[*op].w * block_weight_product(c, x, xr);
    return Quantity(lhs).same_as(Quantity(rhs));
}

IdentityCheck check_all_slice_weights(const ComposedScheme& c) {
    IdentityCheck out;
    for (bool zero : {true, false}) {
        for (Index x : zero ? c.scheme.a() : c.scheme.b()) {
            for (const auto& p : partners(c.outer, c.reduce(x), zero)) {
                ++out.checked;
                if (!check_slice_weights(c, x, p.other)) ++out.failed;
            }
        }
    }
    return out;
}

bool check_weight_product(const ComposedScheme& c, Index x) {
    const bool zero = on_zero_side(c, x);
    const Index xr = c.reduce(x);
    RadicalSum total;
    for (const auto& p : partners(c.scheme, x, zero)) total.add(c.scheme.pairs()[p.pair].w);
    const ExactWeight outer_wt = side_weight(c.outer, c.outer_loads, xr, zero);
    return Quantity(total).same_as(Quantity(outer_wt * block_weight_product(c, x, xr)));
}

IdentityCheck check_all_weight_products(const ComposedScheme& c) {
    IdentityCheck out;
    for (bool zero : {true, false}) {
        for (Index x : zero ? c.scheme.a() : c.scheme.b()) {
            ++out.checked;
            if (!check_weight_product(c, x)) ++out.failed;
        }
    }
    return out;
}

IdentityCheck check_slice_loads(const ComposedScheme& c, Index x, unsigned var) {
    const bool zero = on_zero_side(c, x);
    const unsigned n = c.blocks;
    const unsigned m = c.block_arity;
    if (var < 1 || var > n * m) throw std::out_of_range("variable index out of range");
    const unsigned i1 = (var - 1) / m + 1;
    const unsigned arity = c.scheme.arity();
    const Index xr = c.reduce(x);

    struct Slice {
        RadicalSum weight;
        RadicalSum load;
    };
    std::map<std::pair<Index, Index>, Slice> slices;
    std::vector<Directional> dirs;
    for (const auto& p : partners(c.scheme, x, zero)) {
        const Index z = c.reduce(p.other);
        if (((z ^ xr) & var_bit(n, i1)) == 0) continue;  // block i1 equal: no load at var
        auto& slice = slices[{z, with_block(p.other, i1, n, m, 0)}];
        const auto& pair = c.scheme.pairs()[p.pair];
        slice.weight.add(pair.w);
        const Index diff = pair.x ^ pair.y;
        if (diff & var_bit(arity, var)) {
            c.scheme.directional(p.pair, dirs);
            const auto& d = dirs[rank_in(arity, diff, var)];
            slice.load.add(zero ? d.forward : d.backward);
        }
    }
    IdentityCheck out;
    for (const auto& [key, slice] : slices) {
        const Index z = key.first;
        const std::size_t op = zero ? *c.outer.find_pair(xr, z) : *c.outer.find_pair(z, xr);
        const Directional d = c.outer.directional(op, i1);
        const auto tilt = zero ? (d.forward / d.backward).sqrt() : (d.backward / d.forward).sqrt();
        const Quantity tilt_q = tilt ? Quantity(*tilt)
                                     : Quantity::approximate(std::sqrt(d.forward.to_double() / d.backward.to_double()));
        const Quantity limit = c.inner_loads.v_max * tilt_q * Quantity(slice.weight);
        ++out.checked;
        if (!at_most(Quantity(slice.load), limit)) ++out.failed;
    }
    return out;
}

LoadBoundCheck check_load_bound(const ComposedScheme& c, const LoadReport& composed) {
    LoadBoundCheck out;
    out.limit = c.outer_loads.v_max * c.inner_loads.v_max;
    out.max_ratio_a = composed.a.max_ratio;
    out.max_ratio_b = composed.b.max_ratio;
    out.holds = at_most(out.max_ratio_a, out.limit) && at_most(out.max_ratio_b, out.limit);
    return out;
}

Quantity predicted_bound(const Quantity& base_bound, unsigned depth) {
    Quantity out(ExactWeight(1));
    for (unsigned k = 0; k < depth; ++k) out = out * base_bound;
    return out;
}

}  // namespace advwb
