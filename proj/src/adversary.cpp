#include "advwb/adversary.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "advwb/parallel.hpp"

namespace advwb {

namespace {

class ExplicitSource : public DirectionalSource {
public:
    ExplicitSource(std::vector<std::size_t> offsets, std::vector<Directional> entries)
        : offsets_(std::move(offsets)), entries_(std::move(entries)) {}

    void fill(const WeightScheme&, std::size_t pair, std::vector<Directional>& out) const override {
        out.assign(entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[pair]),
                   entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[pair + 1]));
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Directional> entries_;
};

class UniformSource : public DirectionalSource {
public:
    void fill(const WeightScheme& s, std::size_t pair, std::vector<Directional>& out) const override {
        const auto& p = s.pairs()[pair];
        out.assign(static_cast<std::size_t>(std::popcount(p.x ^ p.y)), Directional{ExactWeight(1), ExactWeight(1)});
    }
};

class ScaledSource : public DirectionalSource {
public:
    ScaledSource(std::shared_ptr<const DirectionalSource> base, ExactWeight forward, ExactWeight backward)
        : base_(std::move(base)), forward_(forward), backward_(backward) {}

    void fill(const WeightScheme& s, std::size_t pair, std::vector<Directional>& out) const override {
        base_->fill(s, pair, out);
        for (auto& d : out) {
            d.forward *= forward_;
            d.backward *= backward_;
        }
    }

private:
    std::shared_ptr<const DirectionalSource> base_;
    ExactWeight forward_;
    ExactWeight backward_;
};

bool pair_less(const WeightScheme::Pair& p, const WeightScheme::Pair& q) {
    return p.x != q.x ? p.x < q.x : p.y < q.y;
}

std::string pair_label(unsigned arity, Index x, Index y) {
    return "(" + Assignment(arity, x).to_string() + ", " + Assignment(arity, y).to_string() + ")";
}

// Sum of weights that stays exact as long as possible; rational terms are
// kept apart from the radical ones since they dominate in practice.
struct Accumulator {
    Rational rational;
    RadicalSum radical;

    void add(const ExactWeight& w) {
        if (w.is_rational()) {
            rational += w.coefficient();
        } else {
            radical.add(w);
        }
    }
    Quantity value() const {
        RadicalSum s = radical;
        s.add(ExactWeight(rational));
        return Quantity(s);
    }
};

// Running extremum over Quantities; exact while every operand is.
class Extremum {
public:
    explicit Extremum(bool want_max) : want_max_(want_max) {}

    void offer(const Quantity& q) {
        exact_ = exact_ && q.is_exact();
        approx_ = seen_ ? (want_max_ ? std::max(approx_, q.value()) : std::min(approx_, q.value())) : q.value();
        if (!seen_ || (want_max_ ? q > best_ : q < best_)) best_ = q;
        seen_ = true;
    }
    Quantity result() const {
        if (!seen_) return Quantity(ExactWeight());
        return exact_ ? best_ : Quantity::approximate(approx_);
    }

private:
    bool want_max_;
    bool seen_ = false;
    bool exact_ = true;
    Quantity best_;
    double approx_ = 0.0;
};

}  // namespace

std::vector<unsigned> differing_vars(unsigned arity, Index x, Index y) {
    return mask_vars(arity, x ^ y);
}

// ---------------------------------------------------------------------------
// WeightScheme

std::shared_ptr<const WeightScheme::Core> WeightScheme::make_core(BooleanFunction f, std::vector<Index> a,
                                                                  std::vector<Index> b, std::vector<Pair> pairs) {
    auto sort_unique = [&](std::vector<Index>& v, const char* side) {
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
            throw std::invalid_argument(std::string("duplicate element in ") + side);
        }
        for (Index x : v) {
            if (x >= f.size()) throw std::invalid_argument(std::string("element of ") + side + " out of range");
        }
    };
    sort_unique(a, "A");
    sort_unique(b, "B");
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        if (k > 0 && !pair_less(pairs[k - 1], p)) {
            if (pairs[k - 1].x == p.x && pairs[k - 1].y == p.y) {
                throw std::invalid_argument("duplicate pair " + pair_label(f.arity(), p.x, p.y));
            }
            throw std::invalid_argument("pairs are not sorted");
        }
        if (!std::binary_search(a.begin(), a.end(), p.x) || !std::binary_search(b.begin(), b.end(), p.y)) {
            throw std::invalid_argument("pair " + pair_label(f.arity(), p.x, p.y) + " is not in A x B");
        }
    }
    auto core = std::make_shared<Core>(Core{std::move(f), std::move(a), std::move(b), std::move(pairs), {}});
    core->by_y.resize(core->pairs.size());
    std::iota(core->by_y.begin(), core->by_y.end(), 0u);
    std::sort(core->by_y.begin(), core->by_y.end(), [&](std::uint32_t i, std::uint32_t j) {
        const auto& p = core->pairs[i];
        const auto& q = core->pairs[j];
        return p.y != q.y ? p.y < q.y : p.x < q.x;
    });
    return core;
}

WeightScheme::WeightScheme(BooleanFunction f, std::vector<Index> a, std::vector<Index> b, std::vector<Pair> pairs,
                           std::vector<std::vector<Directional>> directional) {
    if (directional.size() != pairs.size()) throw std::invalid_argument("one directional list per pair expected");
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pair_less(pairs[i], pairs[j]); });
    std::vector<Pair> sorted;
    std::vector<std::size_t> offsets{0};
    std::vector<Directional> entries;
    sorted.reserve(pairs.size());
    for (std::size_t k : order) {
        const auto& p = pairs[k];
        if (directional[k].size() != static_cast<std::size_t>(std::popcount(p.x ^ p.y))) {
            throw std::invalid_argument("pair " + pair_label(f.arity(), p.x, p.y) +
                                        " needs one directional weight per differing variable");
        }
        sorted.push_back(p);
        entries.insert(entries.end(), directional[k].begin(), directional[k].end());
        offsets.push_back(entries.size());
    }
    core_ = make_core(std::move(f), std::move(a), std::move(b), std::move(sorted));
    source_ = std::make_shared<ExplicitSource>(std::move(offsets), std::move(entries));
}

WeightScheme::WeightScheme(BooleanFunction f, std::vector<Index> a, std::vector<Index> b, std::vector<Pair> pairs,
                           std::shared_ptr<const DirectionalSource> source)
    : core_(make_core(std::move(f), std::move(a), std::move(b), std::move(pairs))), source_(std::move(source)) {}

std::optional<std::size_t> WeightScheme::find_pair(Index x, Index y) const {
    const auto& ps = core_->pairs;
    auto it = std::lower_bound(ps.begin(), ps.end(), Pair{x, y, {}}, pair_less);
    if (it == ps.end() || it->x != x || it->y != y) return std::nullopt;
    return static_cast<std::size_t>(it - ps.begin());
}

std::pair<std::size_t, std::size_t> WeightScheme::pairs_of(Index x) const {
    const auto& ps = core_->pairs;
    auto lo = std::lower_bound(ps.begin(), ps.end(), x, [](const Pair& p, Index v) { return p.x < v; });
    auto hi = std::upper_bound(lo, ps.end(), x, [](Index v, const Pair& p) { return v < p.x; });
    return {static_cast<std::size_t>(lo - ps.begin()), static_cast<std::size_t>(hi - ps.begin())};
}

namespace {
std::optional<std::size_t> position_in(std::span<const Index> v, Index x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
}
}  // namespace

std::optional<std::size_t> WeightScheme::a_position(Index x) const {
    return position_in(core_->a, x);
}

std::optional<std::size_t> WeightScheme::b_position(Index y) const {
    return position_in(core_->b, y);
}

std::vector<Directional> WeightScheme::directional(std::size_t pair) const {
    std::vector<Directional> out;
    directional(pair, out);
    return out;
}

Directional WeightScheme::directional(std::size_t pair, unsigned var) const {
    const auto& p = core_->pairs.at(pair);
    const Index diff = p.x ^ p.y;
    const Index bit = var_bit(arity(), var);
    if ((diff & bit) == 0) throw std::invalid_argument("pair agrees at the requested variable");
    // Variables before `var` sit in the higher bits.
    const Index before = diff & ~((bit << 1) - 1);
    return directional(pair).at(static_cast<std::size_t>(std::popcount(before)));
}

WeightScheme WeightScheme::scaled(const ExactWeight& forward, const ExactWeight& backward) const {
    WeightScheme out = *this;
    out.source_ = std::make_shared<ScaledSource>(source_, forward, backward);
    return out;
}

WeightScheme WeightScheme::with_directional(std::size_t pair, unsigned var, const Directional& value) const {
    const auto& p = core_->pairs.at(pair);
    const Index bit = var_bit(arity(), var);
    if (((p.x ^ p.y) & bit) == 0) throw std::invalid_argument("pair agrees at the requested variable");
    std::vector<std::vector<Directional>> all(core_->pairs.size());
    for (std::size_t k = 0; k < all.size(); ++k) directional(k, all[k]);
    const Index before = (p.x ^ p.y) & ~((bit << 1) - 1);
    all[pair][static_cast<std::size_t>(std::popcount(before))] = value;
    WeightScheme out(core_->f, core_->a, core_->b, core_->pairs, std::move(all));
    out.name_ = name_;
    return out;
}

// ---------------------------------------------------------------------------
// Verification

VerifyResult verify(const WeightScheme& scheme) {
    const auto& f = scheme.function();
    const unsigned n = f.arity();
    VerifyResult result;
    auto record = [&](std::vector<Violation>& into, std::size_t& count, Violation v) {
        ++count;
        if (into.size() < kMaxViolations) into.push_back(std::move(v));
    };
    for (Index x : scheme.a()) {
        if (f(x) != 0) {
            record(result.violations, result.total,
                   {Violation::Kind::wrong_side, x, 0, 0, Assignment(n, x).to_string() + " in A has f = 1"});
        }
    }
    for (Index y : scheme.b()) {
        if (f(y) != 1) {
            record(result.violations, result.total,
                   {Violation::Kind::wrong_side, 0, y, 0, Assignment(n, y).to_string() + " in B has f = 0"});
        }
    }

    const auto pairs = scheme.pairs();
    const std::size_t workers = std::max(1u, thread_count());
    const std::size_t chunk = std::max<std::size_t>(1, (pairs.size() + workers - 1) / workers);
    const std::size_t chunks = (pairs.size() + chunk - 1) / chunk;
    std::vector<std::vector<Violation>> found(chunks);
    std::vector<std::size_t> counts(chunks, 0);
    parallel_chunks(chunks, [&](std::size_t lo, std::size_t hi) {
        std::vector<Directional> dirs;
        for (std::size_t c = lo; c < hi; ++c) {
            for (std::size_t k = c * chunk; k < std::min(pairs.size(), (c + 1) * chunk); ++k) {
                const auto& p = pairs[k];
                const std::string where = pair_label(n, p.x, p.y);
                if (p.w.is_zero()) {
                    record(found[c], counts[c], {Violation::Kind::nonpositive, p.x, p.y, 0, "w = 0 at " + where});
                }
                scheme.directional(k, dirs);
                const auto vars = differing_vars(n, p.x, p.y);
                const Rational w2 = p.w.square();
                for (std::size_t t = 0; t < vars.size(); ++t) {
                    const auto& d = dirs[t];
                    const std::string at = where + " at x" + std::to_string(vars[t]);
                    if (d.forward.is_zero() || d.backward.is_zero()) {
                        record(found[c], counts[c],
                               {Violation::Kind::nonpositive, p.x, p.y, vars[t], "w' = 0 at " + at});
                        continue;
                    }
                    bool holds;
                    try {
                        holds = d.forward * d.backward >= ExactWeight(w2);
                    } catch (const OverflowError&) {
                        holds = d.forward.to_double() * d.backward.to_double() >=
                                p.w.to_double() * p.w.to_double() - kTolerance;
                    }
                    if (!holds) {
                        record(found[c], counts[c],
                               {Violation::Kind::constraint, p.x, p.y, vars[t],
                                "w'(x,y,i) * w'(y,x,i) = " + (d.forward * d.backward).to_string() + " < w^2 = " +
                                    w2.to_string() + " at " + at});
                    }
                }
            }
        }
    });
    for (std::size_t c = 0; c < chunks; ++c) {
        result.total += counts[c];
        for (auto& v : found[c]) {
            if (result.violations.size() < kMaxViolations) result.violations.push_back(std::move(v));
        }
    }
    result.valid = result.total == 0;
    return result;
}

// ---------------------------------------------------------------------------
// Loads

namespace {

SideLoads side_loads(const WeightScheme& scheme, bool zero_side) {
    const unsigned n = scheme.arity();
    const auto elements = zero_side ? scheme.a() : scheme.b();
    const auto pairs = scheme.pairs();
    const auto by_y = scheme.pairs_by_y();
    auto pair_at = [&](std::size_t pos) -> std::size_t { return zero_side ? pos : by_y[pos]; };
    auto owner = [&](std::size_t pos) { return zero_side ? pairs[pos].x : pairs[by_y[pos]].y; };

    std::vector<std::size_t> begin(elements.size() + 1, 0);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < elements.size(); ++k) {
        begin[k] = pos;
        while (pos < pairs.size() && owner(pos) == elements[k]) ++pos;
    }
    begin[elements.size()] = pos;

    SideLoads out;
    out.wt.resize(elements.size());
    out.v.resize(elements.size() * n);
    parallel_chunks(elements.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<Directional> dirs;
        std::vector<Accumulator> v(n);
        for (std::size_t k = lo; k < hi; ++k) {
            Accumulator wt;
            std::fill(v.begin(), v.end(), Accumulator{});
            for (std::size_t q = begin[k]; q < begin[k + 1]; ++q) {
                const std::size_t idx = pair_at(q);
                const auto& p = pairs[idx];
                wt.add(p.w);
                scheme.directional(idx, dirs);
                Index diff = p.x ^ p.y;
                for (std::size_t t = 0; diff != 0; ++t) {
                    // Highest set bit is the lowest-numbered variable.
                    const unsigned var = n - static_cast<unsigned>(std::bit_width(diff)) + 1;
                    diff &= ~var_bit(n, var);
                    v[var - 1].add(zero_side ? dirs[t].forward : dirs[t].backward);
                }
            }
            out.wt[k] = wt.value();
            for (unsigned i = 0; i < n; ++i) out.v[k * n + i] = v[i].value();
        }
    });

    Extremum ratio(true), wt_min(false), wt_max(true), v_min(false), v_max(true);
    for (std::size_t k = 0; k < elements.size(); ++k) {
        wt_min.offer(out.wt[k]);
        wt_max.offer(out.wt[k]);
        for (unsigned i = 0; i < n; ++i) {
            const Quantity& load = out.v[k * n + i];
            v_min.offer(load);
            v_max.offer(load);
            if (begin[k] != begin[k + 1]) ratio.offer(load / out.wt[k]);
        }
    }
    out.max_ratio = ratio.result();
    out.wt_min = wt_min.result();
    out.wt_max = wt_max.result();
    out.v_min = v_min.result();
    out.v_max = v_max.result();
    return out;
}

}  // namespace

LoadReport loads(const WeightScheme& scheme) {
    if (scheme.a().empty() || scheme.b().empty()) throw std::invalid_argument("loads need nonempty A and B");
    if (scheme.pairs().empty()) throw std::invalid_argument("loads need a nonempty relation");
    LoadReport r;
    r.arity = scheme.arity();
    r.a = side_loads(scheme, true);
    r.b = side_loads(scheme, false);
    r.v_a = r.a.max_ratio;
    r.v_b = r.b.max_ratio;
    r.v_max = (r.v_a * r.v_b).sqrt();
    r.bound = r.v_max.reciprocal();
    return r;
}

bool is_balanced(const LoadReport& report) {
    return report.v_a.same_as(report.v_b);
}

WeightScheme balance(const WeightScheme& scheme) {
    return balance(scheme, loads(scheme));
}

WeightScheme balance(const WeightScheme& scheme, const LoadReport& report) {
    if (!report.v_a.is_exact() || !report.v_b.is_exact()) {
        throw std::domain_error("balancing needs exact maximum loads");
    }
    const ExactWeight va = *report.v_a.exact();
    const ExactWeight vb = *report.v_b.exact();
    if (va.is_zero() || vb.is_zero()) throw std::domain_error("cannot balance a scheme with a zero maximum load");
    const ExactWeight ratio = vb / va;
    if (ratio == ExactWeight(1)) return scheme;
    auto factor = ratio.sqrt();
    if (!factor) {
        throw std::domain_error("balancing factor sqrt(" + ratio.to_string() + ") has no q*sqrt(r) form");
    }
    return scheme.scaled(*factor, factor->reciprocal());
}

// ---------------------------------------------------------------------------
// Unweighted relations

RelationBound relation_bound(const BooleanFunction& f, std::span<const Index> a_in, std::span<const Index> b_in,
                             const Relation& r) {
    if (r.empty()) throw std::invalid_argument("relation is empty");
    std::vector<Index> a(a_in.begin(), a_in.end());
    std::vector<Index> b(b_in.begin(), b_in.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const unsigned n = f.arity();
    std::vector<std::uint32_t> partners_a(a.size(), 0), partners_b(b.size(), 0);
    std::vector<std::uint32_t> per_var_a(a.size() * n, 0), per_var_b(b.size() * n, 0);
    for (const auto& [x, y] : r) {
        auto pa = position_in(a, x);
        auto pb = position_in(b, y);
        if (!pa || !pb) throw std::invalid_argument("pair " + pair_label(n, x, y) + " is not in A x B");
        if (f(x) != 0 || f(y) != 1) throw std::invalid_argument("pair " + pair_label(n, x, y) + " is on the wrong side");
        ++partners_a[*pa];
        ++partners_b[*pb];
        for (unsigned var : differing_vars(n, x, y)) {
            ++per_var_a[*pa * n + var - 1];
            ++per_var_b[*pb * n + var - 1];
        }
    }
    RelationBound out;
    out.m = *std::min_element(partners_a.begin(), partners_a.end());
    out.m2 = *std::min_element(partners_b.begin(), partners_b.end());
    out.l = *std::max_element(per_var_a.begin(), per_var_a.end());
    out.l2 = *std::max_element(per_var_b.begin(), per_var_b.end());
    out.bound = Quantity(ExactWeight::sqrt_of(Rational(static_cast<std::int64_t>(out.m * out.m2),
                                                       static_cast<std::int64_t>(out.l * out.l2))));
    return out;
}

WeightScheme unit_scheme(const BooleanFunction& f, std::vector<Index> a, std::vector<Index> b, const Relation& r) {
    if (r.empty()) throw std::invalid_argument("relation is empty");
    std::vector<WeightScheme::Pair> pairs;
    pairs.reserve(r.size());
    for (const auto& [x, y] : r) pairs.push_back({x, y, ExactWeight(1)});
    std::sort(pairs.begin(), pairs.end(), pair_less);
    return WeightScheme(f, std::move(a), std::move(b), std::move(pairs), std::make_shared<UniformSource>())
        .set_name("unit");
}

// ---------------------------------------------------------------------------
// Built-in schemes

std::pair<std::vector<unsigned>, std::vector<unsigned>> sensitive_partition(const BooleanFunction& f, Index x) {
    std::pair<std::vector<unsigned>, std::vector<unsigned>> out;
    for (unsigned v = 1; v <= f.arity(); ++v) {
        (f(x ^ var_bit(f.arity(), v)) != f(x) ? out.first : out.second).push_back(v);
    }
    return out;
}

namespace {

struct SchemeBuilder {
    std::vector<WeightScheme::Pair> pairs;
    std::vector<std::vector<Directional>> dirs;

    // Same directional weights at every differing variable.
    void add(Index x, Index y, ExactWeight w, Directional d) {
        pairs.push_back({x, y, w});
        dirs.emplace_back(static_cast<std::size_t>(std::popcount(x ^ y)), d);
    }
};

WeightScheme lemma3_f() {
    const auto f = builtins::ambainis_f();
    const ExactWeight one(1), two_thirds(Rational(2, 3)), third(Rational(1, 3)), four_thirds(Rational(4, 3));
    SchemeBuilder sb;
    for (Index x : f.preimage(0)) {
        auto [sens, insens] = sensitive_partition(f, x);
        if (sens.size() != 2) throw std::logic_error("base function must have two sensitive variables everywhere");
        for (unsigned v : sens) sb.add(x, x ^ var_bit(4, v), one, {one, one});
        // The flipped pair is sensitive for one endpoint; that endpoint gets
        // the small directional weight.
        sb.add(x, x ^ var_mask(4, sens), two_thirds, {third, four_thirds});
        sb.add(x, x ^ var_mask(4, insens), two_thirds, {four_thirds, third});
    }
    return WeightScheme(f, f.preimage(0), f.preimage(1), std::move(sb.pairs), std::move(sb.dirs)).set_name("lemma3_f");
}

WeightScheme lemma6_g() {
    const auto g = builtins::nae_g();
    const ExactWeight root2 = ExactWeight::sqrt_of(2);
    SchemeBuilder sb;
    for (Index x : g.preimage(0)) {
        for (Index y : g.preimage(1)) {
            if (std::popcount(x ^ y) == 1) {
                sb.add(x, y, ExactWeight(2), {ExactWeight(2) * root2, root2});
            } else {
                sb.add(x, y, ExactWeight(1), {root2 / ExactWeight(2), root2});
            }
        }
    }
    return WeightScheme(g, g.preimage(0), g.preimage(1), std::move(sb.pairs), std::move(sb.dirs)).set_name("lemma6_g");
}

WeightScheme lemma7_h() {
    const auto h = builtins::kushilevitz_h();
    std::vector<Index> a{0}, b;
    SchemeBuilder sb;
    for (unsigned k = 1; k <= 6; ++k) {
        b.push_back(var_bit(6, k));
        sb.add(0, var_bit(6, k), ExactWeight(1), {ExactWeight(1), ExactWeight(1)});
    }
    for (const auto& triple : builtins::kushilevitz_zero_triples()) {
        const Index t = var_mask(6, triple);
        a.push_back(t);
        for (unsigned k : triple) {
            sb.add(t, var_bit(6, k), ExactWeight(Rational(1, 8)),
                   {ExactWeight(Rational(1, 32)), ExactWeight(Rational(1, 2))});
        }
    }
    return WeightScheme(h, std::move(a), std::move(b), std::move(sb.pairs), std::move(sb.dirs)).set_name("lemma7_h");
}

}  // namespace

WeightScheme builtin_scheme(std::string_view name) {
    if (name == "lemma3_f") return lemma3_f();
    if (name == "lemma6_g") return lemma6_g();
    if (name == "lemma7_h") return lemma7_h();
    throw std::invalid_argument("unknown built-in scheme '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Scheme files

namespace {

void write_index_list(std::ostream& out, std::span<const Index> v) {
    out << '[';
    for (std::size_t k = 0; k < v.size(); ++k) out << (k ? ", " : "") << v[k];
    out << ']';
}

std::string quoted(const std::string& s) {
    return nlohmann::json(s).dump();
}

ExactWeight weight_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) throw std::invalid_argument(where + ": weights must be strings such as \"2/3\"");
    try {
        return ExactWeight::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw std::invalid_argument(where + ": " + e.what());
    }
}

std::vector<Index> indices_from_json(const nlohmann::json& j, const char* field) {
    if (!j.is_array()) throw std::invalid_argument(std::string("field '") + field + "' must be an array");
    std::vector<Index> out;
    for (const auto& e : j) {
        if (!e.is_number_unsigned()) throw std::invalid_argument(std::string("field '") + field + "' holds non-indices");
        out.push_back(e.get<Index>());
    }
    return out;
}

}  // namespace

void write_scheme_json(const WeightScheme& scheme, std::ostream& out) {
    const auto& f = scheme.function();
    const std::string table = format_truth_table(f);
    out << "{\n";
    if (!scheme.name().empty()) out << "  \"name\": " << quoted(scheme.name()) << ",\n";
    out << "  \"function\": {\"arity\": " << f.arity() << ", \"table\": \""
        << table.substr(table.find('\n') + 1, f.size()) << "\"},\n";
    out << "  \"A\": ";
    write_index_list(out, scheme.a());
    out << ",\n  \"B\": ";
    write_index_list(out, scheme.b());
    out << ",\n  \"pairs\": [";
    std::vector<Directional> dirs;
    const auto pairs = scheme.pairs();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        out << (k ? ",\n" : "\n") << "    {\"x\": " << p.x << ", \"y\": " << p.y << ", \"w\": \"" << p.w.to_string()
            << "\", \"wp\": {";
        scheme.directional(k, dirs);
        const auto vars = differing_vars(f.arity(), p.x, p.y);
        for (std::size_t t = 0; t < vars.size(); ++t) {
            out << (t ? ", " : "") << '"' << vars[t] << "\": [\"" << dirs[t].forward.to_string() << "\", \""
                << dirs[t].backward.to_string() << "\"]";
        }
        out << "}}";
    }
    out << (pairs.empty() ? "]\n" : "\n  ]\n") << "}\n";
}

std::string format_scheme_json(const WeightScheme& scheme) {
    std::ostringstream out;
    write_scheme_json(scheme, out);
    return out.str();
}

WeightScheme parse_scheme_json(std::string_view text, const std::filesystem::path& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scheme file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("scheme file must hold a JSON object");
    for (const char* field : {"function", "A", "B", "pairs"}) {
        if (!j.contains(field)) throw std::invalid_argument(std::string("scheme file lacks field '") + field + "'");
    }

    const auto& fj = j["function"];
    std::optional<BooleanFunction> f;
    if (fj.is_string()) {
        std::filesystem::path p = fj.get<std::string>();
        f = load_truth_table(p.is_absolute() ? p : base_dir / p);
    } else if (fj.is_object() && fj.contains("arity") && fj.contains("table")) {
        if (!fj["arity"].is_number_unsigned() || !fj["table"].is_string()) {
            throw std::invalid_argument("inline function needs an integer arity and a string table");
        }
        f = parse_truth_table(std::to_string(fj["arity"].get<unsigned>()) + "\n" + fj["table"].get<std::string>());
    } else {
        throw std::invalid_argument("field 'function' must be a path or {\"arity\", \"table\"}");
    }
    const unsigned n = f->arity();

    auto a = indices_from_json(j["A"], "A");
    auto b = indices_from_json(j["B"], "B");
    if (!j["pairs"].is_array()) throw std::invalid_argument("field 'pairs' must be an array");
    std::vector<WeightScheme::Pair> pairs;
    std::vector<std::vector<Directional>> dirs;
    for (const auto& pj : j["pairs"]) {
        if (!pj.is_object() || !pj.contains("x") || !pj.contains("y") || !pj.contains("w") || !pj.contains("wp")) {
            throw std::invalid_argument("each pair needs x, y, w and wp");
        }
        if (!pj["x"].is_number_unsigned() || !pj["y"].is_number_unsigned()) {
            throw std::invalid_argument("pair endpoints must be assignment indices");
        }
        const Index x = pj["x"].get<Index>();
        const Index y = pj["y"].get<Index>();
        if (x >= f->size() || y >= f->size()) throw std::invalid_argument("pair endpoint out of range");
        const std::string where = "pair " + pair_label(n, x, y);
        const auto vars = differing_vars(n, x, y);
        const auto& wp = pj["wp"];
        if (!wp.is_object() || wp.size() != vars.size()) {
            throw std::invalid_argument(where + ": wp must list exactly the differing variables");
        }
        std::vector<Directional> d;
        for (unsigned v : vars) {
            const std::string key = std::to_string(v);
            if (!wp.contains(key)) throw std::invalid_argument(where + ": wp lacks variable " + key);
            const auto& e = wp[key];
            if (!e.is_array() || e.size() != 2) throw std::invalid_argument(where + ": wp entries are [fwd, bwd]");
            d.push_back({weight_from_json(e[0], where), weight_from_json(e[1], where)});
        }
        pairs.push_back({x, y, weight_from_json(pj["w"], where)});
        dirs.push_back(std::move(d));
    }
    WeightScheme s(*f, std::move(a), std::move(b), std::move(pairs), std::move(dirs));
    if (j.contains("name") && j["name"].is_string()) s.set_name(j["name"].get<std::string>());
    return s;
}

WeightScheme load_scheme(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scheme_json(buf.str(), path.parent_path());
}

void save_scheme(const WeightScheme& scheme, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_scheme_json(scheme, out);
}

}  // namespace advwb
