// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "advwb/adversary.hpp"
#include "advwb/boolfn.hpp"
#include "advwb/compose.hpp"
#include "advwb/matchings.hpp"
#include "advwb/measures.hpp"
#include "advwb/qsim.hpp"

using namespace advwb;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

Quantity exact(Rational r) {
    return Quantity(ExactWeight(r));
}

bool exactly(const Quantity& q, const ExactWeight& w) {
    return q.is_exact() && *q.exact() == w;
}

bool all_exactly(const std::vector<Quantity>& qs, const ExactWeight& w) {
    return std::all_of(qs.begin(), qs.end(), [&](const Quantity& q) { return exactly(q, w); });
}

// 1

Outcome base_measures() {
    Outcome o;
    const auto f = builtins::ambainis_f();
    o.require(degree(f) == 2, "deg(f) != 2");
    o.require(det_complexity(f).depth == 3, "D(f) != 3");
    for (Index x = 0; x < 16; ++x) {
        o.require(sensitivity_at(f, x) == 2, "s_x(f) != 2 at " + Assignment(4, x).to_string());
        o.require(block_sensitivity_at(f, x) == 3, "bs_x(f) != 3 at " + Assignment(4, x).to_string());
    }
    const auto g = builtins::nae_g();
    o.require(degree(g) == 2, "deg(g) != 2");
    o.require(det_complexity(g).depth == 3, "D(g) != 3");
    const auto h = builtins::kushilevitz_h();
    o.require(degree(h) == 3, "deg(h) != 3");
    o.require(det_complexity(h).depth == 6, "D(h) != 6");
    if (o.pass) o.detail = "deg/D/s/bs of f, g, h as expected";
    return o;
}

// 2

Outcome four_partner_scheme() {
    Outcome o;
    const auto s = builtin_scheme("lemma3_f");
    o.require(verify(s).valid, "verifier rejects");
    const auto lr = loads(s);
    const ExactWeight wt(Rational(10, 3)), v(Rational(4, 3));
    o.require(all_exactly(lr.a.wt, wt) && all_exactly(lr.b.wt, wt), "wt != 10/3 somewhere");
    o.require(all_exactly(lr.a.v, v) && all_exactly(lr.b.v, v), "v != 4/3 somewhere");
    o.require(exactly(lr.bound, ExactWeight(Rational(5, 2))), "bound = " + lr.bound.to_string());
    if (o.pass) o.detail = "wt = 10/3, v = 4/3 everywhere, bound = " + lr.bound.exact()->to_string();
    return o;
}

// 3

Outcome nae_scheme() {
    Outcome o;
    const auto s = builtin_scheme("lemma6_g");
    o.require(verify(s).valid, "verifier rejects");
    const auto lr = loads(s);
    const auto root2 = ExactWeight::sqrt_of(Rational(2));
    o.require(all_exactly(lr.a.wt, ExactWeight(9)), "wt != 9 on A");
    o.require(all_exactly(lr.b.wt, ExactWeight(3)), "wt != 3 on B");
    o.require(all_exactly(lr.a.v, root2 * 3), "load != 3*sqrt(2) on A");
    o.require(all_exactly(lr.b.v, root2), "load != sqrt(2) on B");
    o.require(exactly(lr.v_max, root2 / 3), "v_max = " + lr.v_max.to_string());
    o.require(exactly(lr.bound, ExactWeight(3) / root2), "bound = " + lr.bound.to_string());
    if (o.pass) o.detail = "v_max = " + lr.v_max.exact()->to_string() + ", bound = " + lr.bound.exact()->to_string();
    return o;
}

// 4

Outcome six_variable_scheme() {
    Outcome o;
    const auto s = builtin_scheme("lemma7_h");
    o.require(verify(s).valid, "verifier rejects");
    const auto lr = loads(s);
    o.require(exactly(lr.v_a, ExactWeight(Rational(1, 6))), "v_A = " + lr.v_a.to_string());
    o.require(exactly(lr.v_b, ExactWeight(Rational(8, 13))), "v_B = " + lr.v_b.to_string());
    o.require(exactly(lr.v_max, ExactWeight(2) / ExactWeight::sqrt_of(Rational(39))),
              "v_max = " + lr.v_max.to_string());

    // For every weight-one input with its one at p and every other variable
    // i: of the five zero-valued triples through p, exactly two contain i.
    const auto h = builtins::kushilevitz_h();
    std::vector<Index> zero_triples;
    for (Index x = 0; x < 64; ++x) {
        if (std::popcount(x) == 3 && h(x) == 0) zero_triples.push_back(x);
    }
    o.require(zero_triples.size() == 10, "zero triples != 10");
    int checked = 0;
    for (unsigned p = 1; p <= 6; ++p) {
        std::vector<Index> through;
        for (Index t : zero_triples) {
            if (t & var_bit(6, p)) through.push_back(t);
        }
        o.require(through.size() == 5, "variable " + std::to_string(p) + " is in " +
                                           std::to_string(through.size()) + " zero triples");
        for (unsigned i = 1; i <= 6; ++i) {
            if (i == p) continue;
            const auto with_i = std::count_if(through.begin(), through.end(),
                                              [&](Index t) { return (t & var_bit(6, i)) != 0; });
            o.require(with_i == 2, "triples through x" + std::to_string(p) + " containing x" + std::to_string(i) +
                                       ": " + std::to_string(with_i));
            ++checked;
        }
    }
    if (o.pass) {
        o.detail = "v_A = 1/6, v_B = 8/13, v_max = " + lr.v_max.exact()->to_string() + "; two of five triples in all " +
                   std::to_string(checked) + " cases";
    }
    return o;
}

// 5 and 6 share the composition.

std::optional<ComposedScheme> composed_f;

Outcome composition() {
    Outcome o;
    const auto f = builtin_scheme("lemma3_f");
    composed_f = compose_scheme(f, f);
    const auto& s = composed_f->scheme;
    const auto vr = verify(s);
    o.require(vr.valid, "verifier rejects (" + std::to_string(vr.total) + " violations)");
    const auto lr = loads(s);
    ExactWeight wt(1);
    for (int k = 0; k < 5; ++k) wt *= ExactWeight(Rational(10, 3));
    o.require(all_exactly(lr.a.wt, wt) && all_exactly(lr.b.wt, wt), "wt != (10/3)^5 somewhere");
    const ExactWeight load(Rational(4, 25));
    o.require(exactly(lr.v_a, load), "v_A = " + lr.v_a.to_string());
    o.require(exactly(lr.v_b, load), "v_B = " + lr.v_b.to_string());
    o.require(exactly(lr.bound, ExactWeight(Rational(25, 4))), "bound = " + lr.bound.to_string());
    o.require(lr.bound.same_as(predicted_bound(loads(f).bound, 2)), "bound differs from (5/2)^2");
    if (o.pass) {
        o.detail = std::to_string(s.pairs().size()) + " pairs verified, wt = " + wt.to_string() +
                   ", max loads 4/25, bound = " + lr.bound.exact()->to_string();
    }
    return o;
}

Outcome composition_identities() {
    Outcome o;
    if (!composed_f) {
        o.require(false, "composition unavailable");
        return o;
    }
    const auto slices = check_all_slice_weights(*composed_f);
    const auto totals = check_all_weight_products(*composed_f);
    o.require(slices.holds(), std::to_string(slices.failed) + " slice sums differ");
    o.require(totals.holds(), std::to_string(totals.failed) + " total weights differ");
    if (o.pass) {
        o.detail = std::to_string(slices.checked) + " slice sums and " + std::to_string(totals.checked) +
                   " total weights exact";
    }
    return o;
}

// 7

Outcome iterated() {
    Outcome o;
    const auto c = iterated_certificates(builtins::ambainis_f(), 2);
    o.require(c.materialized, "not verified per input");
    o.require(c.sensitivity_min == 4 && c.sensitivity_max == 4,
              "s ranges over [" + std::to_string(c.sensitivity_min) + ", " + std::to_string(c.sensitivity_max) + "]");
    o.require(c.block_sensitivity_lower == 9, "bs lower bound " + std::to_string(c.block_sensitivity_lower));
    o.require(c.decision_depth_upper == 9, "D upper bound " + std::to_string(c.decision_depth_upper));
    o.require(c.block_sensitivity_certified, "bs and D bounds do not meet");
    o.require(c.degree == 4, "deg != 4");
    if (o.pass) o.detail = "s = 4 at all 65536 inputs, bs = D = 9, deg = 4";
    return o;
}

// 8

Outcome matchings() {
    Outcome o;
    // The first matching as printed in the construction's description.
    const std::string listed =
        "(0011, 0001), (0101, 1101), (1100, 1110), (1010, 0010), (0100, 1100), (1000, 0000), (0111, 1111), "
        "(1011, 1001)";
    const auto one = build_matchings(1, 1);
    std::vector<Index> order;
    for (const auto& p : first_base_matching()) order.push_back(p.first);
    const std::string built = format_pair_listing(one, 1, order);
    if (built != listed) {
        std::size_t at = 0;
        while (at < built.size() && at < listed.size() && built[at] == listed[at]) ++at;
        const std::size_t from = built.rfind('(', at);
        o.require(false, "first matching differs from the listing at " + listed.substr(from, 12) + " (built " +
                             built.substr(from, 12) + ")");
    }
    std::ostringstream params;
    for (unsigned d = 1; d <= 2; ++d) {
        const std::size_t m = d == 1 ? 3 : 9;
        const std::size_t big_l = d == 1 ? 2 : 4;
        const Quantity expected = predicted_bound(Quantity(ExactWeight::sqrt_of(Rational(9, 2))), d);
        for (int set : {1, 2}) {
            const auto ms = build_matchings(d, set);
            const auto c = check_matchings(ms);
            const std::string tag = "d=" + std::to_string(d) + " set " + std::to_string(set);
            o.require(c.valid_pairs && c.bijective && c.disjoint, tag + ": not disjoint perfect matchings");
            o.require(ms.count() == m, tag + ": " + std::to_string(ms.count()) + " matchings");
            const std::size_t l = set == 1 ? 1 : big_l;
            const std::size_t l2 = set == 1 ? big_l : 1;
            o.require(c.params.m == m && c.params.m2 == m && c.params.l == l && c.params.l2 == l2,
                      tag + ": (m, m', l, l') = (" + std::to_string(c.params.m) + ", " + std::to_string(c.params.m2) +
                          ", " + std::to_string(c.params.l) + ", " + std::to_string(c.params.l2) + ")");
            o.require(c.params.bound.same_as(expected) && c.params.bound.is_exact(),
                      tag + ": bound " + c.params.bound.to_string());
            params << " " << tag << " (" << c.params.m << "," << c.params.m2 << "," << c.params.l << ","
                   << c.params.l2 << ") bound " << c.params.bound.exact_string() << ";";
        }
    }
    if (o.pass) o.detail = "listing reproduced;" + params.str();
    else o.detail += ";" + params.str();
    return o;
}

// 9

Outcome simulator() {
    Outcome o;
    const std::uint64_t first_seed = 20261016;
    const auto scheme = balance(builtin_scheme("lemma3_f"));
    int held = 0;
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto alg = random_algorithm(4, 2, 2, first_seed + k);
        const auto trace = progress_trace(alg, scheme);
        if (check_drop_bound(trace)) ++held;
        else o.require(false, "drop bound fails for seed " + std::to_string(first_seed + k));
        for (double d : trace.drops) worst = std::max(worst, d / (2.0 * trace.v_max * trace.w[0]));
    }

    const auto parity = parity2_algorithm();
    const auto par = builtins::parity(2);
    Relation r;
    for (Index x : par.preimage(0)) {
        for (unsigned i = 1; i <= 2; ++i) r.push_back({x, x ^ var_bit(2, i)});
    }
    const auto unit = unit_scheme(par, par.preimage(0), par.preimage(1), r);
    double max_error = 0.0;
    for (Index x = 0; x < 4; ++x) {
        const double p = run(parity, x).acceptance;
        max_error = std::max(max_error, par(x) ? 1.0 - p : p);
    }
    o.require(max_error <= 1e-12, "parity error " + std::to_string(max_error));
    const auto pt = progress_trace(parity, unit);
    o.require(pt.w.size() == 2 && std::abs(pt.w[1]) <= 1e-9, "W_1 = " + std::to_string(pt.w.back()));

    double identity_drop = 0.0;
    for (unsigned t = 0; t <= 3; ++t) {
        for (const auto& s : {scheme, unit}) {
            const auto tr = progress_trace(identity_algorithm(s.arity(), 2, t), s);
            for (double d : tr.drops) identity_drop = std::max(identity_drop, d);
        }
    }
    o.require(identity_drop <= 1e-12, "identity drop " + std::to_string(identity_drop));
    std::ostringstream d;
    d << held << "/100 random algorithms (seeds " << first_seed << ".." << first_seed + 99
      << ") within the drop bound, worst ratio " << worst << "; parity error " << max_error << ", W_1 = "
      << pt.w.back() << "; identity drops " << identity_drop;
    o.detail = o.pass ? d.str() : o.detail + "; " + d.str();
    return o;
}

// 10

Outcome invariants() {
    Outcome o;
    for (const char* name : {"lemma3_f", "lemma6_g", "lemma7_h"}) {
        const auto s = builtin_scheme(name);
        const auto b = balance(s);
        o.require(loads(b).v_max.same_as(loads(s).v_max), std::string(name) + ": balancing moves v_max");
        bool products = true;
        for (std::size_t p = 0; p < s.pairs().size(); ++p) {
            const auto d0 = s.directional(p), d1 = b.directional(p);
            for (std::size_t k = 0; k < d0.size(); ++k) {
                products = products && d0[k].forward * d0[k].backward == d1[k].forward * d1[k].backward;
            }
        }
        o.require(products, std::string(name) + ": balancing changes a directional product");
    }

    int relations = 0;
    auto same_bound = [&](const BooleanFunction& f, const Relation& r, const std::string& tag) {
        const auto a = f.preimage(0), b = f.preimage(1);
        const auto rb = relation_bound(f, a, b, r);
        o.require(loads(unit_scheme(f, a, b, r)).bound.same_as(rb.bound), tag + ": unit scheme bound differs");
        ++relations;
    };
    for (unsigned n = 2; n <= 6; ++n) {
        const auto f = builtins::parity(n);
        Relation r;
        for (Index x : f.preimage(0)) {
            for (unsigned i = 1; i <= n; ++i) r.push_back({x, x ^ var_bit(n, i)});
        }
        same_bound(f, r, "parity(" + std::to_string(n) + ")");
    }
    {
        const auto g = builtins::nae_g();
        Relation r;
        for (Index x : g.preimage(0)) {
            for (Index y : g.preimage(1)) r.push_back({x, y});
        }
        same_bound(g, r, "nae_g");
    }
    for (int set : {1, 2}) {
        const auto ms = build_matchings(1, set);
        same_bound(ms.f, ms.relation(), "matchings set " + std::to_string(set));
    }

    for (const char* name : {"f", "g", "h", "parity(4)", "or(5)", "and(3)"}) {
        const auto r = measure_all(builtin(name));
        o.require(*r.s <= *r.bs && *r.bs <= *r.d_depth, std::string(name) + ": s <= bs <= D fails");
        o.require(*r.approx_deg <= *r.deg && *r.deg <= *r.d_depth, std::string(name) + ": adeg <= deg <= D fails");
    }

    const std::uint64_t seed = 1016;
    std::mt19937_64 rng(seed);
    int round_trips = 0;
    for (int k = 0; k < 1000; ++k) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 10);
        const auto f = BooleanFunction::from_predicate(n, [&](Index) { return (rng() & 1) != 0; });
        const auto p = exact_polynomial(f);
        bool ok = true;
        for (Index x = 0; x < f.size() && ok; ++x) ok = p.evaluate(x) == f(x);
        o.require(ok, "polynomial round trip fails on function " + std::to_string(k));
        round_trips += ok;
    }
    if (o.pass) {
        o.detail = "balance on 3 schemes, " + std::to_string(relations) + " regular relations, 6 built-ins, " +
                   std::to_string(round_trips) + " round trips (seed " + std::to_string(seed) + ")";
    }
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 for none
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "base function measures", 5, base_measures},
        {2, "four-partner scheme for f", 1, four_partner_scheme},
        {3, "scheme for g", 0, nae_scheme},
        {4, "scheme for h", 0, six_variable_scheme},
        {5, "composed scheme for f^2", 60, composition},
        {6, "slice and total weight identities on f^2", 0, composition_identities},
        {7, "iterated certificates for f^2", 60, iterated},
        {8, "matchings", 120, matchings},
        {9, "simulator properties", 30, simulator},
        {10, "invariant suite", 60, invariants},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
            o.require(false, "took " + std::to_string(seconds) + " s, limit " + std::to_string(c.limit_seconds) + " s");
        }
        failed += !o.pass;
        std::printf("%s %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
