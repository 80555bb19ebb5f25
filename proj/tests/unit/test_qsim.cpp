#include <doctest.h>

#include <bit>
#include <cmath>

#include "advwb/compose.hpp"
#include "advwb/qsim.hpp"

using namespace advwb;

namespace {

WeightScheme distance_one_unit(unsigned n) {
    const auto f = builtins::parity(n);
    Relation r;
    for (Index x : f.preimage(0)) {
        for (unsigned i = 1; i <= n; ++i) r.push_back({x, x ^ var_bit(n, i)});
    }
    return unit_scheme(f, f.preimage(0), f.preimage(1), r);
}

}  // namespace

TEST_SUITE("qsim") {

TEST_CASE("oracle phases") {
    const auto alg = identity_algorithm(3, 2, 1);
    State s = State::Zero(8);
    s[0] = 0.6;
    s[1] = 0.8;
    CHECK(apply_oracle(alg, s, 7).isApprox(s));
    State q = State::Zero(8);
    q[2] = 1.0;  // |1, 0>
    CHECK(apply_oracle(alg, q, Assignment::parse("100").index())[2] == std::complex<double>(-1.0));
    CHECK(apply_oracle(alg, q, Assignment::parse("011").index())[2] == std::complex<double>(1.0));
    const State r = State::Random(8);
    for (Index x = 0; x < 8; ++x) CHECK(apply_oracle(alg, apply_oracle(alg, r, x), x).isApprox(r));
    CHECK_THROWS(apply_oracle(alg, State::Zero(6), 0));
}

TEST_CASE("parity of two bits in one query") {
    const auto alg = parity2_algorithm();
    CHECK_NOTHROW(validate(alg));
    CHECK(alg.queries() == 1);
    for (Index x = 0; x < 4; ++x) {
        const auto r = run(alg, x);
        CHECK(r.acceptance == doctest::Approx(std::popcount(x) & 1).epsilon(1e-12));
        CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto scheme = distance_one_unit(2);
    const auto trace = progress_trace(alg, scheme);
    CHECK(trace.w[0] == doctest::Approx(4.0));
    CHECK(std::abs(trace.w[1]) <= 1e-9);
    CHECK(trace.v_max == doctest::Approx(0.5));
    CHECK(check_drop_bound(trace));
    const auto fb = check_final_bound(alg, scheme, 0.0);
    CHECK(fb.precondition());
    CHECK(fb.holds);
    CHECK(query_lower_bound(0.0, trace.v_max) == doctest::Approx(1.0));
}

TEST_CASE("identity algorithms keep the progress measure") {
    const auto s = builtin_scheme("lemma3_f");
    const auto trace = progress_trace(identity_algorithm(4, 2, 4), s);
    CHECK(trace.w.size() == 5);
    for (double w : trace.w) CHECK(w == doctest::Approx(trace.w[0]));
    for (double d : trace.drops) CHECK(d <= 1e-12);
    double total = 0;
    for (const auto& p : s.pairs()) total += p.w.to_double();
    CHECK(trace.w[0] == doctest::Approx(total));
}

TEST_CASE("zero queries cannot compute a non-constant function") {
    const auto fb = check_final_bound(identity_algorithm(2, 2, 0), distance_one_unit(2), 0.25);
    CHECK_FALSE(fb.precondition());
    CHECK_FALSE(fb.holds);
    CHECK(fb.misses.size() == 2);
    const auto half = check_final_bound(identity_algorithm(2, 2, 0), distance_one_unit(2), 0.5);
    CHECK(half.limit == doctest::Approx(4.0));
}

TEST_CASE("random unitaries") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix u = random_unitary(10, seed);
        CHECK((u.adjoint() * u - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(random_unitary(6, 5).isApprox(random_unitary(6, 5)));
    CHECK_FALSE(random_unitary(6, 5).isApprox(random_unitary(6, 6)));
}

TEST_CASE("drop bound on random algorithms") {
    const std::vector<WeightScheme> schemes = {builtin_scheme("lemma3_f"), balance(builtin_scheme("lemma6_g")),
                                               distance_one_unit(3), distance_one_unit(4)};
    for (const auto& s : schemes) {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const auto alg = random_algorithm(s.arity(), 2, 3, seed);
            const auto trace = progress_trace(alg, s);
            CAPTURE(seed);
            CHECK(check_drop_bound(trace));
            for (Index x : s.a()) CHECK(run(alg, x).state.norm() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("progress is unchanged by a common change of basis") {
    const auto s = builtin_scheme("lemma3_f");
    auto alg = random_algorithm(4, 2, 2, 42);
    const auto before = progress_trace(alg, s);
    alg.unitaries.back() = random_unitary(alg.dimension(), 7) * alg.unitaries.back();
    const auto after = progress_trace(alg, s);
    for (std::size_t t = 0; t < before.w.size(); ++t) CHECK(after.w[t] == doctest::Approx(before.w[t]));
}

TEST_CASE("validation") {
    auto alg = identity_algorithm(2, 2, 1);
    alg.unitaries[1](0, 0) = 2.0;
    CHECK_THROWS_AS(validate(alg), std::invalid_argument);
    CHECK_THROWS_AS(identity_algorithm(32, 2, 1), CapacityError);
    CHECK_THROWS_AS(progress_trace(identity_algorithm(3, 2, 1), builtin_scheme("lemma3_f")), std::invalid_argument);
}

TEST_CASE("algorithm files") {
    const auto alg = random_algorithm(2, 2, 2, 3);
    const auto back = parse_algorithm_json(format_algorithm_json(alg));
    CHECK(back.n == 2);
    CHECK(back.work == 2);
    REQUIRE(back.unitaries.size() == 3);
    for (std::size_t t = 0; t < 3; ++t) CHECK(back.unitaries[t].isApprox(alg.unitaries[t], 1e-15));
    CHECK_THROWS(parse_algorithm_json("{\"N\": 1, \"unitaries\": [[[[2, 0], [0, 0]], [[0, 0], [1, 0]]]]}"));
    CHECK_THROWS(parse_algorithm_json("{\"N\": 1}"));
    const auto flat = parse_algorithm_json("{\"N\": 1, \"work\": 1, \"unitaries\": [[[0, 0], [1, 0], [1, 0], [0, 0]]]}");
    CHECK(flat.unitaries[0](0, 1) == std::complex<double>(1.0));
}

}  // TEST_SUITE
