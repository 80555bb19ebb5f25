#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "advwb/adversary.hpp"
#include "advwb/boolfn.hpp"
#include "advwb/compose.hpp"
#include "advwb/matchings.hpp"
#include "advwb/measures.hpp"
#include "advwb/parallel.hpp"
#include "advwb/qsim.hpp"

namespace advwb::cli {

namespace {

using Json = nlohmann::ordered_json;

BooleanFunction resolve_function(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_truth_table(arg);
    return builtin(arg);
}

WeightScheme resolve_scheme(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_scheme(arg);
    return builtin_scheme(arg);
}

const char* yes_no(bool b) {
    return b ? "yes" : "no";
}

std::string bits(unsigned arity, Index x) {
    return Assignment(arity, x).to_string();
}

// measures

struct MeasuresOptions {
    std::string function;
    std::string eps = "1/3";
    std::vector<std::string> skip;
    std::string scheme;
    unsigned cert_arity = kDefaultCertificateArity;
    bool json = false;
};

int cmd_measures(const MeasuresOptions& o, std::ostream& out) {
    const BooleanFunction f = resolve_function(o.function);
    MeasureSelection which;
    which.certificate_arity = o.cert_arity;
    for (const auto& s : o.skip) {
        if (s == "deg") which.degree = false;
        else if (s == "approx_deg") which.approx_degree = false;
        else if (s == "s") which.sensitivity = false;
        else if (s == "bs") which.block_sensitivity = false;
        else if (s == "C" || s == "c") which.certificates = false;
        else if (s == "D") which.decision_tree = false;
        else throw CLI::ValidationError("--skip", "unknown measure '" + s + "' (deg, approx_deg, s, bs, C, D)");
    }
    ComplexityReport r = measure_all(f, Rational::parse(o.eps), which);
    if (!o.scheme.empty()) {
        const WeightScheme scheme = resolve_scheme(o.scheme);
        if (!(scheme.function() == f)) {
            throw std::invalid_argument("scheme '" + o.scheme + "' is for a different function");
        }
        if (!verify(scheme).valid) throw std::invalid_argument("scheme '" + o.scheme + "' does not verify");
        r.adversary_bound = loads(scheme).bound.to_string();
    }
    out << (o.json ? format_report_json(r) : format_report_text(r));
    return kOk;
}

// verify-scheme

struct VerifyOptions {
    std::string scheme;
    bool json = false;
};

Json side_json(const SideLoads& s, const Quantity& v) {
    Json j;
    j["wt_min"] = s.wt_min.to_string();
    j["wt_max"] = s.wt_max.to_string();
    j["v_min"] = s.v_min.to_string();
    j["v_max"] = s.v_max.to_string();
    j["max_ratio"] = v.to_string();
    return j;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    const WeightScheme scheme = resolve_scheme(o.scheme);
    const VerifyResult vr = verify(scheme);
    std::optional<LoadReport> lr;
    if (vr.valid) lr = loads(scheme);
    if (o.json) {
        Json j;
        j["scheme"] = scheme.name();
        j["arity"] = scheme.arity();
        j["pairs"] = scheme.pairs().size();
        j["valid"] = vr.valid;
        if (lr) {
            j["A"] = side_json(lr->a, lr->v_a);
            j["B"] = side_json(lr->b, lr->v_b);
            j["v_max"] = lr->v_max.to_string();
            j["bound"] = lr->bound.to_string();
        } else {
            j["violation_count"] = vr.total;
            auto& vs = j["violations"] = Json::array();
            for (const auto& v : vr.violations) vs.push_back(v.detail);
        }
        out << j.dump(2) << "\n";
    } else {
        out << "scheme: " << (scheme.name().empty() ? o.scheme : scheme.name()) << "\n";
        out << "arity: " << scheme.arity() << ", |A| = " << scheme.a().size() << ", |B| = " << scheme.b().size()
            << ", pairs: " << scheme.pairs().size() << "\n";
        if (lr) {
            for (const auto& [side, s, v] : {std::tuple{"A", &lr->a, &lr->v_a}, std::tuple{"B", &lr->b, &lr->v_b}}) {
                out << side << ": wt in [" << s->wt_min << ", " << s->wt_max << "], v in [" << s->v_min << ", "
                    << s->v_max << "], max v/wt = " << *v << "\n";
            }
            out << "v_max = " << lr->v_max << "\n";
            out << "valid, bound = " << lr->bound << "\n";
        } else {
            out << "invalid: " << vr.total << " violation(s)\n";
            for (const auto& v : vr.violations) out << "  " << v.detail << "\n";
            if (vr.total > vr.violations.size()) out << "  ...\n";
        }
    }
    return vr.valid ? kOk : kFailed;
}

// compose

struct ComposeOptions {
    std::string base;
    unsigned depth = 1;
    std::string export_path;
    bool skip_verify = false;
    bool json = false;
};

int cmd_compose(const ComposeOptions& o, std::ostream& out) {
    const std::string name = o.base == "f" ? "lemma3_f" : o.base == "g" ? "lemma6_g" : "lemma7_h";
    WeightScheme base = builtin_scheme(name);
    const LoadReport base_loads = loads(base);
    if (!is_balanced(base_loads)) base = balance(base, base_loads);
    const Quantity predicted = predicted_bound(base_loads.bound, o.depth);

    // n^depth, saturating past the cap.
    std::size_t arity = 1;
    for (unsigned k = 0; k < o.depth && arity <= kMaxComposedArity; ++k) arity *= base.arity();
    const bool materialize = arity <= kMaxComposedArity;

    std::optional<WeightScheme> composed;
    std::optional<VerifyResult> vr;
    std::optional<Quantity> measured;
    if (materialize) {
        composed = base;
        for (unsigned k = 2; k <= o.depth; ++k) composed = compose_scheme(base, *composed).scheme;
        if (!o.skip_verify) vr = verify(*composed);
        if (!vr || vr->valid) measured = loads(*composed).bound;
        if (!o.export_path.empty()) save_scheme(*composed, o.export_path);
    }
    const bool valid = !vr || vr->valid;
    const bool agree = !measured || measured->same_as(predicted);

    if (o.json) {
        Json j;
        j["base"] = name;
        j["base_bound"] = base_loads.bound.to_string();
        j["depth"] = o.depth;
        j["materialized"] = materialize;
        if (composed) j["pairs"] = composed->pairs().size();
        if (vr) j["valid"] = vr->valid;
        if (measured) j["measured"] = measured->to_string();
        j["predicted"] = predicted.to_string();
        out << j.dump(2) << "\n";
    } else {
        out << "base: " << name << " (arity " << base.arity() << "), bound = " << base_loads.bound << "\n";
        out << "depth: " << o.depth << "\n";
        if (!materialize) {
            out << "notice: composed arity exceeds " << kMaxComposedArity
                << " variables; reporting the predicted bound only\n";
        } else {
            out << "composed: arity " << composed->arity() << ", pairs " << composed->pairs().size() << "\n";
            if (vr) out << (vr->valid ? "valid" : "invalid: " + std::to_string(vr->total) + " violation(s)") << "\n";
            if (vr && !vr->valid) {
                for (const auto& v : vr->violations) out << "  " << v.detail << "\n";
            }
            if (measured) out << "measured bound = " << *measured << "\n";
        }
        out << "predicted bound = " << predicted << "\n";
        if (!agree) out << "measured and predicted bounds differ\n";
    }
    return valid && agree ? kOk : kFailed;
}

// matchings

struct MatchingsOptions {
    unsigned depth = 1;
    int set = 0;
    std::size_t export_k = 0;
    std::string output;
    bool json = false;
};

int cmd_matchings(const MatchingsOptions& o, std::ostream& out) {
    const Quantity expected = predicted_bound(Quantity(ExactWeight(Rational(9, 2))).sqrt(), o.depth);
    bool ok = true;
    Json j = Json::array();
    for (int set : {1, 2}) {
        if (o.set != 0 && o.set != set) continue;
        const MatchingSet ms = build_matchings(o.depth, set);
        const MatchingCheck c = check_matchings(ms);
        const bool good = c.valid_pairs && c.bijective && c.disjoint && c.params.bound.same_as(expected);
        ok = ok && good;
        std::optional<std::string> listing;
        if (o.depth == 1 && set == 1) {
            std::vector<Index> order;
            for (const auto& p : first_base_matching()) order.push_back(p.first);
            listing = format_pair_listing(ms, 1, order);
        }
        if (o.export_k != 0) {
            if (o.export_k > ms.count()) throw CLI::ValidationError("--export", "matching index out of range");
            if (o.output.empty()) {
                export_matching(ms, o.export_k, out);
            } else {
                const std::string path = o.set == 0 ? o.output + "." + std::to_string(set) : o.output;
                std::ofstream f(path, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + path);
                export_matching(ms, o.export_k, f);
            }
        }
        if (o.json) {
            Json e;
            e["set"] = set;
            e["depth"] = o.depth;
            e["matchings"] = ms.count();
            e["pairs_each"] = ms.zeros.size();
            e["valid_pairs"] = c.valid_pairs;
            e["perfect"] = c.bijective;
            e["disjoint"] = c.disjoint;
            e["m"] = c.params.m;
            e["m2"] = c.params.m2;
            e["l"] = c.params.l;
            e["l2"] = c.params.l2;
            e["bound"] = c.params.bound.to_string();
            e["expected"] = expected.to_string();
            if (listing) e["first_matching"] = *listing;
            j.push_back(std::move(e));
        } else if (o.export_k == 0 || !o.output.empty()) {
            out << "set " << set << ", depth " << o.depth << ": " << ms.count() << " matchings of "
                << ms.zeros.size() << " pairs\n";
            out << "valid pairs: " << yes_no(c.valid_pairs) << ", perfect: " << yes_no(c.bijective)
                << ", disjoint: " << yes_no(c.disjoint) << "\n";
            out << "m = " << c.params.m << ", m' = " << c.params.m2 << ", l = " << c.params.l
                << ", l' = " << c.params.l2 << "\n";
            out << "bound = " << c.params.bound << ", expected " << expected << "\n";
            if (listing) out << "first matching: " << *listing << "\n";
        }
    }
    if (o.json) out << j.dump(2) << "\n";
    return ok ? kOk : kFailed;
}

// simulate

struct SimulateOptions {
    std::string scheme;
    std::string algorithm;
    std::uint64_t seed = 1;
    unsigned trials = 1;
    unsigned queries = 2;
    unsigned work = 2;
    std::optional<double> eps;
    bool json = false;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
    WeightScheme scheme = resolve_scheme(o.scheme);
    const VerifyResult vr = verify(scheme);
    if (!vr.valid) {
        out << "scheme is invalid: " << vr.total << " violation(s)\n";
        return kFailed;
    }
    const LoadReport lr = loads(scheme);
    const bool rebalanced = !is_balanced(lr);
    if (rebalanced) scheme = balance(scheme, lr);

    std::vector<std::pair<std::optional<std::uint64_t>, QueryAlgorithm>> algs;
    if (!o.algorithm.empty()) {
        algs.emplace_back(std::nullopt, load_algorithm(o.algorithm));
    } else {
        for (unsigned t = 0; t < o.trials; ++t) {
            algs.emplace_back(o.seed + t, random_algorithm(scheme.arity(), o.work, o.queries, o.seed + t));
        }
    }

    bool ok = true;
    Json runs = Json::array();
    if (!o.json) {
        out << "scheme: " << (scheme.name().empty() ? o.scheme : scheme.name()) << ", v_max = " << lr.v_max << "\n";
        if (rebalanced) out << "note: scheme balanced before simulation\n";
    }
    for (const auto& [seed, alg] : algs) {
        const ProgressTrace trace = progress_trace(alg, scheme);
        const bool drops_ok = check_drop_bound(trace);
        ok = ok && drops_ok;
        std::optional<FinalBoundCheck> fb;
        if (o.eps) {
            fb = check_final_bound(alg, scheme, *o.eps);
            ok = ok && (!fb->precondition() || fb->holds);
        }
        const double drop_limit = 2.0 * trace.v_max * trace.w.front();
        if (o.json) {
            Json r;
            if (seed) r["seed"] = *seed;
            else r["algorithm"] = o.algorithm;
            r["queries"] = alg.queries();
            r["work"] = alg.work;
            r["W"] = trace.w;
            r["drop_limit"] = drop_limit;
            r["drop_bound"] = drops_ok;
            if (fb) {
                r["eps"] = *o.eps;
                r["final_limit"] = fb->limit;
                r["final_bound"] = fb->holds;
                auto& m = r["precondition_misses"] = Json::array();
                for (Index x : fb->misses) m.push_back(bits(scheme.arity(), x));
            }
            runs.push_back(std::move(r));
            continue;
        }
        if (seed) {
            out << "algorithm: random, seed " << *seed << ", queries " << alg.queries() << ", work " << alg.work
                << "\n";
        } else {
            out << "algorithm: " << o.algorithm << ", queries " << alg.queries() << ", work " << alg.work << "\n";
        }
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(9);
        for (std::size_t t = 0; t < trace.w.size(); ++t) line << "  W_" << t << " = " << trace.w[t] << "\n";
        line << "drop bound (2 v_max W_0 = " << drop_limit << "): " << (drops_ok ? "holds" : "violated") << "\n";
        if (fb) {
            if (!fb->precondition()) {
                line << "precondition: error above eps = " << *o.eps << " on " << fb->misses.size() << " input(s):";
                for (Index x : fb->misses) line << " " << bits(scheme.arity(), x);
                line << "\n";
            } else {
                line << "final bound (W_T = " << fb->w_final << " <= " << fb->limit
                     << "): " << (fb->holds ? "holds" : "violated") << "\n";
                line << "query lower bound: T >= " << query_lower_bound(*o.eps, trace.v_max) << "\n";
            }
        }
        out << line.str();
    }
    if (o.json) out << runs.dump(2) << "\n";
    return ok ? kOk : kFailed;
}

// iterate

struct IterateOptions {
    std::string base;
    unsigned depth = 2;
    std::string output;
    bool json = false;
};

int cmd_iterate(const IterateOptions& o, std::ostream& out) {
    const BooleanFunction f = resolve_function(o.base);
    if (!o.output.empty()) save_truth_table(iterate(f, o.depth), o.output);
    const IteratedCertificate c = iterated_certificates(f, o.depth);
    if (o.json) {
        Json j;
        j["depth"] = c.depth;
        j["materialized"] = c.materialized;
        j["s_min"] = c.sensitivity_min;
        j["s_max"] = c.sensitivity_max;
        j["bs_lower"] = c.block_sensitivity_lower;
        j["d_depth_upper"] = c.decision_depth_upper;
        j["bs_equals_d_depth"] = c.block_sensitivity_certified;
        if (c.degree) j["deg"] = *c.degree;
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << "depth: " << c.depth << "\n";
    out << "materialized: " << yes_no(c.materialized) << "\n";
    if (c.sensitivity_min == c.sensitivity_max) {
        out << "s = " << c.sensitivity_min << " at every input\n";
    } else {
        out << "s in [" << c.sensitivity_min << ", " << c.sensitivity_max << "]\n";
    }
    if (c.block_sensitivity_certified) {
        out << "bs = D = " << c.decision_depth_upper << "\n";
    } else {
        out << "bs >= " << c.block_sensitivity_lower << ", D <= " << c.decision_depth_upper << "\n";
    }
    if (c.degree) out << "deg = " << *c.degree << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Boolean function query complexity workbench", "advwb"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (default: ADVWB_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    MeasuresOptions mo;
    auto* measures = app.add_subcommand("measures", "complexity measures of a function");
    measures->add_option("function", mo.function, "truth-table file or built-in name")->required();
    measures->add_option("--eps", mo.eps, "approximation error as a rational");
    measures->add_option("--skip", mo.skip, "measures to leave out: deg, approx_deg, s, bs, C, D")->delimiter(',');
    measures->add_option("--scheme", mo.scheme, "scheme file or built-in whose bound to report");
    measures->add_option("--cert-arity", mo.cert_arity, "arity cap for certificate complexity")
        ->check(CLI::Range(1U, kMaxCertificateArity));
    measures->add_flag("--json", mo.json);

    VerifyOptions vo;
    auto* verify_cmd = app.add_subcommand("verify-scheme", "verify a weight scheme and report its loads");
    verify_cmd->add_option("scheme", vo.scheme, "scheme file or built-in name")->required();
    verify_cmd->add_flag("--json", vo.json);

    ComposeOptions co;
    auto* compose = app.add_subcommand("compose", "compose a built-in scheme with itself");
    compose->add_option("--base", co.base, "f, g or h")->required()->check(CLI::IsMember({"f", "g", "h"}));
    compose->add_option("--depth", co.depth, "number of levels")->check(CLI::Range(1U, 64U));
    compose->add_option("--export", co.export_path, "write the scheme as JSON");
    compose->add_flag("--no-verify", co.skip_verify, "skip exhaustive verification");
    compose->add_flag("--json", co.json);

    MatchingsOptions mao;
    auto* matchings = app.add_subcommand("matchings", "build and check the two sets of matchings");
    matchings->add_option("--depth", mao.depth)->check(CLI::Range(1U, kMaxMatchingDepth));
    matchings->add_option("--set", mao.set, "1 or 2 (default both)")->check(CLI::Range(1, 2));
    matchings->add_option("--export", mao.export_k, "write matching k (1-based) as index pairs");
    matchings->add_option("--output", mao.output, "file for --export (default stdout)");
    matchings->add_flag("--json", mao.json);

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "trace the progress measure of query algorithms");
    simulate->add_option("--scheme", so.scheme, "scheme file or built-in name")->required();
    auto* alg_opt = simulate->add_option("--algorithm", so.algorithm, "algorithm JSON file");
    simulate->add_option("--seed", so.seed, "seed of the first random algorithm")->excludes(alg_opt);
    simulate->add_option("--trials", so.trials, "number of random algorithms")->excludes(alg_opt)
        ->check(CLI::PositiveNumber);
    simulate->add_option("--queries", so.queries, "queries per random algorithm")->excludes(alg_opt);
    simulate->add_option("--work", so.work, "work dimension of random algorithms")->excludes(alg_opt)
        ->check(CLI::PositiveNumber);
    simulate->add_option("--eps", so.eps, "also check the final bound at this error")->check(CLI::Range(0.0, 0.5));
    simulate->add_flag("--json", so.json);

    IterateOptions io;
    auto* iterate_cmd = app.add_subcommand("iterate", "certified measures of an iterated function");
    iterate_cmd->add_option("base", io.base, "truth-table file or built-in name")->required();
    iterate_cmd->add_option("--depth", io.depth)->check(CLI::Range(1U, 8U));
    iterate_cmd->add_option("--output", io.output, "write the iterated truth table");
    iterate_cmd->add_flag("--json", io.json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    if (threads != 0) set_thread_count(threads);

    try {
        if (*measures) return cmd_measures(mo, out);
        if (*verify_cmd) return cmd_verify(vo, out);
        if (*compose) return cmd_compose(co, out);
        if (*matchings) return cmd_matchings(mao, out);
        if (*simulate) return cmd_simulate(so, out);
        if (*iterate_cmd) return cmd_iterate(io, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}

}  // namespace advwb::cli
