#include "advwb/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "advwb/parallel.hpp"

namespace advwb {

namespace {

constexpr double kSlack = 1e-9;

void check_dimension(const QueryAlgorithm& alg) {
    if (alg.n == 0 || alg.work == 0) throw std::invalid_argument("algorithm needs N >= 1 and work >= 1");
    if (alg.dimension() > kMaxSimulationDimension) {
        throw CapacityError("simulation dimension " + std::to_string(alg.dimension()) + " exceeds " +
                            std::to_string(kMaxSimulationDimension));
    }
}

// Diagonal of O_x.
Eigen::VectorXd oracle_signs(const QueryAlgorithm& alg, Index x) {
    Eigen::VectorXd s = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(alg.dimension()));
    for (unsigned i = 1; i <= alg.n; ++i) {
        if ((x & var_bit(alg.n, i)) == 0) continue;
        for (unsigned z = 0; z < alg.work; ++z) s[i * alg.work + z] = -1.0;
    }
    return s;
}

State initial_state(const QueryAlgorithm& alg) {
    State s = State::Zero(static_cast<Eigen::Index>(alg.dimension()));
    s[0] = 1.0;
    return s;
}

double acceptance(const QueryAlgorithm& alg, const State& s) {
    double p = 0.0;
    for (unsigned i = 0; i <= alg.n; ++i) {
        for (unsigned z = 0; z < alg.work; ++z) {
            if (alg.output(i, z)) p += std::norm(s[i * alg.work + z]);
        }
    }
    return p;
}

Matrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix g(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) g(r, c) = {normal(rng), normal(rng)};
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < d; ++j) {
        const auto diag = r(j, j);
        if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
    }
    return q;
}

std::complex<double> entry_from_json(const nlohmann::json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw std::invalid_argument("matrix entries must be [re, im] pairs of numbers");
    }
    return {e[0].get<double>(), e[1].get<double>()};
}

Matrix matrix_from_json(const nlohmann::json& j, std::size_t dim, std::size_t t) {
    const auto d = static_cast<Eigen::Index>(dim);
    const std::string where = "unitary " + std::to_string(t);
    if (!j.is_array()) throw std::invalid_argument(where + " must be an array");
    Matrix m(d, d);
    if (j.size() == dim * dim) {
        for (std::size_t k = 0; k < dim * dim; ++k) {
            m(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) = entry_from_json(j[k]);
        }
    } else if (j.size() == dim) {
        for (std::size_t r = 0; r < dim; ++r) {
            if (!j[r].is_array() || j[r].size() != dim) throw std::invalid_argument(where + ": row length differs from " + std::to_string(dim));
            for (std::size_t c = 0; c < dim; ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entry_from_json(j[r][c]);
            }
        }
    } else {
        throw std::invalid_argument(where + " must have " + std::to_string(dim) + " rows");
    }
    return m;
}

}  // namespace

bool low_work_bit(unsigned, unsigned work_label) {
    return (work_label & 1U) != 0;
}

void validate(const QueryAlgorithm& alg) {
    check_dimension(alg);
    if (alg.unitaries.empty()) throw std::invalid_argument("algorithm has no unitaries");
    const auto d = static_cast<Eigen::Index>(alg.dimension());
    const Matrix id = Matrix::Identity(d, d);
    for (std::size_t t = 0; t < alg.unitaries.size(); ++t) {
        const Matrix& u = alg.unitaries[t];
        if (u.rows() != d || u.cols() != d) {
            throw std::invalid_argument("unitary " + std::to_string(t) + " is not " + std::to_string(d) + "x" +
                                        std::to_string(d));
        }
        const double err = (u.adjoint() * u - id).cwiseAbs().maxCoeff();
        if (!(err <= kUnitaryTolerance)) {
            std::ostringstream msg;
            msg << "unitary " << t << " is not unitary (max |U*U - I| = " << err << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

State apply_oracle(const QueryAlgorithm& alg, const State& state, Index x) {
    if (static_cast<std::size_t>(state.size()) != alg.dimension()) {
        throw std::invalid_argument("state dimension " + std::to_string(state.size()) + " differs from " +
                                    std::to_string(alg.dimension()));
    }
    return oracle_signs(alg, x).cast<std::complex<double>>().cwiseProduct(state);
}

RunResult run(const QueryAlgorithm& alg, Index x) {
    validate(alg);
    State s = alg.unitaries[0] * initial_state(alg);
    for (std::size_t t = 1; t < alg.unitaries.size(); ++t) s = alg.unitaries[t] * apply_oracle(alg, s, x);
    RunResult out{s, 0.0};
    out.acceptance = acceptance(alg, s);
    return out;
}

ProgressTrace progress_trace(const QueryAlgorithm& alg, const WeightScheme& scheme) {
    validate(alg);
    if (scheme.arity() != alg.n) {
        throw std::invalid_argument("scheme arity " + std::to_string(scheme.arity()) + " differs from N = " +
                                    std::to_string(alg.n));
    }
    std::vector<Index> inputs(scheme.a().begin(), scheme.a().end());
    inputs.insert(inputs.end(), scheme.b().begin(), scheme.b().end());
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    if (inputs.size() > kMaxSimulatedInputs) {
        throw CapacityError("|A u B| = " + std::to_string(inputs.size()) + " exceeds " +
                            std::to_string(kMaxSimulatedInputs));
    }
    auto column = [&](Index v) {
        return static_cast<Eigen::Index>(std::lower_bound(inputs.begin(), inputs.end(), v) - inputs.begin());
    };
    struct WeightedPair {
        Eigen::Index x;
        Eigen::Index y;
        double w;
    };
    std::vector<WeightedPair> pairs;
    pairs.reserve(scheme.pairs().size());
    for (const auto& p : scheme.pairs()) pairs.push_back({column(p.x), column(p.y), p.w.to_double()});

    const auto d = static_cast<Eigen::Index>(alg.dimension());
    const auto count = static_cast<Eigen::Index>(inputs.size());
    Matrix states = (alg.unitaries[0] * initial_state(alg)).replicate(1, count);
    Eigen::MatrixXd signs(d, count);
    for (Eigen::Index c = 0; c < count; ++c) signs.col(c) = oracle_signs(alg, inputs[static_cast<std::size_t>(c)]);

    auto progress = [&] {
        double sum = 0.0;
        for (const auto& p : pairs) sum += p.w * std::abs(states.col(p.x).dot(states.col(p.y)));
        return sum;
    };

    ProgressTrace trace;
    trace.scheme = scheme.name();
    trace.v_max = loads(scheme).v_max.value();
    trace.w.push_back(progress());
    for (std::size_t t = 1; t < alg.unitaries.size(); ++t) {
        const Matrix& u = alg.unitaries[t];
        parallel_chunks(static_cast<std::size_t>(count), [&](std::size_t lo, std::size_t hi) {
            const auto b = static_cast<Eigen::Index>(lo);
            const auto n = static_cast<Eigen::Index>(hi - lo);
            Matrix queried = states.middleCols(b, n).cwiseProduct(signs.middleCols(b, n).cast<std::complex<double>>());
            states.middleCols(b, n) = u * queried;
        });
        trace.w.push_back(progress());
        trace.drops.push_back(std::abs(trace.w[t] - trace.w[t - 1]));
    }
    return trace;
}

bool check_drop_bound(const ProgressTrace& trace) {
    if (trace.w.empty()) return true;
    const double limit = 2.0 * trace.v_max * trace.w[0] + kSlack;
    return std::all_of(trace.drops.begin(), trace.drops.end(), [&](double d) { return d <= limit; });
}

FinalBoundCheck check_final_bound(const QueryAlgorithm& alg, const WeightScheme& scheme, double eps) {
    if (!(eps >= 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in [0, 1/2]");
    FinalBoundCheck out;
    std::vector<Index> inputs(scheme.a().begin(), scheme.a().end());
    inputs.insert(inputs.end(), scheme.b().begin(), scheme.b().end());
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    const ProgressTrace trace = progress_trace(alg, scheme);
    for (Index x : inputs) {
        const double p = run(alg, x).acceptance;
        const double err = scheme.function()(x) ? 1.0 - p : p;
        if (err > eps + kSlack) out.misses.push_back(x);
    }
    out.w_final = trace.w.back();
    out.limit = 2.0 * std::sqrt(eps * (1.0 - eps)) * trace.w.front();
    out.holds = out.precondition() && out.w_final <= out.limit + kSlack;
    return out;
}

double query_lower_bound(double eps, double v_max) {
    if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
    return (1.0 - 2.0 * std::sqrt(eps * (1.0 - eps))) / (2.0 * v_max);
}

Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_unitary(dim, rng);
}

QueryAlgorithm random_algorithm(unsigned n, unsigned work, unsigned queries, std::uint64_t seed) {
    QueryAlgorithm alg{n, work, {}};
    check_dimension(alg);
    std::mt19937_64 rng(seed);
    for (unsigned t = 0; t <= queries; ++t) alg.unitaries.push_back(random_unitary(alg.dimension(), rng));
    return alg;
}

QueryAlgorithm identity_algorithm(unsigned n, unsigned work, unsigned queries) {
    QueryAlgorithm alg{n, work, {}};
    check_dimension(alg);
    const auto d = static_cast<Eigen::Index>(alg.dimension());
    alg.unitaries.assign(queries + 1, Matrix::Identity(d, d));
    return alg;
}

QueryAlgorithm parity2_algorithm() {
    QueryAlgorithm alg{2, 2, {}};
    const double h = 1.0 / std::sqrt(2.0);
    // Labels i * 2 + z.
    constexpr int k00 = 0, k01 = 1, k10 = 2, k11 = 3, k20 = 4, k21 = 5;
    Matrix u0 = Matrix::Zero(6, 6);
    u0(k10, k00) = h;
    u0(k20, k00) = h;
    u0(k10, k10) = h;
    u0(k20, k10) = -h;
    u0(k00, k20) = 1.0;
    u0(k01, k01) = 1.0;
    u0(k11, k11) = 1.0;
    u0(k21, k21) = 1.0;
    Matrix u1 = Matrix::Zero(6, 6);
    u1(k00, k10) = h;
    u1(k00, k20) = h;
    u1(k01, k10) = h;
    u1(k01, k20) = -h;
    u1(k10, k00) = 1.0;
    u1(k20, k01) = 1.0;
    u1(k11, k11) = 1.0;
    u1(k21, k21) = 1.0;
    alg.unitaries = {u0, u1};
    return alg;
}

std::string format_algorithm_json(const QueryAlgorithm& alg) {
    nlohmann::ordered_json j;
    j["N"] = alg.n;
    j["work"] = alg.work;
    auto& us = j["unitaries"] = nlohmann::ordered_json::array();
    for (const Matrix& u : alg.unitaries) {
        auto rows = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            auto row = nlohmann::ordered_json::array();
            for (Eigen::Index c = 0; c < u.cols(); ++c) row.push_back({u(r, c).real(), u(r, c).imag()});
            rows.push_back(std::move(row));
        }
        us.push_back(std::move(rows));
    }
    return j.dump() + "\n";
}

QueryAlgorithm parse_algorithm_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("algorithm file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("N") || !j.contains("unitaries")) {
        throw std::invalid_argument("algorithm file needs fields 'N' and 'unitaries'");
    }
    if (!j["N"].is_number_unsigned()) throw std::invalid_argument("field 'N' must be a positive integer");
    QueryAlgorithm alg{j["N"].get<unsigned>(), 2, {}};
    if (j.contains("work")) {
        if (!j["work"].is_number_unsigned()) throw std::invalid_argument("field 'work' must be a positive integer");
        alg.work = j["work"].get<unsigned>();
    }
    check_dimension(alg);
    if (!j["unitaries"].is_array()) throw std::invalid_argument("field 'unitaries' must be an array");
    for (std::size_t t = 0; t < j["unitaries"].size(); ++t) {
        alg.unitaries.push_back(matrix_from_json(j["unitaries"][t], alg.dimension(), t));
    }
    validate(alg);
    return alg;
}

QueryAlgorithm load_algorithm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_algorithm_json(buf.str());
}

void save_algorithm(const QueryAlgorithm& alg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_algorithm_json(alg);
}

}  // namespace advwb
