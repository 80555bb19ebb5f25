#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "advwb/adversary.hpp"

namespace advwb {

using Matrix = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

inline constexpr double kUnitaryTolerance = 1e-9;
inline constexpr std::size_t kMaxSimulationDimension = 64;
inline constexpr std::size_t kMaxSimulatedInputs = 4096;

/// Decides whether basis state |i, z> reads as output 1.
using OutputSelector = std::function<bool(unsigned query_label, unsigned work_label)>;

/// The lowest bit of the work label.
bool low_work_bit(unsigned query_label, unsigned work_label);

/// Basis |i, z> with i in [0, N] and z in [0, work), index i * work + z.
/// Runs U_0, O_x, U_1, ..., O_x, U_T from |0, 0>.
struct QueryAlgorithm {
    unsigned n = 0;
    unsigned work = 2;
    std::vector<Matrix> unitaries;  // U_0 .. U_T
    OutputSelector output = low_work_bit;

    std::size_t dimension() const { return static_cast<std::size_t>(n + 1) * work; }
    unsigned queries() const { return unitaries.empty() ? 0 : static_cast<unsigned>(unitaries.size() - 1); }
};

/// Throws CapacityError past the dimension cap and std::invalid_argument on
/// a wrong shape or a matrix that is not unitary within kUnitaryTolerance.
void validate(const QueryAlgorithm& alg);

/// Multiplies the amplitude of |i, z> by (-1)^(x_i) for i >= 1.
State apply_oracle(const QueryAlgorithm& alg, const State& state, Index x);

struct RunResult {
    State state;
    double acceptance = 0.0;
};

RunResult run(const QueryAlgorithm& alg, Index x);

struct ProgressTrace {
    std::string scheme;
    std::vector<double> w;      // W_0 .. W_T
    std::vector<double> drops;  // |W_t - W_(t-1)|, t = 1..T
    double v_max = 0.0;
};

/// W_t = sum over pairs of w(x, y) |<psi_x^t | psi_y^t>|, psi^t being the
/// state after t queries.
ProgressTrace progress_trace(const QueryAlgorithm& alg, const WeightScheme& scheme);

/// Every drop is at most 2 v_max W_0 (+1e-9). Meaningful for balanced valid
/// schemes.
bool check_drop_bound(const ProgressTrace& trace);

struct FinalBoundCheck {
    bool holds = false;        // W_T <= limit + 1e-9, given the precondition
    double w_final = 0.0;
    double limit = 0.0;        // 2 sqrt(eps (1 - eps)) W_0
    std::vector<Index> misses; // inputs of A and B answered with error above eps
    bool precondition() const { return misses.empty(); }
};

FinalBoundCheck check_final_bound(const QueryAlgorithm& alg, const WeightScheme& scheme, double eps);

/// Fewest queries any algorithm with error eps can make against a scheme
/// with maximum load v_max: (1 - 2 sqrt(eps (1 - eps))) / (2 v_max).
double query_lower_bound(double eps, double v_max);

/// Haar-style random unitary: QR of a complex Gaussian matrix with the
/// diagonal phases of R removed.
Matrix random_unitary(std::size_t dim, std::uint64_t seed);
QueryAlgorithm random_algorithm(unsigned n, unsigned work, unsigned queries, std::uint64_t seed);
QueryAlgorithm identity_algorithm(unsigned n, unsigned work, unsigned queries);
/// One query on two variables, accepting with probability x_1 xor x_2.
QueryAlgorithm parity2_algorithm();

/// {"N": n, "work": w, "unitaries": [[[[re, im], ...], ...], ...]} with
/// each matrix as a list of rows; a flat row-major list is also accepted.
std::string format_algorithm_json(const QueryAlgorithm& alg);
QueryAlgorithm parse_algorithm_json(std::string_view text);
QueryAlgorithm load_algorithm(const std::filesystem::path& path);
void save_algorithm(const QueryAlgorithm& alg, const std::filesystem::path& path);

}  // namespace advwb
