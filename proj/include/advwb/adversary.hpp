#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advwb/boolfn.hpp"
#include "advwb/exact_weight.hpp"

namespace advwb {

/// Directional weights of one pair (x, y) at one differing variable i:
/// forward = w'(x, y, i), backward = w'(y, x, i).
struct Directional {
    ExactWeight forward;
    ExactWeight backward;
    friend bool operator==(const Directional&, const Directional&) = default;
};

class WeightScheme;

/// Supplies the directional weights of a scheme. Implementations either
/// store them or derive them from other schemes on demand.
class DirectionalSource {
public:
    virtual ~DirectionalSource() = default;
    /// Weights of pair `pair` at each variable where x and y differ,
    /// ascending by variable. `out` is overwritten.
    virtual void fill(const WeightScheme& scheme, std::size_t pair, std::vector<Directional>& out) const = 0;
};

/// Relation R between zero-inputs A and one-inputs B, with pair weights w
/// and directional weights w'. Immutable; copies share storage.
///
/// Pairs are kept sorted by (x, y); a pair may occur only once.
class WeightScheme {
public:
    struct Pair {
        Index x;
        Index y;
        ExactWeight w;
    };

    /// Explicit directional weights, one vector per pair (in the order
    /// given) listing the differing variables ascending.
    WeightScheme(BooleanFunction f, std::vector<Index> a, std::vector<Index> b, std::vector<Pair> pairs,
                 std::vector<std::vector<Directional>> directional);
    /// Directional weights from a source; `pairs` must already be sorted.
    WeightScheme(BooleanFunction f, std::vector<Index> a, std::vector<Index> b, std::vector<Pair> pairs,
                 std::shared_ptr<const DirectionalSource> source);

    const BooleanFunction& function() const { return core_->f; }
    unsigned arity() const { return core_->f.arity(); }
    std::span<const Index> a() const { return core_->a; }
    std::span<const Index> b() const { return core_->b; }
    std::span<const Pair> pairs() const { return core_->pairs; }
    /// Pair positions ordered by (y, x).
    std::span<const std::uint32_t> pairs_by_y() const { return core_->by_y; }

    std::optional<std::size_t> find_pair(Index x, Index y) const;
    /// [begin, end) of the pairs whose zero-input is x.
    std::pair<std::size_t, std::size_t> pairs_of(Index x) const;
    std::optional<std::size_t> a_position(Index x) const;
    std::optional<std::size_t> b_position(Index y) const;

    void directional(std::size_t pair, std::vector<Directional>& out) const { source_->fill(*this, pair, out); }
    std::vector<Directional> directional(std::size_t pair) const;
    /// Weights at one variable; throws if x and y agree there.
    Directional directional(std::size_t pair, unsigned var) const;

    /// Every forward weight times `forward`, every backward weight times `backward`.
    WeightScheme scaled(const ExactWeight& forward, const ExactWeight& backward) const;
    /// Copy with the weights of one (pair, variable) replaced.
    WeightScheme with_directional(std::size_t pair, unsigned var, const Directional& value) const;

    const std::string& name() const { return name_; }
    WeightScheme& set_name(std::string name) {
        name_ = std::move(name);
        return *this;
    }

private:
    struct Core {
        BooleanFunction f;
        std::vector<Index> a;
        std::vector<Index> b;
        std::vector<Pair> pairs;
        std::vector<std::uint32_t> by_y;
    };
    static std::shared_ptr<const Core> make_core(BooleanFunction f, std::vector<Index> a, std::vector<Index> b,
                                                 std::vector<Pair> pairs);

    std::shared_ptr<const Core> core_;
    std::shared_ptr<const DirectionalSource> source_;
    std::string name_;
};

/// Variables at which two inputs differ, ascending.
std::vector<unsigned> differing_vars(unsigned arity, Index x, Index y);

struct Violation {
    enum class Kind { wrong_side, nonpositive, constraint };
    Kind kind;
    Index x = 0;
    Index y = 0;
    unsigned var = 0;  // 0 when not tied to a variable
    std::string detail;
};

struct VerifyResult {
    bool valid = true;
    std::size_t total = 0;              // all violations found
    std::vector<Violation> violations;  // the first kMaxViolations of them
};

inline constexpr std::size_t kMaxViolations = 100;

/// Checks A and B against the preimages, positivity of every weight, and
/// w'(x,y,i) * w'(y,x,i) >= w(x,y)^2 at every pair and differing variable.
VerifyResult verify(const WeightScheme& scheme);

/// Per-side weights and loads. wt[k] belongs to the k-th element of the
/// side; v[k * arity + i - 1] is the load of variable i there.
struct SideLoads {
    std::vector<Quantity> wt;
    std::vector<Quantity> v;
    /// max over elements with partners and all variables of v / wt.
    Quantity max_ratio;
    Quantity wt_min, wt_max;
    Quantity v_min, v_max;
};

struct LoadReport {
    unsigned arity = 0;
    SideLoads a;
    SideLoads b;
    Quantity v_a;
    Quantity v_b;
    Quantity v_max;  // sqrt(v_a * v_b)
    Quantity bound;  // 1 / v_max
};

LoadReport loads(const WeightScheme& scheme);

/// Scales directions so that both sides reach the same maximum load. The
/// factor sqrt(v_B / v_A) must be representable as q*sqrt(r).
WeightScheme balance(const WeightScheme& scheme);
WeightScheme balance(const WeightScheme& scheme, const LoadReport& report);
bool is_balanced(const LoadReport& report);

/// Unweighted relation parameters: every zero-input has at least m partners,
/// every one-input at least m2; at most l partners of a zero-input differ at
/// any one variable, at most l2 for a one-input.
struct RelationBound {
    std::size_t m = 0;
    std::size_t m2 = 0;
    std::size_t l = 0;
    std::size_t l2 = 0;
    Quantity bound;  // sqrt(m * m2 / (l * l2))
};

using Relation = std::vector<std::pair<Index, Index>>;

RelationBound relation_bound(const BooleanFunction& f, std::span<const Index> a, std::span<const Index> b,
                             const Relation& r);
/// All weights 1 on the given relation.
WeightScheme unit_scheme(const BooleanFunction& f, std::vector<Index> a, std::vector<Index> b, const Relation& r);

/// Built-in schemes: lemma3_f (four partners per input of ambainis_f),
/// lemma6_g (nae_g, R = A x B), lemma7_h (kushilevitz_h).
///
/// lemma7_h reaches maximum load 2/sqrt(39) once balanced.
WeightScheme builtin_scheme(std::string_view name);

/// Sensitive and insensitive variables of f at x.
std::pair<std::vector<unsigned>, std::vector<unsigned>> sensitive_partition(const BooleanFunction& f, Index x);

/// Scheme file (JSON). The function is embedded inline as
/// {"arity": N, "table": "..."}; on input it may also be a path to a
/// truth-table file, resolved against `base_dir`.
std::string format_scheme_json(const WeightScheme& scheme);
void write_scheme_json(const WeightScheme& scheme, std::ostream& out);
WeightScheme parse_scheme_json(std::string_view text, const std::filesystem::path& base_dir = {});
WeightScheme load_scheme(const std::filesystem::path& path);
void save_scheme(const WeightScheme& scheme, const std::filesystem::path& path);

}  // namespace advwb
