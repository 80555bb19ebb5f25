#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "advwb/boolfn.hpp"
#include "advwb/rational.hpp"

namespace advwb {

/// Arity caps for the exhaustive searches.
inline constexpr unsigned kMaxApproxDegreeArity = 12;
inline constexpr unsigned kExactLpArity = 8;
inline constexpr unsigned kMaxBlockSensitivityArity = 12;
inline constexpr unsigned kMaxDecisionTreeArity = 12;
inline constexpr unsigned kDefaultCertificateArity = 8;
inline constexpr unsigned kMaxCertificateArity = 14;

/// Multilinear polynomial with integer coefficients. Coefficients are indexed
/// by variable subsets encoded as masks in the same bit layout as
/// assignments, so the monomial of S evaluates to 1 at x iff S is a subset
/// of x.
class MultilinearPolynomial {
public:
    MultilinearPolynomial(unsigned arity, std::vector<std::int64_t> coefficients);

    unsigned arity() const { return arity_; }
    std::int64_t coefficient(Index subset) const { return coefficients_.at(subset); }
    std::int64_t coefficient(std::span<const unsigned> vars) const { return coefficient(var_mask(arity_, vars)); }
    std::span<const std::int64_t> coefficients() const { return coefficients_; }

    /// Largest monomial size with a nonzero coefficient; 0 for the zero polynomial.
    int degree() const;
    std::int64_t evaluate(Index x) const;
    /// Terms by increasing degree, e.g. "x1+x2-x1x2".
    std::string to_string() const;

private:
    unsigned arity_;
    std::vector<std::int64_t> coefficients_;
};

/// Unique representing polynomial, via the Moebius transform of the table.
MultilinearPolynomial exact_polynomial(const BooleanFunction& f);
int degree(const BooleanFunction& f);

struct ApproxDegreeResult {
    int degree = 0;
    Rational eps;
    /// Best uniform error reached at `degree`.
    double error = 0.0;
    /// Witness coefficients indexed by subset mask; within eps of f everywhere.
    std::vector<double> witness;
    /// Whether the LP (and witness check) ran in exact rational arithmetic.
    bool exact_arithmetic = false;
};

/// Smallest k such that some degree-k polynomial p has |p(x) - f(x)| <= eps
/// on every input. eps must lie in [0, 1/2); eps = 0 gives the exact degree.
ApproxDegreeResult approx_degree(const BooleanFunction& f, Rational eps = Rational(1, 3));

int sensitivity_at(const BooleanFunction& f, Index x);
int sensitivity(const BooleanFunction& f);

/// Sensitive blocks at x that contain no smaller sensitive block, as masks.
std::vector<Index> minimal_sensitive_blocks(const BooleanFunction& f, Index x);
/// A maximum family of pairwise disjoint sensitive blocks at x.
std::vector<Index> max_disjoint_sensitive_blocks(const BooleanFunction& f, Index x);
int block_sensitivity_at(const BooleanFunction& f, Index x);
int block_sensitivity(const BooleanFunction& f);

struct CertificateComplexity {
    int c0 = 0;
    int c1 = 0;
};

/// Minimum number of variables of x whose values force f to f(x).
int certificate_size_at(const BooleanFunction& f, Index x, unsigned max_arity = kDefaultCertificateArity);
/// C_0 / C_1; a constant function reports 0 for the side it never takes.
CertificateComplexity certificate_complexity(const BooleanFunction& f,
                                             unsigned max_arity = kDefaultCertificateArity);

/// Deterministic decision tree over 1-based variables.
class DecisionTree {
public:
    struct Node {
        unsigned var = 0;  // 0 for a leaf
        int value = 0;     // leaf output
        int child[2] = {-1, -1};
    };

    static DecisionTree leaf(int value);

    unsigned arity() const { return arity_; }
    int root() const { return root_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int depth() const;
    /// Output and number of queries made on input x.
    std::pair<int, int> run(Index x) const;

    /// Replace each query of variable j in `outer` by a copy of `inner` run
    /// on block j, giving a tree for the composed function.
    static DecisionTree compose(const DecisionTree& outer, const DecisionTree& inner, unsigned blocks,
                                unsigned block_arity);

private:
    friend class DecisionTreeBuilder;
    unsigned arity_ = 0;
    int root_ = -1;
    std::vector<Node> nodes_;
};

struct DetComplexityResult {
    int depth = 0;
    DecisionTree tree;
};

/// D(f) by minimax over all restrictions, with an optimal tree.
DetComplexityResult det_complexity(const BooleanFunction& f);

/// Certified s, bs and D for the d-fold iterate of a base function.
struct IteratedCertificate {
    unsigned depth = 0;
    bool materialized = false;  // per-input verification over all 2^(n^d) inputs
    int sensitivity_min = 0;    // over all inputs of f^d
    int sensitivity_max = 0;
    int block_sensitivity_lower = 0;  // disjoint sensitive blocks built at every input
    int decision_depth_upper = 0;     // depth of the composed decision tree
    bool block_sensitivity_certified = false;  // lower == upper, so bs = D
    std::optional<int> degree;                 // via Moebius transform when materialized
};

IteratedCertificate iterated_certificates(const BooleanFunction& base, unsigned depth);

/// Disjoint sensitive blocks of f^d at x, composed from the base function's
/// maximum families. `x` indexes an input of arity base.arity()^depth.
std::vector<std::uint64_t> composed_blocks(const BooleanFunction& base, unsigned depth, std::uint64_t x);

/// Which measures to compute in a ComplexityReport.
struct MeasureSelection {
    bool degree = true;
    bool approx_degree = true;
    bool sensitivity = true;
    bool block_sensitivity = true;
    bool certificates = true;
    bool decision_tree = true;
    unsigned certificate_arity = kDefaultCertificateArity;
};

struct ComplexityReport {
    unsigned arity = 0;
    Rational eps = Rational(1, 3);
    std::optional<int> deg;
    std::optional<int> approx_deg;
    std::optional<int> s;
    std::optional<int> bs;
    std::optional<int> c0;
    std::optional<int> c1;
    std::optional<int> d_depth;
    std::optional<Rational> qe_lower;       // deg / 2
    std::optional<Rational> q2_lower_poly;  // approx_deg / 2
    std::optional<std::string> adversary_bound;
};

/// Computes the selected measures. Throws CapacityError when a selected
/// measure's arity cap is exceeded; deselect it to skip.
ComplexityReport measure_all(const BooleanFunction& f, Rational eps = Rational(1, 3),
                             const MeasureSelection& which = {});

std::string format_report_text(const ComplexityReport& r);
std::string format_report_json(const ComplexityReport& r);

}  // namespace advwb
