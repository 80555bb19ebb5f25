#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advwb {

/// Position of an assignment in a truth table.
using Index = std::uint32_t;

/// Largest arity for which truth tables are materialized.
inline constexpr unsigned kMaxArity = 24;

/// A size or arity cap was exceeded.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Malformed input text; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Variable j (1-based) of an arity-N assignment lives at bit N - j of its
// index, so x_1 is the most significant bit and the blocks x^1, x^2, ... of
// a composed input are contiguous bit slices.
constexpr Index var_bit(unsigned arity, unsigned var) {
    return Index{1} << (arity - var);
}

/// Mask of a set of 1-based variable positions.
Index var_mask(unsigned arity, std::span<const unsigned> vars);
/// 1-based variable positions set in a mask, ascending.
std::vector<unsigned> mask_vars(unsigned arity, Index mask);

/// Value of block j (1-based) when an index is cut into `blocks` slices of
/// `block_arity` bits each.
constexpr Index block_value(Index x, unsigned j, unsigned blocks, unsigned block_arity) {
    return (x >> (block_arity * (blocks - j))) & ((Index{1} << block_arity) - 1);
}

/// Inverse of block_value: place `value` into block j.
constexpr Index with_block(Index x, unsigned j, unsigned blocks, unsigned block_arity, Index value) {
    unsigned shift = block_arity * (blocks - j);
    Index mask = ((Index{1} << block_arity) - 1) << shift;
    return (x & ~mask) | (value << shift);
}

/// Input x = (x_1, ..., x_N) to an N-variable function.
class Assignment {
public:
    Assignment(unsigned arity, Index bits);
    /// From a string of '0'/'1' characters, x_1 first.
    static Assignment parse(std::string_view bits);

    unsigned arity() const { return arity_; }
    Index index() const { return bits_; }
    /// Value of x_var, var in [1, arity].
    int bit(unsigned var) const;
    std::string to_string() const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    unsigned arity_;
    Index bits_;
};

/// x^(S): x with every variable in `vars` negated.
Assignment flip_block(const Assignment& x, std::span<const unsigned> vars);

/// Total Boolean function stored as an explicit truth table. Immutable; copies
/// share the table.
class BooleanFunction {
public:
    BooleanFunction(unsigned arity, std::vector<std::uint8_t> table);

    template <typename Predicate>
    static BooleanFunction from_predicate(unsigned arity, Predicate&& pred) {
        check_arity(arity);
        std::vector<std::uint8_t> table(std::size_t{1} << arity);
        for (std::size_t k = 0; k < table.size(); ++k) table[k] = pred(static_cast<Index>(k)) ? 1 : 0;
        return BooleanFunction(arity, std::move(table));
    }

    unsigned arity() const { return arity_; }
    std::size_t size() const { return table_->size(); }
    int operator()(Index x) const { return (*table_)[x]; }
    /// Checked evaluation.
    int evaluate(const Assignment& x) const;
    std::span<const std::uint8_t> table() const { return *table_; }

    bool is_constant() const;
    /// All inputs with f(x) = value, ascending.
    std::vector<Index> preimage(int value) const;

    friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
        return a.arity_ == b.arity_ && *a.table_ == *b.table_;
    }

    static void check_arity(unsigned arity);

private:
    unsigned arity_;
    std::shared_ptr<const std::vector<std::uint8_t>> table_;
};

/// g(x) = outer(inner_1(x^1), ..., inner_n(x^n)) on contiguous blocks.
BooleanFunction compose(const BooleanFunction& outer, std::span<const BooleanFunction> inners);
/// d-fold self-composition; iterate(f, 1) == f.
BooleanFunction iterate(const BooleanFunction& f, unsigned depth);

namespace builtins {
/// 1 exactly on 0011, 0100, 0101, 0111, 1000, 1010, 1011, 1100.
BooleanFunction ambainis_f();
/// 0 iff all three variables are equal.
BooleanFunction nae_g();
/// Kushilevitz's six-variable function.
BooleanFunction kushilevitz_h();
BooleanFunction parity(unsigned n);
BooleanFunction or_fn(unsigned n);
BooleanFunction and_fn(unsigned n);
BooleanFunction constant(unsigned n, int value);

/// The ten weight-3 inputs on which kushilevitz_h is 0, as variable triples.
const std::vector<std::vector<unsigned>>& kushilevitz_zero_triples();
}  // namespace builtins

/// Built-in by name: ambainis_f (alias f), nae_g (g), kushilevitz_h (h),
/// parity(N), or(N), and(N).
BooleanFunction builtin(std::string_view name);

/// Truth-table text: decimal arity, newline, 2^N characters from {0,1}.
BooleanFunction parse_truth_table(std::string_view text);
std::string format_truth_table(const BooleanFunction& f);
BooleanFunction load_truth_table(const std::filesystem::path& path);
void save_truth_table(const BooleanFunction& f, const std::filesystem::path& path);

}  // namespace advwb
