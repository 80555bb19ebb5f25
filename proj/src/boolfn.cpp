#include "advwb/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

namespace advwb {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", position " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

Index var_mask(unsigned arity, std::span<const unsigned> vars) {
    Index mask = 0;
    for (unsigned v : vars) {
        if (v < 1 || v > arity) {
            throw std::out_of_range("variable " + std::to_string(v) + " outside [1, " + std::to_string(arity) + "]");
        }
        mask |= var_bit(arity, v);
    }
    return mask;
}

std::vector<unsigned> mask_vars(unsigned arity, Index mask) {
    std::vector<unsigned> vars;
    for (unsigned v = 1; v <= arity; ++v) {
        if (mask & var_bit(arity, v)) vars.push_back(v);
    }
    return vars;
}

Assignment::Assignment(unsigned arity, Index bits) : arity_(arity), bits_(bits) {
    BooleanFunction::check_arity(arity);
    if (arity < 32 && (static_cast<std::uint64_t>(bits) >> arity) != 0) {
        throw std::out_of_range("assignment index " + std::to_string(bits) + " exceeds arity " +
                                std::to_string(arity));
    }
}

Assignment Assignment::parse(std::string_view bits) {
    Index v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("assignment must be a 0/1 string");
        v = (v << 1) | static_cast<Index>(c - '0');
    }
    return Assignment(static_cast<unsigned>(bits.size()), v);
}

int Assignment::bit(unsigned var) const {
    if (var < 1 || var > arity_) throw std::out_of_range("variable index out of range");
    return (bits_ & var_bit(arity_, var)) ? 1 : 0;
}

std::string Assignment::to_string() const {
    std::string s(arity_, '0');
    for (unsigned v = 1; v <= arity_; ++v) s[v - 1] = static_cast<char>('0' + bit(v));
    return s;
}

Assignment flip_block(const Assignment& x, std::span<const unsigned> vars) {
    return Assignment(x.arity(), x.index() ^ var_mask(x.arity(), vars));
}

void BooleanFunction::check_arity(unsigned arity) {
    if (arity < 1) throw std::invalid_argument("arity must be at least 1");
    if (arity > kMaxArity) {
        throw CapacityError("arity " + std::to_string(arity) + " exceeds the materialization cap of " +
                            std::to_string(kMaxArity));
    }
}

BooleanFunction::BooleanFunction(unsigned arity, std::vector<std::uint8_t> table) : arity_(arity) {
    check_arity(arity);
    if (table.size() != (std::size_t{1} << arity)) {
        throw std::invalid_argument("truth table length " + std::to_string(table.size()) + " != 2^" +
                                    std::to_string(arity));
    }
    for (auto& b : table) {
        if (b > 1) throw std::invalid_argument("truth table entries must be 0 or 1");
    }
    table_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(table));
}

int BooleanFunction::evaluate(const Assignment& x) const {
    if (x.arity() != arity_) {
        throw std::invalid_argument("assignment arity " + std::to_string(x.arity()) + " != function arity " +
                                    std::to_string(arity_));
    }
    return (*this)(x.index());
}

bool BooleanFunction::is_constant() const {
    const auto& t = *table_;
    return std::all_of(t.begin(), t.end(), [&](std::uint8_t b) { return b == t.front(); });
}

std::vector<Index> BooleanFunction::preimage(int value) const {
    std::vector<Index> out;
    for (std::size_t k = 0; k < table_->size(); ++k) {
        if ((*table_)[k] == value) out.push_back(static_cast<Index>(k));
    }
    return out;
}

BooleanFunction compose(const BooleanFunction& outer, std::span<const BooleanFunction> inners) {
    const unsigned n = outer.arity();
    if (inners.size() != n) throw std::invalid_argument("compose needs one inner function per outer variable");
    const unsigned m = inners.front().arity();
    for (const auto& g : inners) {
        if (g.arity() != m) throw std::invalid_argument("inner functions must share one arity");
    }
    const unsigned total = n * m;
    if (total > kMaxArity) {
        throw CapacityError("composed arity " + std::to_string(total) + " exceeds the materialization cap of " +
                            std::to_string(kMaxArity));
    }
    return BooleanFunction::from_predicate(total, [&](Index x) {
        Index outer_input = 0;
        for (unsigned j = 1; j <= n; ++j) {
            if (inners[j - 1](block_value(x, j, n, m))) outer_input |= var_bit(n, j);
        }
        return outer(outer_input) != 0;
    });
}

BooleanFunction iterate(const BooleanFunction& f, unsigned depth) {
    if (depth < 1) throw std::invalid_argument("iteration depth must be positive");
    std::uint64_t arity = f.arity();
    for (unsigned d = 1; d < depth; ++d) {
        arity *= f.arity();
        if (arity > kMaxArity) {
            throw CapacityError("f^" + std::to_string(depth) + " has too many variables to materialize");
        }
    }
    BooleanFunction current = f;
    for (unsigned d = 1; d < depth; ++d) {
        std::vector<BooleanFunction> inners(f.arity(), current);
        current = compose(f, inners);
    }
    return current;
}

namespace builtins {

BooleanFunction ambainis_f() {
    static const std::vector<std::string_view> ones = {"0011", "0100", "0101", "0111",
                                                       "1000", "1010", "1011", "1100"};
    std::vector<std::uint8_t> table(16, 0);
    for (auto s : ones) table[Assignment::parse(s).index()] = 1;
    return BooleanFunction(4, std::move(table));
}

BooleanFunction nae_g() {
    return BooleanFunction::from_predicate(3, [](Index x) { return x != 0 && x != 7; });
}

const std::vector<std::vector<unsigned>>& kushilevitz_zero_triples() {
    static const std::vector<std::vector<unsigned>> triples = {
        {1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {1, 4, 5}, {1, 2, 5},
        {1, 3, 6}, {1, 4, 6}, {2, 4, 6}, {2, 5, 6}, {3, 5, 6},
    };
    return triples;
}

BooleanFunction kushilevitz_h() {
    std::vector<Index> zero_triples;
    for (const auto& t : kushilevitz_zero_triples()) zero_triples.push_back(var_mask(6, t));
    return BooleanFunction::from_predicate(6, [&](Index x) {
        switch (std::popcount(x)) {
            case 0:
            case 4:
            case 5:
                return false;
            case 3:
                return std::find(zero_triples.begin(), zero_triples.end(), x) == zero_triples.end();
            default:
                return true;
        }
    });
}

BooleanFunction parity(unsigned n) {
    return BooleanFunction::from_predicate(n, [](Index x) { return std::popcount(x) % 2 == 1; });
}

BooleanFunction or_fn(unsigned n) {
    return BooleanFunction::from_predicate(n, [](Index x) { return x != 0; });
}

BooleanFunction and_fn(unsigned n) {
    const Index all = (Index{1} << n) - 1;
    return BooleanFunction::from_predicate(n, [all](Index x) { return x == all; });
}

BooleanFunction constant(unsigned n, int value) {
    return BooleanFunction::from_predicate(n, [value](Index) { return value != 0; });
}

}  // namespace builtins

namespace {

// "name(N)" -> N, or 0 when `text` does not have that shape.
unsigned parameter_of(std::string_view text, std::string_view name) {
    if (!text.starts_with(name) || text.size() < name.size() + 3 || text[name.size()] != '(' ||
        text.back() != ')') {
        return 0;
    }
    std::string_view digits = text.substr(name.size() + 1, text.size() - name.size() - 2);
    unsigned n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n == 0) {
        throw std::invalid_argument("bad arity in '" + std::string(text) + "'");
    }
    return n;
}

}  // namespace

BooleanFunction builtin(std::string_view name) {
    if (name == "ambainis_f" || name == "f") return builtins::ambainis_f();
    if (name == "nae_g" || name == "g") return builtins::nae_g();
    if (name == "kushilevitz_h" || name == "h") return builtins::kushilevitz_h();
    if (unsigned n = parameter_of(name, "parity")) return builtins::parity(n);
    if (unsigned n = parameter_of(name, "or")) return builtins::or_fn(n);
    if (unsigned n = parameter_of(name, "and")) return builtins::and_fn(n);
    throw std::invalid_argument("unknown built-in function '" + std::string(name) + "'");
}

BooleanFunction parse_truth_table(std::string_view text) {
    auto newline = text.find('\n');
    if (newline == std::string_view::npos) throw ParseError("expected arity line followed by table line", 1, 1);
    std::string_view first = text.substr(0, newline);
    if (!first.empty() && first.back() == '\r') first.remove_suffix(1);
    unsigned arity = 0;
    auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), arity);
    if (first.empty() || ec != std::errc() || ptr != first.data() + first.size()) {
        throw ParseError("arity must be a decimal integer", 1, static_cast<std::size_t>(ptr - first.data()) + 1);
    }
    if (arity < 1) throw ParseError("arity must be at least 1", 1, 1);
    if (arity > kMaxArity) {
        throw CapacityError("arity " + std::to_string(arity) + " exceeds the materialization cap of " +
                            std::to_string(kMaxArity));
    }

    std::string_view rest = text.substr(newline + 1);
    if (rest.ends_with("\r\n")) {
        rest.remove_suffix(2);
    } else if (rest.ends_with('\n')) {
        rest.remove_suffix(1);
    }
    const std::size_t expected = std::size_t{1} << arity;
    std::vector<std::uint8_t> table;
    table.reserve(expected);
    for (std::size_t k = 0; k < rest.size(); ++k) {
        char c = rest[k];
        if (c != '0' && c != '1') {
            if (k >= expected) throw ParseError("trailing content after truth table", 2, k + 1);
            throw ParseError(std::string("unexpected character '") + c + "'", 2, k + 1);
        }
        if (k >= expected) throw ParseError("table longer than 2^" + std::to_string(arity), 2, k + 1);
        table.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (table.size() != expected) {
        throw ParseError("table has " + std::to_string(table.size()) + " entries, expected " +
                             std::to_string(expected),
                         2, table.size() + 1);
    }
    return BooleanFunction(arity, std::move(table));
}

std::string format_truth_table(const BooleanFunction& f) {
    std::string out = std::to_string(f.arity()) + "\n";
    out.reserve(out.size() + f.size() + 1);
    for (auto b : f.table()) out.push_back(static_cast<char>('0' + b));
    out.push_back('\n');
    return out;
}

BooleanFunction load_truth_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_truth_table(ss.str());
}

void save_truth_table(const BooleanFunction& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_truth_table(f);
}

}  // namespace advwb
