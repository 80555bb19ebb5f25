#include "advwb/measures.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <climits>
#include <cmath>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "advwb/lp.hpp"
#include "advwb/parallel.hpp"

namespace advwb {

namespace {

void require_arity(const BooleanFunction& f, unsigned cap, const char* what) {
    if (f.arity() > cap) {
        throw CapacityError(std::string(what) + " is limited to arity " + std::to_string(cap) + " (got " +
                            std::to_string(f.arity()) + ")");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact polynomial

MultilinearPolynomial::MultilinearPolynomial(unsigned arity, std::vector<std::int64_t> coefficients)
    : arity_(arity), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != (std::size_t{1} << arity)) {
        throw std::invalid_argument("polynomial needs one coefficient per variable subset");
    }
}

int MultilinearPolynomial::degree() const {
    int d = 0;
    for (std::size_t s = 0; s < coefficients_.size(); ++s) {
        if (coefficients_[s] != 0) d = std::max(d, std::popcount(s));
    }
    return d;
}

std::int64_t MultilinearPolynomial::evaluate(Index x) const {
    // Monomial S is 1 at x exactly when S is a subset of x.
    std::int64_t v = coefficients_[0];
    for (Index s = x; s != 0; s = (s - 1) & x) v += coefficients_[s];
    return v;
}

std::string MultilinearPolynomial::to_string() const {
    std::vector<Index> order(coefficients_.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = static_cast<Index>(s);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
        return mask_vars(arity_, a) < mask_vars(arity_, b);
    });
    std::string out;
    for (Index s : order) {
        std::int64_t c = coefficients_[s];
        if (c == 0) continue;
        if (c < 0) {
            out += '-';
        } else if (!out.empty()) {
            out += '+';
        }
        std::int64_t mag = c < 0 ? -c : c;
        if (mag != 1 || s == 0) out += std::to_string(mag);
        for (unsigned v : mask_vars(arity_, s)) out += "x" + std::to_string(v);
    }
    return out.empty() ? "0" : out;
}

MultilinearPolynomial exact_polynomial(const BooleanFunction& f) {
    std::vector<std::int64_t> c(f.table().begin(), f.table().end());
    for (Index bit = 1; bit < c.size(); bit <<= 1) {
        for (std::size_t s = 0; s < c.size(); ++s) {
            if (s & bit) c[s] -= c[s ^ bit];
        }
    }
    return MultilinearPolynomial(f.arity(), std::move(c));
}

int degree(const BooleanFunction& f) {
    return exact_polynomial(f).degree();
}

// ---------------------------------------------------------------------------
// Approximate degree

namespace {

template <typename T>
struct BandFit {
    T error;
    std::vector<T> coefficients;  // by subset mask
};

// min t s.t. |p(x) - f(x)| <= t for all x, deg p <= k. Coefficients are
// split as u - v so the LP is in nonnegative standard form.
template <typename T>
BandFit<T> best_uniform_fit(const BooleanFunction& f, int k) {
    std::vector<Index> monomials;
    for (Index s = 0; s < f.size(); ++s) {
        if (std::popcount(s) <= k) monomials.push_back(s);
    }
    const std::size_t m = monomials.size();
    const std::size_t cols = 2 * m + 1;
    const std::size_t rows = 2 * f.size();
    std::vector<std::vector<T>> a(rows, std::vector<T>(cols, T(0)));
    std::vector<T> b(rows, T(0));
    std::vector<T> c(cols, T(0));
    c[2 * m] = T(-1);
    for (Index x = 0; x < f.size(); ++x) {
        auto& upper = a[2 * x];
        auto& lower = a[2 * x + 1];
        for (std::size_t i = 0; i < m; ++i) {
            if ((monomials[i] & ~x) != 0) continue;
            upper[i] = T(1);
            upper[m + i] = T(-1);
            lower[i] = T(-1);
            lower[m + i] = T(1);
        }
        upper[2 * m] = T(-1);
        lower[2 * m] = T(-1);
        b[2 * x] = T(f(x));
        b[2 * x + 1] = T(-f(x));
    }
    auto sol = lp::DenseSimplex<T>(a, b, c).solve();
    if (sol.status != lp::Status::optimal) throw std::runtime_error("approximation LP did not reach an optimum");
    BandFit<T> fit{-sol.objective, std::vector<T>(f.size(), T(0))};
    for (std::size_t i = 0; i < m; ++i) fit.coefficients[monomials[i]] = sol.x[i] - sol.x[m + i];
    return fit;
}

template <typename T>
T max_band_error(const BooleanFunction& f, const std::vector<T>& coefficients) {
    T worst(0);
    for (Index x = 0; x < f.size(); ++x) {
        T p = coefficients[0];
        for (Index s = x; s != 0; s = (s - 1) & x) p += coefficients[s];
        T diff = p - T(f(x));
        if (diff < T(0)) diff = -diff;
        if (diff > worst) worst = diff;
    }
    return worst;
}

}  // namespace

ApproxDegreeResult approx_degree(const BooleanFunction& f, Rational eps) {
    require_arity(f, kMaxApproxDegreeArity, "approximate degree");
    if (eps.sign() < 0 || eps >= Rational(1, 2)) throw std::invalid_argument("eps must lie in [0, 1/2)");

    const auto exact = exact_polynomial(f);
    const int full = exact.degree();
    ApproxDegreeResult result;
    result.eps = eps;
    result.exact_arithmetic = f.arity() <= kExactLpArity;

    if (!eps.is_zero()) {
        for (int k = 0; k < full; ++k) {
            if (result.exact_arithmetic) {
                const mpq_class bound(eps.num(), eps.den());
                auto fit = best_uniform_fit<mpq_class>(f, k);
                if (fit.error > bound) continue;
                if (max_band_error(f, fit.coefficients) > bound) {
                    throw std::logic_error("approximation witness fails its band check");
                }
                result.degree = k;
                result.error = fit.error.get_d();
                for (const auto& q : fit.coefficients) result.witness.push_back(q.get_d());
                return result;
            }
            auto fit = best_uniform_fit<double>(f, k);
            const double bound = eps.to_double();
            if (fit.error > bound + lp::ScalarTraits<double>::kEps) continue;
            if (max_band_error(f, fit.coefficients) > bound + lp::ScalarTraits<double>::kEps) continue;
            result.degree = k;
            result.error = fit.error;
            result.witness = std::move(fit.coefficients);
            return result;
        }
    }
    result.degree = full;
    result.error = 0.0;
    for (auto c : exact.coefficients()) result.witness.push_back(static_cast<double>(c));
    return result;
}

// ---------------------------------------------------------------------------
// Sensitivity and block sensitivity

int sensitivity_at(const BooleanFunction& f, Index x) {
    int count = 0;
    for (unsigned v = 1; v <= f.arity(); ++v) count += f(x ^ var_bit(f.arity(), v)) != f(x);
    return count;
}

int sensitivity(const BooleanFunction& f) {
    std::vector<int> per(f.size());
    parallel_chunks(f.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t x = lo; x < hi; ++x) per[x] = sensitivity_at(f, static_cast<Index>(x));
    });
    return *std::max_element(per.begin(), per.end());
}

std::vector<Index> minimal_sensitive_blocks(const BooleanFunction& f, Index x) {
    require_arity(f, kMaxBlockSensitivityArity, "block sensitivity");
    const std::size_t n = f.size();
    // contains[S]: some nonempty subset of S is a sensitive block.
    std::vector<std::uint8_t> contains(n, 0);
    std::vector<Index> minimal;
    for (Index s = 1; s < n; ++s) {
        bool sub = false;
        for (Index rest = s; rest != 0; rest &= rest - 1) {
            Index bit = rest & (~rest + 1);
            if (contains[s ^ bit]) {
                sub = true;
                break;
            }
        }
        const bool sensitive = f(x ^ s) != f(x);
        contains[s] = sub || sensitive;
        if (sensitive && !sub) minimal.push_back(s);
    }
    return minimal;
}

namespace {

// Maximum set packing over bitmask blocks by branching on the lowest
// still-available variable: either some block covers it, or nothing does.
class Packer {
public:
    explicit Packer(std::vector<Index> blocks) : blocks_(std::move(blocks)) {
        std::sort(blocks_.begin(), blocks_.end(), [](Index a, Index b) {
            return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
        });
    }

    std::vector<Index> solve(Index universe) {
        if (blocks_.empty()) return {};
        min_size_ = std::popcount(blocks_.front());
        search(universe);
        return best_;
    }

private:
    void search(Index avail) {
        const int room = std::popcount(avail) / min_size_;
        if (static_cast<int>(current_.size() + room) <= static_cast<int>(best_.size())) return;
        // Lowest available variable that some fitting block still covers.
        Index coverable = 0;
        for (Index b : blocks_) {
            if ((b & ~avail) == 0) coverable |= b;
        }
        if (coverable == 0) {
            if (current_.size() > best_.size()) best_ = current_;
            return;
        }
        const Index v = coverable & (~coverable + 1);
        for (Index b : blocks_) {
            if ((b & v) == 0 || (b & ~avail) != 0) continue;
            current_.push_back(b);
            search(avail & ~b);
            current_.pop_back();
        }
        search(avail & ~v);
    }

    std::vector<Index> blocks_;
    std::vector<Index> current_;
    std::vector<Index> best_;
    int min_size_ = 1;
};

}  // namespace

std::vector<Index> max_disjoint_sensitive_blocks(const BooleanFunction& f, Index x) {
    auto blocks = minimal_sensitive_blocks(f, x);
    const Index universe = static_cast<Index>(f.size() - 1);
    auto family = Packer(std::move(blocks)).solve(universe);
    std::sort(family.begin(), family.end());
    return family;
}

int block_sensitivity_at(const BooleanFunction& f, Index x) {
    return static_cast<int>(max_disjoint_sensitive_blocks(f, x).size());
}

int block_sensitivity(const BooleanFunction& f) {
    require_arity(f, kMaxBlockSensitivityArity, "block sensitivity");
    std::vector<int> per(f.size());
    parallel_chunks(f.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t x = lo; x < hi; ++x) per[x] = block_sensitivity_at(f, static_cast<Index>(x));
    });
    return *std::max_element(per.begin(), per.end());
}

// ---------------------------------------------------------------------------
// Certificate complexity

int certificate_size_at(const BooleanFunction& f, Index x, unsigned max_arity) {
    require_arity(f, std::min(max_arity, kMaxCertificateArity), "certificate complexity");
    const std::size_t n = f.size();
    // hit[M]: some input differing from x only inside M has another value.
    std::vector<std::uint8_t> hit(n);
    for (std::size_t d = 0; d < n; ++d) hit[d] = f(x ^ static_cast<Index>(d)) != f(x);
    for (std::size_t bit = 1; bit < n; bit <<= 1) {
        for (std::size_t m = 0; m < n; ++m) {
            if (m & bit) hit[m] |= hit[m ^ bit];
        }
    }
    const Index all = static_cast<Index>(n - 1);
    int best = static_cast<int>(f.arity());
    for (Index s = 0; s < n; ++s) {
        // Fixing S certifies f(x) iff no disagreement hides in the complement.
        if (!hit[all & ~s]) best = std::min(best, std::popcount(s));
    }
    return best;
}

CertificateComplexity certificate_complexity(const BooleanFunction& f, unsigned max_arity) {
    require_arity(f, std::min(max_arity, kMaxCertificateArity), "certificate complexity");
    std::vector<int> per(f.size());
    parallel_chunks(f.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t x = lo; x < hi; ++x) per[x] = certificate_size_at(f, static_cast<Index>(x), max_arity);
    });
    CertificateComplexity c;
    for (Index x = 0; x < f.size(); ++x) {
        int& side = f(x) ? c.c1 : c.c0;
        side = std::max(side, per[x]);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Decision trees

class DecisionTreeBuilder {
public:
    explicit DecisionTreeBuilder(unsigned arity) { tree_.arity_ = arity; }

    int leaf(int value) {
        DecisionTree::Node n;
        n.value = value;
        tree_.nodes_.push_back(n);
        return static_cast<int>(tree_.nodes_.size() - 1);
    }
    int query(unsigned var, int zero, int one) {
        DecisionTree::Node n;
        n.var = var;
        n.child[0] = zero;
        n.child[1] = one;
        tree_.nodes_.push_back(n);
        return static_cast<int>(tree_.nodes_.size() - 1);
    }
    DecisionTree finish(int root) {
        tree_.root_ = root;
        return std::move(tree_);
    }

private:
    DecisionTree tree_;
};

DecisionTree DecisionTree::leaf(int value) {
    DecisionTreeBuilder b(1);
    return b.finish(b.leaf(value));
}

int DecisionTree::depth() const {
    std::vector<int> memo(nodes_.size(), -1);
    std::function<int(int)> go = [&](int id) {
        if (memo[id] >= 0) return memo[id];
        const Node& n = nodes_[id];
        int d = n.var == 0 ? 0 : 1 + std::max(go(n.child[0]), go(n.child[1]));
        return memo[id] = d;
    };
    return go(root_);
}

std::pair<int, int> DecisionTree::run(Index x) const {
    int queries = 0;
    int id = root_;
    while (nodes_[id].var != 0) {
        const Node& n = nodes_[id];
        id = n.child[(x & var_bit(arity_, n.var)) ? 1 : 0];
        ++queries;
    }
    return {nodes_[id].value, queries};
}

DecisionTree DecisionTree::compose(const DecisionTree& outer, const DecisionTree& inner, unsigned blocks,
                                   unsigned block_arity) {
    if (outer.arity_ != blocks || inner.arity_ != block_arity) {
        throw std::invalid_argument("tree arities do not match the block layout");
    }
    DecisionTreeBuilder b(blocks * block_arity);
    std::map<int, int> built;  // outer node -> new node
    std::function<int(int)> go = [&](int id) -> int {
        if (auto it = built.find(id); it != built.end()) return it->second;
        const Node& n = outer.nodes_[id];
        int result;
        if (n.var == 0) {
            result = b.leaf(n.value);
        } else {
            const int on_zero = go(n.child[0]);
            const int on_one = go(n.child[1]);
            const unsigned offset = (n.var - 1) * block_arity;
            std::function<int(int)> copy = [&](int inner_id) -> int {
                const Node& m = inner.nodes_[inner_id];
                if (m.var == 0) return m.value ? on_one : on_zero;
                const int z = copy(m.child[0]);
                const int o = copy(m.child[1]);
                return b.query(offset + m.var, z, o);
            };
            result = copy(inner.root_);
        }
        built[id] = result;
        return result;
    };
    return b.finish(go(outer.root_));
}

DetComplexityResult det_complexity(const BooleanFunction& f) {
    require_arity(f, kMaxDecisionTreeArity, "decision tree search");
    const unsigned n = f.arity();
    std::vector<std::size_t> pow3(n + 1, 1);
    for (unsigned i = 1; i <= n; ++i) pow3[i] = pow3[i - 1] * 3;
    const std::size_t states = pow3[n];

    // A restriction is a base-3 number; digit v-1 holds x_v in {0, 1} or 2 (free).
    // Fixing a free digit lowers the number, so ascending order is bottom-up.
    constexpr std::uint8_t kMixed = 2;
    std::vector<std::uint8_t> value(states);
    std::vector<std::uint8_t> depth(states);
    for (std::size_t r = 0; r < states; ++r) {
        std::size_t rest = r;
        Index point = 0;
        int first_free = -1;
        std::uint8_t best = 0xff;
        for (unsigned v = 1; v <= n; ++v, rest /= 3) {
            const std::size_t digit = rest % 3;
            if (digit == 1) point |= var_bit(n, v);
            if (digit != 2) continue;
            const std::size_t c0 = r - 2 * pow3[v - 1];
            const std::size_t c1 = r - pow3[v - 1];
            if (first_free < 0) first_free = static_cast<int>(v);
            best = std::min<std::uint8_t>(best, 1 + std::max(depth[c0], depth[c1]));
        }
        if (first_free < 0) {
            value[r] = static_cast<std::uint8_t>(f(point));
            depth[r] = 0;
            continue;
        }
        const std::size_t c0 = r - 2 * pow3[first_free - 1];
        const std::size_t c1 = r - pow3[first_free - 1];
        value[r] = (value[c0] == value[c1] && value[c0] != kMixed) ? value[c0] : kMixed;
        depth[r] = value[r] == kMixed ? best : 0;
    }

    DecisionTreeBuilder b(n);
    std::function<int(std::size_t)> build = [&](std::size_t r) -> int {
        if (value[r] != kMixed) return b.leaf(value[r]);
        std::size_t rest = r;
        for (unsigned v = 1; v <= n; ++v, rest /= 3) {
            if (rest % 3 != 2) continue;
            const std::size_t c0 = r - 2 * pow3[v - 1];
            const std::size_t c1 = r - pow3[v - 1];
            if (1 + std::max(depth[c0], depth[c1]) == depth[r]) {
                const int zero = build(c0);
                const int one = build(c1);
                return b.query(v, zero, one);
            }
        }
        throw std::logic_error("decision tree reconstruction failed");
    };
    const std::size_t root = states - 1;  // all digits 2
    DetComplexityResult result;
    result.depth = depth[root];
    result.tree = b.finish(build(root));
    return result;
}

// ---------------------------------------------------------------------------
// Iterated functions

namespace {

std::uint64_t block_of(std::uint64_t x, unsigned j, unsigned blocks, unsigned block_arity) {
    const unsigned shift = block_arity * (blocks - j);
    const std::uint64_t mask = block_arity >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << block_arity) - 1);
    return (x >> shift) & mask;
}

unsigned power(unsigned base, unsigned exp) {
    unsigned r = 1;
    while (exp--) r *= base;
    return r;
}

int evaluate_iterated(const BooleanFunction& base, unsigned depth, std::uint64_t x) {
    if (depth == 1) return base(static_cast<Index>(x));
    const unsigned n = base.arity();
    const unsigned m = power(n, depth - 1);
    Index top = 0;
    for (unsigned j = 1; j <= n; ++j) {
        if (evaluate_iterated(base, depth - 1, block_of(x, j, n, m))) top |= var_bit(n, j);
    }
    return base(top);
}

class ComposedBlocks {
public:
    explicit ComposedBlocks(const BooleanFunction& base) : base_(base), families_(base.size()) {
        for (Index x = 0; x < base.size(); ++x) families_[x] = max_disjoint_sensitive_blocks(base, x);
    }

    std::vector<std::uint64_t> at(unsigned depth, std::uint64_t x) const {
        const unsigned n = base_.arity();
        if (depth == 1) {
            const auto& fam = families_[static_cast<Index>(x)];
            return {fam.begin(), fam.end()};
        }
        const unsigned m = power(n, depth - 1);
        Index top = 0;
        std::vector<std::vector<std::uint64_t>> inner(n + 1);
        for (unsigned j = 1; j <= n; ++j) {
            const std::uint64_t xj = block_of(x, j, n, m);
            if (evaluate_iterated(base_, depth - 1, xj)) top |= var_bit(n, j);
            inner[j] = at(depth - 1, xj);
        }
        // Flipping a top-level block B needs every f^(d-1)(x^j), j in B, flipped;
        // pairing the k-th inner block of each j gives disjoint composed blocks.
        std::vector<std::uint64_t> out;
        for (Index top_block : families_[top]) {
            auto vars = mask_vars(n, top_block);
            std::size_t count = SIZE_MAX;
            for (unsigned j : vars) count = std::min(count, inner[j].size());
            for (std::size_t k = 0; k < count; ++k) {
                std::uint64_t block = 0;
                for (unsigned j : vars) block |= inner[j][k] << (m * (n - j));
                out.push_back(block);
            }
        }
        return out;
    }

    int min_family_size() const {
        std::size_t s = SIZE_MAX;
        for (const auto& f : families_) s = std::min(s, f.size());
        return static_cast<int>(s);
    }

private:
    const BooleanFunction& base_;
    std::vector<std::vector<Index>> families_;
};

}  // namespace

std::vector<std::uint64_t> composed_blocks(const BooleanFunction& base, unsigned depth, std::uint64_t x) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    if (static_cast<std::uint64_t>(std::pow(base.arity(), depth)) > 64) {
        throw CapacityError("composed blocks need at most 64 variables");
    }
    return ComposedBlocks(base).at(depth, x);
}

IteratedCertificate iterated_certificates(const BooleanFunction& base, unsigned depth) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    require_arity(base, kMaxDecisionTreeArity, "iterated certificates");
    const unsigned n = base.arity();
    IteratedCertificate cert;
    cert.depth = depth;

    const auto base_tree = det_complexity(base);
    const ComposedBlocks blocks(base);

    int s_min = static_cast<int>(n), s_max = 0;
    for (Index x = 0; x < base.size(); ++x) {
        s_min = std::min(s_min, sensitivity_at(base, x));
        s_max = std::max(s_max, sensitivity_at(base, x));
    }

    double total_arity = std::pow(static_cast<double>(n), depth);
    cert.materialized = total_arity <= 16;
    if (!cert.materialized) {
        // s_x(f^d) sums s_(x^j)(f^(d-1)) over the blocks j sensitive for the
        // top-level input, hence lies in [s_min^d, s_max^d].
        cert.sensitivity_min = static_cast<int>(std::pow(s_min, depth));
        cert.sensitivity_max = static_cast<int>(std::pow(s_max, depth));
        cert.block_sensitivity_lower = static_cast<int>(std::pow(blocks.min_family_size(), depth));
        // The composed tree queries at most depth(outer) blocks, each at most
        // depth(inner) times.
        cert.decision_depth_upper = static_cast<int>(std::pow(base_tree.depth, depth));
        cert.block_sensitivity_certified = cert.block_sensitivity_lower == cert.decision_depth_upper;
        return cert;
    }

    const BooleanFunction fd = iterate(base, depth);
    DecisionTree tree = base_tree.tree;
    for (unsigned d = 2; d <= depth; ++d) tree = DecisionTree::compose(base_tree.tree, tree, n, power(n, d - 1));

    struct Scan {
        int s_min = INT32_MAX, s_max = 0, bs_min = INT32_MAX;
        bool ok = true;
    };
    const std::size_t workers = thread_count();
    std::vector<Scan> scans(workers + 1);
    std::atomic<std::size_t> slot{0};
    parallel_chunks(fd.size(), [&](std::size_t lo, std::size_t hi) {
        Scan& sc = scans[slot++];
        for (std::size_t i = lo; i < hi; ++i) {
            const Index x = static_cast<Index>(i);
            const int s = sensitivity_at(fd, x);
            sc.s_min = std::min(sc.s_min, s);
            sc.s_max = std::max(sc.s_max, s);
            auto fam = blocks.at(depth, x);
            std::uint64_t used = 0;
            for (auto b : fam) {
                if ((used & b) != 0 || b == 0 || fd(x ^ static_cast<Index>(b)) == fd(x)) sc.ok = false;
                used |= b;
            }
            sc.bs_min = std::min(sc.bs_min, static_cast<int>(fam.size()));
            auto [out, queries] = tree.run(x);
            if (out != fd(x)) sc.ok = false;
        }
    });
    Scan total;
    for (std::size_t i = 0; i < slot; ++i) {
        total.s_min = std::min(total.s_min, scans[i].s_min);
        total.s_max = std::max(total.s_max, scans[i].s_max);
        total.bs_min = std::min(total.bs_min, scans[i].bs_min);
        total.ok = total.ok && scans[i].ok;
    }
    if (!total.ok) throw std::logic_error("composed certificate failed verification");
    cert.sensitivity_min = total.s_min;
    cert.sensitivity_max = total.s_max;
    cert.block_sensitivity_lower = total.bs_min;
    cert.decision_depth_upper = tree.depth();
    cert.block_sensitivity_certified = cert.block_sensitivity_lower == cert.decision_depth_upper;
    cert.degree = degree(fd);
    return cert;
}

// ---------------------------------------------------------------------------
// Reports

ComplexityReport measure_all(const BooleanFunction& f, Rational eps, const MeasureSelection& which) {
    ComplexityReport r;
    r.arity = f.arity();
    r.eps = eps;
    if (which.degree) {
        r.deg = degree(f);
        r.qe_lower = Rational(*r.deg, 2);
    }
    if (which.approx_degree) {
        r.approx_deg = approx_degree(f, eps).degree;
        r.q2_lower_poly = Rational(*r.approx_deg, 2);
    }
    if (which.sensitivity) r.s = sensitivity(f);
    if (which.block_sensitivity) r.bs = block_sensitivity(f);
    if (which.certificates) {
        auto c = certificate_complexity(f, which.certificate_arity);
        r.c0 = c.c0;
        r.c1 = c.c1;
    }
    if (which.decision_tree) r.d_depth = det_complexity(f).depth;
    return r;
}

std::string format_report_text(const ComplexityReport& r) {
    std::ostringstream out;
    out << "arity: " << r.arity << "\n";
    auto line = [&](const char* name, const auto& v) {
        if (v) out << name << ": " << *v << "\n";
    };
    line("deg", r.deg);
    if (r.approx_deg) out << "approx_deg: " << *r.approx_deg << " (eps = " << r.eps << ")\n";
    line("s", r.s);
    line("bs", r.bs);
    line("c0", r.c0);
    line("c1", r.c1);
    line("d_depth", r.d_depth);
    line("qe_lower", r.qe_lower);
    line("q2_lower_poly", r.q2_lower_poly);
    line("adversary_bound", r.adversary_bound);
    return out.str();
}

std::string format_report_json(const ComplexityReport& r) {
    nlohmann::ordered_json j;
    j["arity"] = r.arity;
    auto put = [&](const char* name, const auto& v) {
        if (v) j[name] = *v;
    };
    put("deg", r.deg);
    put("approx_deg", r.approx_deg);
    if (r.approx_deg) j["eps"] = r.eps.to_string();
    put("s", r.s);
    put("bs", r.bs);
    put("c0", r.c0);
    put("c1", r.c1);
    put("d_depth", r.d_depth);
    if (r.qe_lower) j["qe_lower"] = r.qe_lower->to_string();
    if (r.q2_lower_poly) j["q2_lower_poly"] = r.q2_lower_poly->to_string();
    put("adversary_bound", r.adversary_bound);
    return j.dump(2) + "\n";
}

}  // namespace advwb
