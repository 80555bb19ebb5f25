#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace advwb::lp {

/// Sign tests for the simplex. Exact scalar types use a zero tolerance.
template <typename T>
struct ScalarTraits {
    static int sign(const T& v) { return (v > T(0)) - (v < T(0)); }
};

template <>
struct ScalarTraits<double> {
    static constexpr double kEps = 1e-9;
    static int sign(double v) { return (v > kEps) - (v < -kEps); }
};

enum class Status { optimal, infeasible, unbounded };

template <typename T>
struct Solution {
    Status status = Status::infeasible;
    T objective{};
    std::vector<T> x;
};

/// Dense tableau simplex for: maximize c.x subject to A x <= b, x >= 0.
///
/// Negative right-hand sides are handled with a single auxiliary column
/// (phase one). Entering columns follow Dantzig's rule until the pivot count
/// suggests cycling, then Bland's rule, which terminates for exact types.
template <typename T>
class DenseSimplex {
public:
    DenseSimplex(const std::vector<std::vector<T>>& a, const std::vector<T>& b, const std::vector<T>& c)
        : m_(b.size()), n_(c.size()), basis_(m_), nonbasis_(n_ + 1), d_(m_ + 2, std::vector<T>(n_ + 2, T(0))) {
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) d_[i][j] = a[i][j];
            basis_[i] = static_cast<long>(n_ + i);
            d_[i][n_] = T(-1);
            d_[i][n_ + 1] = b[i];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            nonbasis_[j] = static_cast<long>(j);
            d_[m_][j] = -c[j];
        }
        nonbasis_[n_] = -1;
        d_[m_ + 1][n_] = T(1);
        bland_after_ = 50 * (m_ + n_ + 1);
    }

    Solution<T> solve() {
        Solution<T> out;
        std::size_t r = 0;
        for (std::size_t i = 1; i < m_; ++i) {
            if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
        }
        if (m_ > 0 && sign(d_[r][n_ + 1]) < 0) {
            pivot(r, n_);
            if (!run(2) || sign(d_[m_ + 1][n_ + 1]) < 0) {
                out.status = Status::infeasible;
                return out;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (basis_[i] != -1) continue;
                std::size_t s = 0;
                for (std::size_t j = 1; j <= n_; ++j) {
                    if (better(d_[i], j, s)) s = j;
                }
                pivot(i, s);
            }
        }
        bool bounded = run(1);
        out.x.assign(n_, T(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) out.x[basis_[i]] = d_[i][n_ + 1];
        }
        out.status = bounded ? Status::optimal : Status::unbounded;
        if (bounded) out.objective = d_[m_][n_ + 1];
        return out;
    }

private:
    static int sign(const T& v) { return ScalarTraits<T>::sign(v); }

    bool better(const std::vector<T>& row, std::size_t j, std::size_t s) const {
        if (row[j] != row[s]) return row[j] < row[s];
        return nonbasis_[j] < nonbasis_[s];
    }

    void pivot(std::size_t r, std::size_t s) {
        ++pivots_;
        T inv = T(1) / d_[r][s];
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r || sign(d_[i][s]) == 0) continue;
            T factor = d_[i][s] * inv;
            for (std::size_t j = 0; j < n_ + 2; ++j) {
                if (sign(d_[r][j]) != 0) d_[i][j] -= d_[r][j] * factor;
            }
            d_[i][s] = d_[r][s] * factor;
        }
        for (std::size_t j = 0; j < n_ + 2; ++j) {
            if (j != s) d_[r][j] *= inv;
        }
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i != r) d_[i][s] *= -inv;
        }
        d_[r][s] = inv;
        std::swap(basis_[r], nonbasis_[s]);
    }

    bool run(int phase) {
        const std::size_t obj = m_ + static_cast<std::size_t>(phase) - 1;
        for (;;) {
            const bool bland = pivots_ > bland_after_;
            long s = -1;
            for (std::size_t j = 0; j <= n_; ++j) {
                if (nonbasis_[j] == -phase) continue;
                if (bland) {
                    if (sign(d_[obj][j]) < 0 && (s == -1 || nonbasis_[j] < nonbasis_[s])) s = static_cast<long>(j);
                } else if (s == -1 || better(d_[obj], j, static_cast<std::size_t>(s))) {
                    s = static_cast<long>(j);
                }
            }
            if (s == -1 || sign(d_[obj][s]) >= 0) return true;
            long r = -1;
            for (std::size_t i = 0; i < m_; ++i) {
                if (sign(d_[i][s]) <= 0) continue;
                if (r == -1) {
                    r = static_cast<long>(i);
                    continue;
                }
                // Compare d[i][rhs]/d[i][s] with d[r][rhs]/d[r][s] without division.
                T lhs = d_[i][n_ + 1] * d_[r][s];
                T rhs = d_[r][n_ + 1] * d_[i][s];
                int cmp = sign(lhs - rhs);
                if (cmp < 0 || (cmp == 0 && basis_[i] < basis_[r])) r = static_cast<long>(i);
            }
            if (r == -1) return false;
            pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
        }
    }

    std::size_t m_, n_;
    std::vector<long> basis_, nonbasis_;
    std::vector<std::vector<T>> d_;
    std::size_t pivots_ = 0;
    std::size_t bland_after_ = 0;
};

}  // namespace advwb::lp
