#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advwb/rational.hpp"

namespace advwb {

/// Tolerance used wherever exactness is lost (mixed radicands, simulation).
inline constexpr double kTolerance = 1e-9;

/// Largest k with k*k dividing n, and the square-free rest: n = k^2 * rest.
std::pair<std::int64_t, std::int64_t> split_square(std::int64_t n);

/// Nonnegative number of the form q * sqrt(r).
///
/// The radicand is kept as a square-free positive integer, which is the
/// normal form of any rational radicand: sqrt(u/v) = sqrt(u*v) / v. Zero is
/// represented with radicand 1.
class ExactWeight {
public:
    ExactWeight() = default;
    ExactWeight(Rational q);  // NOLINT(implicit)
    ExactWeight(std::int64_t n) : ExactWeight(Rational(n)) {}  // NOLINT(implicit)

    /// q * sqrt(radicand) for an arbitrary positive rational radicand.
    static ExactWeight with_root(Rational q, Rational radicand);
    /// sqrt(r) for a nonnegative rational r.
    static ExactWeight sqrt_of(Rational r);

    const Rational& coefficient() const { return q_; }
    std::int64_t radicand() const { return r_; }
    bool is_rational() const { return r_ == 1; }
    bool is_zero() const { return q_.is_zero(); }
    double to_double() const;

    /// (q*sqrt(r))^2 = q^2 * r, always rational.
    Rational square() const;
    /// Exact square root when the result stays in this representation.
    std::optional<ExactWeight> sqrt() const;
    ExactWeight reciprocal() const;

    friend ExactWeight operator*(const ExactWeight& a, const ExactWeight& b);
    friend ExactWeight operator/(const ExactWeight& a, const ExactWeight& b);
    ExactWeight& operator*=(const ExactWeight& o) { return *this = *this * o; }
    ExactWeight& operator/=(const ExactWeight& o) { return *this = *this / o; }

    /// Sum of like-radicand values; nullopt when the radicands differ.
    static std::optional<ExactWeight> try_add(const ExactWeight& a, const ExactWeight& b);

    friend bool operator==(const ExactWeight&, const ExactWeight&) = default;
    friend std::strong_ordering operator<=>(const ExactWeight& a, const ExactWeight& b);

    /// "p/q", or "p/q*sqrt(r)"; a unit coefficient prints as "sqrt(r)".
    std::string to_string() const;
    /// Inverse of to_string; also accepts "p/q*sqrt(u/v)" and "sqrt(u/v)".
    static ExactWeight parse(std::string_view text);

private:
    ExactWeight(Rational q, std::int64_t squarefree) : q_(q), r_(q.is_zero() ? 1 : squarefree) {}

    Rational q_;
    std::int64_t r_ = 1;
};

std::ostream& operator<<(std::ostream& os, const ExactWeight& w);

/// Exact linear combination of square roots, used to accumulate weights and
/// loads. Collapses back to an ExactWeight when only one radicand is present.
class RadicalSum {
public:
    RadicalSum() = default;
    RadicalSum(const ExactWeight& w) { add(w); }  // NOLINT(implicit)

    void add(const ExactWeight& w);
    void add(const RadicalSum& other);

    bool is_zero() const { return terms_.empty(); }
    std::optional<ExactWeight> exact() const;
    double to_double() const;
    std::string to_string() const;

    friend bool operator==(const RadicalSum&, const RadicalSum&) = default;

private:
    // (radicand, coefficient), sorted by radicand, zero coefficients dropped.
    std::vector<std::pair<std::int64_t, Rational>> terms_;
};

/// A value that is exact when it can be, and a double otherwise.
///
/// Comparisons are exact between two exact operands and fall back to the
/// double approximation as soon as either side is inexact.
class Quantity {
public:
    Quantity() = default;
    Quantity(const ExactWeight& w) : exact_(w), approx_(w.to_double()) {}  // NOLINT(implicit)
    Quantity(const RadicalSum& s) : exact_(s.exact()), approx_(s.to_double()) {}  // NOLINT(implicit)
    static Quantity approximate(double v) {
        Quantity q;
        q.approx_ = v;
        return q;
    }

    bool is_exact() const { return exact_.has_value(); }
    const std::optional<ExactWeight>& exact() const { return exact_; }
    double value() const { return approx_; }

    Quantity sqrt() const;
    Quantity reciprocal() const;
    friend Quantity operator*(const Quantity& a, const Quantity& b);
    friend Quantity operator/(const Quantity& a, const Quantity& b);

    /// Exact equality for exact operands, otherwise within kTolerance.
    bool same_as(const Quantity& o) const;
    friend std::partial_ordering operator<=>(const Quantity& a, const Quantity& b);
    friend bool operator==(const Quantity& a, const Quantity& b) {
        return (a <=> b) == std::partial_ordering::equivalent;
    }

    /// Exact string form, or a plain decimal when inexact.
    std::string exact_string() const;
    /// "5/2 (2.500000)" for exact values, "2.121320 (approx)" otherwise.
    std::string to_string() const;

private:
    std::optional<ExactWeight> exact_;
    double approx_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Quantity& q);

}  // namespace advwb
