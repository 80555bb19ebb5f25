#include "advwb/exact_weight.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace advwb {

namespace {

std::int64_t isqrt_exact(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > std::numeric_limits<std::int64_t>::max()) throw OverflowError("radicand overflow");
    return static_cast<std::int64_t>(p);
}

// sqrt(r1) * sqrt(r2) = k * sqrt(s) with s square-free, for square-free r1, r2.
std::pair<std::int64_t, std::int64_t> multiply_radicands(std::int64_t r1, std::int64_t r2) {
    std::int64_t g = std::gcd(r1, r2);
    return {g, checked_mul(r1 / g, r2 / g)};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string decimal6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> split_square(std::int64_t n) {
    if (n <= 0) throw std::domain_error("split_square of a nonpositive number");
    std::int64_t square_root = 1;
    std::int64_t rest = 1;
    // Past the cube root, the cofactor has at most two prime factors.
    constexpr std::int64_t kLimit = 2'100'000;
    for (std::int64_t p = 2; p <= kLimit && p * p <= n; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) square_root *= p;
        if (e % 2 == 1) rest *= p;
    }
    std::int64_t s = isqrt_exact(n);
    if (s * s == n) {
        square_root = checked_mul(square_root, s);
    } else {
        rest = checked_mul(rest, n);
    }
    return {square_root, rest};
}

ExactWeight::ExactWeight(Rational q) : q_(q), r_(1) {
    if (q.sign() < 0) throw std::domain_error("ExactWeight must be nonnegative");
}

ExactWeight ExactWeight::with_root(Rational q, Rational radicand) {
    if (q.sign() < 0 || radicand.sign() < 0) throw std::domain_error("ExactWeight must be nonnegative");
    if (q.is_zero() || radicand.is_zero()) return ExactWeight();
    // sqrt(u/v) = sqrt(u*v) / v
    auto [k, s] = split_square(checked_mul(radicand.num(), radicand.den()));
    return ExactWeight(q * Rational(k, radicand.den()), s);
}

ExactWeight ExactWeight::sqrt_of(Rational r) {
    return with_root(Rational(1), r);
}

double ExactWeight::to_double() const {
    return q_.to_double() * std::sqrt(static_cast<double>(r_));
}

Rational ExactWeight::square() const {
    return q_ * q_ * Rational(r_);
}

std::optional<ExactWeight> ExactWeight::sqrt() const {
    if (r_ != 1) return std::nullopt;
    return sqrt_of(q_);
}

ExactWeight ExactWeight::reciprocal() const {
    if (is_zero()) throw std::domain_error("reciprocal of zero weight");
    // 1/(q sqrt(r)) = sqrt(r) / (q r)
    return ExactWeight(q_.reciprocal() / Rational(r_), r_);
}

ExactWeight operator*(const ExactWeight& a, const ExactWeight& b) {
    if (a.is_zero() || b.is_zero()) return ExactWeight();
    auto [k, s] = multiply_radicands(a.r_, b.r_);
    return ExactWeight(a.q_ * b.q_ * Rational(k), s);
}

ExactWeight operator/(const ExactWeight& a, const ExactWeight& b) {
    return a * b.reciprocal();
}

std::optional<ExactWeight> ExactWeight::try_add(const ExactWeight& a, const ExactWeight& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.r_ != b.r_) return std::nullopt;
    return ExactWeight(a.q_ + b.q_, a.r_);
}

std::strong_ordering operator<=>(const ExactWeight& a, const ExactWeight& b) {
    if (a.r_ == b.r_) return a.q_ <=> b.q_;
    return a.square() <=> b.square();
}

std::string ExactWeight::to_string() const {
    if (r_ == 1) return q_.to_string();
    std::string root = "sqrt(" + std::to_string(r_) + ")";
    if (q_ == Rational(1)) return root;
    return q_.to_string() + "*" + root;
}

ExactWeight ExactWeight::parse(std::string_view text) {
    std::string_view s = trim(text);
    auto fail = [&] { return std::invalid_argument("malformed weight '" + std::string(text) + "'"); };
    Rational coefficient(1);
    auto pos = s.find("sqrt(");
    if (pos == std::string_view::npos) {
        Rational q = Rational::parse(s);
        if (q.sign() < 0) throw fail();
        return ExactWeight(q);
    }
    if (pos > 0) {
        std::string_view head = trim(s.substr(0, pos));
        if (head.empty() || head.back() != '*') throw fail();
        head.remove_suffix(1);
        coefficient = Rational::parse(head);
    }
    std::string_view tail = s.substr(pos + 5);
    if (tail.empty() || tail.back() != ')') throw fail();
    tail.remove_suffix(1);
    Rational radicand = Rational::parse(tail);
    if (coefficient.sign() < 0 || radicand.sign() < 0) throw fail();
    return with_root(coefficient, radicand);
}

std::ostream& operator<<(std::ostream& os, const ExactWeight& w) {
    return os << w.to_string();
}

void RadicalSum::add(const ExactWeight& w) {
    if (w.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w.radicand(),
                               [](const auto& t, std::int64_t r) { return t.first < r; });
    if (it != terms_.end() && it->first == w.radicand()) {
        it->second += w.coefficient();
        if (it->second.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, {w.radicand(), w.coefficient()});
    }
}

void RadicalSum::add(const RadicalSum& other) {
    for (const auto& [r, q] : other.terms_) add(ExactWeight::with_root(q, Rational(r)));
}

std::optional<ExactWeight> RadicalSum::exact() const {
    if (terms_.empty()) return ExactWeight();
    if (terms_.size() > 1) return std::nullopt;
    return ExactWeight::with_root(terms_[0].second, Rational(terms_[0].first));
}

double RadicalSum::to_double() const {
    double v = 0.0;
    for (const auto& [r, q] : terms_) v += q.to_double() * std::sqrt(static_cast<double>(r));
    return v;
}

std::string RadicalSum::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [r, q] : terms_) {
        if (!out.empty()) out += " + ";
        out += ExactWeight::with_root(q, Rational(r)).to_string();
    }
    return out;
}

Quantity Quantity::sqrt() const {
    if (exact_) {
        if (auto root = exact_->sqrt()) return Quantity(*root);
    }
    return approximate(std::sqrt(approx_));
}

Quantity Quantity::reciprocal() const {
    if (exact_) return Quantity(exact_->reciprocal());
    return approximate(1.0 / approx_);
}

Quantity operator*(const Quantity& a, const Quantity& b) {
    if (a.exact_ && b.exact_) return Quantity(*a.exact_ * *b.exact_);
    return Quantity::approximate(a.approx_ * b.approx_);
}

Quantity operator/(const Quantity& a, const Quantity& b) {
    if (a.exact_ && b.exact_) return Quantity(*a.exact_ / *b.exact_);
    return Quantity::approximate(a.approx_ / b.approx_);
}

bool Quantity::same_as(const Quantity& o) const {
    if (exact_ && o.exact_) return *exact_ == *o.exact_;
    return std::abs(approx_ - o.approx_) <= kTolerance;
}

std::partial_ordering operator<=>(const Quantity& a, const Quantity& b) {
    if (a.exact_ && b.exact_) return *a.exact_ <=> *b.exact_;
    return a.approx_ <=> b.approx_;
}

std::string Quantity::exact_string() const {
    if (exact_) return exact_->to_string();
    return decimal6(approx_);
}

std::string Quantity::to_string() const {
    if (exact_) return exact_->to_string() + " (" + decimal6(approx_) + ")";
    return decimal6(approx_) + " (approx)";
}

std::ostream& operator<<(std::ostream& os, const Quantity& q) {
    return os << q.to_string();
}

}  // namespace advwb
