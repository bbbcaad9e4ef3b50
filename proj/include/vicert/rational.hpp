#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace vicert {

namespace detail {

using i128 = __int128;

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::int64_t narrow(i128 v, const char* what) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw ArithmeticOverflow(std::string("rational overflow in ") + what);
    return static_cast<std::int64_t>(v);
}

}  // namespace detail

// Exact rational with int64 numerator/denominator. All arithmetic runs through
// 128-bit intermediates and throws ArithmeticOverflow instead of wrapping.
// Invariant: den > 0, gcd(|num|, den) == 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : Rational(detail::i128(n), detail::i128(d), "construct") {}

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        using detail::i128;
        return Rational(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_, "+");
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        using detail::i128;
        return Rational(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_, "-");
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        using detail::i128;
        return Rational(i128(a.num_) * b.num_, i128(a.den_) * b.den_, "*");
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw DomainError("rational division by zero");
        using detail::i128;
        return Rational(i128(a.num_) * b.den_, i128(a.den_) * b.num_, "/");
    }
    Rational operator-() const {
        Rational r;
        r.num_ = detail::narrow(-detail::i128(num_), "negate");
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        detail::i128 lhs = detail::i128(a.num_) * b.den_;
        detail::i128 rhs = detail::i128(b.num_) * a.den_;
        return lhs < rhs ? std::strong_ordering::less
             : lhs > rhs ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string to_string() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    // Accepts "p" or "p/q" with an optional leading sign.
    static Rational parse(std::string_view text) {
        auto bad = [&] { throw ParseError("invalid rational: '" + std::string(text) + "'"); };
        std::size_t slash = text.find('/');
        std::string_view num_part = text.substr(0, slash);
        std::string_view den_part = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
        auto parse_int = [&](std::string_view p) -> std::int64_t {
            if (p.empty()) bad();
            bool neg = p.front() == '-';
            if (neg || p.front() == '+') p.remove_prefix(1);
            if (p.empty()) bad();
            detail::i128 v = 0;
            for (char c : p) {
                if (c < '0' || c > '9') bad();
                v = v * 10 + (c - '0');
                if (v > detail::i128(INT64_MAX) + 1) bad();
            }
            return detail::narrow(neg ? -v : v, "parse");
        };
        return Rational(parse_int(num_part), parse_int(den_part));
    }

private:
    Rational(detail::i128 n, detail::i128 d, const char* what) {
        if (d == 0) throw DomainError("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        detail::i128 g = detail::gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num_ = detail::narrow(n, what);
        den_ = detail::narrow(d, what);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace vicert
