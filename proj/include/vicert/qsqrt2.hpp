#pragma once

#include <numbers>
#include <string>
#include <string_view>

#include "rational.hpp"

namespace vicert {

// Exact element of the field Q(sqrt 2): value = r + s*sqrt(2). Closed under
// +, -, *, / and with decidable sign/equality, which is all the canonical
// vector set needs (every entry there lies in this field).
class QSqrt2 {
public:
    constexpr QSqrt2() = default;
    QSqrt2(std::int64_t n) : r_(n) {}
    QSqrt2(Rational r) : r_(r) {}
    QSqrt2(Rational r, Rational s) : r_(r), s_(s) {}

    static QSqrt2 sqrt2() { return QSqrt2(Rational(0), Rational(1)); }

    const Rational& rat() const { return r_; }   // coefficient of 1
    const Rational& coef() const { return s_; }  // coefficient of sqrt(2)

    bool is_zero() const { return r_.is_zero() && s_.is_zero(); }
    bool is_rational() const { return s_.is_zero(); }

    friend QSqrt2 operator+(const QSqrt2& a, const QSqrt2& b) { return {a.r_ + b.r_, a.s_ + b.s_}; }
    friend QSqrt2 operator-(const QSqrt2& a, const QSqrt2& b) { return {a.r_ - b.r_, a.s_ - b.s_}; }
    QSqrt2 operator-() const { return {-r_, -s_}; }
    friend QSqrt2 operator*(const QSqrt2& a, const QSqrt2& b) {
        // (r1 + s1 v2)(r2 + s2 v2) = r1 r2 + 2 s1 s2 + (r1 s2 + s1 r2) v2
        return {a.r_ * b.r_ + Rational(2) * (a.s_ * b.s_), a.r_ * b.s_ + a.s_ * b.r_};
    }
    friend QSqrt2 operator/(const QSqrt2& a, const QSqrt2& b) {
        if (b.is_zero()) throw DomainError("division by zero in Q(sqrt2)");
        // Multiply by the conjugate: field norm r^2 - 2 s^2 is nonzero for
        // nonzero elements because sqrt(2) is irrational.
        Rational norm = b.r_ * b.r_ - Rational(2) * (b.s_ * b.s_);
        QSqrt2 conj{b.r_, -b.s_};
        QSqrt2 prod = a * conj;
        return {prod.r_ / norm, prod.s_ / norm};
    }

    friend bool operator==(const QSqrt2& a, const QSqrt2& b) { return a.r_ == b.r_ && a.s_ == b.s_; }

    // Exact sign of r + s*sqrt(2).
    int sign() const {
        int sr = r_.sign(), ss = s_.sign();
        if (ss == 0) return sr;
        if (sr == 0) return ss;
        if (sr == ss) return sr;
        // Opposite signs: compare r^2 against 2 s^2; the larger magnitude wins.
        Rational r2 = r_ * r_, s2 = Rational(2) * (s_ * s_);
        if (r2 == s2) return 0;  // unreachable for nonzero r,s (irrationality), kept for safety
        return r2 > s2 ? sr : ss;
    }

    friend bool operator<(const QSqrt2& a, const QSqrt2& b) { return (a - b).sign() < 0; }

    double to_double() const { return r_.to_double() + s_.to_double() * std::numbers::sqrt2; }

    // Compact form: "0", "-3/2", "sqrt2", "-2*sqrt2", "1+1/2*sqrt2", "1-sqrt2".
    std::string to_string() const {
        if (s_.is_zero()) return r_.to_string();
        std::string root = s_ == Rational(1) || s_ == Rational(-1)
                               ? "sqrt2"
                               : (s_.sign() < 0 ? (-s_).to_string() : s_.to_string()) + "*sqrt2";
        if (r_.is_zero()) return (s_.sign() < 0 ? "-" : "") + root;
        return r_.to_string() + (s_.sign() < 0 ? "-" : "+") + root;
    }

    // Accepts sums of terms, each "p[/q]" or "[p[/q]*]sqrt2", e.g. "1",
    // "-1/2", "sqrt2", "2*sqrt2", "1/2+3/4*sqrt2", "1-sqrt2".
    static QSqrt2 parse(std::string_view text) {
        auto bad = [&] { throw ParseError("invalid Q(sqrt2) scalar: '" + std::string(text) + "'"); };
        if (text.empty()) bad();
        QSqrt2 total;
        std::size_t pos = 0;
        while (pos < text.size()) {
            // Term boundary: +/- that is not the leading sign of this term.
            std::size_t end = pos + 1;
            while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
            std::string_view term = text.substr(pos, end - pos);
            bool neg = false;
            if (term.front() == '+' || term.front() == '-') {
                neg = term.front() == '-';
                term.remove_prefix(1);
                if (term.empty()) bad();
            }
            QSqrt2 value;
            if (term.ends_with("sqrt2")) {
                term.remove_suffix(5);
                Rational coef(1);
                if (!term.empty()) {
                    if (!term.ends_with("*")) bad();
                    term.remove_suffix(1);
                    coef = Rational::parse(term);
                }
                value = QSqrt2(Rational(0), coef);
            } else {
                value = QSqrt2(Rational::parse(term));
            }
            total = neg ? total - value : total + value;
            pos = end;
        }
        return total;
    }

private:
    Rational r_;
    Rational s_;
};

}  // namespace vicert
