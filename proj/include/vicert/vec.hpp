#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "qsqrt2.hpp"

namespace vicert {

// A projective vector in dimension 3 or 4 over scalar S (QSqrt2 exactly, or
// double with tolerances). v and lambda*v denote the same rank-1 observable.
// Dimension 4 exists only to host the bundled 18-observable set; all gadget
// geometry is dimension 3.
template <class S>
struct Vec {
    std::array<S, 4> c{};
    int dim = 3;

    static Vec v3(S x, S y, S z) { return Vec{{std::move(x), std::move(y), std::move(z), S{}}, 3}; }
    static Vec v4(S x, S y, S z, S w) { return Vec{{std::move(x), std::move(y), std::move(z), std::move(w)}, 4}; }

    S& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    const S& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (!(a[i] == b[i])) return false;
        return true;
    }
};

template <class S>
S inner(const Vec<S>& u, const Vec<S>& v) {
    if (u.dim != v.dim) throw DomainError("inner product of mixed-dimension vectors");
    S acc{};
    for (int i = 0; i < u.dim; ++i) acc = acc + u[i] * v[i];
    return acc;
}

template <class S>
S norm2(const Vec<S>& v) {
    return inner(v, v);
}

inline bool scalar_is_zero(const QSqrt2& s) { return s.is_zero(); }
inline bool scalar_is_zero(double s) { return s == 0.0; }

template <class S>
bool is_zero(const Vec<S>& v) {
    for (int i = 0; i < v.dim; ++i)
        if (!scalar_is_zero(v[i])) return false;
    return true;
}

template <class S>
Vec<S> scaled(const Vec<S>& v, const S& k) {
    Vec<S> r = v;
    for (int i = 0; i < v.dim; ++i) r[i] = v[i] * k;
    return r;
}

template <class S>
Vec<S> negated(const Vec<S>& v) {
    Vec<S> r = v;
    for (int i = 0; i < v.dim; ++i) r[i] = -v[i];
    return r;
}

// Standard cross product, dimension 3 only. Fails loudly on parallel inputs
// (zero result) — every caller needs a genuine third direction.
template <class S>
Vec<S> cross(const Vec<S>& u, const Vec<S>& v) {
    if (u.dim != 3 || v.dim != 3) throw DomainError("cross product requires dimension 3");
    Vec<S> r = Vec<S>::v3(u[1] * v[2] - u[2] * v[1],
                          u[2] * v[0] - u[0] * v[2],
                          u[0] * v[1] - u[1] * v[0]);
    if (is_zero(r)) throw DegenerateInput("cross product of parallel vectors");
    return r;
}

inline double to_double(const QSqrt2& s) { return s.to_double(); }
inline double to_double(double s) { return s; }

template <class S>
Vec<double> to_double_vec(const Vec<S>& v) {
    Vec<double> r;
    r.dim = v.dim;
    for (int i = 0; i < v.dim; ++i) r[i] = to_double(v[i]);
    return r;
}

inline double norm(const Vec<double>& v) { return std::sqrt(norm2(v)); }

inline Vec<double> unit(const Vec<double>& v) {
    double n = norm(v);
    if (n == 0.0) throw ZeroVector("cannot normalize the zero vector");
    Vec<double> r = v;
    for (int i = 0; i < v.dim; ++i) r[i] = v[i] / n;
    return r;
}

namespace detail {

inline std::int64_t lcm_i64(std::int64_t a, std::int64_t b) {
    i128 g = gcd128(a, b);
    return narrow(i128(a) / g * b, "lcm");
}

}  // namespace detail

// Canonical projective representative, exact mode.
//
// Stage 1 (uniqueness): divide by the first nonzero coordinate. Projectively
// equal inputs agree exactly after this stage.
// Stages 2-3 (presentation): rescale by a positive rational so all
// coefficients are integers with overall gcd 1, then divide by sqrt(2) while
// every coordinate's rational part is even ((r,s) -> (s, r/2)). This restores
// the familiar integer-and-sqrt2 form, e.g. (1, 1/2*sqrt2, 1/2*sqrt2) ->
// (sqrt2, 1, 1). The sqrt2 loop terminates: the field norm |r^2 - 2 s^2| of a
// fixed nonzero coordinate halves with each division.
inline Vec<QSqrt2> normalize_canonical(const Vec<QSqrt2>& v) {
    int first = -1;
    for (int i = 0; i < v.dim; ++i)
        if (!v[i].is_zero()) {
            first = i;
            break;
        }
    if (first < 0) throw ZeroVector("cannot canonicalize the zero vector");

    Vec<QSqrt2> w = v;
    for (int i = 0; i < v.dim; ++i) w[i] = v[i] / v[first];

    std::int64_t den_lcm = 1;
    for (int i = 0; i < w.dim; ++i) {
        den_lcm = detail::lcm_i64(den_lcm, w[i].rat().den());
        den_lcm = detail::lcm_i64(den_lcm, w[i].coef().den());
    }
    w = scaled(w, QSqrt2(Rational(den_lcm)));

    std::int64_t g = 0;
    for (int i = 0; i < w.dim; ++i) {
        g = detail::narrow(detail::gcd128(g, w[i].rat().num()), "gcd");
        g = detail::narrow(detail::gcd128(g, w[i].coef().num()), "gcd");
    }
    if (g > 1) w = scaled(w, QSqrt2(Rational(1, g)));

    for (;;) {
        bool all_even = true;
        for (int i = 0; i < w.dim && all_even; ++i) all_even = w[i].rat().num() % 2 == 0;
        if (!all_even) break;
        for (int i = 0; i < w.dim; ++i)
            w[i] = QSqrt2(w[i].coef(), Rational(w[i].rat().num() / 2));
    }
    return w;
}

// Canonical projective representative, float mode: unit Euclidean norm with
// the first significant coordinate positive.
inline Vec<double> normalize_canonical(const Vec<double>& v) {
    Vec<double> w = unit(v);
    for (int i = 0; i < w.dim; ++i) {
        if (std::abs(w[i]) > 1e-9) {
            if (w[i] < 0) w = negated(w);
            return w;
        }
    }
    throw ZeroVector("cannot canonicalize a vanishing vector");
}

// |<u|v>| >= (1 - tol) * |u| * |v| — same projective class within tolerance.
inline bool proj_equal(const Vec<double>& u, const Vec<double>& v, double tol) {
    double ip = std::abs(inner(u, v));
    return ip >= (1.0 - tol) * norm(u) * norm(v);
}

inline bool proj_equal(const Vec<QSqrt2>& u, const Vec<QSqrt2>& v, double /*tol*/) {
    return normalize_canonical(u) == normalize_canonical(v);
}

inline bool scalar_less(const QSqrt2& a, const QSqrt2& b) { return a < b; }
inline bool scalar_less(double a, double b) { return a < b; }

// Deterministic total order on vectors (dimension first, then lexicographic);
// used to assign dense observable ids.
template <class S>
bool vec_less(const Vec<S>& a, const Vec<S>& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (int i = 0; i < a.dim; ++i) {
        if (scalar_less(a[i], b[i])) return true;
        if (scalar_less(b[i], a[i])) return false;
    }
    return false;
}

inline std::string scalar_to_string(const QSqrt2& s) { return s.to_string(); }
inline std::string scalar_to_string(double s) { return std::to_string(s); }

template <class S>
std::string vec_to_string(const Vec<S>& v) {
    std::string out = "(";
    for (int i = 0; i < v.dim; ++i) {
        if (i) out += ", ";
        out += scalar_to_string(v[i]);
    }
    return out + ")";
}

}  // namespace vicert
