#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vicert/diagram.hpp"
#include "vicert/frame.hpp"

using namespace vicert;

namespace {
QSqrt2 q(long long r, long long s = 0) { return QSqrt2(Rational(r), Rational(s)); }
Vec<QSqrt2> v3q(QSqrt2 a, QSqrt2 b, QSqrt2 c) { return Vec<QSqrt2>::v3(a, b, c); }
}  // namespace

TEST_CASE("rational arithmetic and normalization") {
    Rational a(2, 4);
    CHECK(a == Rational(1, 2));
    CHECK((a + Rational(1, 3)) == Rational(5, 6));
    CHECK((a * Rational(-4, 3)) == Rational(-2, 3));
    CHECK((Rational(7, 2) / Rational(7, 4)) == Rational(2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
    CHECK(Rational::parse("-3/6") == Rational(-1, 2));
    CHECK(Rational::parse("12") == Rational(12));
    CHECK_THROWS_AS(Rational::parse("1.5"), ParseError);
    CHECK(Rational(-3, 4).to_string() == "-3/4");
}

TEST_CASE("rational overflow is an error, not a wrap") {
    Rational big(static_cast<std::int64_t>(1) << 40);
    CHECK_THROWS_AS(big * big * big, ArithmeticOverflow);
}

TEST_CASE("Q(sqrt2) field arithmetic") {
    QSqrt2 x = q(1, 1);   // 1 + sqrt2
    QSqrt2 y = q(0, 1);   // sqrt2
    CHECK(x * y == q(2, 1));                 // sqrt2 + 2
    CHECK(y * y == q(2));                    // (sqrt2)^2 = 2
    CHECK(x - x == q(0));
    CHECK((q(1) / x) == q(-1, 1));           // 1/(1+sqrt2) = sqrt2 - 1
    CHECK_THROWS_AS(x / q(0), DomainError);

    // exact sign and ordering near cancellation: 3 - 2*sqrt2 > 0, 7 - 5*sqrt2 < 0
    CHECK(q(3, -2).sign() == 1);
    CHECK(q(7, -5).sign() == -1);
    CHECK(q(7, -5) < q(3, -2));
    CHECK(q(0).sign() == 0);
}

TEST_CASE("Q(sqrt2) string round-trips") {
    for (const char* s : {"0", "1", "-3/2", "sqrt2", "-2*sqrt2", "1+1/2*sqrt2", "1-sqrt2"}) {
        QSqrt2 x = QSqrt2::parse(s);
        CHECK(QSqrt2::parse(x.to_string()) == x);
        CHECK(x.to_string() == s);
    }
    CHECK(QSqrt2::parse("1/2*sqrt2+1") == QSqrt2::parse("1+1/2*sqrt2"));
    CHECK_THROWS_AS(QSqrt2::parse("sqrt3"), ParseError);
    CHECK_THROWS_AS(QSqrt2::parse(""), ParseError);
}

TEST_CASE("exact arithmetic matches float within 1e-12 on small inputs") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-10, 10);
    for (int i = 0; i < 500; ++i) {
        QSqrt2 a = q(coef(rng), coef(rng)), b = q(coef(rng), coef(rng));
        CHECK((a + b).to_double() == Catch::Approx(a.to_double() + b.to_double()).margin(1e-12));
        CHECK((a - b).to_double() == Catch::Approx(a.to_double() - b.to_double()).margin(1e-12));
        CHECK((a * b).to_double() == Catch::Approx(a.to_double() * b.to_double()).margin(1e-12));
        if (!b.is_zero())
            CHECK((a / b).to_double() == Catch::Approx(a.to_double() / b.to_double()).margin(1e-12));
    }
}

TEST_CASE("inner products on the canonical vectors") {
    CHECK(inner(v3q(q(1), q(0), q(0)), v3q(q(0), q(1), q(1))).is_zero());
    CHECK(inner(v3q(q(0, 1), q(1), q(1)), v3q(q(0, 1), q(-1), q(-1))).is_zero());
    CHECK(inner(v3q(q(1), q(0), q(0)), v3q(q(1), q(0), q(0))) == q(1));
    CHECK_FALSE(is_orthogonal(v3q(q(1), q(0), q(0)), v3q(q(0, 1), q(1), q(1))));
    CHECK(is_orthogonal(v3q(q(0), q(1), q(1)), v3q(q(0), q(1), q(-1))));
}

TEST_CASE("float orthogonality is relative to the norms") {
    auto u = Vec<double>::v3(1e6, 0, 0);
    auto v = Vec<double>::v3(1e-6, 1e6, 0);  // inner = 1, but norms are 1e6 each
    CHECK(is_orthogonal(u, v, 1e-10));       // 1 <= 1e-10 * 1e12
    CHECK_FALSE(is_orthogonal(Vec<double>::v3(1, 0, 0), Vec<double>::v3(1e-9, 1, 0), 1e-10));
}

TEST_CASE("cross products follow the construction identities") {
    auto a = v3q(q(0), q(0), q(1));
    auto c = v3q(q(2), q(3), q(5));
    CHECK(cross(a, c) == v3q(q(-3), q(2), q(0)));  // (0,0,1) x (x,y,z) = (-y,x,0)

    auto b = v3q(q(7), q(0), q(11));  // (q,0,p) x (x,y,z) = (-py, px-qz, qy)
    CHECK(cross(b, c) == v3q(q(-33), q(22 - 35), q(21)));

    CHECK(inner(cross(b, c), b).is_zero());
    CHECK(inner(cross(b, c), c).is_zero());
    CHECK_THROWS_AS(cross(v3q(q(1), q(0), q(0)), v3q(q(2), q(0), q(0))), DegenerateInput);
}

TEST_CASE("exact canonical form is unique per projective class") {
    CHECK(normalize_canonical(v3q(q(0), q(-2), q(2))) == v3q(q(0), q(1), q(-1)));
    CHECK(normalize_canonical(v3q(q(0, -1), q(-1), q(-1))) == v3q(q(0, 1), q(1), q(1)));

    // scaling by any nonzero field element is invisible
    auto v = v3q(q(0, 2), q(1), q(-1));
    for (QSqrt2 lam : {q(3), q(-1, 2), q(0, -5), q(1, 1)}) {
        CHECK(normalize_canonical(scaled(v, lam)) == normalize_canonical(v));
    }
    CHECK(normalize_canonical(normalize_canonical(v)) == normalize_canonical(v));
    CHECK_THROWS_AS(normalize_canonical(v3q(q(0), q(0), q(0))), ZeroVector);
}

TEST_CASE("exact canonical form reproduces the published presentation") {
    // (2sqrt2, 1, -1) is canonical: dividing by sqrt2 once more would leave odd parts
    auto v16 = v3q(q(0, 2), q(1), q(-1));
    CHECK(normalize_canonical(v16) == v16);
    auto vb = v3q(q(0, 1), q(1), q(1));
    CHECK(normalize_canonical(scaled(vb, q(0, 3))) == vb);
}

TEST_CASE("float canonical form is a signed unit vector") {
    auto v = normalize_canonical(Vec<double>::v3(-3, 0, 4));
    CHECK(v[0] == Catch::Approx(0.6));
    CHECK(v[2] == Catch::Approx(-0.8));
    CHECK(norm(v) == Catch::Approx(1.0));
}

TEST_CASE("frame_from_pair produces the documented frames") {
    auto f = frame_from_pair(Vec<double>::v3(1, 0, 0), Vec<double>::v3(0.6, 0.8, 0));
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(f.cols[static_cast<std::size_t>(i)][k] == Catch::Approx(i == k ? 1.0 : 0.0).margin(1e-15));

    const double p = 0.3, q2 = std::sqrt(1 - p * p);
    auto g = frame_from_pair(Vec<double>::v3(0, 0, 1), Vec<double>::v3(q2, 0, p));
    CHECK(g.cols[0][2] == Catch::Approx(1.0));
    CHECK(g.cols[1][0] == Catch::Approx(1.0));
    CHECK(g.cols[2][1] == Catch::Approx(1.0));

    CHECK_THROWS_AS(frame_from_pair(Vec<double>::v3(1, 0, 0), Vec<double>::v3(1, 0, 0)), DegenerateInput);
}

TEST_CASE("map_pair is a rigid motion carrying one pair onto another") {
    auto a = Vec<double>::v3(1, 0, 0);
    auto b = Vec<double>::v3(0.5, std::sqrt(2.0) / 2, 0.5);

    Mat3 id = map_pair(a, b, a, b);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(id.cols[static_cast<std::size_t>(i)][k] == Catch::Approx(i == k ? 1.0 : 0.0).margin(1e-12));

    auto a2 = unit(Vec<double>::v3(1, 2, -1));
    // rotate b's decomposition into a2's frame by hand to get a pair with the same overlap
    Mat3 f2 = frame_from_pair(a2, unit(Vec<double>::v3(3, -1, 1)));
    const double ov = inner(a, b);
    auto b2 = Vec<double>::v3(ov * f2.cols[0][0] + std::sqrt(1 - ov * ov) * f2.cols[1][0],
                              ov * f2.cols[0][1] + std::sqrt(1 - ov * ov) * f2.cols[1][1],
                              ov * f2.cols[0][2] + std::sqrt(1 - ov * ov) * f2.cols[1][2]);
    Mat3 r = map_pair(a, b, a2, b2);

    auto ra = r.apply(a), rb = r.apply(b);
    for (int k = 0; k < 3; ++k) {
        CHECK(ra[k] == Catch::Approx(a2[k]).margin(1e-12));
        CHECK(rb[k] == Catch::Approx(b2[k]).margin(1e-12));
    }

    // orthogonality: R^T R = I, and inner products survive for random vectors
    Mat3 rtr = r.transposed() * r;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(rtr.cols[static_cast<std::size_t>(i)][k] == Catch::Approx(i == k ? 1.0 : 0.0).margin(1e-12));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> co(-1, 1);
    for (int t = 0; t < 50; ++t) {
        auto u = Vec<double>::v3(co(rng), co(rng), co(rng));
        auto w = Vec<double>::v3(co(rng), co(rng), co(rng));
        CHECK(inner(r.apply(u), r.apply(w)) == Catch::Approx(inner(u, w)).margin(1e-12));
    }

    auto b_mismatch = Vec<double>::v3(0.6, 0.8, 0);
    CHECK_THROWS_AS(map_pair(a, b, a2, f2.cols[1]), OverlapMismatch);
    CHECK_THROWS_AS(map_pair(a, Vec<double>::v3(0.5, std::sqrt(0.75), 0), a, b_mismatch),
                    OverlapMismatch);
}
