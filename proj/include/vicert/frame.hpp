#pragma once

#include <cmath>

#include "vec.hpp"

namespace vicert {

// Column-major orthogonal 3x3 transform over doubles. Only the float backend
// needs frames: gadget math involves nested radicals outside Q(sqrt2).
struct Mat3 {
    // cols[j] is the image of the j-th basis vector.
    std::array<Vec<double>, 3> cols;

    Vec<double> apply(const Vec<double>& v) const {
        Vec<double> r = Vec<double>::v3(0, 0, 0);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) r[i] += cols[static_cast<std::size_t>(j)][i] * v[j];
        return r;
    }

    Mat3 transposed() const {
        Mat3 t;
        t.cols = {Vec<double>::v3(cols[0][0], cols[1][0], cols[2][0]),
                  Vec<double>::v3(cols[0][1], cols[1][1], cols[2][1]),
                  Vec<double>::v3(cols[0][2], cols[1][2], cols[2][2])};
        return t;
    }

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int j = 0; j < 3; ++j) r.cols[static_cast<std::size_t>(j)] = a.apply(b.cols[static_cast<std::size_t>(j)]);
        return r;
    }
};

// Right-handed orthonormal frame (e1,e2,e3) with e1 = a and b inside
// span(e1,e2) with positive e2 component (Gram-Schmidt on the pair).
inline Mat3 frame_from_pair(const Vec<double>& a, const Vec<double>& b) {
    Vec<double> e1 = unit(a);
    Vec<double> bu = unit(b);
    double p = inner(e1, bu);
    Vec<double> rest = Vec<double>::v3(bu[0] - p * e1[0], bu[1] - p * e1[1], bu[2] - p * e1[2]);
    double n = norm(rest);
    if (n < 1e-12) throw DegenerateInput("frame_from_pair: vectors are parallel");
    Vec<double> e2 = Vec<double>::v3(rest[0] / n, rest[1] / n, rest[2] / n);
    Vec<double> e3 = cross(e1, e2);
    return Mat3{{e1, e2, e3}};
}

// Orthogonal transform R = F(a2,b2) * F(a,b)^T with R a = a2 and R b = b2.
//
// The signed overlaps must agree, not just their magnitudes: if <a|b> and
// <a2|b2> differ in sign no orthogonal map sends the pair onto the pair.
// Observables are projective, so callers flip one vector's sign beforehand.
inline Mat3 map_pair(const Vec<double>& a, const Vec<double>& b,
                     const Vec<double>& a2, const Vec<double>& b2,
                     double eps = 1e-10) {
    double o1 = inner(unit(a), unit(b));
    double o2 = inner(unit(a2), unit(b2));
    if (std::abs(o1 - o2) > eps)
        throw OverlapMismatch("map_pair: signed overlaps differ (" + std::to_string(o1) + " vs " +
                              std::to_string(o2) + ")");
    return frame_from_pair(a2, b2) * frame_from_pair(a, b).transposed();
}

}  // namespace vicert
