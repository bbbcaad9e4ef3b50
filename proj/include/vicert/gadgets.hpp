#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "engine.hpp"
#include "frame.hpp"

namespace vicert {

// What a gadget guarantees: assuming the given anchor values forces the
// listed values (force), or — lemma-1 shape — leaves the `indefinite` anchor
// with no admissible value at all (both extensions contradict).
struct Contract {
    std::vector<std::pair<std::string, int>> assume;
    std::vector<std::pair<std::string, int>> force;
    std::string indefinite;
};

// A reusable orthogonality fragment: vectors in world coordinates plus named
// anchor indices and the forcing contract, which is re-verified by actual
// propagation at construction time (fails loudly on tolerance regressions).
template <class S>
struct Gadget {
    std::vector<Vec<S>> vectors;
    std::map<std::string, int> anchors;
    Contract contract;

    const Vec<S>& anchor(const std::string& name) const {
        return vectors[static_cast<std::size_t>(anchors.at(name))];
    }
};

template <class S>
void verify_gadget(const Gadget<S>& g, double eps) {
    BuildOptions opts;
    opts.epsilon = eps;
    Diagram<S> d = build_diagram(g.vectors, {}, opts);

    std::map<std::string, int> ids;
    for (const auto& [name, idx] : g.anchors) {
        int id = d.find_vector(g.vectors[static_cast<std::size_t>(idx)]);
        if (id < 0) throw ContractViolation("gadget anchor '" + name + "' not found after dedup");
        ids[name] = id;
    }
    Assignment assume;
    for (const auto& [name, v] : g.contract.assume) assume[ids.at(name)] = v;

    if (!g.contract.indefinite.empty()) {
        for (int v : {1, 0}) {
            Assignment seed = assume;
            seed[ids.at(g.contract.indefinite)] = v;
            if (!propagate(d, seed).contradiction)
                throw ContractViolation("gadget contract failed: extension v(" + g.contract.indefinite +
                                        ") = " + std::to_string(v) + " did not contradict");
        }
        return;
    }
    PropagationResult pr = propagate(d, assume);
    if (pr.contradiction)
        throw ContractViolation("gadget contract failed: assumptions already contradict");
    for (const auto& [name, v] : g.contract.force) {
        auto it = pr.assignment.find(ids.at(name));
        if (it == pr.assignment.end() || it->second != v)
            throw ContractViolation("gadget contract failed: v(" + name + ") = " + std::to_string(v) +
                                    " was not forced");
    }
}

namespace detail {

struct T1Entry {
    const char* label;
    int rx, sx, ry, sy, rz, sz;  // coordinate i is r_i + s_i * sqrt(2)
};

// The canonical 37-vector set (entries are already in canonical form).
inline const std::array<T1Entry, 37>& table1_data() {
    static const std::array<T1Entry, 37> data = {{
        {"P_a", 1, 0, 0, 0, 0, 0},
        {"P_b", 0, 1, 1, 0, 1, 0},
        {"P_1", 0, 0, 1, 0, 1, 0},
        {"P_2", 0, 0, 1, 0, -1, 0},
        {"P_3", 0, 1, -1, 0, -1, 0},
        {"P_4", 0, 0, 0, 0, 1, 0},
        {"P_5", 0, 0, 1, 0, 0, 0},
        {"P_6", 0, 1, 1, 0, -3, 0},
        {"P_7", 1, 0, 0, -1, 0, 0},
        {"P_8", 0, 1, -3, 0, 1, 0},
        {"P_9", 1, 0, 0, 0, 0, -1},
        {"P_10", 0, 1, 1, 0, 0, 0},
        {"P_11", 0, 1, 0, 0, 1, 0},
        {"P_12", 0, 1, -2, 0, -3, 0},
        {"P_13", 1, 0, 0, -1, 0, 1},
        {"P_14", 0, 1, -3, 0, -2, 0},
        {"P_15", 1, 0, 0, 1, 0, -1},
        {"P_16", 0, 2, 1, 0, -1, 0},
        {"P_17", 0, 2, -1, 0, 1, 0},
        {"P_18", 0, 1, -7, 0, -3, 0},
        {"P_19", 0, 1, -1, 0, 3, 0},
        {"P_20", 0, 1, -3, 0, -7, 0},
        {"P_21", 0, 1, 3, 0, -1, 0},
        {"P_22", 1, 0, 0, 1, 0, 0},
        {"P_23", 1, 0, 0, 0, 0, 1},
        {"P_24", 0, 1, -1, 0, -3, 0},
        {"P_25", 0, 1, -1, 0, 1, 0},
        {"P_26", 0, 1, -3, 0, -1, 0},
        {"P_27", 0, 1, 1, 0, -1, 0},
        {"P_28", 0, 1, -1, 0, 0, 0},
        {"P_29", 0, 1, 0, 0, -1, 0},
        {"P_30", 0, 1, 2, 0, 3, 0},
        {"P_31", 0, 1, 3, 0, 2, 0},
        {"P_32", 0, 1, 3, 0, 7, 0},
        {"P_33", 0, 1, 7, 0, 3, 0},
        {"P_34", 0, 1, 1, 0, 3, 0},
        {"P_35", 0, 1, 3, 0, 1, 0},
    }};
    return data;
}

inline double measured_overlap(const Vec<double>& a, const Vec<double>& b) {
    return std::abs(inner(unit(a), unit(b)));
}

// Sign-corrected unit copy: observables are projective, and the frame-based
// constructions all want a nonnegative signed overlap.
inline Vec<double> aligned_unit(const Vec<double>& reference, const Vec<double>& v) {
    Vec<double> u = unit(v);
    if (inner(unit(reference), u) < 0) u = negated(u);
    return u;
}

}  // namespace detail

inline const std::vector<Vec<QSqrt2>>& table1_vectors() {
    static const std::vector<Vec<QSqrt2>> vecs = [] {
        std::vector<Vec<QSqrt2>> out;
        for (const auto& e : detail::table1_data())
            out.push_back(Vec<QSqrt2>::v3(QSqrt2(Rational(e.rx), Rational(e.sx)),
                                          QSqrt2(Rational(e.ry), Rational(e.sy)),
                                          QSqrt2(Rational(e.rz), Rational(e.sz))));
        return out;
    }();
    return vecs;
}

inline const std::vector<std::string>& table1_labels() {
    static const std::vector<std::string> labels = [] {
        std::vector<std::string> out;
        for (const auto& e : detail::table1_data()) out.emplace_back(e.label);
        return out;
    }();
    return labels;
}

// The canonical 37-vector set with anchors a = (1,0,0), b = (sqrt2,1,1):
// assuming v(P_a) = 1, neither value of P_b is admissible. Verified by exact
// propagation once, then cached.
inline const Gadget<QSqrt2>& lemma1_canonical() {
    static const Gadget<QSqrt2> g = [] {
        Gadget<QSqrt2> g;
        g.vectors = table1_vectors();
        g.anchors = {{"a", 0}, {"b", 1}};
        g.contract.assume = {{"a", 1}};
        g.contract.indefinite = "b";
        verify_gadget(g, 0.0);
        return g;
    }();
    return g;
}

// Rigid copy of the canonical set carried onto an arbitrary pair with overlap
// 1/sqrt2 (within tol).
inline Gadget<double> lemma1_for(const Vec<double>& a_in, const Vec<double>& b_in,
                                 double tol = 1e-9, double eps = 1e-10) {
    Vec<double> a = unit(a_in);
    Vec<double> b = detail::aligned_unit(a, b_in);
    double p = inner(a, b);
    if (std::abs(p - 1.0 / std::numbers::sqrt2) > tol)
        throw OverlapMismatch("lemma1_for: overlap " + std::to_string(p) + " is not 1/sqrt2");

    Vec<double> a0 = unit(to_double_vec(table1_vectors()[0]));
    Vec<double> b0 = unit(to_double_vec(table1_vectors()[1]));
    Mat3 rot = map_pair(a0, b0, a, b, tol + 1e-12);

    Gadget<double> g;
    for (const auto& v : table1_vectors()) g.vectors.push_back(rot.apply(unit(to_double_vec(v))));
    g.anchors = {{"a", 0}, {"b", 1}};
    g.contract.assume = {{"a", 1}};
    g.contract.indefinite = "b";
    verify_gadget(g, eps);
    return g;
}

// Contraction (overlap -> z): in the frame a = (0,0,1), b = (q,0,p) the vector
// c = (x, +y, z) with x = p(1-z^2)/(qz) satisfies <a|c> = z, and the cross
// products alpha = a x c, beta = b x c, alpha' = a x alpha, beta' = b x beta
// complete three contexts that force v(c) = 1 from v(a) = v(b) = 1.
// The +y branch is chosen; both signs carry the same contract.
inline Gadget<double> contraction(const Vec<double>& a_in, const Vec<double>& b_in, double z,
                                  double eps = 1e-10) {
    Vec<double> a = unit(a_in);
    Vec<double> b = detail::aligned_unit(a, b_in);
    double p = inner(a, b);
    if (!(p > 0.0 && p < 1.0))
        throw PreconditionViolated("contraction: overlap " + std::to_string(p) + " outside (0,1)");
    if (!(p < z && z < 1.0))
        throw PreconditionViolated("contraction: needs overlap < z < 1 (overlap " + std::to_string(p) +
                                   ", z " + std::to_string(z) + ")");
    double q = std::sqrt(1.0 - p * p);

    // frame_from_pair gives e1 = a and b = p e1 + q e2; the construction frame
    // reads a as its z-axis and b's complement as its x-axis.
    Mat3 f = frame_from_pair(a, b);
    Mat3 world{{f.cols[1], f.cols[2], f.cols[0]}};  // columns = (x-axis, y-axis, z-axis)

    double x = p * (1.0 - z * z) / (q * z);
    double y2 = 1.0 - x * x - z * z;
    if (y2 <= 0.0)
        throw PreconditionViolated("contraction: no unit solution for these parameters");
    double y = std::sqrt(y2);

    Vec<double> ap = Vec<double>::v3(0, 0, 1);
    Vec<double> bp = Vec<double>::v3(q, 0, p);
    Vec<double> cp = Vec<double>::v3(x, y, z);
    Vec<double> alpha_p = cross(ap, cp);   // (-y, x, 0)
    Vec<double> beta_p = cross(bp, cp);    // (-py, px - qz, qy)
    Vec<double> alphap_p = cross(ap, alpha_p);
    Vec<double> betap_p = cross(bp, beta_p);

    Gadget<double> g;
    g.vectors = {a,
                 b,
                 world.apply(cp),
                 unit(world.apply(alpha_p)),
                 unit(world.apply(beta_p)),
                 unit(world.apply(alphap_p)),
                 unit(world.apply(betap_p))};
    g.anchors = {{"a", 0}, {"b", 1}, {"c", 2}, {"alpha", 3}, {"beta", 4}, {"alpha_p", 5}, {"beta_p", 6}};
    g.contract.assume = {{"a", 1}, {"b", 1}};
    g.contract.force = {{"c", 1}};

    if (std::abs(inner(g.anchor("a"), g.anchor("c")) - z) > 1e-9)
        throw ContractViolation("contraction: constructed <a|c> drifted from z");
    if (std::abs(inner(g.anchor("alpha"), g.anchor("beta"))) > 1e-9)
        throw ContractViolation("contraction: <alpha|beta> is not zero");
    verify_gadget(g, eps);
    return g;
}

// Expansion (overlap alpha -> 3 - 4/(alpha+1) < alpha): symmetric frame with
// a, b at height beta = sqrt((alpha+1)/2) and c, d at height
// gamma = sqrt(2 - 1/beta^2), chosen exactly so that e = a x c and f = b x c
// are orthogonal (likewise g = a x d, h = b x d). The stated eight vectors do
// not close the contexts {a,e,.}, {b,f,.}, {a,g,.}, {b,h,.}, so the four cross
// completions a x e, b x f, a x g, b x h are added; without them rule (a)
// cannot fire on those pairs.
inline Gadget<double> expansion(const Vec<double>& a_in, const Vec<double>& b_in, double eps = 1e-10) {
    Vec<double> a = unit(a_in);
    Vec<double> b = detail::aligned_unit(a, b_in);
    double al = inner(a, b);
    if (!(al > 1.0 / 3.0 && al < 1.0))
        throw PreconditionViolated("expansion: overlap " + std::to_string(al) + " outside (1/3,1)");

    double beta = std::sqrt((al + 1.0) / 2.0);
    double gamma = std::sqrt(2.0 - 1.0 / (beta * beta));

    Vec<double> sum = Vec<double>::v3(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
    Vec<double> diff = Vec<double>::v3(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
    Vec<double> zh = unit(sum);
    Vec<double> xh = unit(diff);
    Vec<double> yh = cross(zh, xh);
    auto world = [&](double x, double y, double z) {
        return Vec<double>::v3(x * xh[0] + y * yh[0] + z * zh[0],
                               x * xh[1] + y * yh[1] + z * zh[1],
                               x * xh[2] + y * yh[2] + z * zh[2]);
    };

    double sg = std::sqrt(1.0 - gamma * gamma);
    Vec<double> c = world(0, sg, gamma);
    Vec<double> d = world(0, -sg, gamma);
    Vec<double> e = unit(cross(a, c));
    Vec<double> f = unit(cross(b, c));
    Vec<double> gg = unit(cross(a, d));
    Vec<double> h = unit(cross(b, d));

    Gadget<double> g;
    g.vectors = {a, b, c, d, e, f, gg, h,
                 unit(cross(a, e)), unit(cross(b, f)), unit(cross(a, gg)), unit(cross(b, h))};
    g.anchors = {{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}, {"e", 4}, {"f", 5}, {"g", 6}, {"h", 7}};
    g.contract.assume = {{"a", 1}, {"b", 1}};
    g.contract.force = {{"c", 1}, {"d", 1}};

    if (std::abs(inner(e, f)) > 1e-9)
        throw ContractViolation("expansion: <e|f> = " + std::to_string(inner(e, f)) + ", expected 0");
    if (std::abs(inner(gg, h)) > 1e-9)
        throw ContractViolation("expansion: <g|h> = " + std::to_string(inner(gg, h)) + ", expected 0");
    double got = detail::measured_overlap(c, d);
    double want = 3.0 - 4.0 / (al + 1.0);
    if (std::abs(got - want) > 1e-9)
        throw ContractViolation("expansion: overlap(c,d) drifted from the closed form");
    verify_gadget(g, eps);
    return g;
}

// One step of the overlap recursion s(u) = 3 - 4/(u+1): strictly increasing,
// with s(u) < u on (1/3, 1).
inline double overlap_step(double u) {
    if (!(u > 1.0 / 3.0 && u < 1.0))
        throw DomainError("overlap_step: " + std::to_string(u) + " outside (1/3,1)");
    return 3.0 - 4.0 / (u + 1.0);
}

// Guaranteed upper bound on how many expansion steps reach <= 1/3: the
// smallest integer exceeding (alpha0 - 1/3) / D(alpha0), D(u) = u - s(u).
inline std::int64_t iteration_bound(double alpha0) {
    if (!(alpha0 > 1.0 / 3.0 && alpha0 < 1.0))
        throw DomainError("iteration_bound: " + std::to_string(alpha0) + " outside (1/3,1)");
    double d = alpha0 - overlap_step(alpha0);
    if (!(d > 0.0))
        throw DomainError("iteration_bound: alpha0 too close to 1 for a finite float bound");
    return static_cast<std::int64_t>(std::floor((alpha0 - 1.0 / 3.0) / d)) + 1;
}

// The scalar overlap trajectory alpha_{i+1} = s(alpha_i), stopping at the
// first value <= 1/3; the bound acts as a hard cap so a float edge case can
// never loop forever.
struct OverlapTrajectory {
    std::vector<double> alphas;
    int k() const { return static_cast<int>(alphas.size()) - 1; }
};

inline OverlapTrajectory overlap_trajectory(double alpha0) {
    std::int64_t cap = iteration_bound(alpha0);
    OverlapTrajectory t;
    t.alphas.push_back(alpha0);
    while (t.alphas.back() > 1.0 / 3.0) {
        if (t.k() >= cap)
            throw ContractViolation("overlap trajectory exceeded its guaranteed bound");
        t.alphas.push_back(overlap_step(t.alphas.back()));
    }
    return t;
}

// Chained expansion: apply expansion to (a,b), then to each new (c,d), until
// the overlap drops to <= 1/3. The merged vector union keeps every step, so
// v(a)=v(b)=1 forces value 1 down the whole chain onto the final pair.
inline std::pair<Gadget<double>, OverlapTrajectory> iterate_expansion(const Vec<double>& a_in,
                                                                      const Vec<double>& b_in,
                                                                      double eps = 1e-10,
                                                                      int max_k = 1000) {
    Vec<double> a = unit(a_in);
    Vec<double> b = detail::aligned_unit(a, b_in);
    double al0 = inner(a, b);
    if (!(al0 > 1.0 / 3.0 && al0 < 1.0))
        throw PreconditionViolated("iterate_expansion: overlap " + std::to_string(al0) +
                                   " outside (1/3,1)");
    // Overlaps near 1 shrink by only (1-u)^2/2 per step, so the chain length
    // explodes as ~2/(1-u). Pre-count the scalar trajectory (microseconds) and
    // refuse intractable inputs loudly instead of building millions of vectors.
    {
        double u = al0;
        int k = 0;
        while (u > 1.0 / 3.0 && k <= max_k) {
            u = overlap_step(u);
            ++k;
        }
        if (k > max_k)
            throw PreconditionViolated("iterate_expansion: overlap " + std::to_string(al0) +
                                       " needs more than " + std::to_string(max_k) +
                                       " expansion steps; this close to 1 the construction is intractable");
    }
    std::int64_t cap = iteration_bound(al0);

    Gadget<double> g;
    g.vectors = {a, b};
    OverlapTrajectory traj;
    traj.alphas.push_back(al0);

    Vec<double> ca = a, cb = b;
    int c_index = 0, d_index = 1;
    while (traj.alphas.back() > 1.0 / 3.0) {
        if (traj.k() >= cap)
            throw ContractViolation("iterate_expansion exceeded its guaranteed bound");
        Gadget<double> step = expansion(ca, cb, eps);
        int offset = static_cast<int>(g.vectors.size());
        g.vectors.insert(g.vectors.end(), step.vectors.begin(), step.vectors.end());
        c_index = offset + step.anchors.at("c");
        d_index = offset + step.anchors.at("d");
        ca = step.anchor("c");
        cb = detail::aligned_unit(ca, step.anchor("d"));
        traj.alphas.push_back(inner(unit(ca), unit(cb)));
    }

    g.anchors = {{"a", 0}, {"b", 1}, {"c", c_index}, {"d", d_index}};
    g.contract.assume = {{"a", 1}, {"b", 1}};
    g.contract.force = {{"c", 1}, {"d", 1}};
    verify_gadget(g, eps);
    return {std::move(g), std::move(traj)};
}

}  // namespace vicert
