#pragma once

#include <algorithm>

#include "gadgets.hpp"

namespace vicert {

struct LocalizeOptions {
    double epsilon = 1e-10;        // diagram orthogonality tolerance
    double window = 1e-9;          // |p - 1/sqrt2| <= window routes to the direct copy
    double degenerate_eps = 1e-10; // p within this of 0 or 1 is rejected as degenerate
    double dup_tol = 1e-9;         // projective dedup resolution of the output diagram
    int max_iterate_k = 1000;      // tractability cap on chained expansions
};

struct GadgetLog {
    std::string gadget;  // "lemma1" | "contraction" | "iterate_expansion" | "branch0_frame"
    std::string role;    // "branch1" | "branch0"
    std::map<std::string, double> params;
    std::map<std::string, Vec<double>> anchors;
};

struct BranchProof {
    std::pair<int, int> assumption;  // (phi id, assumed value)
    std::vector<DeductionStep> trace;
    int contradiction_observable = -1;
    int contradiction_earlier = -1;  // trace indices of the two clashing steps
    int contradiction_later = -1;
};

struct Certificate {
    int psi = -1;  // observable ids in the companion diagram
    int phi = -1;
    double overlap = 0.0;
    std::string path;  // "direct" | "contract+lemma1" | "iterate(k)+contract+lemma1"
    std::vector<GadgetLog> construction_log;
    std::array<BranchProof, 2> branches;  // assumed v(P_phi) = 1 first, then 0
};

struct LocalizeResult {
    Diagram<double> diagram;
    Certificate certificate;
};

namespace detail {

inline GadgetLog log_gadget(std::string kind, std::string role, const Gadget<double>& g,
                            std::map<std::string, double> params) {
    GadgetLog l;
    l.gadget = std::move(kind);
    l.role = std::move(role);
    l.params = std::move(params);
    for (const auto& [name, idx] : g.anchors)
        l.anchors.emplace(name, g.vectors[static_cast<std::size_t>(idx)]);
    return l;
}

struct Branch1Build {
    std::vector<Vec<double>> vectors;
    std::vector<GadgetLog> log;
    std::string path;
};

// The value-1 machinery for a unit, sign-aligned pair (a,b): a vector set on
// which v(P_a) = 1 leaves P_b without any admissible value. Route on the
// overlap p: copy the canonical set directly at 1/sqrt2 (reachable only via
// the snapped window, so p is exact there to ulps); below it, contract the
// pair up to 1/sqrt2 first; above it, expand until the overlap drops under
// 1/3 and then contract.
inline Branch1Build build_branch1(const Vec<double>& a, const Vec<double>& b,
                                  const std::string& role, const LocalizeOptions& opt) {
    const double r = 1.0 / std::numbers::sqrt2;
    const double p = inner(a, b);
    Branch1Build out;

    if (std::abs(p - r) <= 1e-12) {
        Gadget<double> l1 = lemma1_for(a, b, opt.window, opt.epsilon);
        out.vectors = l1.vectors;
        out.log.push_back(log_gadget("lemma1", role, l1, {{"overlap", p}}));
        out.path = "direct";
        return out;
    }

    if (p < r) {
        Gadget<double> ctr = contraction(a, b, r, opt.epsilon);
        Gadget<double> l1 = lemma1_for(ctr.anchor("a"), ctr.anchor("c"), opt.window, opt.epsilon);
        out.vectors = ctr.vectors;
        out.vectors.insert(out.vectors.end(), l1.vectors.begin(), l1.vectors.end());
        out.log.push_back(log_gadget("contraction", role, ctr, {{"p", p}, {"z", r}}));
        out.log.push_back(log_gadget("lemma1", role, l1,
                                     {{"overlap", measured_overlap(ctr.anchor("a"), ctr.anchor("c"))}}));
        out.path = "contract+lemma1";
        return out;
    }

    auto [chain, traj] = iterate_expansion(a, b, opt.epsilon, opt.max_iterate_k);
    const double p_k = traj.alphas.back();
    if (!(p_k > 0.0 && p_k <= 1.0 / 3.0))
        throw ContractViolation("iteration left overlap " + std::to_string(p_k) + " outside (0,1/3]");
    Gadget<double> ctr = contraction(chain.anchor("c"), chain.anchor("d"), r, opt.epsilon);
    Gadget<double> l1 = lemma1_for(ctr.anchor("a"), ctr.anchor("c"), opt.window, opt.epsilon);
    out.vectors = chain.vectors;
    out.vectors.insert(out.vectors.end(), ctr.vectors.begin(), ctr.vectors.end());
    out.vectors.insert(out.vectors.end(), l1.vectors.begin(), l1.vectors.end());
    out.log.push_back(log_gadget("iterate_expansion", role, chain,
                                 {{"k", static_cast<double>(traj.k())},
                                  {"alpha0", traj.alphas.front()},
                                  {"alpha_k", p_k}}));
    out.log.push_back(log_gadget("contraction", role, ctr, {{"p", p_k}, {"z", r}}));
    out.log.push_back(log_gadget("lemma1", role, l1,
                                 {{"overlap", measured_overlap(ctr.anchor("a"), ctr.anchor("c"))}}));
    out.path = "iterate(" + std::to_string(traj.k()) + ")+contract+lemma1";
    return out;
}

}  // namespace detail

// The full localization pipeline: a finite diagram containing P_psi and P_phi
// plus a two-branch certificate that, given v(P_psi) = 1, neither value of
// P_phi is admissible. Both branch traces are produced on the merged diagram
// and re-verified to end in contradiction; any tolerance breakdown surfaces
// here as a thrown error, never as a quietly wrong certificate.
inline LocalizeResult localize(const Vec<double>& psi_in, const Vec<double>& phi_in,
                               const LocalizeOptions& opt = {}) {
    const double r = 1.0 / std::numbers::sqrt2;
    Vec<double> psi = unit(psi_in);
    Vec<double> phi = detail::aligned_unit(psi, phi_in);
    double p = inner(psi, phi);
    if (p <= opt.degenerate_eps) throw DegenerateOverlap(p, false);
    // a pair inside the projective dedup resolution would collapse to a single
    // observable in the output diagram, so it is degenerate at this precision
    if (p >= 1.0 - std::max(opt.degenerate_eps, opt.dup_tol)) throw DegenerateOverlap(p, true);

    // Inputs inside the window are rotated in-plane so the pool holds ONE phi
    // whose overlap with psi is 1/sqrt2 exact to ulps. The rigid canonical
    // copy is anchored on that same pool vector; snapping after pooling (or
    // not at all) would leave the copy's contexts up to ~window off
    // orthogonality, far beyond the construction tolerance.
    if (std::abs(p - r) <= opt.window) {
        Vec<double> u = unit(Vec<double>::v3(phi[0] - p * psi[0], phi[1] - p * psi[1], phi[2] - p * psi[2]));
        phi = unit(Vec<double>::v3(psi[0] + u[0], psi[1] + u[1], psi[2] + u[2]));
        p = inner(psi, phi);
    }

    detail::Branch1Build b1 = detail::build_branch1(psi, phi, "branch1", opt);

    // Zero branch: in the frame psi = (1,0,0), phi = (p,q,0) add alpha =
    // (0,1,0), beta = (0,0,1) and phi' = (q,-p,0) (sign-corrected so that
    // <phi|phi'> = 0 genuinely holds). Seeding v(P_psi)=1, v(P_phi)=0 forces
    // v(P_phi')=1 through {psi,alpha,beta} and {phi,phi',beta}; the value-1
    // machinery then applies to (psi, phi'), whose overlap is q != 1/sqrt2
    // whenever p != 1/sqrt2, so the recursion has depth exactly 1.
    Mat3 f = frame_from_pair(psi, phi);
    const double q = std::sqrt(1.0 - p * p);
    Vec<double> alpha = f.cols[1];
    Vec<double> beta = f.cols[2];
    Vec<double> phi_prime = unit(Vec<double>::v3(q * f.cols[0][0] - p * f.cols[1][0],
                                                 q * f.cols[0][1] - p * f.cols[1][1],
                                                 q * f.cols[0][2] - p * f.cols[1][2]));
    detail::Branch1Build b0 = detail::build_branch1(psi, phi_prime, "branch0", opt);

    std::vector<Vec<double>> pool;
    std::vector<std::string> labels;
    auto add = [&](const Vec<double>& v, const std::string& label) {
        pool.push_back(v);
        labels.push_back(label);
    };
    add(psi, "P_psi");
    add(phi, "P_phi");
    for (const auto& v : b1.vectors) add(v, "");
    add(alpha, "P_alpha");
    add(beta, "P_beta");
    add(phi_prime, "P_phi_prime");
    for (const auto& v : b0.vectors) add(v, "");

    BuildOptions bo;
    bo.epsilon = opt.epsilon;
    bo.dup_tol = opt.dup_tol;
    Diagram<double> d = build_diagram(pool, labels, bo);

    const int psi_id = d.find_vector(psi);
    const int phi_id = d.find_vector(phi);
    if (psi_id < 0 || phi_id < 0)
        throw ContractViolation("localize: seed pair lost during deduplication");
    if (psi_id == phi_id)
        throw DegenerateOverlap(p, true);  // projectively identical at dedup resolution

    Certificate cert;
    cert.psi = psi_id;
    cert.phi = phi_id;
    cert.overlap = p;
    cert.path = b1.path;
    cert.construction_log = b1.log;
    GadgetLog frame_log;
    frame_log.gadget = "branch0_frame";
    frame_log.role = "branch0";
    frame_log.params = {{"p", p}, {"q", q}};
    frame_log.anchors = {{"psi", psi}, {"phi", phi}, {"alpha", alpha}, {"beta", beta},
                         {"phi_prime", phi_prime}};
    cert.construction_log.push_back(std::move(frame_log));
    cert.construction_log.insert(cert.construction_log.end(), b0.log.begin(), b0.log.end());

    for (int i = 0; i < 2; ++i) {
        const int v = (i == 0) ? 1 : 0;
        PropagationResult pr = propagate(d, Assignment{{psi_id, 1}, {phi_id, v}});
        if (!pr.contradiction)
            throw ContractViolation("localize: branch v(P_phi) = " + std::to_string(v) +
                                    " reached a fixpoint instead of a contradiction");
        BranchProof bp;
        bp.assumption = {phi_id, v};
        bp.trace = std::move(pr.trace);
        bp.contradiction_observable = pr.conflict_observable;
        bp.contradiction_earlier = pr.conflict_earlier;
        bp.contradiction_later = pr.conflict_later;
        cert.branches[static_cast<std::size_t>(i)] = std::move(bp);
    }
    return {std::move(d), std::move(cert)};
}

// Fig.-5-style classification of the state space relative to psi: projective
// equality forces 1, orthogonality forces 0, and everything in between is
// value indefinite by the localization theorem.
enum class StarClass { Forced1, Forced0, Indefinite };

inline const char* star_class_name(StarClass c) {
    switch (c) {
        case StarClass::Forced1: return "Forced1";
        case StarClass::Forced0: return "Forced0";
        default: return "Indefinite";
    }
}

inline std::vector<StarClass> classify_star(const Vec<double>& psi,
                                            const std::vector<Vec<double>>& others,
                                            double eps = 1e-10, double dup_tol = 1e-9) {
    Vec<double> u = unit(psi);
    std::vector<StarClass> out;
    out.reserve(others.size());
    for (const auto& o : others) {
        Vec<double> w = unit(o);
        if (proj_equal(u, w, dup_tol))
            out.push_back(StarClass::Forced1);
        else if (is_orthogonal(u, w, eps))
            out.push_back(StarClass::Forced0);
        else
            out.push_back(StarClass::Indefinite);
    }
    return out;
}

}  // namespace vicert
