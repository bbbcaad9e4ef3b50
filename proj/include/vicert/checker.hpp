#pragma once

#include <set>

#include "localizer.hpp"

namespace vicert {

struct CheckOptions {
    double epsilon = 1e-8;  // looser than construction to absorb serialization rounding
};

struct Verdict {
    bool ok = true;
    std::vector<std::pair<std::string, std::string>> failures;  // (stage, detail)
    std::vector<std::string> warnings;
    double checker_epsilon = 1e-8;
    double diagram_epsilon = 0.0;
};

namespace detail {

// Warning-level cross-check of logged gadget parameters; the binding checks
// all happen on the serialized vectors and traces, never on these floats.
inline void cross_check_log(const std::vector<GadgetLog>& log, Verdict& v) {
    const double r = 1.0 / std::numbers::sqrt2;
    for (const auto& e : log) {
        auto param = [&](const char* k) {
            auto it = e.params.find(k);
            return it == e.params.end() ? std::nan("") : it->second;
        };
        if (e.gadget == "lemma1") {
            double ov = param("overlap");
            if (!(std::abs(ov - r) <= 1e-6))
                v.warnings.push_back("log: lemma1 overlap " + std::to_string(ov) + " is not ~1/sqrt2");
        } else if (e.gadget == "contraction") {
            double p = param("p"), z = param("z");
            if (!(p > 0.0 && p < z && z < 1.0))
                v.warnings.push_back("log: contraction parameters (p,z) out of order");
        } else if (e.gadget == "iterate_expansion") {
            double ak = param("alpha_k");
            if (!(ak > 0.0 && ak <= 1.0 / 3.0 + 1e-9))
                v.warnings.push_back("log: iteration end overlap " + std::to_string(ak) +
                                     " outside (0,1/3]");
        }
    }
}

}  // namespace detail

// Independent certificate verification. Shares no construction or propagation
// code with the producer: traces are replayed step by step against the
// serialized diagram, checking only the two admissibility rule shapes.
template <class S>
Verdict check_certificate(const Diagram<S>& d, const Certificate& c, const CheckOptions& opt = {}) {
    Verdict v;
    v.checker_epsilon = opt.epsilon;
    v.diagram_epsilon = d.epsilon;
    auto fail = [&](const char* stage, std::string detail) {
        v.ok = false;
        v.failures.emplace_back(stage, std::move(detail));
    };
    const int n = d.size();
    const int dim = d.dim;

    // Stage: orthogonality — every context of the companion diagram is a
    // genuine context: dim distinct in-range members, pairwise orthogonal.
    for (std::size_t ci = 0; ci < d.contexts.size(); ++ci) {
        const auto& m = d.contexts[ci].members;
        if (static_cast<int>(m.size()) != dim) {
            fail("orthogonality", "context " + std::to_string(ci) + " has " +
                                      std::to_string(m.size()) + " members, expected " + std::to_string(dim));
            continue;
        }
        if (std::set<int>(m.begin(), m.end()).size() != m.size()) {
            fail("orthogonality", "context " + std::to_string(ci) + " repeats a member");
            continue;
        }
        bool in_range = true;
        for (int id : m)
            if (id < 0 || id >= n) {
                fail("orthogonality", "context " + std::to_string(ci) + " references unknown observable " +
                                          std::to_string(id));
                in_range = false;
            }
        if (!in_range) continue;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j)
                if (!is_orthogonal(d.vector_of(m[i]), d.vector_of(m[j]), opt.epsilon))
                    fail("orthogonality", "context " + std::to_string(ci) + ": observables " +
                                              std::to_string(m[i]) + " and " + std::to_string(m[j]) +
                                              " are not orthogonal");
    }

    // Stage: seed-shape — the designated pair exists, the declared overlap is
    // what the vectors say, and the branches assume 1 then 0 on P_phi.
    bool pair_ok = c.psi >= 0 && c.psi < n && c.phi >= 0 && c.phi < n;
    if (!pair_ok)
        fail("seed-shape", "psi/phi ids out of range");
    else if (c.psi == c.phi)
        fail("seed-shape", "psi and phi are the same observable");
    else {
        double ov = std::abs(inner(unit(to_double_vec(d.vector_of(c.psi))),
                                   unit(to_double_vec(d.vector_of(c.phi)))));
        if (std::abs(ov - c.overlap) > opt.epsilon)
            fail("seed-shape", "declared overlap " + std::to_string(c.overlap) +
                                   " does not match the vectors (" + std::to_string(ov) + ")");
    }
    if (c.branches[0].assumption != std::pair<int, int>{c.phi, 1} ||
        c.branches[1].assumption != std::pair<int, int>{c.phi, 0})
        fail("seed-shape", "branch assumptions are not v(P_phi)=1 then v(P_phi)=0");

    // Per-branch trace replay.
    for (std::size_t bi = 0; bi < c.branches.size(); ++bi) {
        const BranchProof& b = c.branches[bi];
        const std::string tag = "branch " + std::to_string(bi) + ": ";
        std::vector<int> values(static_cast<std::size_t>(std::max(n, 0)), -1);
        std::vector<std::pair<int, int>> seeds;

        for (std::size_t si = 0; si < b.trace.size(); ++si) {
            const DeductionStep& s = b.trace[si];
            const bool last = si + 1 == b.trace.size();
            const auto [id, val] = s.conclusion;
            if (id < 0 || id >= n || (val != 0 && val != 1)) {
                fail("step-replay", tag + "step " + std::to_string(si) + " has a malformed conclusion");
                continue;
            }
            if (s.rule == Rule::Seed) {
                if (s.context != -1 || !s.premises.empty())
                    fail("seed-shape", tag + "seed step " + std::to_string(si) + " cites a context or premises");
                seeds.push_back(s.conclusion);
            } else {
                if (s.context < 0 || s.context >= static_cast<int>(d.contexts.size())) {
                    fail("context-membership", tag + "step " + std::to_string(si) + " cites unknown context " +
                                                   std::to_string(s.context));
                    continue;
                }
                const Context& ctx = d.contexts[static_cast<std::size_t>(s.context)];
                bool member_ok = ctx.contains(id);
                for (const auto& [pid, pval] : s.premises) member_ok = member_ok && ctx.contains(pid);
                if (!member_ok) {
                    fail("context-membership", tag + "step " + std::to_string(si) +
                                                   " uses observables outside its cited context");
                    continue;
                }
                if (s.rule == Rule::A) {
                    if (s.premises.size() != 1 || s.premises[0].second != 1 || val != 0 ||
                        s.premises[0].first == id) {
                        fail("step-replay", tag + "step " + std::to_string(si) + " is not rule (a) shaped");
                        continue;
                    }
                } else {  // Rule::B
                    std::set<int> cover;
                    bool zeros = true;
                    for (const auto& [pid, pval] : s.premises) {
                        zeros = zeros && pval == 0;
                        cover.insert(pid);
                    }
                    cover.insert(id);
                    if (val != 1 || !zeros || s.premises.size() + 1 != ctx.members.size() ||
                        cover != std::set<int>(ctx.members.begin(), ctx.members.end())) {
                        fail("step-replay", tag + "step " + std::to_string(si) + " is not rule (b) shaped");
                        continue;
                    }
                }
                bool established = true;
                for (const auto& [pid, pval] : s.premises)
                    if (pid < 0 || pid >= n || values[static_cast<std::size_t>(pid)] != pval)
                        established = false;
                if (!established) {
                    fail("step-replay", tag + "step " + std::to_string(si) + " uses an unestablished premise");
                    continue;
                }
            }
            int& slot = values[static_cast<std::size_t>(id)];
            if (slot == -1)
                slot = val;
            else if (slot != val && !last)
                fail("contradiction", tag + "step " + std::to_string(si) +
                                          " conflicts before the final step");
        }

        // Stage: seed-shape — exactly {v(P_psi)=1, the branch assumption}.
        std::set<std::pair<int, int>> want{{c.psi, 1}, {c.phi, b.assumption.second}};
        if (std::set<std::pair<int, int>>(seeds.begin(), seeds.end()) != want || seeds.size() != want.size())
            fail("seed-shape", tag + "seed set is not exactly {v(P_psi)=1, assumption}");

        // Stage: contradiction — the final step opposes an established value.
        const int e = b.contradiction_earlier, l = b.contradiction_later, co = b.contradiction_observable;
        const int len = static_cast<int>(b.trace.size());
        if (e < 0 || l <= e || l != len - 1 || co < 0 || co >= n) {
            fail("contradiction", tag + "conflict indices are malformed");
            continue;
        }
        const auto& early = b.trace[static_cast<std::size_t>(e)].conclusion;
        const auto& late = b.trace[static_cast<std::size_t>(l)].conclusion;
        if (early.first != co || late.first != co || early.second == late.second)
            fail("contradiction", tag + "cited steps do not clash on observable " + std::to_string(co));
        else if (values[static_cast<std::size_t>(co)] != early.second)
            fail("contradiction", tag + "cited earlier value was never established");
    }

    detail::cross_check_log(c.construction_log, v);
    return v;
}

}  // namespace vicert
