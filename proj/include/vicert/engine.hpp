#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "diagram.hpp"

namespace vicert {

// Partial two-valued assignment: observable id -> 0/1. Absent means undefined
// ("value indefinite" once stable). Conflicts are never stored — they surface
// as a Contradiction result.
using Assignment = std::map<int, int>;

enum class Rule : std::uint8_t { Seed, A, B };

inline const char* rule_name(Rule r) { return r == Rule::Seed ? "seed" : r == Rule::A ? "A" : "B"; }

// One deduction: rule A (a 1 in the context zeroes the rest, premise = the 1)
// or rule B (all-but-one zeros force the last to 1, premises = the zeros).
// Seed steps have context -1 and no premises.
struct DeductionStep {
    int context = -1;
    Rule rule = Rule::Seed;
    std::vector<std::pair<int, int>> premises;
    std::pair<int, int> conclusion{-1, -1};
};

struct PropagationResult {
    bool contradiction = false;
    int conflict_observable = -1;
    // Trace indices of the two steps deriving opposite values; the later one
    // is always the final trace entry.
    int conflict_earlier = -1;
    int conflict_later = -1;
    Assignment assignment;  // deductive closure (pre-conflict when contradicting)
    std::vector<DeductionStep> trace;
};

namespace detail {

struct RuleInstance {
    DeductionStep step;
    bool conflicts;  // conclusion opposes a stored value
};

// All rule instances applicable to the current values, in deterministic order:
// context id ascending, rule A before rule B, members ascending. Fresh
// instances conclude on undefined observables; conflicting ones oppose a
// stored value.
inline std::vector<RuleInstance> applicable(const std::vector<Context>& contexts,
                                            const std::vector<std::int8_t>& values) {
    std::vector<RuleInstance> out;
    for (std::size_t ci = 0; ci < contexts.size(); ++ci) {
        const auto& m = contexts[ci].members;
        int one = -1;
        int zeros = 0;
        for (int id : m) {
            if (values[static_cast<std::size_t>(id)] == 1 && one < 0) one = id;
            if (values[static_cast<std::size_t>(id)] == 0) ++zeros;
        }
        if (one >= 0) {
            for (int id : m) {
                if (id == one) continue;
                std::int8_t v = values[static_cast<std::size_t>(id)];
                if (v == 0) continue;
                out.push_back({{static_cast<int>(ci), Rule::A, {{one, 1}}, {id, 0}}, v == 1});
            }
        }
        if (zeros >= static_cast<int>(m.size()) - 1) {
            for (int id : m) {
                bool others_zero = true;
                for (int other : m)
                    if (other != id && values[static_cast<std::size_t>(other)] != 0) {
                        others_zero = false;
                        break;
                    }
                if (!others_zero) continue;
                std::int8_t v = values[static_cast<std::size_t>(id)];
                if (v == 1) continue;
                std::vector<std::pair<int, int>> prem;
                for (int other : m)
                    if (other != id) prem.emplace_back(other, 0);
                out.push_back({{static_cast<int>(ci), Rule::B, std::move(prem), {id, 1}}, v == 0});
            }
        }
    }
    return out;
}

struct PropagationState {
    std::vector<std::int8_t> values;  // -1 undefined
    std::vector<int> step_of;         // trace index that defined each value
    PropagationResult result;

    PropagationState(int n, const Assignment& seed)
        : values(static_cast<std::size_t>(n), -1), step_of(static_cast<std::size_t>(n), -1) {
        for (const auto& [id, v] : seed) {
            if (id < 0 || id >= n) throw UnknownObservable("seed references unknown observable id " + std::to_string(id));
            if (v != 0 && v != 1) throw DomainError("seed value must be 0 or 1");
            apply({-1, Rule::Seed, {}, {id, v}});
        }
    }

    void apply(DeductionStep step) {
        int id = step.conclusion.first;
        values[static_cast<std::size_t>(id)] = static_cast<std::int8_t>(step.conclusion.second);
        step_of[static_cast<std::size_t>(id)] = static_cast<int>(result.trace.size());
        result.trace.push_back(std::move(step));
    }

    PropagationResult finish_conflict(DeductionStep step) {
        int id = step.conclusion.first;
        result.contradiction = true;
        result.conflict_observable = id;
        result.conflict_earlier = step_of[static_cast<std::size_t>(id)];
        result.conflict_later = static_cast<int>(result.trace.size());
        result.trace.push_back(std::move(step));
        snapshot();
        return std::move(result);
    }

    PropagationResult finish_fixpoint() {
        snapshot();
        return std::move(result);
    }

    void snapshot() {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] >= 0) result.assignment[static_cast<int>(i)] = values[i];
    }
};

}  // namespace detail

// Runs rules (a)/(b) to a fixpoint in deterministic rounds. Each round gathers
// every applicable instance; if any instance opposes a stored value the first
// such (context order) terminates the run as a Contradiction BEFORE fresh
// values are applied — so the reported closure is a pure deductive state, and
// the verdict does not depend on how context ids fall inside a round.
inline PropagationResult propagate(const std::vector<Context>& contexts, int n, const Assignment& seed) {
    detail::PropagationState st(n, seed);
    for (;;) {
        auto insts = detail::applicable(contexts, st.values);
        for (auto& inst : insts)
            if (inst.conflicts) return st.finish_conflict(std::move(inst.step));
        bool any = false;
        for (auto& inst : insts) {
            int id = inst.step.conclusion.first;
            std::int8_t have = st.values[static_cast<std::size_t>(id)];
            if (have < 0) {
                st.apply(std::move(inst.step));
                any = true;
            } else if (have != inst.step.conclusion.second) {
                // Two instances of this same round concluded opposite values.
                return st.finish_conflict(std::move(inst.step));
            }
        }
        if (!any) return st.finish_fixpoint();
    }
}

// Same rules, but applies ONE uniformly random applicable instance at a time.
// Used to demonstrate order independence of the verdict and of fixpoint
// closures (contradiction location may legitimately vary).
inline PropagationResult propagate_random(const std::vector<Context>& contexts, int n,
                                          const Assignment& seed, std::mt19937& rng) {
    detail::PropagationState st(n, seed);
    for (;;) {
        auto insts = detail::applicable(contexts, st.values);
        if (insts.empty()) return st.finish_fixpoint();
        auto& pick = insts[std::uniform_int_distribution<std::size_t>(0, insts.size() - 1)(rng)];
        if (pick.conflicts) return st.finish_conflict(std::move(pick.step));
        st.apply(std::move(pick.step));
    }
}

// Literal admissibility check, no propagation. Note the strict reading: a
// context (1,0,undefined) is NOT admissible — rule (a) requires the remaining
// members to be defined and 0, and (0,0,undefined) violates rule (b) the same
// way.
inline bool is_admissible(const std::vector<Context>& contexts, int n, const Assignment& a) {
    std::vector<std::int8_t> values(static_cast<std::size_t>(n), -1);
    for (const auto& [id, v] : a) {
        if (id < 0 || id >= n) throw UnknownObservable("assignment references unknown observable id " + std::to_string(id));
        values[static_cast<std::size_t>(id)] = static_cast<std::int8_t>(v);
    }
    for (const auto& c : contexts) {
        for (int id : c.members) {
            if (values[static_cast<std::size_t>(id)] == 1) {
                for (int other : c.members)
                    if (other != id && values[static_cast<std::size_t>(other)] != 0) return false;
            }
            bool others_zero = true;
            for (int other : c.members)
                if (other != id && values[static_cast<std::size_t>(other)] != 0) others_zero = false;
            if (others_zero && values[static_cast<std::size_t>(id)] != 1) return false;
        }
    }
    return true;
}

struct SearchResult {
    std::vector<Assignment> assignments;
    bool capped = false;
};

// Exhaustive search for TOTAL admissible assignments, propagate-pruned
// backtracking on the first undefined observable. An empty result is an exact
// proof that no total admissible assignment exists (the KS property); a capped
// result only bounds the count from below.
inline SearchResult search_total_admissible(const std::vector<Context>& contexts, int n, int cap = 16) {
    SearchResult res;
    auto rec = [&](auto&& self, const Assignment& seed) -> void {
        if (res.capped) return;
        PropagationResult pr = propagate(contexts, n, seed);
        if (pr.contradiction) return;
        if (static_cast<int>(pr.assignment.size()) == n) {
            if (is_admissible(contexts, n, pr.assignment)) {
                if (static_cast<int>(res.assignments.size()) == cap) {
                    res.capped = true;
                    return;
                }
                res.assignments.push_back(pr.assignment);
            }
            return;
        }
        int branch = -1;
        for (int id = 0; id < n; ++id)
            if (!pr.assignment.count(id)) {
                branch = id;
                break;
            }
        for (int v : {1, 0}) {
            Assignment next = pr.assignment;
            next[branch] = v;
            self(self, next);
            if (res.capped) return;
        }
    };
    rec(rec, {});
    return res;
}

// Convenience wrappers over a diagram.
template <class S>
PropagationResult propagate(const Diagram<S>& d, const Assignment& seed) {
    return propagate(d.contexts, d.size(), seed);
}

template <class S>
bool is_admissible(const Diagram<S>& d, const Assignment& a) {
    return is_admissible(d.contexts, d.size(), a);
}

template <class S>
SearchResult search_total_admissible(const Diagram<S>& d, int cap = 16) {
    return search_total_admissible(d.contexts, d.size(), cap);
}

}  // namespace vicert
