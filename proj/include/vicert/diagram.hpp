#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "vec.hpp"

namespace vicert {

// A context is a maximal set of mutually orthogonal observables — an
// orthogonal triple in dimension 3, a tetrad in dimension 4. Members are
// sorted observable ids.
struct Context {
    std::vector<int> members;

    friend bool operator==(const Context& a, const Context& b) { return a.members == b.members; }
    bool contains(int id) const { return std::find(members.begin(), members.end(), id) != members.end(); }
};

template <class S>
struct Observable {
    int id = -1;
    Vec<S> vector;
    std::string label;  // optional, e.g. "P_a"
};

struct BuildOptions {
    double epsilon = 1e-10;  // float-mode orthogonality tolerance (relative)
    double dup_tol = 1e-9;   // float-mode projective dedup: merge when 1-|cos| <= dup_tol
};

inline bool is_orthogonal(const Vec<QSqrt2>& u, const Vec<QSqrt2>& v, double /*eps*/ = 0.0) {
    return inner(u, v).is_zero();
}

inline bool is_orthogonal(const Vec<double>& u, const Vec<double>& v, double eps = 1e-10) {
    return std::abs(inner(u, v)) <= eps * norm(u) * norm(v);
}

// Observables plus their full context hypergraph (a Greechie diagram).
// Immutable after construction; the context list is always ALL size-dim
// mutually orthogonal subsets of the observables, so admissibility deductions
// quantify over exactly the contexts that exist geometrically.
template <class S>
struct Diagram {
    int dim = 3;
    double epsilon = 1e-10;  // meaningful in float mode only
    std::vector<Observable<S>> observables;
    std::vector<Context> contexts;
    std::vector<std::string> warnings;  // near-threshold pairs, merged duplicates

    int size() const { return static_cast<int>(observables.size()); }

    std::vector<int> ids_with_label(const std::string& label) const {
        std::vector<int> out;
        for (const auto& o : observables)
            if (o.label == label) out.push_back(o.id);
        return out;
    }

    // Projective lookup; -1 if absent.
    int find_vector(const Vec<S>& v, double tol = 1e-9) const {
        Vec<S> cv = normalize_canonical(v);
        for (const auto& o : observables)
            if (proj_equal(o.vector, cv, tol)) return o.id;
        return -1;
    }

    const Vec<S>& vector_of(int id) const { return observables[static_cast<std::size_t>(id)].vector; }
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);  // keep lowest input index as root
    }

private:
    std::vector<std::size_t> parent_;
};

// Class representatives in first-occurrence order: exact mode groups by
// canonical form (exact equality), float mode by union-find over
// near-projective-equality so chains of almost-identical copies merge.
template <class S>
std::vector<std::size_t> dedup_classes(const std::vector<Vec<S>>& canon, double dup_tol) {
    std::vector<std::size_t> cls(canon.size());
    if constexpr (std::is_same_v<S, QSqrt2>) {
        std::map<std::vector<std::string>, std::size_t> seen;  // exact key: coordinate strings
        for (std::size_t i = 0; i < canon.size(); ++i) {
            std::vector<std::string> key;
            for (int k = 0; k < canon[i].dim; ++k) key.push_back(canon[i][k].to_string());
            cls[i] = seen.emplace(std::move(key), i).first->second;
        }
    } else {
        UnionFind uf(canon.size());
        for (std::size_t i = 0; i < canon.size(); ++i)
            for (std::size_t j = i + 1; j < canon.size(); ++j)
                if (proj_equal(canon[i], canon[j], dup_tol)) uf.unite(i, j);
        for (std::size_t i = 0; i < canon.size(); ++i) cls[i] = uf.find(i);
    }
    return cls;
}

}  // namespace detail

// Builds the diagram for a vector list: canonicalize, deduplicate projective
// copies (warning, not error), sort representatives for dense deterministic
// ids, then enumerate ALL mutually orthogonal size-dim subsets as contexts.
template <class S>
Diagram<S> build_diagram(const std::vector<Vec<S>>& vectors,
                         const std::vector<std::string>& labels = {},
                         const BuildOptions& opts = {}) {
    if (vectors.empty()) throw DomainError("build_diagram: empty vector list");
    const int dim = vectors.front().dim;
    if (dim != 3 && dim != 4) throw DomainError("build_diagram: dimension must be 3 or 4");

    std::vector<Vec<S>> canon;
    canon.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (v.dim != dim) throw DomainError("build_diagram: mixed dimensions");
        canon.push_back(normalize_canonical(v));  // throws ZeroVector
    }

    Diagram<S> d;
    d.dim = dim;
    d.epsilon = opts.epsilon;

    std::vector<std::size_t> cls = detail::dedup_classes(canon, opts.dup_tol);

    // Group inputs per class root, preserving input order inside each group.
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < canon.size(); ++i) groups[cls[i]].push_back(i);

    struct Entry {
        Vec<S> rep;
        std::string label;
        std::size_t merged;
    };
    std::vector<Entry> entries;
    for (auto& [root, members] : groups) {
        Entry e{canon[members.front()], "", members.size()};
        for (std::size_t m : members) {
            if (m < labels.size() && !labels[m].empty()) {
                e.label = labels[m];  // first-writer-wins
                break;
            }
        }
        entries.push_back(std::move(e));
        if (members.size() > 1)
            d.warnings.push_back("merged " + std::to_string(members.size()) +
                                 " duplicate inputs into one observable " + vec_to_string(canon[members.front()]));
    }

    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return vec_less(a.rep, b.rep); });

    const int n = static_cast<int>(entries.size());
    for (int i = 0; i < n; ++i)
        d.observables.push_back({i, entries[static_cast<std::size_t>(i)].rep,
                                 entries[static_cast<std::size_t>(i)].label});

    // Orthogonality adjacency as bitsets; float mode also flags pairs whose
    // residual sits just above the tolerance (phantom-context guard).
    const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> adj(static_cast<std::size_t>(n),
                                                std::vector<std::uint64_t>(words, 0));
    auto set_bit = [&](int i, int j) { adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) / 64] |= 1ull << (static_cast<std::size_t>(j) % 64); };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec<S>& u = d.observables[static_cast<std::size_t>(i)].vector;
            const Vec<S>& v = d.observables[static_cast<std::size_t>(j)].vector;
            if (is_orthogonal(u, v, opts.epsilon)) {
                set_bit(i, j);
                set_bit(j, i);
            } else if constexpr (std::is_same_v<S, double>) {
                double ratio = std::abs(inner(u, v)) / (norm(u) * norm(v));
                if (ratio <= 10 * opts.epsilon)
                    d.warnings.push_back("near-threshold pair (" + std::to_string(i) + "," +
                                         std::to_string(j) + "): |cos| = " + std::to_string(ratio));
            }
        }
    }

    auto bit = [&](int i, int j) {
        return (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) / 64] >> (static_cast<std::size_t>(j) % 64)) & 1ull;
    };
    std::vector<std::uint64_t> both(words);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!bit(i, j)) continue;
            for (std::size_t w = 0; w < words; ++w)
                both[w] = adj[static_cast<std::size_t>(i)][w] & adj[static_cast<std::size_t>(j)][w];
            for (int k = j + 1; k < n; ++k) {
                if (!((both[static_cast<std::size_t>(k) / 64] >> (static_cast<std::size_t>(k) % 64)) & 1ull)) continue;
                if (dim == 3) {
                    d.contexts.push_back({{i, j, k}});
                } else {
                    for (int l = k + 1; l < n; ++l)
                        if (bit(i, l) && bit(j, l) && bit(k, l)) d.contexts.push_back({{i, j, k, l}});
                }
            }
        }
    }
    return d;
}

// Union of observable sets with contexts recomputed over the union. The
// recomputation can create contexts absent from both inputs; admissibility
// quantifies over all contexts, so extra ones only strengthen deductions.
template <class S>
Diagram<S> merge(const Diagram<S>& d1, const Diagram<S>& d2) {
    if (d1.observables.empty()) return d2;
    if (d2.observables.empty()) return d1;
    if (d1.dim != d2.dim) throw DomainError("merge: dimension mismatch");
    std::vector<Vec<S>> vectors;
    std::vector<std::string> labels;
    for (const auto* d : {&d1, &d2})
        for (const auto& o : d->observables) {
            vectors.push_back(o.vector);
            labels.push_back(o.label);
        }
    BuildOptions opts;
    opts.epsilon = d1.epsilon;
    return build_diagram(vectors, labels, opts);
}

}  // namespace vicert
