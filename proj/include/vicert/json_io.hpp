#pragma once

#include <ctime>
#include <fstream>
#include <string>
#include <type_traits>

#include "json.hpp"

#include "checker.hpp"

namespace vicert {

using ordered_json = nlohmann::ordered_json;

template <class S>
const char* mode_name() {
    if constexpr (std::is_same_v<S, QSqrt2>)
        return "exact";
    else
        return "float";
}

inline ordered_json scalar_to_json(const QSqrt2& s) { return s.to_string(); }
inline ordered_json scalar_to_json(double s) { return s; }

inline void scalar_from_json(const ordered_json& j, QSqrt2& out) {
    if (!j.is_string()) throw ParseError("exact scalar must be a string like \"1+1/2*sqrt2\"");
    out = QSqrt2::parse(j.get<std::string>());
}

inline void scalar_from_json(const ordered_json& j, double& out) {
    if (j.is_number()) {
        out = j.get<double>();
        return;
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            out = QSqrt2::parse(s).to_double();
            return;
        } catch (const ParseError&) {
        }
        try {
            std::size_t pos = 0;
            double d = std::stod(s, &pos);
            if (pos == s.size()) {
                out = d;
                return;
            }
        } catch (const std::exception&) {
        }
        throw ParseError("cannot parse scalar '" + s + "'");
    }
    throw ParseError("float scalar must be a number or a string");
}

template <class S>
ordered_json vec_to_json(const Vec<S>& v) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < v.dim; ++i) arr.push_back(scalar_to_json(v[i]));
    return arr;
}

template <class S>
Vec<S> vec_from_json(const ordered_json& j) {
    if (!j.is_array() || (j.size() != 3 && j.size() != 4))
        throw ParseError("vector must be an array of 3 or 4 scalars");
    std::array<S, 4> c{};
    for (std::size_t i = 0; i < j.size(); ++i) scalar_from_json(j[i], c[i]);
    return j.size() == 3 ? Vec<S>::v3(c[0], c[1], c[2]) : Vec<S>::v4(c[0], c[1], c[2], c[3]);
}

inline std::string json_mode(const ordered_json& j, const std::string& fallback = "float") {
    return j.is_object() ? j.value("mode", fallback) : fallback;
}

// ---- vectors input file: { "mode": ..., "vectors": [ {"label","v"} | [x,y,z] ... ] }

template <class S>
struct VectorsFile {
    std::vector<Vec<S>> vectors;
    std::vector<std::string> labels;
};

template <class S>
VectorsFile<S> vectors_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("vectors") || !j["vectors"].is_array())
        throw ParseError("vectors file needs a 'vectors' array");
    VectorsFile<S> f;
    for (const auto& e : j["vectors"]) {
        if (e.is_array()) {
            f.vectors.push_back(vec_from_json<S>(e));
            f.labels.emplace_back();
        } else if (e.is_object() && e.contains("v")) {
            f.vectors.push_back(vec_from_json<S>(e["v"]));
            f.labels.push_back(e.value("label", std::string{}));
        } else {
            throw ParseError("vectors file entry must be an array or an object with 'v'");
        }
    }
    if (f.vectors.empty()) throw ParseError("vectors file contains no vectors");
    return f;
}

// ---- diagram file

template <class S>
ordered_json diagram_to_json(const Diagram<S>& d, const std::string& timestamp = "") {
    ordered_json j;
    if (!timestamp.empty()) j["generated"] = timestamp;
    j["mode"] = mode_name<S>();
    if constexpr (std::is_same_v<S, double>) j["epsilon"] = d.epsilon;
    ordered_json obs = ordered_json::array();
    for (const auto& o : d.observables) {
        ordered_json e;
        e["id"] = o.id;
        e["label"] = o.label;
        e["vector"] = vec_to_json(o.vector);
        obs.push_back(std::move(e));
    }
    j["observables"] = std::move(obs);
    ordered_json ctxs = ordered_json::array();
    for (const auto& c : d.contexts) ctxs.push_back(c.members);
    j["contexts"] = std::move(ctxs);
    return j;
}

// Deserializes verbatim — no canonicalization or context recomputation; the
// checker judges the file as written.
template <class S>
Diagram<S> diagram_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("observables") || !j.contains("contexts"))
        throw ParseError("diagram file needs 'observables' and 'contexts'");
    if (j.contains("mode") && j["mode"] != mode_name<S>())
        throw ParseError(std::string("diagram mode is not '") + mode_name<S>() + "'");
    Diagram<S> d;
    d.epsilon = j.value("epsilon", 1e-10);
    int next_id = 0;
    for (const auto& e : j["observables"]) {
        if (!e.is_object() || !e.contains("vector")) throw ParseError("observable entry needs 'vector'");
        Observable<S> o;
        o.id = e.value("id", next_id);
        if (o.id != next_id) throw ParseError("observable ids must be dense and ascending");
        o.label = e.value("label", std::string{});
        o.vector = vec_from_json<S>(e["vector"]);
        d.observables.push_back(std::move(o));
        ++next_id;
    }
    if (d.observables.empty()) throw ParseError("diagram has no observables");
    d.dim = d.observables.front().vector.dim;
    for (const auto& o : d.observables)
        if (o.vector.dim != d.dim) throw ParseError("diagram mixes vector dimensions");
    for (const auto& c : j["contexts"]) {
        if (!c.is_array()) throw ParseError("context must be an array of observable ids");
        Context ctx;
        for (const auto& id : c) {
            if (!id.is_number_integer()) throw ParseError("context member must be an integer id");
            ctx.members.push_back(id.get<int>());
        }
        d.contexts.push_back(std::move(ctx));
    }
    return d;
}

// ---- deduction steps / propagation trace file

inline ordered_json step_to_json(const DeductionStep& s) {
    ordered_json j;
    j["context"] = s.context;
    j["rule"] = rule_name(s.rule);
    ordered_json prem = ordered_json::array();
    for (const auto& [id, val] : s.premises) prem.push_back(ordered_json::array({id, val}));
    j["premises"] = std::move(prem);
    j["conclusion"] = ordered_json::array({s.conclusion.first, s.conclusion.second});
    return j;
}

inline std::pair<int, int> id_value_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError("expected an [id, value] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

inline DeductionStep step_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("rule") || !j.contains("conclusion"))
        throw ParseError("trace step needs 'rule' and 'conclusion'");
    DeductionStep s;
    s.context = j.value("context", -1);
    const std::string r = j["rule"].get<std::string>();
    if (r == "seed")
        s.rule = Rule::Seed;
    else if (r == "A")
        s.rule = Rule::A;
    else if (r == "B")
        s.rule = Rule::B;
    else
        throw ParseError("unknown rule '" + r + "'");
    if (j.contains("premises"))
        for (const auto& p : j["premises"]) s.premises.push_back(id_value_from_json(p));
    s.conclusion = id_value_from_json(j["conclusion"]);
    return s;
}

inline ordered_json trace_to_json(const PropagationResult& r, const std::string& timestamp = "") {
    ordered_json j;
    if (!timestamp.empty()) j["generated"] = timestamp;
    j["verdict"] = r.contradiction ? "CONTRADICTION" : "FIXPOINT";
    if (r.contradiction) {
        ordered_json c;
        c["observable"] = r.conflict_observable;
        c["earlier"] = r.conflict_earlier;
        c["later"] = r.conflict_later;
        j["conflict"] = std::move(c);
    }
    ordered_json asg;
    for (const auto& [id, v] : r.assignment) asg[std::to_string(id)] = v;
    j["assignment"] = std::move(asg);
    ordered_json steps = ordered_json::array();
    for (const auto& s : r.trace) steps.push_back(step_to_json(s));
    j["steps"] = std::move(steps);
    return j;
}

inline PropagationResult trace_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("verdict")) throw ParseError("trace file needs 'verdict'");
    PropagationResult r;
    r.contradiction = j["verdict"] == "CONTRADICTION";
    if (j.contains("conflict")) {
        r.conflict_observable = j["conflict"].value("observable", -1);
        r.conflict_earlier = j["conflict"].value("earlier", -1);
        r.conflict_later = j["conflict"].value("later", -1);
    }
    if (j.contains("assignment"))
        for (const auto& [k, v] : j["assignment"].items()) r.assignment[std::stoi(k)] = v.get<int>();
    if (j.contains("steps"))
        for (const auto& s : j["steps"]) r.trace.push_back(step_from_json(s));
    return r;
}

// ---- certificate file

inline ordered_json certificate_to_json(const Certificate& c, const std::string& timestamp = "") {
    ordered_json j;
    if (!timestamp.empty()) j["generated"] = timestamp;
    j["psi"] = c.psi;
    j["phi"] = c.phi;
    j["overlap"] = c.overlap;
    j["path"] = c.path;
    ordered_json log = ordered_json::array();
    for (const auto& g : c.construction_log) {
        ordered_json e;
        e["gadget"] = g.gadget;
        e["role"] = g.role;
        ordered_json params;
        for (const auto& [k, v] : g.params) params[k] = v;
        e["params"] = std::move(params);
        ordered_json anchors;
        for (const auto& [k, v] : g.anchors) anchors[k] = vec_to_json(v);
        e["anchors"] = std::move(anchors);
        log.push_back(std::move(e));
    }
    j["construction_log"] = std::move(log);
    ordered_json branches = ordered_json::array();
    for (const auto& b : c.branches) {
        ordered_json e;
        e["assumption"] = ordered_json::array({b.assumption.first, b.assumption.second});
        ordered_json steps = ordered_json::array();
        for (const auto& s : b.trace) steps.push_back(step_to_json(s));
        e["trace"] = std::move(steps);
        ordered_json conflict;
        conflict["observable"] = b.contradiction_observable;
        conflict["earlier"] = b.contradiction_earlier;
        conflict["later"] = b.contradiction_later;
        e["contradiction"] = std::move(conflict);
        branches.push_back(std::move(e));
    }
    j["branches"] = std::move(branches);
    return j;
}

inline Certificate certificate_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("psi") || !j.contains("phi") || !j.contains("branches"))
        throw ParseError("certificate file needs 'psi', 'phi' and 'branches'");
    Certificate c;
    c.psi = j["psi"].get<int>();
    c.phi = j["phi"].get<int>();
    c.overlap = j.value("overlap", 0.0);
    c.path = j.value("path", std::string{});
    if (j.contains("construction_log"))
        for (const auto& e : j["construction_log"]) {
            GadgetLog g;
            g.gadget = e.value("gadget", std::string{});
            g.role = e.value("role", std::string{});
            if (e.contains("params"))
                for (const auto& [k, v] : e["params"].items()) g.params[k] = v.get<double>();
            if (e.contains("anchors"))
                for (const auto& [k, v] : e["anchors"].items()) g.anchors.emplace(k, vec_from_json<double>(v));
            c.construction_log.push_back(std::move(g));
        }
    if (!j["branches"].is_array() || j["branches"].size() != 2)
        throw ParseError("certificate needs exactly two branches");
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& e = j["branches"][i];
        BranchProof b;
        b.assumption = id_value_from_json(e.at("assumption"));
        if (e.contains("trace"))
            for (const auto& s : e["trace"]) b.trace.push_back(step_from_json(s));
        if (e.contains("contradiction")) {
            b.contradiction_observable = e["contradiction"].value("observable", -1);
            b.contradiction_earlier = e["contradiction"].value("earlier", -1);
            b.contradiction_later = e["contradiction"].value("later", -1);
        }
        c.branches[i] = std::move(b);
    }
    return c;
}

// ---- files and timestamps

inline ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw ParseError("failed writing " + path);
}

inline std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    if (std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t)) == 0) return "";
    return buf;
}

}  // namespace vicert
