// vicert: build orthogonality diagrams for rank-1 observable sets, run the
// admissibility rules, construct localized value-indefiniteness certificates,
// and verify them independently.
//
// Exit codes: 0 success / verified, 1 semantic failure, 2 usage or IO error.

#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vicert/vicert.hpp"

namespace {

using namespace vicert;

struct GlobalOpts {
    std::string mode = "float";
    bool mode_set = false;
    double epsilon = 1e-10;
    bool epsilon_set = false;
    std::string out;
    bool no_timestamp = false;

    std::string stamp() const { return no_timestamp ? std::string{} : iso_now(); }
};

std::string replace_ext(const std::string& path, const std::string& new_ext) {
    const std::size_t slash = path.find_last_of("/\\");
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + new_ext;
    return path.substr(0, dot) + new_ext;
}

std::string resolve_mode(const GlobalOpts& g, const ordered_json& j) {
    if (g.mode_set) return g.mode;
    return json_mode(j, "float");
}

double parse_scalar_arg(std::string tok) {
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    try {
        return QSqrt2::parse(tok).to_double();
    } catch (const ParseError&) {
    }
    try {
        std::size_t pos = 0;
        double d = std::stod(tok, &pos);
        if (pos == tok.size()) return d;
    } catch (const std::exception&) {
    }
    throw ParseError("cannot parse scalar '" + tok + "'");
}

Vec<double> parse_vec3_arg(const std::string& s) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        parts.push_back(parse_scalar_arg(s.substr(start, comma - start)));
        start = comma + 1;
    }
    if (parts.size() != 3) throw ParseError("expected three comma-separated coordinates in '" + s + "'");
    return Vec<double>::v3(parts[0], parts[1], parts[2]);
}

template <class S>
int resolve_observable(const Diagram<S>& d, const std::string& key) {
    for (const std::string& label : {key, "P_" + key}) {
        std::vector<int> ids = d.ids_with_label(label);
        if (ids.size() > 1) throw ParseError("label '" + label + "' is ambiguous");
        if (ids.size() == 1) return ids.front();
    }
    if (!key.empty() && key.find_first_not_of("0123456789") == std::string::npos) {
        int id = std::stoi(key);
        if (id >= 0 && id < d.size()) return id;
    }
    throw UnknownObservable("no observable with label or id '" + key + "'");
}

// ---- build

template <class S>
int run_build(const ordered_json& j, const GlobalOpts& g, const std::string& in_path) {
    VectorsFile<S> f = vectors_from_json<S>(j);
    BuildOptions bo;
    bo.epsilon = g.epsilon;
    Diagram<S> d = build_diagram(f.vectors, f.labels, bo);
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
    const std::string out = g.out.empty() ? replace_ext(in_path, ".diagram.json") : g.out;
    write_text_file(out, dump_json(diagram_to_json(d, g.stamp())));
    std::cout << d.size() << " observables, " << d.contexts.size() << " contexts\n";
    return 0;
}

// ---- propagate

template <class S>
int run_propagate(const ordered_json& j, const GlobalOpts& g, const std::string& in_path,
                  const std::vector<std::string>& sets, const std::string& expect) {
    Diagram<S> d = diagram_from_json<S>(j);
    Assignment seed;
    for (const auto& s : sets) {
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("--set expects label=value or id=value, got '" + s + "'");
        const std::string key = s.substr(0, eq), val = s.substr(eq + 1);
        if (val != "0" && val != "1") throw ParseError("--set value must be 0 or 1, got '" + val + "'");
        const int id = resolve_observable(d, key);
        const int v = val == "1" ? 1 : 0;
        auto it = seed.find(id);
        if (it != seed.end() && it->second != v)
            throw ParseError("--set assigns both values to observable " + std::to_string(id));
        seed[id] = v;
    }
    PropagationResult r = propagate(d, seed);
    const std::string out = g.out.empty() ? replace_ext(in_path, ".trace.json") : g.out;
    write_text_file(out, dump_json(trace_to_json(r, g.stamp())));
    if (r.contradiction)
        std::cout << "CONTRADICTION at observable " << r.conflict_observable << "\n";
    else
        std::cout << "FIXPOINT\n";
    std::cout << "defined: " << r.assignment.size() << " of " << d.size() << "\n";
    if (!expect.empty()) {
        const std::string got = r.contradiction ? "CONTRADICTION" : "FIXPOINT";
        if (got != expect) {
            std::cerr << "expected " << expect << ", got " << got << "\n";
            return 1;
        }
    }
    return 0;
}

// ---- search

template <class S>
int run_search(const ordered_json& j, int cap) {
    Diagram<S> d = diagram_from_json<S>(j);
    SearchResult res = search_total_admissible(d, cap);
    if (res.capped) {
        std::cout << "≥" << cap << " (capped)\n";
        return 0;
    }
    for (const auto& a : res.assignments) {
        std::cout << "assignment:";
        for (const auto& [id, v] : a) std::cout << ' ' << id << '=' << v;
        std::cout << "\n";
    }
    std::cout << res.assignments.size() << " total admissible assignments\n";
    return 0;
}

// ---- localize

int run_localize(const GlobalOpts& g, const std::string& psi_s, const std::string& phi_s) {
    if (g.mode_set && g.mode == "exact")
        throw ParseError("localize requires float mode: its gadgets need radicals outside Q(sqrt2)");
    LocalizeOptions lo;
    lo.epsilon = g.epsilon;
    LocalizeResult res;
    try {
        res = localize(parse_vec3_arg(psi_s), parse_vec3_arg(phi_s), lo);
    } catch (const DegenerateOverlap& e) {
        std::cout << "DEGENERATE: " << e.what() << "\n";
        return 0;
    }
    Verdict v = check_certificate(res.diagram, res.certificate);
    if (!v.ok) {
        for (const auto& [stage, detail] : v.failures)
            std::cerr << "self-check failed [" << stage << "] " << detail << "\n";
        return 1;
    }
    const std::string prefix = g.out.empty() ? "localize" : g.out;
    write_text_file(prefix + ".diagram.json", dump_json(diagram_to_json(res.diagram, g.stamp())));
    write_text_file(prefix + ".certificate.json",
                    dump_json(certificate_to_json(res.certificate, g.stamp())));
    std::cout << "path: " << res.certificate.path << "\n";
    std::cout << res.diagram.size() << " observables, " << res.diagram.contexts.size() << " contexts\n";
    std::cout << "overlap: " << std::setprecision(15) << res.certificate.overlap
              << std::setprecision(6) << "\n";
    std::cout << "both branches contradict\n";
    return 0;
}

// ---- check

template <class S>
int run_check(const ordered_json& dj, const std::string& cert_path, const GlobalOpts& g) {
    Diagram<S> d = diagram_from_json<S>(dj);
    Certificate c = certificate_from_json(read_json_file(cert_path));
    CheckOptions co;
    if (g.epsilon_set) co.epsilon = g.epsilon;
    Verdict v = check_certificate(d, c, co);
    for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
    if (v.ok) {
        std::cout << "OK\n";
        return 0;
    }
    for (const auto& [stage, detail] : v.failures) std::cout << "FAIL [" << stage << "] " << detail << "\n";
    return 1;
}

// ---- export

template <class S>
int run_export(const ordered_json& j, const GlobalOpts& g, const std::string& in_path,
               const std::string& format, const std::string& trace_path) {
    if (format != "dot") throw ParseError("unsupported export format '" + format + "'");
    Diagram<S> d = diagram_from_json<S>(j);
    Assignment a;
    bool have_a = false;
    if (!trace_path.empty()) {
        a = trace_from_json(read_json_file(trace_path)).assignment;
        have_a = true;
    }
    const std::string out = g.out.empty() ? replace_ext(in_path, ".dot") : g.out;
    write_text_file(out, export_dot(d, have_a ? &a : nullptr, g.stamp()));
    std::cout << d.size() << " nodes, " << d.contexts.size() << " hyperedges\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"rank-1 observable sets, admissibility deduction, and localized value-indefiniteness certificates"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--mode", g.mode, "scalar mode: exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--epsilon", g.epsilon, "orthogonality tolerance (float mode)");
    app.add_option("--out", g.out, "output path (prefix for localize)");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit generated timestamps from outputs");

    std::string build_in;
    auto* build = app.add_subcommand("build", "construct the orthogonality diagram for a vector list");
    build->add_option("input", build_in, "vectors JSON file")->required();
    build->fallthrough();

    std::string prop_in, prop_expect;
    std::vector<std::string> prop_sets;
    auto* prop = app.add_subcommand("propagate", "run the admissibility rules from seed values");
    prop->add_option("input", prop_in, "diagram JSON file")->required();
    prop->add_option("--set", prop_sets, "seed assignment label=value or id=value (repeatable)");
    prop->add_option("--expect", prop_expect, "fail unless the verdict matches")
        ->check(CLI::IsMember({"FIXPOINT", "CONTRADICTION"}));
    prop->fallthrough();

    std::string search_in;
    int search_cap = 16;
    auto* search = app.add_subcommand("search", "enumerate total admissible assignments");
    search->add_option("input", search_in, "diagram JSON file")->required();
    search->add_option("--cap", search_cap, "stop after this many assignments");
    search->fallthrough();

    std::string loc_psi, loc_phi;
    auto* loc = app.add_subcommand("localize", "construct a value-indefiniteness certificate for a pair");
    loc->add_option("--psi", loc_psi, "seed vector, comma-separated coordinates")->required();
    loc->add_option("--phi", loc_phi, "target vector, comma-separated coordinates")->required();
    loc->fallthrough();

    std::string check_d, check_c;
    auto* check = app.add_subcommand("check", "independently verify a certificate against its diagram");
    check->add_option("diagram", check_d, "diagram JSON file")->required();
    check->add_option("certificate", check_c, "certificate JSON file")->required();
    check->fallthrough();

    std::string exp_in, exp_format = "dot", exp_trace;
    auto* exp = app.add_subcommand("export", "export a diagram for rendering");
    exp->add_option("input", exp_in, "diagram JSON file")->required();
    exp->add_option("--format", exp_format, "output format (dot)");
    exp->add_option("--assignment", exp_trace, "trace JSON whose closure styles the nodes");
    exp->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    g.mode_set = app.count("--mode") > 0;
    g.epsilon_set = app.count("--epsilon") > 0;

    if (*build) {
        ordered_json j = read_json_file(build_in);
        return resolve_mode(g, j) == "exact" ? run_build<QSqrt2>(j, g, build_in)
                                             : run_build<double>(j, g, build_in);
    }
    if (*prop) {
        ordered_json j = read_json_file(prop_in);
        return resolve_mode(g, j) == "exact"
                   ? run_propagate<QSqrt2>(j, g, prop_in, prop_sets, prop_expect)
                   : run_propagate<double>(j, g, prop_in, prop_sets, prop_expect);
    }
    if (*search) {
        ordered_json j = read_json_file(search_in);
        return resolve_mode(g, j) == "exact" ? run_search<QSqrt2>(j, search_cap)
                                             : run_search<double>(j, search_cap);
    }
    if (*loc) return run_localize(g, loc_psi, loc_phi);
    if (*check) {
        ordered_json dj = read_json_file(check_d);
        return resolve_mode(g, dj) == "exact" ? run_check<QSqrt2>(dj, check_c, g)
                                              : run_check<double>(dj, check_c, g);
    }
    if (*exp) {
        ordered_json j = read_json_file(exp_in);
        return resolve_mode(g, j) == "exact" ? run_export<QSqrt2>(j, g, exp_in, exp_format, exp_trace)
                                             : run_export<double>(j, g, exp_in, exp_format, exp_trace);
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const vicert::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vicert::UnknownObservable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vicert::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vicert::ZeroVector& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vicert::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
