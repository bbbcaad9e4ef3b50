#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "test_util.hpp"

using namespace vicert;
using testutil::data_dir;
using testutil::golden_dir;
using testutil::table1_diagram;

namespace {

std::set<std::set<std::string>> context_label_sets(const Diagram<QSqrt2>& d) {
    std::set<std::set<std::string>> out;
    for (const auto& c : d.contexts) {
        std::set<std::string> s;
        for (int id : c.members) s.insert(d.observables[static_cast<std::size_t>(id)].label);
        out.insert(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("the canonical 37-vector set yields exactly the published 26 contexts") {
    const auto& d = table1_diagram();
    REQUIRE(d.size() == 37);
    REQUIRE(d.contexts.size() == 26);
    CHECK(d.warnings.empty());

    auto got = context_label_sets(d);
    auto gj = read_json_file(golden_dir() + "/table2_contexts.json");
    std::set<std::set<std::string>> want;
    for (const auto& c : gj["contexts"]) {
        std::set<std::string> s;
        for (const auto& l : c) s.insert(l.get<std::string>());
        want.insert(std::move(s));
    }
    REQUIRE(want.size() == 26);
    CHECK(got == want);
}

TEST_CASE("small diagrams: single basis and incomplete triples") {
    std::vector<Vec<QSqrt2>> basis = {Vec<QSqrt2>::v3(QSqrt2(1), QSqrt2(0), QSqrt2(0)),
                                      Vec<QSqrt2>::v3(QSqrt2(0), QSqrt2(1), QSqrt2(0)),
                                      Vec<QSqrt2>::v3(QSqrt2(0), QSqrt2(0), QSqrt2(1))};
    auto d = build_diagram(basis);
    CHECK(d.size() == 3);
    REQUIRE(d.contexts.size() == 1);
    CHECK(d.contexts[0].members == std::vector<int>({0, 1, 2}));

    basis.pop_back();
    auto d2 = build_diagram(basis);
    CHECK(d2.size() == 2);
    CHECK(d2.contexts.empty());
}

TEST_CASE("projective duplicates merge with a warning; zero vectors are errors") {
    std::vector<Vec<QSqrt2>> vs = {Vec<QSqrt2>::v3(QSqrt2(1), QSqrt2(0), QSqrt2(0)),
                                   Vec<QSqrt2>::v3(QSqrt2(-2), QSqrt2(0), QSqrt2(0))};
    auto d = build_diagram(vs, {"P_x", "P_y"});
    CHECK(d.size() == 1);
    CHECK(d.observables[0].label == "P_x");  // first writer wins
    CHECK_FALSE(d.warnings.empty());

    vs.push_back(Vec<QSqrt2>::v3(QSqrt2(0), QSqrt2(0), QSqrt2(0)));
    CHECK_THROWS_AS(build_diagram(vs), ZeroVector);
}

TEST_CASE("build is deterministic and ids follow canonical sort order") {
    auto load = [] {
        auto j = read_json_file(data_dir() + "/table1.json");
        auto f = vectors_from_json<QSqrt2>(j);
        std::reverse(f.vectors.begin(), f.vectors.end());
        std::reverse(f.labels.begin(), f.labels.end());
        return build_diagram(f.vectors, f.labels);
    };
    auto d1 = load();
    const auto& d0 = table1_diagram();
    REQUIRE(d1.size() == d0.size());
    for (int i = 0; i < d1.size(); ++i) {
        CHECK(d1.observables[static_cast<std::size_t>(i)].vector ==
              d0.observables[static_cast<std::size_t>(i)].vector);
        CHECK(d1.observables[static_cast<std::size_t>(i)].label ==
              d0.observables[static_cast<std::size_t>(i)].label);
    }
    CHECK(d1.contexts.size() == d0.contexts.size());
    for (std::size_t i = 0; i < d1.contexts.size(); ++i)
        CHECK(d1.contexts[i].members == d0.contexts[i].members);
}

TEST_CASE("every emitted context is pairwise orthogonal") {
    const auto& d = table1_diagram();
    for (const auto& c : d.contexts) {
        REQUIRE(c.members.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j)
                CHECK(is_orthogonal(d.vector_of(c.members[i]), d.vector_of(c.members[j])));
    }
}

TEST_CASE("merge is idempotent and ignores empty inputs") {
    const auto& d = table1_diagram();
    auto dd = merge(d, d);
    CHECK(dd.size() == d.size());
    CHECK(dd.contexts.size() == d.contexts.size());
    for (int i = 0; i < d.size(); ++i)
        CHECK(dd.observables[static_cast<std::size_t>(i)].vector ==
              d.observables[static_cast<std::size_t>(i)].vector);

    Diagram<QSqrt2> empty;
    auto de = merge(empty, d);
    CHECK(de.size() == d.size());
}

TEST_CASE("merging a gadget that shares anchors dedups the shared pair") {
    // float copy of the canonical diagram, then a contraction gadget on (P_a, P_b)
    std::vector<Vec<double>> fv;
    std::vector<std::string> fl;
    for (const auto& o : table1_diagram().observables) {
        fv.push_back(to_double_vec(o.vector));
        fl.push_back(o.label);
    }
    auto d1 = build_diagram(fv, fl);
    REQUIRE(d1.size() == 37);
    REQUIRE(d1.contexts.size() == 26);

    auto exact_lm = testutil::label_map(table1_diagram());
    auto a = to_double_vec(table1_diagram().vector_of(exact_lm.at("P_a")));
    auto b = to_double_vec(table1_diagram().vector_of(exact_lm.at("P_b")));
    auto g = contraction(unit(a), unit(b), 0.9);

    auto d2 = build_diagram(g.vectors);
    auto m = merge(d1, d2);
    CHECK(m.size() == 37 + 7 - 2);  // a and b shared, c/alpha/beta/alpha'/beta' new
    CHECK(m.contexts.size() >= d1.contexts.size() + 3);
    CHECK(testutil::label_map(m).count("P_a") == 1);  // labels survive the merge
}

TEST_CASE("near-threshold float pairs warn instead of silently deciding") {
    std::vector<Vec<double>> vs = {Vec<double>::v3(1, 0, 0), Vec<double>::v3(3e-10, 1, 0)};
    BuildOptions opts;
    opts.epsilon = 1e-10;
    auto d = build_diagram(vs, {}, opts);
    CHECK(d.contexts.empty());
    bool warned = false;
    for (const auto& w : d.warnings) warned = warned || w.find("near") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("the bundled 18-observable four-dimensional set") {
    auto d = testutil::load_diagram_from_vectors<QSqrt2>(data_dir() + "/cabello18.json");
    REQUIRE(d.dim == 4);
    REQUIRE(d.size() == 18);
    REQUIRE(d.contexts.size() == 9);
    std::map<int, int> in_contexts;
    for (const auto& c : d.contexts) {
        REQUIRE(c.members.size() == 4);
        for (int id : c.members) in_contexts[id]++;
    }
    for (const auto& [id, count] : in_contexts) CHECK(count == 2);
    CHECK(in_contexts.size() == 18);
}

TEST_CASE("diagram JSON round-trips losslessly in both modes") {
    const auto& d = table1_diagram();
    auto j = diagram_to_json(d);
    auto d2 = diagram_from_json<QSqrt2>(j);
    CHECK(d2.size() == d.size());
    CHECK(d2.contexts.size() == d.contexts.size());
    for (int i = 0; i < d.size(); ++i) {
        CHECK(d2.observables[static_cast<std::size_t>(i)].vector ==
              d.observables[static_cast<std::size_t>(i)].vector);
        CHECK(d2.observables[static_cast<std::size_t>(i)].label ==
              d.observables[static_cast<std::size_t>(i)].label);
    }

    std::vector<Vec<double>> fv = {Vec<double>::v3(1, 0, 0), Vec<double>::v3(0, 0.6, 0.8)};
    auto fd = build_diagram(fv);
    auto fj = diagram_to_json(fd);
    auto fd2 = diagram_from_json<double>(fj);
    REQUIRE(fd2.size() == 2);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(fd2.observables[static_cast<std::size_t>(i)].vector[k] ==
                  fd.observables[static_cast<std::size_t>(i)].vector[k]);  // bit-exact via JSON

    CHECK_THROWS_AS(diagram_from_json<double>(j), ParseError);  // mode mismatch caught
}

TEST_CASE("DOT export styles the closure") {
    const auto& d = table1_diagram();
    auto lm = testutil::label_map(d);
    Assignment a{{lm.at("P_a"), 1}, {lm.at("P_1"), 0}};
    std::string dot = export_dot(d, &a);
    CHECK(dot.find("graph greechie") != std::string::npos);
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(std::count(dot.begin(), dot.end(), '\n') > 37);
}
