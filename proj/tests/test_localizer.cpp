#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"

using namespace vicert;

namespace {

Vec<double> v3d(double x, double y, double z) { return Vec<double>::v3(x, y, z); }

Vec<double> phi_at(double p) { return unit(v3d(p, std::sqrt(1.0 - p * p), 0)); }

const GadgetLog& log_entry(const Certificate& c, const std::string& gadget, const std::string& role) {
    for (const auto& l : c.construction_log)
        if (l.gadget == gadget && l.role == role) return l;
    FAIL("missing construction log entry " << gadget << "/" << role);
    static GadgetLog dummy;
    return dummy;
}

void require_valid(const LocalizeResult& res) {
    const auto& c = res.certificate;
    REQUIRE(c.psi >= 0);
    REQUIRE(c.phi >= 0);
    REQUIRE(c.psi != c.phi);
    CHECK(c.branches[0].assumption == std::pair<int, int>(c.phi, 1));
    CHECK(c.branches[1].assumption == std::pair<int, int>(c.phi, 0));
    for (const auto& b : c.branches) {
        REQUIRE_FALSE(b.trace.empty());
        CHECK(b.contradiction_later == static_cast<int>(b.trace.size()) - 1);
        CHECK(b.contradiction_earlier >= 0);
        CHECK(b.contradiction_earlier < b.contradiction_later);
        CHECK(b.contradiction_observable >= 0);
    }
    auto v = check_certificate(res.diagram, c);
    INFO("checker failures: " << (v.failures.empty() ? "" : v.failures[0].second));
    CHECK(v.ok);
}

}  // namespace

TEST_CASE("localization below the canonical overlap contracts first") {
    auto res = localize(v3d(1, 0, 0), phi_at(0.2));
    CHECK(res.certificate.path == "contract+lemma1");
    CHECK(res.diagram.size() == 1039);
    CHECK(res.diagram.contexts.size() == 632);
    CHECK(res.certificate.overlap == Catch::Approx(0.2).margin(1e-15));
    require_valid(res);

    // the log records the zero branch's deep recursion: q = sqrt(1 - 0.04)
    const auto& it = log_entry(res.certificate, "iterate_expansion", "branch0");
    CHECK(it.params.at("k") == 96.0);
    CHECK(it.params.at("alpha0") == Catch::Approx(std::sqrt(0.96)).margin(1e-15));
    CHECK(log_entry(res.certificate, "branch0_frame", "branch0").params.at("q") ==
          Catch::Approx(std::sqrt(0.96)).margin(1e-15));

    auto mid = localize(v3d(1, 0, 0), phi_at(0.5));
    CHECK(mid.certificate.path == "contract+lemma1");
    CHECK(mid.diagram.size() == 199);
    CHECK(mid.diagram.contexts.size() == 128);
    CHECK(log_entry(mid.certificate, "iterate_expansion", "branch0").params.at("k") == 12.0);
    require_valid(mid);
}

TEST_CASE("localization above the canonical overlap expands until contractible") {
    auto res = localize(v3d(1, 0, 0), phi_at(0.95));
    CHECK(res.certificate.path == "iterate(37)+contract+lemma1");
    CHECK(res.diagram.size() == 449);
    CHECK(res.diagram.contexts.size() == 278);
    require_valid(res);

    const auto& it = log_entry(res.certificate, "iterate_expansion", "branch1");
    CHECK(it.params.at("k") == 37.0);
    CHECK(it.params.at("alpha_k") <= 1.0 / 3.0);
    CHECK(it.params.at("alpha_k") > 0.0);
    // the zero branch overlap is under 1/sqrt2, so it contracts without iterating
    CHECK(log_entry(res.certificate, "contraction", "branch0").params.at("p") ==
          Catch::Approx(std::sqrt(1 - 0.95 * 0.95)).margin(1e-12));
}

TEST_CASE("localization at the canonical overlap reuses the rigid copy wholesale") {
    auto res = localize(v3d(1, 0, 0), v3d(1, 1, 0));
    CHECK(res.certificate.path == "direct");
    // every branch-0 vector dedups onto the canonical copy: exactly the 37/26 set
    CHECK(res.diagram.size() == 37);
    CHECK(res.diagram.contexts.size() == 26);
    require_valid(res);

    CHECK(res.diagram.observables[static_cast<std::size_t>(res.certificate.psi)].label == "P_psi");
    CHECK(res.diagram.observables[static_cast<std::size_t>(res.certificate.phi)].label == "P_phi");
}

TEST_CASE("overlaps a hair off 1/sqrt2 are snapped into the direct window") {
    auto res = localize(v3d(1, 0, 0), v3d(1, 1 + 2e-10, 0));
    CHECK(res.certificate.path == "direct");
    CHECK(res.diagram.size() == 37);
    CHECK(res.diagram.contexts.size() == 26);
    CHECK(res.certificate.overlap == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    require_valid(res);
}

TEST_CASE("localization is frame independent") {
    auto psi = unit(v3d(1, 2, 3));
    Vec<double> u = unit(cross(psi, v3d(0, 0, 1)));
    auto phi = unit(v3d(0.5 * psi[0] + std::sqrt(0.75) * u[0], 0.5 * psi[1] + std::sqrt(0.75) * u[1],
                        0.5 * psi[2] + std::sqrt(0.75) * u[2]));
    auto res = localize(psi, phi);
    CHECK(res.certificate.path == "contract+lemma1");
    CHECK(res.certificate.overlap == Catch::Approx(0.5).margin(1e-12));
    require_valid(res);
}

TEST_CASE("the zero branch frame forces phi_prime = 1 when v(P_phi) = 0") {
    auto res = localize(v3d(1, 0, 0), phi_at(0.5));
    const auto& fr = log_entry(res.certificate, "branch0_frame", "branch0");
    std::vector<Vec<double>> five = {fr.anchors.at("psi"), fr.anchors.at("phi"), fr.anchors.at("alpha"),
                                     fr.anchors.at("beta"), fr.anchors.at("phi_prime")};
    auto d = build_diagram(five);
    REQUIRE(d.size() == 5);
    REQUIRE(d.contexts.size() == 2);  // {psi,alpha,beta} and {phi,phi_prime,beta}
    int psi_id = d.find_vector(five[0]);
    int phi_id = d.find_vector(five[1]);
    auto pr = propagate(d, {{psi_id, 1}, {phi_id, 0}});
    REQUIRE_FALSE(pr.contradiction);
    CHECK(pr.assignment.at(d.find_vector(five[2])) == 0);  // alpha
    CHECK(pr.assignment.at(d.find_vector(five[3])) == 0);  // beta
    CHECK(pr.assignment.at(d.find_vector(five[4])) == 1);  // phi_prime
}

TEST_CASE("degenerate pairs are rejected with the forced value named") {
    try {
        localize(v3d(1, 0, 0), v3d(0, 1, 0));
        FAIL("expected DegenerateOverlap");
    } catch (const DegenerateOverlap& e) {
        CHECK_FALSE(e.near_one);
        CHECK(e.overlap <= 1e-10);
    }
    try {
        localize(v3d(1, 0, 0), v3d(-2, 0, 0));
        FAIL("expected DegenerateOverlap");
    } catch (const DegenerateOverlap& e) {
        CHECK(e.near_one);
    }
    // inside the projective dedup resolution: degenerate at this precision
    double p = 1 - 5e-10;
    CHECK_THROWS_AS(localize(v3d(1, 0, 0), phi_at(p)), DegenerateOverlap);
}

TEST_CASE("intractably extreme overlaps fail loudly up front") {
    CHECK_THROWS_AS(localize(v3d(1, 0, 0), phi_at(1 - 5e-9)), PreconditionViolated);
    CHECK_THROWS_AS(localize(v3d(1, 0, 0), phi_at(0.01)), PreconditionViolated);
    CHECK_THROWS_AS(localize(v3d(0, 0, 0), v3d(1, 0, 0)), ZeroVector);
}

TEST_CASE("star classification matches the forced/indefinite trichotomy") {
    auto psi = v3d(1, 0, 0);
    std::vector<Vec<double>> others = {v3d(-3, 0, 0), v3d(0, 1, 0), v3d(1, 1, 0),
                                       v3d(1, 1e-12, 0), v3d(1e-12, 1, 0), phi_at(0.95)};
    auto cls = classify_star(psi, others);
    REQUIRE(cls.size() == 6);
    CHECK(cls[0] == StarClass::Forced1);
    CHECK(cls[1] == StarClass::Forced0);
    CHECK(cls[2] == StarClass::Indefinite);
    CHECK(cls[3] == StarClass::Forced1);
    CHECK(cls[4] == StarClass::Forced0);
    CHECK(cls[5] == StarClass::Indefinite);
    CHECK(std::string(star_class_name(cls[0])) == "Forced1");
    CHECK(std::string(star_class_name(cls[1])) == "Forced0");
    CHECK(std::string(star_class_name(cls[2])) == "Indefinite");
}

TEST_CASE("certificates round-trip through JSON with full fidelity") {
    auto res = localize(v3d(1, 0, 0), phi_at(0.5));
    auto j = certificate_to_json(res.certificate);
    auto c2 = certificate_from_json(j);
    CHECK(c2.psi == res.certificate.psi);
    CHECK(c2.phi == res.certificate.phi);
    CHECK(c2.overlap == res.certificate.overlap);  // bit-exact
    CHECK(c2.path == res.certificate.path);
    REQUIRE(c2.construction_log.size() == res.certificate.construction_log.size());
    for (std::size_t i = 0; i < c2.construction_log.size(); ++i) {
        CHECK(c2.construction_log[i].gadget == res.certificate.construction_log[i].gadget);
        CHECK(c2.construction_log[i].role == res.certificate.construction_log[i].role);
        CHECK(c2.construction_log[i].params == res.certificate.construction_log[i].params);
    }
    for (int b : {0, 1}) {
        const auto& lhs = c2.branches[static_cast<std::size_t>(b)];
        const auto& rhs = res.certificate.branches[static_cast<std::size_t>(b)];
        CHECK(lhs.assumption == rhs.assumption);
        CHECK(lhs.contradiction_observable == rhs.contradiction_observable);
        CHECK(lhs.contradiction_earlier == rhs.contradiction_earlier);
        CHECK(lhs.contradiction_later == rhs.contradiction_later);
        REQUIRE(lhs.trace.size() == rhs.trace.size());
        for (std::size_t i = 0; i < lhs.trace.size(); ++i) {
            CHECK(lhs.trace[i].context == rhs.trace[i].context);
            CHECK(lhs.trace[i].rule == rhs.trace[i].rule);
            CHECK(lhs.trace[i].premises == rhs.trace[i].premises);
            CHECK(lhs.trace[i].conclusion == rhs.trace[i].conclusion);
        }
    }
    // the reconstructed certificate still verifies against the same diagram
    CHECK(check_certificate(res.diagram, c2).ok);
}
