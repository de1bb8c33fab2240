#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cohdepth/depth.hpp"
#include "cohdepth/dickson.hpp"

using namespace cohdepth;

namespace {

std::string data_path(const std::string& rel) { return std::string(COHDEPTH_DATA_DIR) + "/" + rel; }

AlgebraPtr poly2(int p) {
    return Algebra::make(p, {{"x", 1, false}, {"y", 1, false}});
}

// F_2[x,y]/(xy): two lines crossing at the origin.
AlgebraPtr crossing() {
    auto free2 = poly2(2);
    return Algebra::make(2, {{"x", 1, false}, {"y", 1, false}}, {free2->parse("x*y").terms()});
}

// The interesting part of the quaternion ring: F_2[x,y] modulo its two
// defining relations in low degrees.
AlgebraPtr quaternion_slice() {
    auto free2 = poly2(2);
    return Algebra::make(2, {{"x", 1, false}, {"y", 1, false}},
                         {free2->parse("x^2 + x*y + y^2").terms(), free2->parse("x^2*y + x*y^2").terms()});
}

std::vector<AlgebraMap> rank_maps(const CohomologySystem& sys, int d) {
    std::vector<AlgebraMap> maps;
    for (const SubgroupBlock* b : sys.blocks_of_rank(d)) {
        REQUIRE(b->restriction.has_value());
        maps.push_back(*b->restriction);
    }
    return maps;
}

}  // namespace

TEST_CASE("polynomial variables form a regular sequence") {
    auto A = poly2(2);
    RegSeqCertificate cert = is_regular_sequence(A, {A->gen("x"), A->gen("y")}, 6);
    CHECK(cert.regular());
    CHECK(cert.regular_prefix == 2);
    CHECK(cert.hilbert_agrees);
    CHECK(!cert.failure.has_value());
}

TEST_CASE("a zero divisor is caught with its smallest witness") {
    auto A = crossing();

    RegSeqCertificate one = is_regular_sequence(A, {A->gen("x")}, 6);
    CHECK(!one.regular());
    CHECK(one.regular_prefix == 0);
    REQUIRE(one.failure.has_value());
    CHECK(one.failure->position == 0);
    CHECK(one.failure->degree == 1);
    CHECK(one.failure->witness == A->gen("y"));

    // x + y stays regular on the crossing; x then fails one step later.
    RegSeqCertificate two = is_regular_sequence(A, {A->parse("x + y"), A->gen("x")}, 6);
    CHECK(!two.regular());
    CHECK(two.regular_prefix == 1);
    REQUIRE(two.failure.has_value());
    CHECK(two.failure->position == 1);
    CHECK(two.failure->degree == 1);
    CHECK(two.failure->witness == A->gen("x"));
    CHECK(two.hilbert_agrees);
}

TEST_CASE("sequence validation names the offending entry") {
    auto A = poly2(2);
    auto B = Algebra::make(3, {{"x", 2, false}, {"y", 2, false}});
    CHECK_THROWS_AS(is_regular_sequence(A, {A->zero()}, 4), std::invalid_argument);
    CHECK_THROWS_AS(is_regular_sequence(A, {A->parse("x + x^2")}, 4), std::invalid_argument);
    CHECK_THROWS_AS(is_regular_sequence(A, {B->gen("x")}, 4), std::invalid_argument);
    CHECK_THROWS_AS(is_regular_sequence(A, {A->one()}, 4), std::invalid_argument);
}

TEST_CASE("the two certification routes agree on random quotients") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 100; ++trial) {
        const int p = (trial % 2 == 0) ? 2 : 3;
        const int ngens = 2 + static_cast<int>(rng() % 2);
        std::vector<GeneratorSpec> gens;
        for (int i = 0; i < ngens; ++i) {
            const int deg = 1 + static_cast<int>(rng() % 2);
            gens.push_back({"g" + std::to_string(i), deg, p != 2 && deg % 2 == 1});
        }
        auto free_algebra = Algebra::make(p, gens);

        auto random_homogeneous = [&](const AlgebraPtr& host, int d) {
            const int n = host->dim_in_degree(d);
            std::vector<uint8_t> coords(n);
            for (int i = 0; i < n; ++i) coords[i] = static_cast<uint8_t>(rng() % p);
            return host->from_basis_coords(d, coords);
        };

        std::vector<Poly> rels;
        if (rng() % 2 == 0) {
            Element r = random_homogeneous(free_algebra, 2 + static_cast<int>(rng() % 3));
            if (!r.is_zero()) rels.push_back(r.terms());
        }
        auto A = Algebra::make(p, gens, rels);

        std::vector<Element> seq;
        const int len = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < len && static_cast<int>(seq.size()) < len; ++i) {
            Element e = random_homogeneous(A, 1 + static_cast<int>(rng() % 3));
            if (!e.is_zero()) seq.push_back(e);
        }
        if (seq.empty()) continue;

        RegSeqCertificate cert = is_regular_sequence(A, seq, 8);
        CHECK(cert.hilbert_agrees);
        if (!cert.regular()) {
            REQUIRE(cert.failure.has_value());
            // the witness really is a zero divisor outside the prefix ideal
            const int k = cert.failure->position;
            Element prod = cert.failure->witness * seq[k];
            std::vector<Element> prefix(seq.begin(), seq.begin() + k);
            Subspace span = ideal_span_in_degree(A, prefix, prod.is_zero() ? 0 : prod.degree());
            if (!prod.is_zero()) CHECK(span.contains(A->basis_coords(prod, prod.degree())));
            Subspace at = ideal_span_in_degree(A, prefix, cert.failure->degree);
            CHECK(!at.contains(A->basis_coords(cert.failure->witness, cert.failure->degree)));
        }
    }
}

TEST_CASE("ideal spans count correctly with and without relations") {
    auto A = poly2(2);
    CHECK(ideal_span_in_degree(A, {A->gen("x")}, 2).dim() == 2);  // x^2, xy
    auto B = crossing();
    CHECK(ideal_span_in_degree(B, {B->gen("x")}, 2).dim() == 1);  // xy collapsed
    CHECK(ideal_span_in_degree(A, {}, 3).dim() == 0);
}

TEST_CASE("detection through the identity is faithful") {
    auto A = poly2(2);
    DetectionResult plain = detection_injective(A, {AlgebraMap::identity(A)}, {}, 5);
    CHECK(plain.injective);
    DetectionResult modded = detection_injective(A, {AlgebraMap::identity(A)}, {A->gen("x")}, 5);
    CHECK(modded.injective);
}

TEST_CASE("a collapsing map is caught with a witness") {
    auto A = Algebra::make(2, {{"x", 1, false}}, {[] {
                               auto f = Algebra::make(2, {{"x", 1, false}});
                               return f->parse("x^2").terms();
                           }()});
    auto point = Algebra::make(2, {});
    AlgebraMap collapse(A, point, {point->zero()});
    DetectionResult res = detection_injective(A, {collapse}, {}, 4);
    CHECK(!res.injective);
    REQUIRE(res.witness.has_value());
    CHECK(*res.witness == A->gen("x"));
}

TEST_CASE("an empty family detects nothing") {
    auto A = poly2(2);
    DetectionResult res = detection_injective(A, {}, {}, 3);
    CHECK(!res.injective);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->degree() == 0);
}

TEST_CASE("the dihedral ring is detected on its two four-subgroups") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    REQUIRE(sys.errors.empty());
    std::vector<AlgebraMap> maps = rank_maps(sys, 2);
    REQUIRE(maps.size() == 2);
    DetectionResult res = detection_injective(sys.ring, maps, {}, 8);
    CHECK(res.injective);

    // either map alone misses a class
    DetectionResult half = detection_injective(sys.ring, {maps[0]}, {}, 8);
    CHECK(!half.injective);
}

TEST_CASE("tau numbers of elementary abelian groups equal the rank") {
    for (const auto& [manifest, rank] :
         {std::pair<std::string, int>{"manifests/v4.json", 2}, {"manifests/c2cube.json", 3}}) {
        CohomologySystem sys = load_system(data_path(manifest));
        REQUIRE(sys.errors.empty());
        REQUIRE(sys.z == rank);
        REQUIRE(sys.r == rank);

        std::vector<Element> forms;
        for (int i = 0; i < rank; ++i) forms.push_back(sys.ring->gen(i));
        SpanProduct sp = expand_span(sys.ring, forms);

        ParameterSystem ps;
        ps.p = 2;
        ps.z = rank;
        ps.r = rank;
        for (int s = 1; s <= rank; ++s) {
            ps.zetas.push_back(sp.D[s]);
            ps.zeta_degrees.push_back(sp.D[s].degree());
        }

        DepthReport rep = tau_numbers(sys, ps, 10);
        CHECK(rep.tau_a.known);
        CHECK(rep.tau_a.value == rank);
        CHECK(rep.tau_aH.known);
        CHECK(rep.tau_aH.value == rank);
        CHECK(rep.tau_H.known);
        CHECK(rep.tau_H.value == rank);
        CHECK(rep.S_aH == std::vector<int>{0});
        CHECK(!rep.red_alert);
    }
}

TEST_CASE("dihedral tau numbers all equal two") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    REQUIRE(sys.errors.empty());

    ParameterSystem ps;
    ps.p = 2;
    ps.z = 1;
    ps.r = 2;
    ps.zetas = {sys.ring->parse("w")};
    ps.kappas = {sys.ring->parse("x^4 + y^4")};
    ps.zeta_degrees = {2};
    ps.kappa_degrees = {4};

    CHECK(default_depth_bound(sys, ps) == 10);

    DepthReport rep = tau_numbers(sys, ps, 10);
    CHECK(rep.tau_a.known);
    CHECK(rep.tau_a.value == 2);
    CHECK(rep.s_a == 1);
    CHECK(rep.tau_aH.known);
    CHECK(rep.tau_aH.value == 2);
    CHECK(rep.S_aH == std::vector<int>{0, 1});
    CHECK(rep.tau_H.known);
    CHECK(rep.tau_H.value == 2);
    CHECK(!rep.red_alert);
    CHECK(!rep.kappa_failure.has_value());
}

TEST_CASE("quaternion tau numbers all equal one") {
    CohomologySystem sys = load_system(data_path("manifests/q8.json"));
    REQUIRE(sys.errors.empty());

    ParameterSystem ps;
    ps.p = 2;
    ps.z = 1;
    ps.r = 1;
    ps.zetas = {sys.ring->parse("e")};
    ps.zeta_degrees = {4};

    CHECK(default_depth_bound(sys, ps) == 11);

    DepthReport rep = tau_numbers(sys, ps, 11);
    CHECK(rep.tau_a.known);
    CHECK(rep.tau_a.value == 1);
    CHECK(rep.tau_aH.known);
    CHECK(rep.tau_aH.value == 1);
    CHECK(rep.tau_H.known);
    CHECK(rep.tau_H.value == 1);
    CHECK(rep.S_aH == std::vector<int>{0});
    CHECK(!rep.red_alert);
}

TEST_CASE("restriction-only systems leave tau unknown") {
    GroupTable G = load_group_file(data_path("groups/es27.json"));
    CohomologySystem sys = system_from_group(G);
    ParameterSystem ps;
    ps.p = 3;
    ps.z = 1;
    ps.r = 2;
    ps.restriction_only = true;
    ps.zeta_degrees = {18};
    ps.kappa_degrees = {12};

    DepthReport rep = tau_numbers(sys, ps, 8);
    CHECK(!rep.tau_a.known);
    CHECK(!rep.tau_aH.known);
    CHECK(!rep.tau_H.known);
    CHECK(!rep.notes.empty());
}

TEST_CASE("a lift through first powers is plain detection") {
    auto A = Algebra::make(2, {{"x", 1, false}});
    RegSeqCertificate cert = is_regular_sequence(A, {A->gen("x")}, 6);
    REQUIRE(cert.regular());
    LiftResult lift = lift_injection_through_powers(A, {AlgebraMap::identity(A)}, cert, {2}, 6);
    CHECK(lift.concluded);
    CHECK(lift.hypothesis_injective);
    CHECK(lift.conclusion_injective);
    CHECK(lift.consistent);
}

TEST_CASE("lifting on the dihedral group stays consistent") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    std::vector<AlgebraMap> maps = rank_maps(sys, 2);
    RegSeqCertificate cert =
        is_regular_sequence(sys.ring, {sys.ring->parse("w"), sys.ring->parse("x^4 + y^4")}, 10);
    REQUIRE(cert.regular());

    for (const std::vector<int>& powers : {std::vector<int>{1, 1}, {1, 2}}) {
        LiftResult lift = lift_injection_through_powers(sys.ring, maps, cert, powers, 10);
        CHECK(lift.concluded);
        CHECK(lift.consistent);
        // the quotient by both parameters is too small to be detected here
        CHECK(!lift.conclusion_injective);
        CHECK(!lift.hypothesis_injective);
    }
}

TEST_CASE("a lift refuses a broken or short certificate") {
    auto A = crossing();
    RegSeqCertificate broken = is_regular_sequence(A, {A->gen("x")}, 6);
    REQUIRE(!broken.regular());
    LiftResult no1 = lift_injection_through_powers(A, {AlgebraMap::identity(A)}, broken, {2}, 6);
    CHECK(!no1.concluded);
    CHECK(!no1.reason.empty());

    auto B = poly2(2);
    RegSeqCertificate shallow = is_regular_sequence(B, {B->gen("x")}, 3);
    LiftResult no2 = lift_injection_through_powers(B, {AlgebraMap::identity(B)}, shallow, {2}, 6);
    CHECK(!no2.concluded);

    CHECK_THROWS_AS(lift_injection_through_powers(B, {}, shallow, {2, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(lift_injection_through_powers(B, {}, shallow, {0}, 3), std::invalid_argument);
}

TEST_CASE("annihilated classes are found or ruled out") {
    auto A = crossing();
    auto hit = assoc_prime_witness(A, {}, {A->gen("x")}, 3);
    REQUIRE(hit.has_value());
    CHECK(*hit == A->gen("y"));

    auto B = poly2(2);
    CHECK(!assoc_prime_witness(B, {}, {B->gen("x")}, 6).has_value());

    auto Q = quaternion_slice();
    auto qhit = assoc_prime_witness(Q, {}, {Q->gen("x")}, 3);
    REQUIRE(qhit.has_value());
    CHECK(*qhit == Q->parse("x^2"));
    CHECK(qhit->degree() == 2);
}

TEST_CASE("duflot tightness on an elementary abelian group is a closed case") {
    CohomologySystem sys = load_system(data_path("manifests/v4.json"));
    ParameterSystem ps;
    ps.p = 2;
    ps.z = 2;
    ps.r = 2;
    DuflotReport rep = duflot_tightness(sys, ps, 8);
    CHECK(rep.tight.v == Verdict::kNo);
    CHECK(rep.regularity_says.v == Verdict::kNo);
    CHECK(rep.detection_says.v == Verdict::kNo);
    CHECK(rep.annihilator_says.v == Verdict::kNo);
    CHECK(rep.consistent);
}

TEST_CASE("duflot tightness on the dihedral group says no three ways") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    ParameterSystem ps;
    ps.p = 2;
    ps.z = 1;
    ps.r = 2;
    ps.zetas = {sys.ring->parse("w")};
    ps.kappas = {sys.ring->parse("x^4 + y^4")};
    ps.zeta_degrees = {2};
    ps.kappa_degrees = {4};

    DuflotReport rep = duflot_tightness(sys, ps, 10);
    CHECK(rep.tight.v == Verdict::kNo);
    CHECK(rep.regularity_says.v == Verdict::kNo);
    CHECK(rep.detection_says.v == Verdict::kNo);
    CHECK(rep.annihilator_says.v == Verdict::kNo);
    CHECK(rep.consistent);
}

TEST_CASE("duflot tightness without a ring is honestly unknown") {
    GroupTable G = load_group_file(data_path("groups/es27.json"));
    CohomologySystem sys = system_from_group(G);
    ParameterSystem ps;
    ps.p = 3;
    ps.z = 1;
    ps.r = 2;
    ps.restriction_only = true;
    ps.zeta_degrees = {18};
    ps.kappa_degrees = {12};

    DuflotReport rep = duflot_tightness(sys, ps, 8);
    CHECK(rep.tight.v == Verdict::kUnknown);
    CHECK(rep.regularity_says.v == Verdict::kUnknown);
    CHECK(rep.detection_says.v == Verdict::kUnknown);
    CHECK(rep.annihilator_says.v == Verdict::kUnknown);
}

TEST_CASE("regular sequences survive permutation and powers") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    Element w = sys.ring->parse("w");
    Element k = sys.ring->parse("x^4 + y^4");
    CHECK(is_regular_sequence(sys.ring, {w, k}, 12).regular());
    CHECK(is_regular_sequence(sys.ring, {k, w}, 12).regular());
    CHECK(is_regular_sequence(sys.ring, {w * w, k * k}, 16).regular());

    auto A = poly2(2);
    SpanProduct sp = expand_span(A, {A->gen("x"), A->gen("y")});
    CHECK(is_regular_sequence(A, {sp.D[1], sp.D[2]}, 10).regular());
    CHECK(is_regular_sequence(A, {sp.D[2], sp.D[1]}, 10).regular());
    CHECK(is_regular_sequence(A, {sp.D[1] * sp.D[1], sp.D[2] * sp.D[2]}, 14).regular());
}

TEST_CASE("a central parameter followed by a primitive stays regular") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    Element xy = sys.ring->parse("x + y");
    REQUIRE(sys.comodule.has_value());
    CHECK(is_primitive(sys, xy).v == Verdict::kYes);
    CHECK(is_regular_sequence(sys.ring, {sys.ring->parse("w"), xy}, 10).regular());
}
