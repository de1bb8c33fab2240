#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "cohdepth/cohmodel.hpp"
#include "cohdepth/depth.hpp"
#include "cohdepth/dickson.hpp"
#include "cohdepth/pgroup.hpp"
#include "cohdepth/polarise.hpp"
#include "cohdepth/steenrod.hpp"

using namespace cohdepth;

namespace {

std::string data_path(const std::string& rel) {
    return std::string(COHDEPTH_DATA_DIR) + "/" + rel;
}

GroupTable group_fixture(const std::string& name) {
    return load_group_file(data_path("groups/" + name + ".json"));
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void expect_all_pass(const AxiomReport& rep, bool restriction_only) {
    CHECK(rep.ps1.status == AxiomStatus::kPass);
    CHECK(rep.ps2.status == AxiomStatus::kPass);
    CHECK(rep.ps3.status == AxiomStatus::kPass);
    CHECK(rep.ps4.status == AxiomStatus::kPass);
    CHECK(rep.all_pass_1to4());
    CHECK(rep.ps5.status == AxiomStatus::kUnknown);
    if (restriction_only) CHECK(rep.ps2prime.status == AxiomStatus::kUnknown);
    CHECK(rep.consistent());
}

}  // namespace

TEST_CASE("dihedral restriction system carries the expected images") {
    GroupTable G = group_fixture("d8");
    ParameterSystem ps = canonical_restrictions(G);
    CHECK(ps.p == 2);
    CHECK(ps.z == 1);
    CHECK(ps.r == 2);
    CHECK(ps.restriction_only);
    CHECK(ps.provenance == Provenance::kCanonical);
    CHECK(ps.zeta_degrees == std::vector<int>{8});
    CHECK(ps.kappa_degrees == std::vector<int>{4});

    auto [C, z] = center_omega1(G);
    ElemAbCohomology line = elementary_abelian_cohomology(2, 1);
    const RestrictionImages& at_c = ps.images.at(C.id(G));
    CHECK(at_c.zetas[0] == line.full->gen(0).pow(8));
    CHECK(at_c.kappas[0].is_zero());

    ElemAbCohomology plane = elementary_abelian_cohomology(2, 2);
    Element t1 = plane.full->gen(0), t2 = plane.full->gen(1);
    Element zeta = t1.pow(8) + t1.pow(4) * t2.pow(4) + t2.pow(8);
    Element kappa = t1.pow(4);
    SubgroupFamily fours = enumerate_ACd(G, 2);
    REQUIRE(fours.members.size() == 2);
    for (const Subgroup& V : fours.members) {
        const RestrictionImages& im = ps.images.at(V.id(G));
        CHECK(im.zetas[0] == zeta);
        CHECK(im.kappas[0] == kappa);
    }
}

TEST_CASE("quaternion restriction system has no kappas") {
    GroupTable G = group_fixture("q8");
    ParameterSystem ps = canonical_restrictions(G);
    CHECK(ps.z == 1);
    CHECK(ps.r == 1);
    CHECK(ps.zeta_degrees == std::vector<int>{8});
    CHECK(ps.kappa_degrees.empty());
    REQUIRE(ps.images.size() == 1);
    ElemAbCohomology line = elementary_abelian_cohomology(2, 1);
    CHECK(ps.images.begin()->second.zetas[0] == line.full->gen(0).pow(8));
}

TEST_CASE("extraspecial 27 restriction system carries the expected images") {
    GroupTable G = group_fixture("es27");
    ParameterSystem ps = canonical_restrictions(G);
    CHECK(ps.z == 1);
    CHECK(ps.r == 2);
    CHECK(ps.zeta_degrees == std::vector<int>{2 * (27 - 9)});
    CHECK(ps.kappa_degrees == std::vector<int>{2 * (9 - 3)});

    auto [C, z] = center_omega1(G);
    ElemAbCohomology line = elementary_abelian_cohomology(3, 1);
    const RestrictionImages& at_c = ps.images.at(C.id(G));
    CHECK(at_c.zetas[0] == line.full->gen(1).pow(18).scaled(2));
    CHECK(at_c.kappas[0].is_zero());

    ElemAbCohomology plane = elementary_abelian_cohomology(3, 2);
    SubgroupFamily maximals = enumerate_ACd(G, 2);
    REQUIRE(maximals.members.size() == 4);
    Element kappa = plane.full->gen(2).pow(6);
    for (const Subgroup& V : maximals.members)
        CHECK(ps.images.at(V.id(G)).kappas[0] == kappa);
}

TEST_CASE("restriction systems pass the axioms on the group fixtures") {
    for (const std::string name : {"d8", "q8", "es27", "v4"}) {
        CAPTURE(name);
        GroupTable G = group_fixture(name);
        CohomologySystem sys = system_from_group(G);
        REQUIRE(sys.errors.empty());
        ParameterSystem ps = canonical_restrictions(G);
        AxiomReport rep = check_axioms(sys, ps, 60);
        expect_all_pass(rep, true);
        CHECK_FALSE(rep.promotion_exponent.has_value());
    }
}

TEST_CASE("norm product on a four subgroup of the dihedral group") {
    GroupTable G = group_fixture("d8");
    ParameterSystem canon = canonical_restrictions(G);
    SubgroupFamily fours = enumerate_ACd(G, 2);
    for (const Subgroup& V : fours.members) {
        ThetaResult th = theta_restriction(G, V);
        CHECK(th.s == 1);
        CHECK(th.index == 2);
        CHECK(th.unit == 1);
        CHECK(th.matches);
        CHECK(th.eta_hat == th.d1w);
        CHECK(th.value == canon.images.at(V.id(G)).kappas[0]);
    }
}

TEST_CASE("norm product on a maximal of the extraspecial 27 group") {
    GroupTable G = group_fixture("es27");
    ParameterSystem canon = canonical_restrictions(G);
    SubgroupFamily maximals = enumerate_ACd(G, 2);
    for (const Subgroup& V : maximals.members) {
        ThetaResult th = theta_restriction(G, V);
        CHECK(th.s == 1);
        CHECK(th.index == 3);
        CHECK(th.unit == 2);  // (p-1)! for p = 3
        CHECK(th.matches);
        CHECK(th.eta_hat == th.d1w.scaled(2));
        CHECK(th.value == canon.images.at(V.id(G)).kappas[0]);
    }
}

TEST_CASE("power operation chain agrees with the restriction images") {
    GroupTable G = group_fixture("d8");
    ParameterSystem canon = canonical_restrictions(G);
    ElemAbCohomology plane = elementary_abelian_cohomology(2, 2);
    Element x = plane.poly->gen(0);
    KappaChainResult kc = kappa_chain(3, 1, 1, x.pow(2), {x});
    CHECK(kc.matches_oracle);
    Subgroup V = enumerate_ACd(G, 2).members.front();
    CHECK(plane.embed->apply(kc.value) == canon.images.at(V.id(G)).kappas[0]);

    GroupTable H = group_fixture("es27");
    ParameterSystem canon3 = canonical_restrictions(H);
    ElemAbCohomology plane3 = elementary_abelian_cohomology(3, 2);
    Element w = plane3.poly->gen(0);
    KappaChainResult kc3 = kappa_chain(3, 1, 1, w.pow(2).frobenius(1), {w});
    CHECK(kc3.matches_oracle);
    Subgroup W = enumerate_ACd(H, 2).members.front();
    CHECK(plane3.embed->apply(kc3.value) == canon3.images.at(W.id(H)).kappas[0]);
}

TEST_CASE("subgroup validation for the norm product") {
    GroupTable G = group_fixture("d8");
    auto [C, z] = center_omega1(G);
    CHECK_THROWS_AS(theta_restriction(G, C), std::invalid_argument);

    int cyclic_gen = -1, outer_involution = -1;
    for (int g = 1; g < G.order(); ++g) {
        Subgroup S = subgroup_closure(G, {g});
        if (S.order() == 4) cyclic_gen = g;
        if (S.order() == 2 && !C.contains(g)) outer_involution = g;
    }
    REQUIRE(cyclic_gen >= 0);
    REQUIRE(outer_involution >= 0);
    CHECK_THROWS_AS(theta_restriction(G, subgroup_closure(G, {cyclic_gen})),
                    std::invalid_argument);
    CHECK_THROWS_AS(theta_restriction(G, subgroup_closure(G, {outer_involution})),
                    std::invalid_argument);
}

TEST_CASE("character product system of the dihedral group") {
    GroupTable G = group_fixture("d8");
    ParameterSystem ps = chern_induced_system(G);
    CHECK(ps.z == 1);
    CHECK(ps.r == 2);
    CHECK(ps.provenance == Provenance::kChernInduced);
    CHECK(ps.zeta_degrees == std::vector<int>{4});
    CHECK(ps.kappa_degrees == std::vector<int>{2});

    ElemAbCohomology plane = elementary_abelian_cohomology(2, 2);
    Element t1 = plane.full->gen(0), t2 = plane.full->gen(1);
    for (const Subgroup& U : enumerate_ACd(G, 2).members) {
        const RestrictionImages& im = ps.images.at(U.id(G));
        CHECK(im.kappas[0] == t1.pow(2));
        CHECK(im.zetas[0] == t1.pow(2) * t2.pow(2) + t2.pow(4));
    }

    auto [C, z] = center_omega1(G);
    ElemAbCohomology line = elementary_abelian_cohomology(2, 1);
    const RestrictionImages& at_c = ps.images.at(C.id(G));
    CHECK(at_c.zetas[0] == line.full->gen(0).pow(4));
    CHECK(at_c.kappas[0].is_zero());

    CohomologySystem sys = system_from_group(G);
    expect_all_pass(check_axioms(sys, ps, 60), true);
}

TEST_CASE("character product system of the extraspecial 27 group") {
    GroupTable G = group_fixture("es27");
    ParameterSystem ps = chern_induced_system(G);
    CHECK(ps.z == 1);
    CHECK(ps.r == 2);
    CHECK(ps.zeta_degrees == std::vector<int>{6});
    CHECK(ps.kappa_degrees == std::vector<int>{4});

    ElemAbCohomology plane = elementary_abelian_cohomology(3, 2);
    Element t1 = plane.full->gen(2), t2 = plane.full->gen(3);
    for (const Subgroup& U : enumerate_ACd(G, 2).members) {
        const RestrictionImages& im = ps.images.at(U.id(G));
        CHECK(im.kappas[0] == t1.pow(2).scaled(2));
        CHECK(im.zetas[0] == (t1.pow(2) * t2).scaled(2) + t2.pow(3));
    }

    auto [C, z] = center_omega1(G);
    ElemAbCohomology line = elementary_abelian_cohomology(3, 1);
    const RestrictionImages& at_c = ps.images.at(C.id(G));
    CHECK(at_c.zetas[0] == line.full->gen(1).pow(3));
    CHECK(at_c.kappas[0].is_zero());

    CohomologySystem sys = system_from_group(G);
    expect_all_pass(check_axioms(sys, ps, 60), true);
}

TEST_CASE("character product system rejects unsupported groups") {
    CHECK_THROWS_AS(chern_induced_system(group_fixture("v4")), std::invalid_argument);
    CHECK_THROWS_AS(chern_induced_system(group_fixture("q8")), std::invalid_argument);
}

TEST_CASE("the two constructions agree on kappas up to powers and units") {
    for (const std::string name : {"d8", "es27"}) {
        CAPTURE(name);
        GroupTable G = group_fixture(name);
        ParameterSystem canon = canonical_restrictions(G);
        ParameterSystem chern = chern_induced_system(G);
        const int expected_unit = G.p() == 2 ? 1 : 2;
        for (const Subgroup& U : enumerate_ACd(G, 2).members) {
            const std::string id = U.id(G);
            PowerScalarMatch m = match_up_to_power_and_unit(chern.images.at(id).kappas[0],
                                                            canon.images.at(id).kappas[0], G.p());
            REQUIRE(m.found);
            CHECK(m.a == 1);
            CHECK(m.b == 0);
            CHECK(m.unit == expected_unit);

            PowerScalarMatch zm = match_up_to_power_and_unit(chern.images.at(id).zetas[0],
                                                             canon.images.at(id).zetas[0], G.p());
            CHECK_FALSE(zm.found);
            CHECK_FALSE(zm.note.empty());
        }
    }
}

TEST_CASE("power and unit matching handles the edge cases") {
    ElemAbCohomology plane = elementary_abelian_cohomology(3, 2);
    Element t = plane.full->gen(2);
    Element zero = plane.full->zero();
    CHECK(match_up_to_power_and_unit(zero, zero, 3).found);
    CHECK_FALSE(match_up_to_power_and_unit(t, zero, 3).found);
    PowerScalarMatch same = match_up_to_power_and_unit(t.scaled(2), t, 3);
    REQUIRE(same.found);
    CHECK(same.a == 0);
    CHECK(same.b == 0);
    CHECK(same.unit == 2);
    CHECK_FALSE(match_up_to_power_and_unit(t, t + plane.full->gen(3), 3).found);
}

TEST_CASE("corrupted images are caught by the axiom checks") {
    GroupTable G = group_fixture("d8");
    CohomologySystem sys = system_from_group(G);
    auto [C, z] = center_omega1(G);
    ElemAbCohomology line = elementary_abelian_cohomology(2, 1);
    ElemAbCohomology plane = elementary_abelian_cohomology(2, 2);

    // A kappa leaking onto the center.
    {
        ParameterSystem ps = canonical_restrictions(G);
        ps.images.at(C.id(G)).kappas[0] = line.full->gen(0).pow(4);
        AxiomReport rep = check_axioms(sys, ps, 60);
        CHECK(rep.ps4.status == AxiomStatus::kFail);
        CHECK(rep.ps4.detail.find("kappa 1") != std::string::npos);
    }

    // A kappa touching the central coordinate of a four subgroup.
    {
        ParameterSystem ps = canonical_restrictions(G);
        Subgroup V = enumerate_ACd(G, 2).members.front();
        ps.images.at(V.id(G)).kappas[0] = plane.full->gen(1).pow(2);
        AxiomReport rep = check_axioms(sys, ps, 60);
        CHECK(rep.ps2.status == AxiomStatus::kFail);
        CHECK(rep.ps2.detail.find(V.id(G)) != std::string::npos);
    }

    // A zeta dying on the center.
    {
        ParameterSystem ps = canonical_restrictions(G);
        ps.images.at(C.id(G)).zetas[0] = line.full->zero();
        AxiomReport rep = check_axioms(sys, ps, 60);
        CHECK(rep.ps1.status == AxiomStatus::kFail);
        CHECK(rep.ps1.detail.find("zero") != std::string::npos);
    }

    // A missing subgroup entry downgrades to unknown, never to a pass.
    {
        ParameterSystem ps = canonical_restrictions(G);
        Subgroup V = enumerate_ACd(G, 2).members.front();
        ps.images.erase(V.id(G));
        AxiomReport rep = check_axioms(sys, ps, 60);
        CHECK(rep.ps2.status == AxiomStatus::kUnknown);
        CHECK(rep.ps3.status == AxiomStatus::kUnknown);
    }
}

TEST_CASE("ring mode system of the dihedral group passes with promotion exponent zero") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    REQUIRE(sys.errors.empty());
    ParameterSystem ps = load_parameter_system(data_path("systems/d8_system.json"), sys);
    CHECK_FALSE(ps.restriction_only);
    REQUIRE(ps.zetas.size() == 1);
    REQUIRE(ps.kappas.size() == 1);

    AxiomReport rep = check_axioms(sys, ps, 60);
    CHECK(rep.ps1.status == AxiomStatus::kPass);
    CHECK(rep.ps2.status == AxiomStatus::kPass);
    CHECK(rep.ps3.status == AxiomStatus::kPass);
    CHECK(rep.ps4.status == AxiomStatus::kPass);
    CHECK(rep.ps2prime.status == AxiomStatus::kPass);
    CHECK(rep.consistent());
    REQUIRE(rep.promotion_exponent.has_value());
    CHECK(*rep.promotion_exponent == 0);

    PromotionResult pr = promote_to_special(ps, sys, 60);
    REQUIRE(pr.exponent.has_value());
    CHECK(*pr.exponent == 0);
    CHECK(pr.system.kappas == ps.kappas);
}

TEST_CASE("promotion raises kappas to the right power") {
    auto build = [](int trunc) {
        CohomologySystem sys;
        sys.p = 2;
        Poly rel;
        rel[Monomial{{0, static_cast<uint16_t>(trunc)}}] = 1;
        sys.ring = Algebra::make(2, {{"x", 2, false}, {"a", 1, false}}, {rel});
        AlgebraPtr cent = Algebra::make(2, {{"u", 1, false}});
        sys.comodule_target = tensor(sys.ring, cent);
        const TensorResult& T = *sys.comodule_target;
        Element mu_x = T.inc_left.apply(sys.ring->gen(0)) +
                       T.inc_left.apply(sys.ring->gen(1)) * T.inc_right.apply(cent->gen(0));
        Element mu_a = T.inc_left.apply(sys.ring->gen(1));
        sys.comodule = AlgebraMap(sys.ring, T.algebra, {mu_x, mu_a});
        return sys;
    };
    auto system_for = [](const CohomologySystem& sys) {
        ParameterSystem ps;
        ps.p = 2;
        ps.z = 0;
        ps.r = 1;
        ps.kappas = {sys.ring->gen(0)};
        ps.kappa_degrees = {2};
        return ps;
    };

    CohomologySystem square = build(2);
    PromotionResult one = promote_to_special(system_for(square), square, 30);
    REQUIRE(one.exponent.has_value());
    CHECK(*one.exponent == 1);
    CHECK(one.system.kappas[0] == square.ring->gen(0).pow(2));
    CHECK(one.system.kappa_degrees == std::vector<int>{4});

    CohomologySystem fourth = build(4);
    PromotionResult two = promote_to_special(system_for(fourth), fourth, 30);
    REQUIRE(two.exponent.has_value());
    CHECK(*two.exponent == 2);
    CHECK(two.system.kappa_degrees == std::vector<int>{8});

    ParameterSystem restriction;
    restriction.restriction_only = true;
    CHECK_FALSE(promote_to_special(restriction, square, 30).exponent.has_value());
}

TEST_CASE("parameter system files round trip") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    ParameterSystem ps = load_parameter_system(data_path("systems/d8_system.json"), sys);
    const std::string ring_path = temp_file("polarise_ring_roundtrip.json");
    save_parameter_system(ps, ring_path);
    ParameterSystem back = load_parameter_system(ring_path, sys);
    CHECK(back.zetas == ps.zetas);
    CHECK(back.kappas == ps.kappas);
    CHECK(back.zeta_degrees == ps.zeta_degrees);
    CHECK(back.kappa_degrees == ps.kappa_degrees);
    CHECK(back.provenance == ps.provenance);
    std::remove(ring_path.c_str());

    GroupTable G = group_fixture("d8");
    CohomologySystem skel = system_from_group(G);
    ParameterSystem canon = canonical_restrictions(G);
    const std::string res_path = temp_file("polarise_res_roundtrip.json");
    save_parameter_system(canon, res_path);
    ParameterSystem canon_back = load_parameter_system(res_path, skel);
    CHECK(canon_back.restriction_only);
    CHECK(canon_back.provenance == Provenance::kCanonical);
    CHECK(canon_back.zeta_degrees == canon.zeta_degrees);
    CHECK(canon_back.kappa_degrees == canon.kappa_degrees);
    REQUIRE(canon_back.images.size() == canon.images.size());
    for (const auto& [id, im] : canon.images) {
        CHECK(canon_back.images.at(id).zetas == im.zetas);
        CHECK(canon_back.images.at(id).kappas == im.kappas);
    }
    std::remove(res_path.c_str());
}

TEST_CASE("system files with broken contents are rejected") {
    CohomologySystem sys = load_system(data_path("manifests/d8.json"));
    auto write_and_load = [&](const std::string& body) {
        const std::string path = temp_file("polarise_bad_system.json");
        std::ofstream out(path);
        out << body;
        out.close();
        ParameterSystem ps = load_parameter_system(path, sys);
        std::remove(path.c_str());
        return ps;
    };

    CHECK_THROWS_AS(write_and_load(R"({"mode": "blended"})"), std::runtime_error);
    CHECK_THROWS_AS(write_and_load(R"({"mode": "restriction-only"})"), std::runtime_error);
    CHECK_THROWS_AS(write_and_load(R"({"mode": "ring", "zetas": ["w"], "kappas":
        ["x^4 + y^4"], "zeta_degrees": [6], "kappa_degrees": [4]})"),
                    std::runtime_error);
    CHECK_THROWS_AS(write_and_load(R"({"mode": "ring", "zetas": ["w"], "kappas": []})"),
                    std::runtime_error);
    CHECK_THROWS_AS(
        write_and_load(R"({"mode": "restriction-only", "zeta_degrees": [2],
        "kappa_degrees": [4], "images": {"sg0000000000000000": {"zetas": ["t1^2"],
        "kappas": ["t1^4"]}}})"),
        std::runtime_error);
    CHECK_THROWS_AS(load_parameter_system(temp_file("no_such_system.json"), sys),
                    std::runtime_error);
}

TEST_CASE("provenance names are stable") {
    CHECK(provenance_name(Provenance::kCanonical) == "canonical");
    CHECK(provenance_name(Provenance::kChernInduced) == "chern-induced");
    CHECK(provenance_name(Provenance::kUser) == "user");
}
