// Command-line front end: loads fixtures, runs the analysis pipelines, and
// emits deterministic reports.  Exit codes: 0 = everything consistent,
// 2 = a bounded verdict contradicted an identity it must satisfy (or an
// axiom failed), 1 = usage or IO problems.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohdepth/cohmodel.hpp"
#include "cohdepth/depth.hpp"
#include "cohdepth/dickson.hpp"
#include "cohdepth/pgroup.hpp"
#include "cohdepth/polarise.hpp"
#include "cohdepth/steenrod.hpp"

namespace {

using nlohmann::json;
using namespace cohdepth;

// FNV-1a over the file bytes; the reports identify their inputs by content,
// not by timestamps, to stay byte-identical across runs.
std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + buf;
}

struct Report {
    std::string command;
    json inputs = json::object();
    std::optional<int> bound;
    json results = json::object();
    std::vector<std::string> warnings;
    bool red_alert = false;
    std::vector<std::string> lines;  // human rendering
};

void add_input(Report& r, const std::string& role, const std::string& path) {
    r.inputs[role] = json{{"path", path}, {"hash", file_hash(path)}};
}

json report_json(const Report& r) {
    json j;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    j["bound"] = r.bound ? json(*r.bound) : json(nullptr);
    j["results"] = r.results;
    j["warnings"] = r.warnings;
    j["status"] = r.red_alert ? "red-alert" : "ok";
    j["timing_ms"] = nullptr;  // wall time goes to stderr so stdout stays stable
    return j;
}

int emit(const Report& r, bool json_mode, std::chrono::steady_clock::time_point start) {
    if (json_mode) {
        std::cout << report_json(r).dump(2) << "\n";
    } else {
        for (const std::string& line : r.lines) std::cout << line << "\n";
        for (const std::string& w : r.warnings) std::cout << "warning: " << w << "\n";
        std::cout << "status: " << (r.red_alert ? "red-alert" : "ok") << "\n";
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cerr << "elapsed: " << ms << " ms\n";
    return r.red_alert ? 2 : 0;
}

const char* status_name(AxiomStatus s) {
    switch (s) {
        case AxiomStatus::kPass: return "pass";
        case AxiomStatus::kFail: return "fail";
        case AxiomStatus::kUnknown: return "unknown";
    }
    return "unknown";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::kYes: return "yes";
        case Verdict::kNo: return "no";
        case Verdict::kUnknown: return "unknown";
    }
    return "unknown";
}

json verdict_json(const AxiomVerdict& v) {
    return json{{"status", status_name(v.status)}, {"bound", v.bound}, {"detail", v.detail}};
}

json axioms_json(const AxiomReport& rep) {
    json j;
    j["ps1"] = verdict_json(rep.ps1);
    j["ps2"] = verdict_json(rep.ps2);
    j["ps2prime"] = verdict_json(rep.ps2prime);
    j["ps3"] = verdict_json(rep.ps3);
    j["ps4"] = verdict_json(rep.ps4);
    j["ps5"] = verdict_json(rep.ps5);
    j["promotion_exponent"] =
        rep.promotion_exponent ? json(*rep.promotion_exponent) : json(nullptr);
    j["consistent"] = rep.consistent();
    j["all_pass_1to4"] = rep.all_pass_1to4();
    return j;
}

bool axioms_red(const AxiomReport& rep) {
    for (const AxiomVerdict* v : {&rep.ps1, &rep.ps2, &rep.ps2prime, &rep.ps3, &rep.ps4, &rep.ps5})
        if (v->status == AxiomStatus::kFail) return true;
    return !rep.consistent();
}

void axiom_lines(Report& r, const std::string& label, const AxiomReport& rep) {
    r.lines.push_back(label + ":");
    const std::pair<const char*, const AxiomVerdict*> rows[] = {
        {"PS1", &rep.ps1},      {"PS2", &rep.ps2}, {"PS2'", &rep.ps2prime},
        {"PS3", &rep.ps3},      {"PS4", &rep.ps4}, {"PS5", &rep.ps5},
    };
    for (const auto& [name, v] : rows) {
        std::string line = "  " + std::string(name) + ": " + status_name(v->status);
        if (v->status == AxiomStatus::kPass)
            line += " (through degree " + std::to_string(v->bound) + ")";
        if (!v->detail.empty()) line += " - " + v->detail;
        r.lines.push_back(line);
    }
    if (rep.promotion_exponent)
        r.lines.push_back("  promotion exponent: " + std::to_string(*rep.promotion_exponent));
}

json tau_json(const TauEntry& t) {
    json j;
    j["value"] = t.known ? json(t.value) : json(nullptr);
    j["known"] = t.known;
    j["bound"] = t.bound;
    j["note"] = t.note;
    return j;
}

std::string tau_line(const std::string& name, const TauEntry& t) {
    if (t.known)
        return name + " = " + std::to_string(t.value) + " (through degree " +
               std::to_string(t.bound) + ")";
    return name + " unknown" + (t.note.empty() ? "" : ": " + t.note);
}

json depth_json(const DepthReport& d) {
    json j;
    j["z"] = d.z;
    j["r"] = d.r;
    j["bound"] = d.bound;
    j["tau_a"] = tau_json(d.tau_a);
    j["tau_aH"] = tau_json(d.tau_aH);
    j["tau_H"] = tau_json(d.tau_H);
    j["s_a"] = d.s_a;
    j["s_aH"] = d.s_aH;
    j["S_aH"] = d.S_aH;
    j["red_alert"] = d.red_alert;
    j["notes"] = d.notes;
    return j;
}

json duflot_json(const DuflotReport& d) {
    auto v3 = [](const Verdict3& v) {
        return json{{"verdict", verdict_name(v.v)}, {"reason", v.reason}};
    };
    json j;
    j["tight"] = v3(d.tight);
    j["regularity_says"] = v3(d.regularity_says);
    j["detection_says"] = v3(d.detection_says);
    j["annihilator_says"] = v3(d.annihilator_says);
    j["consistent"] = d.consistent;
    j["bound"] = d.bound;
    j["notes"] = d.notes;
    return j;
}

int system_default_bound(const ParameterSystem& ps) {
    int top = 2;
    for (int d : ps.zeta_degrees) top = std::max(top, d);
    for (int d : ps.kappa_degrees) top = std::max(top, d);
    return 2 * top + 2;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_group_analyze(const std::string& path, bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "group analyze";
    add_input(r, "group", path);

    GroupTable G = load_group_file(path);
    auto [C, z] = center_omega1(G);
    const int rk = p_rank(G);
    int n = 0;
    for (long long o = G.order(); o > 1; o /= G.p()) ++n;

    r.results["p"] = G.p();
    r.results["order"] = G.order();
    r.results["n"] = n;
    r.results["z"] = z;
    r.results["r"] = rk;
    r.lines.push_back("p = " + std::to_string(G.p()) + ", order = " + std::to_string(G.order()) +
                      " (n = " + std::to_string(n) + "), z = " + std::to_string(z) +
                      ", r = " + std::to_string(rk));

    json families = json::array();
    for (int d = z; d <= rk; ++d) {
        SubgroupFamily fam = enumerate_ACd(G, d);
        if (!fam.warning.empty()) r.warnings.push_back(fam.warning);
        std::vector<ConjOrbit> orbits = conjugation_orbits(G, fam);
        json jf;
        jf["rank"] = d;
        jf["count"] = fam.members.size();
        json jorb = json::array();
        r.lines.push_back("rank " + std::to_string(d) + ": " + std::to_string(fam.members.size()) +
                          " subgroups in " + std::to_string(orbits.size()) + " orbit(s)");
        for (const ConjOrbit& o : orbits) {
            const long cent = centralizer(G, o.rep).order();
            jorb.push_back(json{{"representative", o.rep.id(G)},
                                {"orbit_size", o.orbit_size},
                                {"normalizer_order", o.normalizer_order},
                                {"centralizer_order", cent}});
            r.lines.push_back("  " + o.rep.id(G) + ": orbit " + std::to_string(o.orbit_size) +
                              ", |normalizer| = " + std::to_string(o.normalizer_order) +
                              ", |centralizer| = " + std::to_string(cent));
        }
        jf["orbits"] = std::move(jorb);
        families.push_back(std::move(jf));
    }
    r.results["families"] = std::move(families);
    return emit(r, json_mode, start);
}

int cmd_ring_hilbert(const std::string& path, int bound, bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "ring hilbert";
    add_input(r, "ring", path);
    r.bound = bound;

    AlgebraPtr A = load_ring_file(path);
    r.results["p"] = A->p();
    json gens = json::array();
    for (const GeneratorSpec& g : A->generators())
        gens.push_back(json{{"name", g.name}, {"degree", g.degree}, {"odd", g.odd}});
    r.results["generators"] = std::move(gens);
    r.results["relation_count"] = A->relations().size();
    std::vector<long> dims;
    for (int d = 0; d <= bound; ++d) dims.push_back(A->dim_in_degree(d));
    r.results["dims"] = dims;

    std::string row = "dims 0.." + std::to_string(bound) + ":";
    for (long v : dims) row += " " + std::to_string(v);
    r.lines.push_back(row);
    return emit(r, json_mode, start);
}

int cmd_dickson(int p, int m, long long cap, int trials, uint64_t seed, bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "dickson";

    SpanProduct fv = expand_fv(p, m, cap);
    long long span = 1;
    for (int i = 0; i < m; ++i) span *= p;
    r.results["p"] = p;
    r.results["m"] = m;
    r.results["span"] = span;

    // The expansion must agree with its own invariants: X-exponents are
    // p-powers and the coefficient of X^(p^(m-s)) is (-1)^s D_s.
    bool identity = fv.D[0] == fv.host->one();
    for (const auto& [e, c] : fv.coeff) {
        long long q = 1;
        while (q < e) q *= p;
        identity = identity && (q == e);
    }
    for (int s = 0; s <= m; ++s) {
        long long e = 1;
        for (int i = 0; i < m - s; ++i) e *= p;
        Element expected = fv.D[s].scaled(s % 2 == 1 ? p - 1 : 1);
        auto it = fv.coeff.find(e);
        identity = identity && it != fv.coeff.end() && it->second == expected;
    }
    r.results["expansion_identity"] = identity;

    json inv = json::array();
    for (int s = 1; s <= m; ++s) {
        inv.push_back(json{{"s", s},
                           {"degree", dickson_degree(p, m, s)},
                           {"value", fv.D[s].to_string()}});
        r.lines.push_back("D_" + std::to_string(s) + " (degree " +
                          std::to_string(dickson_degree(p, m, s)) + ") = " + fv.D[s].to_string());
    }
    r.results["invariants"] = std::move(inv);

    GlInvarianceReport gl = check_gl_invariance(fv, trials, seed);
    r.results["gl"] = json{{"trials", gl.trials_run}, {"ok", gl.ok}};
    r.lines.push_back("linear-substitution invariance: " + std::string(gl.ok ? "ok" : "FAILED") +
                      " (" + std::to_string(gl.trials_run) + " trials)");

    json restr = json::array();
    bool all_restrictions = true;
    for (int l = 0; l <= m; ++l) {
        bool ok = true;
        for (const RestrictionRow& row : restrict_dickson(p, m, l, cap)) ok = ok && row.match;
        restr.push_back(json{{"corank", l}, {"match", ok}});
        all_restrictions = all_restrictions && ok;
    }
    r.results["restrictions"] = std::move(restr);
    r.lines.push_back("projection law: " + std::string(all_restrictions ? "ok" : "FAILED"));

    r.red_alert = !identity || !gl.ok || !all_restrictions;
    return emit(r, json_mode, start);
}

int cmd_steenrod(int p, int m, long long i, const std::string& expr, bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "steenrod";

    AlgebraPtr host = dual_space_algebra(p, m);
    Element x = host->parse(expr);
    Element out = apply_power(i, x);
    r.results["p"] = p;
    r.results["m"] = m;
    r.results["i"] = i;
    r.results["input"] = x.to_string();
    r.results["output"] = out.to_string();
    r.lines.push_back("P^" + std::to_string(i) + "(" + x.to_string() + ") = " + out.to_string());
    return emit(r, json_mode, start);
}

int cmd_depth_report(const std::string& manifest, const std::string& sysfile,
                     std::optional<int> bound_opt, bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "depth report";
    add_input(r, "manifest", manifest);
    add_input(r, "system", sysfile);

    CohomologySystem sys = load_system(manifest);
    for (const std::string& e : sys.errors) r.warnings.push_back(e);
    ParameterSystem ps = load_parameter_system(sysfile, sys);
    const int bound = bound_opt ? *bound_opt : default_depth_bound(sys, ps);
    r.bound = bound;

    AxiomReport ax = check_axioms(sys, ps, bound);
    DepthReport depth = tau_numbers(sys, ps, bound);
    DuflotReport duflot = duflot_tightness(sys, ps, bound);

    r.results["axioms"] = axioms_json(ax);
    r.results["depth"] = depth_json(depth);
    r.results["duflot"] = duflot_json(duflot);

    axiom_lines(r, "axioms", ax);
    r.lines.push_back(tau_line("tau_a", depth.tau_a));
    r.lines.push_back(tau_line("tau_aH", depth.tau_aH));
    r.lines.push_back(tau_line("tau_H", depth.tau_H));
    r.lines.push_back("depth stuck at the central rank: " +
                      std::string(verdict_name(duflot.tight.v)));
    for (const std::string& note : depth.notes) r.warnings.push_back(note);

    r.red_alert = axioms_red(ax) || depth.red_alert || !duflot.consistent;
    return emit(r, json_mode, start);
}

int cmd_polarise_build(const std::string& manifest, const std::string& out, long long cap,
                       bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "polarise build";
    add_input(r, "manifest", manifest);

    CohomologySystem sys = load_system(manifest);
    for (const std::string& e : sys.errors) r.warnings.push_back(e);
    if (!sys.group)
        throw std::runtime_error("the manifest supplies no group table, so the restriction "
                                 "system cannot be built");
    ParameterSystem ps = canonical_restrictions(*sys.group, cap);
    if (!out.empty()) save_parameter_system(ps, out);

    r.results["provenance"] = provenance_name(ps.provenance);
    r.results["z"] = ps.z;
    r.results["r"] = ps.r;
    r.results["zeta_degrees"] = ps.zeta_degrees;
    r.results["kappa_degrees"] = ps.kappa_degrees;
    r.results["subgroups_covered"] = ps.images.size();
    r.results["written"] = out.empty() ? json(nullptr) : json(out);
    r.lines.push_back("built the power-of-invariants restriction system: z = " +
                      std::to_string(ps.z) + ", r = " + std::to_string(ps.r) + ", images on " +
                      std::to_string(ps.images.size()) + " subgroups");
    if (!out.empty()) r.lines.push_back("written to " + out);
    return emit(r, json_mode, start);
}

int cmd_polarise_verify(const std::string& manifest, const std::string& sysfile,
                        std::optional<int> bound_opt, bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "polarise verify";
    add_input(r, "manifest", manifest);
    add_input(r, "system", sysfile);

    CohomologySystem sys = load_system(manifest);
    for (const std::string& e : sys.errors) r.warnings.push_back(e);
    ParameterSystem ps = load_parameter_system(sysfile, sys);
    const int bound = bound_opt ? *bound_opt : system_default_bound(ps);
    r.bound = bound;

    AxiomReport ax = check_axioms(sys, ps, bound);
    r.results["axioms"] = axioms_json(ax);
    r.results["mode"] = ps.restriction_only ? "restriction-only" : "ring";
    axiom_lines(r, "axioms", ax);
    r.red_alert = axioms_red(ax);
    return emit(r, json_mode, start);
}

int cmd_example_extraspecial(int p, int n, std::optional<int> bound_opt, long long cap,
                             bool json_mode) {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.command = "example extraspecial";

    GroupTable G = GroupTable::extraspecial_plus(p, n);
    CohomologySystem sys = system_from_group(G);
    ParameterSystem canon = canonical_restrictions(G, cap);
    ParameterSystem chern = chern_induced_system(G);

    r.results["p"] = p;
    r.results["n"] = n;
    r.results["order"] = G.order();
    r.results["z"] = canon.z;
    r.results["r"] = canon.r;
    r.lines.push_back("extraspecial group of order " + std::to_string(G.order()) + ": z = " +
                      std::to_string(canon.z) + ", r = " + std::to_string(canon.r));

    const int canon_bound = bound_opt ? *bound_opt : system_default_bound(canon);
    const int chern_bound = bound_opt ? *bound_opt : system_default_bound(chern);
    r.bound = canon_bound;
    AxiomReport canon_ax = check_axioms(sys, canon, canon_bound);
    AxiomReport chern_ax = check_axioms(sys, chern, chern_bound);
    r.results["canonical_axioms"] = axioms_json(canon_ax);
    r.results["chern_axioms"] = axioms_json(chern_ax);
    axiom_lines(r, "canonical system", canon_ax);
    axiom_lines(r, "character-product system", chern_ax);

    // The two constructions must agree kappa-by-kappa up to a Frobenius
    // twist and a unit scalar, on every family member.
    bool all_matched = true;
    json matches = json::array();
    for (const auto& [id, im] : chern.images) {
        const RestrictionImages& cim = canon.images.at(id);
        for (size_t j = 0; j < im.kappas.size(); ++j) {
            PowerScalarMatch ma = match_up_to_power_and_unit(im.kappas[j], cim.kappas[j], p);
            matches.push_back(json{{"subgroup", id},
                                   {"kappa", j + 1},
                                   {"found", ma.found},
                                   {"a", ma.a},
                                   {"b", ma.b},
                                   {"unit", ma.unit}});
            all_matched = all_matched && ma.found;
        }
    }
    r.results["kappa_comparison"] = std::move(matches);
    r.results["kappas_agree"] = all_matched;
    r.lines.push_back(std::string("kappa images of the two systems agree up to powers and "
                                  "units: ") +
                      (all_matched ? "yes" : "NO"));

    // Norm-product identity on every member above the central rank.
    int theta_checked = 0;
    bool theta_ok = true;
    for (int d = canon.z + 1; d <= canon.r; ++d) {
        for (const Subgroup& V : enumerate_ACd(G, d).members) {
            ThetaResult th = theta_restriction(G, V, cap);
            theta_ok = theta_ok && th.matches &&
                       th.value == canon.images.at(V.id(G)).kappas[0];
            ++theta_checked;
        }
    }
    r.results["theta"] = json{{"checked", theta_checked}, {"all_match", theta_ok}};
    r.lines.push_back("norm-product identity on " + std::to_string(theta_checked) +
                      " subgroups: " + (theta_ok ? "ok" : "FAILED"));

    r.red_alert = axioms_red(canon_ax) || axioms_red(chern_ax) || !all_matched || !theta_ok;
    return emit(r, json_mode, start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariant-theory and depth computations for p-group cohomology"};
    app.require_subcommand(1);

    bool json_mode = false;
    app.add_flag("--json", json_mode, "emit the report as JSON on stdout");

    // group analyze FILE
    auto* group = app.add_subcommand("group", "group-table utilities");
    group->require_subcommand(1);
    auto* analyze = group->add_subcommand("analyze", "families, orbits, centralizer orders");
    std::string group_file;
    analyze->add_option("file", group_file, "group JSON file")->required();

    // ring hilbert FILE --bound D
    auto* ring = app.add_subcommand("ring", "presented-ring utilities");
    ring->require_subcommand(1);
    auto* hilbert = ring->add_subcommand("hilbert", "degreewise dimensions");
    std::string ring_file;
    int hilbert_bound = 20;
    hilbert->add_option("file", ring_file, "ring JSON file")->required();
    hilbert->add_option("--bound", hilbert_bound, "top degree (default 20)");

    // dickson --p P --m M
    auto* dickson = app.add_subcommand("dickson", "span-product invariants with self-checks");
    int dk_p = 2, dk_m = 2, dk_trials = 20;
    long long dk_cap = kDefaultSpanCap;
    uint64_t dk_seed = 20240822;
    dickson->add_option("--p", dk_p, "prime")->required();
    dickson->add_option("--m", dk_m, "rank")->required();
    dickson->add_option("--cap", dk_cap, "span size cap (default 81)");
    dickson->add_option("--trials", dk_trials, "random substitution trials (default 20)");
    dickson->add_option("--seed", dk_seed, "seed for the random substitutions");

    // steenrod --p P --m M --i I EXPR
    auto* steenrod = app.add_subcommand("steenrod", "apply a power operation");
    int st_p = 2, st_m = 2;
    long long st_i = 1;
    std::string st_expr;
    steenrod->add_option("--p", st_p, "prime")->required();
    steenrod->add_option("--m", st_m, "rank of the coordinate algebra")->required();
    steenrod->add_option("--i", st_i, "operation index")->required();
    steenrod->add_option("expr", st_expr, "element to act on")->required();

    // depth report MANIFEST --system SYS --bound D
    auto* depth = app.add_subcommand("depth", "depth and detection analysis");
    depth->require_subcommand(1);
    auto* report = depth->add_subcommand("report", "tau numbers, tightness, axioms");
    std::string depth_manifest, depth_system;
    std::optional<int> depth_bound;
    report->add_option("manifest", depth_manifest, "system manifest JSON")->required();
    report->add_option("--system", depth_system, "parameter-system JSON")->required();
    report->add_option("--bound", depth_bound, "top degree (default from the fixture)");

    // polarise build|verify
    auto* polarise = app.add_subcommand("polarise", "parameter-system construction and checks");
    polarise->require_subcommand(1);
    auto* build = polarise->add_subcommand("build", "canonical restriction system from a group");
    std::string build_manifest, build_out;
    long long build_cap = kDefaultSpanCap;
    build->add_option("manifest", build_manifest, "system manifest JSON")->required();
    build->add_option("--out", build_out, "write the system to this file");
    build->add_option("--cap", build_cap, "span size cap (default 81)");
    auto* verify = polarise->add_subcommand("verify", "axiom checks for a stored system");
    std::string verify_manifest, verify_system;
    std::optional<int> verify_bound;
    verify->add_option("manifest", verify_manifest, "system manifest JSON")->required();
    verify->add_option("--system", verify_system, "parameter-system JSON")->required();
    verify->add_option("--bound", verify_bound, "top degree (default from the degrees)");

    // example extraspecial --p P --n N
    auto* example = app.add_subcommand("example", "built-in worked examples");
    example->require_subcommand(1);
    auto* extraspecial = example->add_subcommand(
        "extraspecial", "compare the two parameter systems of an extraspecial group");
    int ex_p = 3, ex_n = 1;
    std::optional<int> ex_bound;
    long long ex_cap = kDefaultSpanCap;
    extraspecial->add_option("--p", ex_p, "prime")->required();
    extraspecial->add_option("--n", ex_n, "generator pairs (order p^(1+2n))")->required();
    extraspecial->add_option("--bound", ex_bound, "top degree (default from the degrees)");
    extraspecial->add_option("--cap", ex_cap, "span size cap (default 81)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (*analyze) return cmd_group_analyze(group_file, json_mode);
        if (*hilbert) return cmd_ring_hilbert(ring_file, hilbert_bound, json_mode);
        if (*dickson) return cmd_dickson(dk_p, dk_m, dk_cap, dk_trials, dk_seed, json_mode);
        if (*steenrod) return cmd_steenrod(st_p, st_m, st_i, st_expr, json_mode);
        if (*report) return cmd_depth_report(depth_manifest, depth_system, depth_bound, json_mode);
        if (*build) return cmd_polarise_build(build_manifest, build_out, build_cap, json_mode);
        if (*verify)
            return cmd_polarise_verify(verify_manifest, verify_system, verify_bound, json_mode);
        if (*extraspecial)
            return cmd_example_extraspecial(ex_p, ex_n, ex_bound, ex_cap, json_mode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}
