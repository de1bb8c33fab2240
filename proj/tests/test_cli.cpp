#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

std::string data_path(const std::string& rel) {
    return std::string(COHDEPTH_DATA_DIR) + "/" + rel;
}

struct RunResult {
    int code = -1;
    std::string out;
};

// Runs the built binary with stderr dropped; stdout is the report channel.
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(COHDEPTH_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// ---------------------------------------------------------------------------
// A small validator for the subset of JSON Schema the shipped schema uses:
// type (single or list), enum, required, properties, additionalProperties
// (bool or schema), items.

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void validate(const json& schema, const json& v, const std::string& where,
              std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const json& t = schema.at("type");
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(v, t.get<std::string>());
        } else {
            for (const auto& one : t) ok = ok || type_matches(v, one.get<std::string>());
        }
        if (!ok) errors.push_back(where + ": type mismatch");
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& cand : schema.at("enum")) ok = ok || cand == v;
        if (!ok) errors.push_back(where + ": not one of the allowed values");
    }
    if (v.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required"))
                if (!v.contains(key.get<std::string>()))
                    errors.push_back(where + ": missing required key " + key.get<std::string>());
        const json props = schema.value("properties", json::object());
        for (auto it = v.begin(); it != v.end(); ++it) {
            const std::string child = where + "." + it.key();
            if (props.contains(it.key())) {
                validate(props.at(it.key()), it.value(), child, errors);
            } else if (schema.contains("additionalProperties")) {
                const json& extra = schema.at("additionalProperties");
                if (extra.is_boolean() && !extra.get<bool>())
                    errors.push_back(where + ": unexpected key " + it.key());
                else if (extra.is_object())
                    validate(extra, it.value(), child, errors);
            }
        }
    }
    if (v.is_array() && schema.contains("items")) {
        int i = 0;
        for (const auto& entry : v)
            validate(schema.at("items"), entry, where + "[" + std::to_string(i++) + "]", errors);
    }
}

json schema() {
    std::ifstream in(data_path("report.schema.json"));
    REQUIRE(in.good());
    json s;
    in >> s;
    return s;
}

json parse_report(const RunResult& res) {
    CAPTURE(res.out);
    REQUIRE_FALSE(res.out.empty());
    json report = json::parse(res.out);
    std::vector<std::string> errors;
    validate(schema(), report, "$", errors);
    CAPTURE(errors);
    CHECK(errors.empty());
    return report;
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("group analyze reports ranks and family sizes") {
    RunResult res = run_cli("--json group analyze " + data_path("groups/d8.json"));
    CHECK(res.code == 0);
    json rep = parse_report(res);
    CHECK(rep.at("command") == "group analyze");
    CHECK(rep.at("results").at("z") == 1);
    CHECK(rep.at("results").at("r") == 2);
    CHECK(rep.at("results").at("families").at(1).at("count") == 2);

    json cube = parse_report(run_cli("--json group analyze " + data_path("groups/c2cube.json")));
    CHECK(cube.at("results").at("z") == 3);
    CHECK(cube.at("results").at("r") == 3);

    json es = parse_report(run_cli("--json group analyze " + data_path("groups/es27.json")));
    CHECK(es.at("results").at("z") == 1);
    CHECK(es.at("results").at("r") == 2);
    CHECK(es.at("results").at("families").at(1).at("count") == 4);
}

TEST_CASE("reports are byte-identical across runs") {
    const std::string cmd = "--json depth report " + data_path("manifests/d8.json") +
                            " --system " + data_path("systems/d8_system.json");
    RunResult first = run_cli(cmd);
    RunResult second = run_cli(cmd);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK_FALSE(first.out.empty());
}

TEST_CASE("depth report on the shipped fixtures") {
    json d8 = parse_report(run_cli("--json depth report " + data_path("manifests/d8.json") +
                                   " --system " + data_path("systems/d8_system.json")));
    CHECK(d8.at("status") == "ok");
    CHECK(d8.at("results").at("depth").at("tau_a").at("value") == 2);
    CHECK(d8.at("results").at("duflot").at("tight").at("verdict") == "no");
    CHECK(d8.at("results").at("axioms").at("ps2prime").at("status") == "pass");

    json q8 = parse_report(run_cli("--json depth report " + data_path("manifests/q8.json") +
                                   " --system " + data_path("systems/q8_system.json")));
    CHECK(q8.at("status") == "ok");
    CHECK(q8.at("results").at("depth").at("z") == 1);
    CHECK(q8.at("results").at("depth").at("r") == 1);
    CHECK(q8.at("results").at("depth").at("tau_a").at("value") == 1);
}

TEST_CASE("an axiom violation turns into the red-alert exit code") {
    const std::string bad = temp_file("cli_bad_system.json");
    {
        std::ofstream out(bad);
        out << R"({"mode": "ring", "zetas": ["w"], "kappas": ["w"],
                   "zeta_degrees": [2], "kappa_degrees": [2]})";
    }
    RunResult res = run_cli("--json depth report " + data_path("manifests/d8.json") +
                            " --system " + bad);
    CHECK(res.code == 2);
    json rep = parse_report(res);
    CHECK(rep.at("status") == "red-alert");
    CHECK(rep.at("results").at("axioms").at("ps4").at("status") == "fail");
    const std::string detail = rep.at("results").at("axioms").at("ps4").at("detail");
    CHECK(detail.find("kappa 1") != std::string::npos);
    std::remove(bad.c_str());
}

TEST_CASE("usage and io problems exit with code one") {
    CHECK(run_cli("depth report /nonexistent/manifest.json --system /nonexistent/sys.json").code ==
          1);
    CHECK(run_cli("no-such-command").code == 1);
    CHECK(run_cli("dickson --m 2").code == 1);  // --p is required
    CHECK(run_cli("group analyze " + data_path("report.schema.json")).code == 1);
}

TEST_CASE("polarise build produces a system that verify accepts") {
    const std::string out_path = temp_file("cli_built_system.json");
    json built = parse_report(run_cli("--json polarise build " + data_path("manifests/d8.json") +
                                      " --out " + out_path));
    CHECK(built.at("results").at("z") == 1);
    CHECK(built.at("results").at("r") == 2);
    CHECK(built.at("results").at("subgroups_covered") == 3);
    CHECK(built.at("results").at("provenance") == "canonical");

    RunResult verify = run_cli("--json polarise verify " + data_path("manifests/d8.json") +
                               " --system " + out_path);
    CHECK(verify.code == 0);
    json rep = parse_report(verify);
    CHECK(rep.at("results").at("axioms").at("ps1").at("status") == "pass");
    CHECK(rep.at("results").at("axioms").at("ps4").at("status") == "pass");
    CHECK(rep.at("results").at("mode") == "restriction-only");
    std::remove(out_path.c_str());
}

TEST_CASE("dickson subcommand reports the invariants with self-checks") {
    json rep = parse_report(run_cli("--json dickson --p 2 --m 2"));
    CHECK(rep.at("results").at("expansion_identity") == true);
    CHECK(rep.at("results").at("gl").at("ok") == true);
    CHECK(rep.at("results").at("invariants").at(0).at("value") == "x^2 + x*y + y^2");
    CHECK(rep.at("results").at("invariants").at(1).at("value") == "x^2*y + x*y^2");
    for (const auto& row : rep.at("results").at("restrictions")) CHECK(row.at("match") == true);
}

TEST_CASE("steenrod subcommand applies a power operation") {
    json rep = parse_report(run_cli("--json steenrod --p 3 --m 2 --i 1 x^2"));
    CHECK(rep.at("results").at("output") == "2*x^4");
}

TEST_CASE("ring hilbert prints the degreewise dimensions") {
    json rep = parse_report(run_cli("--json ring hilbert " + data_path("rings/d8_ring.json") +
                                    " --bound 6"));
    CHECK(rep.at("results").at("dims") == json::array({1, 2, 3, 4, 5, 6, 7}));
}

TEST_CASE("extraspecial example compares the two constructions") {
    RunResult res = run_cli("--json example extraspecial --p 2 --n 1");
    CHECK(res.code == 0);
    json rep = parse_report(res);
    CHECK(rep.at("results").at("kappas_agree") == true);
    CHECK(rep.at("results").at("theta").at("all_match") == true);
    CHECK(rep.at("results").at("canonical_axioms").at("all_pass_1to4") == true);
    CHECK(rep.at("results").at("chern_axioms").at("all_pass_1to4") == true);
}
