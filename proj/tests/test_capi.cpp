#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "swx.h"

using nlohmann::json;

namespace {

// RAII helper for strings handed out by the C API.
struct OwnedString {
    char* value = nullptr;
    ~OwnedString() { swx_string_free(value); }
    json parsed() const { return json::parse(value); }
};

struct OwnedDfa {
    swx_dfa* handle = nullptr;
    ~OwnedDfa() { swx_dfa_free(handle); }
};

}  // namespace

TEST_CASE("dfa handles: json and regex constructors, queries, round-trip") {
    OwnedDfa dfa;
    REQUIRE(swx_dfa_from_json(R"({"alphabet": ["a","b"], "initial": 0, "finals": [1],
                                  "delta": [[1,2],[1,1],[2,2]], "pad": "a"})",
                              &dfa.handle) == SWX_OK);
    int yes = 0;
    CHECK(swx_dfa_accepts(dfa.handle, "ab", &yes) == SWX_OK);
    CHECK(yes == 1);
    CHECK(swx_dfa_accepts(dfa.handle, "b", &yes) == SWX_OK);
    CHECK(yes == 0);
    uint32_t states = 0;
    CHECK(swx_dfa_state_count(dfa.handle, &states) == SWX_OK);
    CHECK(states == 3);

    OwnedString text;
    REQUIRE(swx_dfa_to_json(dfa.handle, &text.value) == SWX_OK);
    OwnedDfa again;
    REQUIRE(swx_dfa_from_json(text.value, &again.handle) == SWX_OK);
    CHECK(swx_dfa_accepts(again.handle, "aab", &yes) == SWX_OK);
    CHECK(yes == 1);

    OwnedDfa from_regex;
    REQUIRE(swx_dfa_from_regex("(a|b|c)*a", "abc", 0, &from_regex.handle) == SWX_OK);
    CHECK(swx_dfa_accepts(from_regex.handle, "cba", &yes) == SWX_OK);
    CHECK(yes == 1);
}

TEST_CASE("error codes and thread-local messages") {
    swx_dfa* dfa = nullptr;
    CHECK(swx_dfa_from_json("{not json", &dfa) == SWX_ERR_PARSE);
    CHECK(std::strlen(swx_last_error()) > 0);

    CHECK(swx_dfa_from_json(R"({"alphabet": ["a"], "initial": 0, "finals": [],
                                "delta": [[0],[0]], "pad": "b"})",
                            &dfa) == SWX_ERR_CONTRACT);
    CHECK(std::string(swx_last_error()).find("pad") != std::string::npos);

    CHECK(swx_dfa_from_regex("a(b", "ab", 0, &dfa) == SWX_ERR_PARSE);
    CHECK(swx_dfa_from_json(nullptr, &dfa) == SWX_ERR_INVALID);

    // foreign symbol in accepts
    OwnedDfa ok;
    REQUIRE(swx_dfa_from_regex("a*", "ab", 0, &ok.handle) == SWX_OK);
    int out = 0;
    CHECK(swx_dfa_accepts(ok.handle, "xy", &out) == SWX_ERR_CONTRACT);
}

TEST_CASE("classification and witnesses through the C surface") {
    OwnedDfa dfa;
    REQUIRE(swx_dfa_from_regex("a(a|b|c)*", "abc", 0, &dfa.handle) == SWX_OK);

    OwnedString verdict;
    REQUIRE(swx_classify(dfa.handle, &verdict.value) == SWX_OK);
    json v = verdict.parsed();
    CHECK(v["classes"]["ST-Len"] == false);
    CHECK(v["classes"]["LI-PF-Len"] == false);
    CHECK(v["settings"]["det-zero"] == "Linear");
    CHECK(v["witnesses"].size() == 5);

    OwnedString witness;
    REQUIRE(swx_witness(dfa.handle, "LI-Len", &witness.value) == SWX_OK);
    json w = witness.parsed();
    CHECK(w["variant"] == "linear-gap");
    CHECK(w["valid"] == true);

    char* none = nullptr;
    OwnedDfa member;
    REQUIRE(swx_dfa_from_regex("(a|b|c)*a", "abc", 0, &member.handle) == SWX_OK);
    CHECK(swx_witness(member.handle, "LI-Len", &none) == SWX_ERR_NO_WITNESS);
    CHECK(swx_witness(dfa.handle, "nonsense", &none) == SWX_ERR_INVALID);
}

TEST_CASE("compiled algorithms: factory, stepping, space accounting") {
    const char* spec = R"({"op": "leaf", "regex": "(a|b)*a(a|b)*", "alphabet": "ab",
                           "tag": "left-ideal"})";
    swx_factory* factory = nullptr;
    REQUIRE(swx_compile(spec, "det-zero", &factory) == SWX_OK);

    OwnedString meta;
    REQUIRE(swx_factory_metadata(factory, 16, &meta.value) == SWX_OK);
    json m = meta.parsed();
    CHECK(m["instance"]["algorithm"] == "path-summary");
    CHECK(m["setting"] == "det-zero");

    swx_swa* inst = nullptr;
    REQUIRE(swx_factory_instantiate(factory, 4, 7, &inst) == SWX_OK);
    int answer = -1;
    CHECK(swx_swa_query(inst, &answer) == SWX_OK);
    // pad defaults to 'a', so the initial window aaaa already contains an a
    CHECK(answer == 1);

    uint64_t bits = 0;
    CHECK(swx_swa_space_bits(inst, &bits) == SWX_OK);
    CHECK(bits > 0);
    CHECK(swx_swa_step(inst, 'b') == SWX_OK);
    CHECK(swx_swa_step(inst, 'x') == SWX_ERR_CONTRACT);
    swx_swa_free(inst);
    swx_factory_free(factory);

    // tag check failures surface as contract errors
    swx_factory* bad = nullptr;
    CHECK(swx_compile(R"({"op": "leaf", "regex": "ab*", "alphabet": "ab", "tag": "left-ideal"})",
                      "det-zero", &bad) == SWX_ERR_CONTRACT);
    CHECK(swx_compile(spec, "middling", &bad) == SWX_ERR_PARSE);
}

TEST_CASE("experiment round trip through JSON requests") {
    json request = {
        {"spec", {{"op", "leaf"}, {"regex", "(a|b)*a"}, {"alphabet", "ab"},
                  {"tag", {{"kind", "suffix-pattern"}, {"word", "a"}}}}},
        {"setting", "det-zero"},
        {"n", 4},
        {"stream", {{"kind", "literal"}, {"word", "abbaab"}}},
        {"trials", 3},
        {"eps", 0.0},
        {"seed", 9},
    };
    OwnedString out;
    REQUIRE(swx_run_experiment(request.dump().c_str(), &out.value) == SWX_OK);
    json r = out.parsed();
    CHECK(r["report"]["failure_ratio"] == 0.0);
    CHECK(r["report"]["errors"].size() == 7);
    CHECK(r["bounds"]["per_instant_error"]["pass"] == true);

    // witness-class streams resolve against the compiled language
    json adversarial = request;
    adversarial["spec"] = {{"op", "leaf"}, {"regex", "(a|b)*a(a|b)*"}, {"alphabet", "ab"},
                           {"tag", "left-ideal"}};
    adversarial["stream"] = {{"kind", "witness-class"}, {"class", "ST-SF-Len"}, {"m", 8}, {"i", 8}};
    OwnedString out2;
    REQUIRE(swx_run_experiment(adversarial.dump().c_str(), &out2.value) == SWX_OK);
    CHECK(out2.parsed()["report"]["failure_ratio"] == 0.0);  // path summary is exact

    CHECK(swx_run_experiment("{}", &out.value) == SWX_ERR_INTERNAL);  // missing fields
    CHECK(swx_run_experiment("][", &out.value) == SWX_ERR_PARSE);
}

TEST_CASE("space bench through JSON requests") {
    json request = {
        {"spec", {{"op", "leaf"}, {"regex", "(a|b)*a(a|b)*"}, {"alphabet", "ab"},
                  {"tag", "left-ideal"}}},
        {"setting", "det-zero"},
        {"ns", {16, 32, 64, 128, 256, 512, 1024}},
        {"seed", 3},
        {"probe_factor", 2},
    };
    OwnedString out;
    REQUIRE(swx_bench_space(request.dump().c_str(), &out.value) == SWX_OK);
    json r = out.parsed();
    CHECK(r["best_shape"] == "log");
    CHECK(r["points"].size() == 7);
}
