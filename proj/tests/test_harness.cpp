#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "swx/harness.hpp"
#include "swx/json_io.hpp"
#include "test_support.hpp"

using namespace swx;
using testsup::regex_dfa;

namespace {

WitnessPattern linear_gap_example() {
    WitnessPattern w;
    w.variant = WitnessPattern::Variant::linear_gap;
    w.words = {{"x0", "a"}, {"u0", "b"}, {"x1", "a"}, {"u1", "a"}, {"u", ""}};
    return w;
}

}  // namespace

TEST_CASE("stream generation: literal, repeat, uniform, witness families") {
    Alphabet ab("ab");
    CHECK(gen_stream(StreamSpec::literal("abab"), ab) == "abab");
    CHECK(gen_stream(StreamSpec::repeat("aaab", 5), ab) == "aaabaaabaaabaaabaaab");
    CHECK_THROWS_WITH_AS(gen_stream(StreamSpec::literal("xyz"), ab),
                         doctest::Contains("outside the alphabet"), Error);

    std::string u1 = gen_stream(StreamSpec::uniform_stream(64, 7), ab);
    std::string u2 = gen_stream(StreamSpec::uniform_stream(64, 7), ab);
    std::string u3 = gen_stream(StreamSpec::uniform_stream(64, 8), ab);
    CHECK(u1 == u2);
    CHECK(u1 != u3);
    CHECK(u1.size() == 64);

    // w_alpha (x0 u0)^i u expanded by definition: alpha = "10", i = 1
    std::string got = gen_stream(StreamSpec::witness(linear_gap_example(), 2, 1, "10"), ab);
    std::string expect = std::string("a") + "a" + "a" + "b" + ("ab") + "";
    CHECK(got == expect);  // x1 u1 x0 u0 (x0 u0)^1 u = "aa"+"ab"+"ab"

    // z^m y x^i u
    WitnessPattern lg;
    lg.variant = WitnessPattern::Variant::log_gap;
    lg.words = {{"u", "b"}, {"x", "a"}, {"y", "b"}, {"z", "b"}};
    CHECK(gen_stream(StreamSpec::witness(lg, 3, 2), ab) == "bbbbaab");

    // x^{m-1} w v (uv)^i
    WitnessPattern flg;
    flg.variant = WitnessPattern::Variant::failure_log_gap;
    flg.words = {{"u", "a"}, {"v", "a"}, {"w", "ca"}, {"x", "aa"}};
    CHECK(gen_stream(StreamSpec::witness(flg, 3, 2), Alphabet("abc")) == "aaaa" "ca" "a" "aaaa");
}

TEST_CASE("stream spec JSON round-trip") {
    auto spec = stream_spec_from_json(nlohmann::json::parse(
        R"({"kind": "uniform", "length": 32, "seed": 5})"));
    CHECK(spec.kind == StreamSpec::Kind::uniform);
    CHECK(gen_stream(spec, Alphabet("ab")).size() == 32);

    auto wspec = stream_spec_from_json(nlohmann::json::parse(
        R"({"kind": "witness", "m": 2, "i": 1, "alpha": "10",
            "pattern": {"variant": "linear-gap", "case": 1,
                        "words": {"x0": "a", "u0": "b", "x1": "a", "u1": "a", "u": ""}}})"));
    CHECK(gen_stream(wspec, Alphabet("ab")) == "aaabab");
}

TEST_CASE("estimate_errors: exact oracle has zero error everywhere") {
    Dfa lang = regex_dfa("(a|b)*a", "ab");
    std::string stream = gen_stream(StreamSpec::uniform_stream(200, 3), lang.alphabet);
    TrialReport report = estimate_errors([&](uint64_t) { return exact_oracle(lang, 8); }, lang, 8,
                                         stream, 5, 1.0 / 3.0, 42);
    CHECK(report.error.size() == 201);
    for (double e : report.error) CHECK(e == 0.0);
    CHECK(report.failure_ratio == 0.0);
    CHECK(report.strict_error == 0.0);
    CHECK(report.space_max_bits == 8);  // ring of 8 binary symbols
}

TEST_CASE("estimate_errors: bernoulli error at an instant matches the closed form") {
    // L = Sigma*aSigma*, pad b; after "a b^(n-1)" the summary value is n
    Dfa lang = regex_dfa("(a|b)*a(a|b)*", "ab", 'b');
    Dfa rev = minimize(reverse(lang));
    rev.pad = 'b';
    uint64_t n = 16;
    double beta = 1.0 / (2.0 * n);
    std::string stream = "a" + std::string(n - 1, 'b');

    TrialReport report = estimate_errors(
        [&](uint64_t s) { return bernoulli_swa(rev, n, beta, s); }, lang, n, stream, 4000,
        1.0 / 3.0, 7);
    // truth at the last instant: window a b^(n-1) contains an a
    CHECK(report.truth.back());
    double expect_err = 1.0 - std::pow(1.0 - beta, static_cast<double>(n));
    CHECK(std::abs(report.error.back() - expect_err) < 0.03);
}

TEST_CASE("estimate_errors: deterministic failure ratio is an exact count at T=1") {
    Dfa lang = minimize(regex_dfa("a*b", "ab"));
    uint64_t n = 32;
    std::string stream;
    for (int rep = 0; rep < 8; ++rep) stream += std::string(n - 1, 'a') + "b";

    TrialReport report = estimate_errors(
        [&](uint64_t) { return trivial_reject_swa(lang, n, 2.0 * 3.0 / n); }, lang, n, stream, 1,
        0.0, 0);
    // the constant-reject is wrong exactly at the windows a^(n-1) b
    uint64_t expect_failures = 0;
    auto oracle = exact_oracle(lang, n);
    if (oracle->query()) ++expect_failures;
    for (char c : stream) {
        oracle->step(c);
        if (oracle->query()) ++expect_failures;
    }
    CHECK(expect_failures == 8);
    CHECK(report.failure_ratio ==
          static_cast<double>(expect_failures) / static_cast<double>(stream.size() + 1));
    CHECK(report.failure_ratio <= 2.0 * 3.0 / n);
    CHECK(report.strict_error == 1.0);  // every run errs somewhere
}

TEST_CASE("estimate_errors: reports are byte-identical across reruns and worker counts") {
    Dfa lang = regex_dfa("(a|b)*a(a|b)*", "ab", 'b');
    Dfa rev = minimize(reverse(lang));
    rev.pad = 'b';
    std::string stream = gen_stream(StreamSpec::uniform_stream(120, 9), lang.alphabet);
    auto factory = [&](uint64_t s) { return bernoulli_swa(rev, 12, 0.04, s); };

    TrialReport a = estimate_errors(factory, lang, 12, stream, 200, 0.25, 77, 1);
    TrialReport b = estimate_errors(factory, lang, 12, stream, 200, 0.25, 77, 1);
    TrialReport c = estimate_errors(factory, lang, 12, stream, 200, 0.25, 77, 4);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_json().dump() == c.to_json().dump());
    CHECK(a.to_csv() == b.to_csv());

    TrialReport d = estimate_errors(factory, lang, 12, stream, 200, 0.25, 78, 1);
    CHECK(a.to_json().dump() != d.to_json().dump());
}

TEST_CASE("estimate_errors: alphabet mismatch is rejected") {
    Dfa lang = regex_dfa("(a|b)*a", "ab");
    CHECK_THROWS_AS(estimate_errors([&](uint64_t) { return exact_oracle(lang, 4); }, lang, 4,
                                    "abcabc", 1, 0.0, 0),
                    Error);
}

TEST_CASE("bound checks: margins and exact comparisons") {
    TrialReport report;
    report.trials = 10000;
    report.error.assign(50, 0.0);
    report.failure_ratio = 0.0;
    report.space_max_bits = 12;

    CHECK(verify_bounds(report, BoundKind::per_instant_error, 1.0 / 3.0).pass);

    report.error[10] = 0.5;
    auto check = verify_bounds(report, BoundKind::per_instant_error, 1.0 / 3.0);
    CHECK_FALSE(check.pass);
    CHECK(check.margin == doctest::Approx(3.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 10000)));

    // deterministic: no margin at all
    auto exact = verify_bounds(report, BoundKind::per_instant_error, 0.5, false);
    CHECK(exact.pass);
    CHECK(exact.margin == 0.0);

    report.failure_ratio = 0.09;
    CHECK(verify_bounds(report, BoundKind::failure_ratio, 0.1).pass);
    CHECK_FALSE(verify_bounds(report, BoundKind::failure_ratio, 0.05).pass);

    CHECK(verify_bounds(report, BoundKind::space_max, 12).pass);
    CHECK_FALSE(verify_bounds(report, BoundKind::space_max, 11).pass);
}

TEST_CASE("estimator stability: passing bounds survive doubling the trial count") {
    Dfa lang = regex_dfa("(a|b)*a(a|b)*", "ab", 'b');
    Dfa rev = minimize(reverse(lang));
    rev.pad = 'b';
    uint64_t n = 12;
    std::string stream = "a" + std::string(2 * n, 'b');
    double beta = 1.0 / (2.0 * n);
    // worst true per-instant error: (1-beta)^(n+1) just past the window
    // boundary, about 0.58 here; 0.65 leaves stable headroom
    double bound = 0.65;

    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto factory = [&](uint64_t s) { return bernoulli_swa(rev, n, beta, s); };
        TrialReport t1 = estimate_errors(factory, lang, n, stream, 2000, bound, seed);
        TrialReport t2 = estimate_errors(factory, lang, n, stream, 4000, bound, seed);
        CHECK(verify_bounds(t1, BoundKind::per_instant_error, bound).pass);
        CHECK(verify_bounds(t2, BoundKind::per_instant_error, bound).pass);
    }
}

TEST_CASE("growth fitting identifies synthetic shapes") {
    std::vector<GrowthPoint> constant, logs, loglogs, linears;
    for (uint64_t e = 4; e <= 16; ++e) {
        uint64_t n = 1ull << e;
        constant.push_back({n, 7.0});
        logs.push_back({n, 3.0 * e + 1.0});
        loglogs.push_back({n, 2.0 * std::log2(static_cast<double>(e)) + 0.5});
        linears.push_back({n, 2.0 * static_cast<double>(n)});
    }
    CHECK(fit_growth(constant).best_shape == "const");
    CHECK(fit_growth(logs).best_shape == "log");
    CHECK(fit_growth(loglogs).best_shape == "loglog");
    CHECK(fit_growth(linears).best_shape == "linear");
}

TEST_CASE("measured growth: path summary is log, bernoulli const, oracle linear") {
    Dfa lang = regex_dfa("(a|b)*a(a|b)*", "ab");
    Dfa rev = minimize(reverse(lang));
    std::vector<uint64_t> ns;
    for (uint64_t e = 4; e <= 12; ++e) ns.push_back(1ull << e);

    auto log_report = measure_space_growth(
        [&](uint64_t n, uint64_t) { return path_summary_swa(rev, n, QueryMode::at_most_n); }, ns,
        lang.alphabet, 2, 5);
    CHECK(log_report.best_shape == "log");

    auto const_report = measure_space_growth(
        [&](uint64_t n, uint64_t s) { return bernoulli_swa(rev, n, 1.0 / (2.0 * n), s); }, ns,
        lang.alphabet, 2, 5);
    CHECK(const_report.best_shape == "const");

    auto lin_report = measure_space_growth(
        [&](uint64_t n, uint64_t) { return exact_oracle(lang, n); }, ns, lang.alphabet, 2, 5);
    CHECK(lin_report.best_shape == "linear");
}

TEST_CASE("report JSON and CSV carry the per-instant series") {
    Dfa lang = regex_dfa("(a|b)*a", "ab");
    TrialReport report = estimate_errors([&](uint64_t) { return exact_oracle(lang, 4); }, lang, 4,
                                         "abab", 3, 0.5, 11);
    auto j = report.to_json();
    CHECK(j["errors"].size() == 5);
    CHECK(j["truth"].size() == 5);
    CHECK(j["algorithm"]["algorithm"] == "exact-oracle");
    CHECK(j["n"] == 4);

    std::string csv = report.to_csv();
    CHECK(csv.substr(0, 14) == "t,error,truth\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
