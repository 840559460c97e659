#include "swx/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "swx/classify.hpp"
#include "swx/harness.hpp"
#include "swx/regex.hpp"
#include "swx/rng.hpp"
#include "swx/swa.hpp"

// Built-in acceptance criteria. Every numeric bound below is the shipped
// guarantee, checked at desk scale with fixed seeds; the Monte Carlo
// margins are 3-sigma binomial at the stated trial counts.

namespace swx {

namespace {

constexpr uint64_t kTrials = 10000;

struct Ctx {
    unsigned jobs;
    std::ostringstream detail;
};

Dfa regex_dfa(const std::string& pattern, const std::string& symbols, char pad = 0) {
    return build_dfa_from_regex(pattern, Alphabet(symbols), pad);
}

Dfa random_dfa(Rng& rng, const std::string& symbols, size_t states) {
    Dfa dfa;
    dfa.alphabet = Alphabet(symbols);
    dfa.pad = symbols[0];
    dfa.initial = 0;
    dfa.finals.resize(states);
    for (size_t q = 0; q < states; ++q) dfa.finals[q] = rng.coin(0.4);
    for (size_t i = 0; i < states * symbols.size(); ++i)
        dfa.delta.push_back(static_cast<State>(rng.below(states)));
    return dfa;
}

double acceptance_rate(const SwaSeedFactory& make, const std::string& stream, uint64_t trials,
                       uint64_t seed) {
    uint64_t yes = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        SwaPtr inst = make(derive_seed(seed, t));
        inst->feed(stream);
        yes += inst->query();
    }
    return static_cast<double>(yes) / static_cast<double>(trials);
}

const LangClass kAllClasses[] = {LangClass::st_len, LangClass::st_sf_len, LangClass::li_len,
                                 LangClass::lb_pf_sf_len, LangClass::li_pf_len};

// ---- 1. classification goldens --------------------------------------------

bool crit_goldens(Ctx& ctx) {
    struct Row {
        const char* regex;
        bool flags[5];  // ST-Len, ST-SF-Len, LI-Len, LB-PF-SF-Len, LI-PF-Len
    };
    const Row rows[] = {
        {"(a|b|c)*a", {1, 1, 1, 1, 1}},
        {"ab*", {0, 1, 1, 1, 1}},
        {"(a|b|c)*a(a|b|c)*", {0, 0, 1, 0, 1}},
        {"a*b", {0, 0, 1, 1, 1}},
        {"a(a|b)*c|(a|b)*", {0, 0, 0, 0, 1}},
        {"a(a|b|c)*", {0, 0, 0, 0, 0}},
    };
    bool ok = true;
    for (const Row& row : rows) {
        Dfa dfa = regex_dfa(row.regex, "abc");
        SpaceVerdict v = classify(dfa);
        for (int i = 0; i < 5; ++i)
            if (v.member[i] != row.flags[i]) {
                ctx.detail << row.regex << ": " << lang_class_name(static_cast<LangClass>(i))
                           << " = " << v.member[i] << " expected " << row.flags[i] << "; ";
                ok = false;
            }
        for (LangClass c : kAllClasses)
            if (!v.is_member(c)) {
                auto it = v.witnesses.find(lang_class_name(c));
                if (it == v.witnesses.end() || !validate_witness(dfa, c, it->second)) {
                    ctx.detail << row.regex << ": witness for " << lang_class_name(c)
                               << " missing or invalid; ";
                    ok = false;
                }
            }
    }
    if (ok) ctx.detail << "6 languages, all flags and witnesses as placed";
    return ok;
}

// ---- 2. lattice on a random corpus ------------------------------------------

bool crit_lattice(Ctx& ctx) {
    Rng rng(0xacce9701);
    int violations = 0;
    for (int round = 0; round < 200; ++round) {
        std::string symbols = round % 3 == 0 ? "ab" : (round % 3 == 1 ? "abc" : "ab");
        Dfa dfa = minimize(random_dfa(rng, symbols, 2 + rng.below(5)));
        SpaceVerdict v = classify(dfa);
        bool fine = (!v.is_member(LangClass::st_len) || v.is_member(LangClass::st_sf_len)) &&
                    (!v.is_member(LangClass::st_sf_len) ||
                     (v.is_member(LangClass::li_len) && v.is_member(LangClass::lb_pf_sf_len))) &&
                    (!v.is_member(LangClass::li_len) || v.is_member(LangClass::li_pf_len)) &&
                    (!v.is_member(LangClass::lb_pf_sf_len) || v.is_member(LangClass::li_pf_len));
        if (!fine) ++violations;
    }
    ctx.detail << "200 random minimal DFAs, " << violations << " lattice violations";
    return violations == 0;
}

// ---- 3. synchronized-pair oracle equivalence ---------------------------------

bool crit_sync_oracle(Ctx& ctx) {
    Rng rng(0xacce9703);
    int mismatches = 0;
    for (int round = 0; round < 500; ++round) {
        Dfa dfa = random_dfa(rng, "ab", 2 + rng.below(3));
        if (synchronized_pairs(dfa) != synchronized_pairs_matrix_oracle(dfa)) ++mismatches;
    }
    ctx.detail << "500 DFAs (<= 4 states, |Sigma| = 2), " << mismatches << " mismatches";
    return mismatches == 0;
}

// ---- 4. Bernoulli marginal law ------------------------------------------------

bool crit_bernoulli_law(Ctx& ctx) {
    // the loglog case-1 constant: (23/24)^12 >= 0.6
    bool ok = std::pow(23.0 / 24.0, 12.0) >= 0.6;
    if (!ok) ctx.detail << "(23/24)^12 < 0.6; ";

    // l_w(q0) = age of the most recent a for L = Sigma*aSigma*; pad b keeps
    // the initial window clean
    Dfa rev = minimize(reverse(regex_dfa("(a|b)*a(a|b)*", "ab", 'b')));
    rev.pad = 'b';
    Dfa all = regex_dfa("(a|b)*", "ab");  // q0 final: l = 0 everywhere

    double worst = 0.0;
    for (uint64_t n : {12ull, 64ull, 256ull}) {
        double beta = 1.0 / (2.0 * static_cast<double>(n));
        struct Point {
            uint64_t ell;
            std::string stream;
        };
        std::vector<Point> points = {{n / 2, "a" + std::string(n / 2 - 1, 'b')},
                                     {n, "a" + std::string(n - 1, 'b')},
                                     {2 * n, "a" + std::string(2 * n - 1, 'b')},
                                     {UINT64_MAX, std::string(2 * n + 5, 'b')}};
        for (auto& p : points) {
            double expect = p.ell == UINT64_MAX
                                ? 0.0
                                : std::pow(1.0 - beta, static_cast<double>(p.ell));
            double rate = acceptance_rate(
                [&](uint64_t s) { return bernoulli_swa(rev, n, beta, s); }, p.stream, kTrials,
                0xbe0 + n);
            worst = std::max(worst, std::abs(rate - expect));
        }
        // l = 0: initial state final, acceptance pinned to 1
        double one = acceptance_rate(
            [&](uint64_t s) { return bernoulli_swa(all, n, beta, s); }, "abab", 200, 0xbe1);
        worst = std::max(worst, std::abs(one - 1.0));
    }
    ctx.detail << "max |rate - (1-beta)^l| = " << worst << " (tolerance 0.02)";
    return ok && worst <= 0.02;
}

// ---- 5. loglog algorithm error, pre and post amplification ----------------------

bool crit_loglog(Ctx& ctx) {
    Dfa lang = regex_dfa("ab*", "ab");
    Dfa rev = minimize(reverse(lang));
    bool ok = true;
    double worst_raw = 0.0, worst_amp = 0.0;
    for (uint64_t n : {16ull, 64ull, 256ull}) {
        // covers l = n (case 1), l >= 2n (case 2) and l != n below 2n (case 3)
        std::string stream = std::string(n, 'b') + "a" + std::string(2 * n, 'b') + "a" +
                             std::string(2 * n - 2, 'b');

        TrialReport raw = estimate_errors(
            [&](uint64_t s) { return loglog_suffix_free_swa(rev, n, s); }, lang, n, stream,
            kTrials, 0.4, 0xacc0 + n, ctx.jobs);
        auto raw_check = verify_bounds(raw, BoundKind::per_instant_error, 0.4);
        worst_raw = std::max(worst_raw, raw_check.observed);
        ok = ok && raw_check.pass;

        TrialReport amp = estimate_errors(
            [&](uint64_t s) {
                return amplify(
                    [&](uint64_t s2) { return loglog_suffix_free_swa(rev, n, s2); }, 0.4,
                    1.0 / 3.0, s);
            },
            lang, n, stream, kTrials, 1.0 / 3.0, 0xacc1 + n, ctx.jobs);
        auto amp_check = verify_bounds(amp, BoundKind::per_instant_error, 1.0 / 3.0);
        worst_amp = std::max(worst_amp, amp_check.observed);
        ok = ok && amp_check.pass;
    }
    ctx.detail << "worst raw error " << worst_raw << " <= 0.4+3s, amplified " << worst_amp
               << " <= 1/3+3s";
    return ok;
}

// ---- 6. deterministic failure ratios --------------------------------------------

bool crit_det_failure(Ctx& ctx) {
    bool ok = true;
    double worst_slack = 0.0;
    for (uint64_t n : {64ull, 256ull, 1024ull}) {
        Dfa a_star_b = minimize(regex_dfa("a*b", "ab"));
        Dfa ends_ab = minimize(regex_dfa("(a|b)*ab", "ab"));
        double bound_tr = 2.0 * a_star_b.state_count() / static_cast<double>(n);
        double bound_lb = 2.0 * ends_ab.state_count() / static_cast<double>(n);

        std::string periodic;
        for (int rep = 0; rep < 8; ++rep) periodic += std::string(n - 1, 'a') + "b";
        std::string uniform =
            gen_stream(StreamSpec::uniform_stream(8 * n, 0xf00 + n), Alphabet("ab"));

        for (const std::string& stream : {periodic, uniform}) {
            TrialReport tr = estimate_errors(
                [&](uint64_t) { return trivial_reject_swa(a_star_b, n, bound_tr); }, a_star_b, n,
                stream, 1, 0.0, 1);
            ok = ok && verify_bounds(tr, BoundKind::failure_ratio, bound_tr).pass;
            worst_slack = std::max(worst_slack, tr.failure_ratio / bound_tr);

            TrialReport lb = estimate_errors(
                [&](uint64_t) { return lb_direct_swa(ends_ab, n, bound_lb); }, ends_ab, n, stream,
                1, 0.0, 1);
            ok = ok && verify_bounds(lb, BoundKind::failure_ratio, bound_lb).pass;
            // lb-direct must never answer no on a window inside the language
            for (size_t t = 0; t < lb.truth.size(); ++t)
                if (lb.truth[t] && lb.error[t] > 0.0) ok = false;
            worst_slack = std::max(worst_slack, lb.failure_ratio / bound_lb);
        }
    }
    ctx.detail << "exact failure counts, worst ratio/bound = " << worst_slack;
    return ok;
}

// ---- 7. constant-space left-ideal algorithm --------------------------------------

bool crit_const_left_ideal(Ctx& ctx) {
    Dfa lang = regex_dfa("(a|b|c)*a(a|b|c)*", "abc");
    Dfa rev = minimize(reverse(lang));
    double phi = 0.1;
    XiEpsilon sol = solve_xi_epsilon(rev.state_count(), phi);

    uint64_t n = 1;
    while (n < sol.n1) n <<= 1;

    // adversarial family: the LogGap witness of the failed <ST,SF,Len>
    WitnessPattern gap = extract_witness(lang, LangClass::st_sf_len);
    StreamSpec adversarial = StreamSpec::witness(gap, 2 * n, 6 * n);

    bool ok = true;
    double worst = 0.0;
    for (const StreamSpec& spec :
         {StreamSpec::uniform_stream(8 * n, 0xc0ffee), adversarial}) {
        std::string stream = gen_stream(spec, lang.alphabet);
        TrialReport report = estimate_errors(
            [&](uint64_t s) { return const_left_ideal_swa(rev, n, phi, s); }, lang, n, stream,
            kTrials, sol.epsilon, 0xacc7, ctx.jobs);
        ok = ok && verify_bounds(report, BoundKind::failure_ratio, phi).pass;
        worst = std::max(worst, report.failure_ratio);
    }

    // constant space: the flag vector does not grow with n
    auto small = const_left_ideal_swa(rev, n, phi, 1);
    auto large = const_left_ideal_swa(rev, 8 * n, phi, 1);
    ok = ok && small->space_bits() == large->space_bits();
    ctx.detail << "n1 = " << sol.n1 << ", n = " << n << ", worst failure ratio " << worst
               << " <= " << phi << ", space " << small->space_bits() << " bits at n and 8n";
    return ok;
}

// ---- 8. path-summary exactness -----------------------------------------------------

bool crit_path_summary(Ctx& ctx) {
    struct Sample {
        const char* regex;
        QueryMode mode;
    };
    const Sample samples[] = {
        {"(a|b)*a(a|b)*", QueryMode::at_most_n},  // left ideal
        {"(a|b)*b", QueryMode::at_most_n},        // left ideal
        {"ab*", QueryMode::exactly_n},            // suffix-free
        {"a", QueryMode::exactly_n},              // suffix-free singleton
    };
    uint64_t mismatches = 0, checks = 0;
    for (auto& sample : samples) {
        Dfa lang = regex_dfa(sample.regex, "ab");
        Dfa rev = minimize(reverse(lang));
        for (uint64_t n = 0; n <= 4; ++n) {
            // all streams of length <= 10 over {a,b}, checked at every instant
            std::vector<std::string> streams{""};
            for (size_t begin = 0, len = 1; len <= 10; ++len) {
                size_t end = streams.size();
                for (size_t i = begin; i < end; ++i) {
                    streams.push_back(streams[i] + 'a');
                    streams.push_back(streams[i] + 'b');
                }
                begin = end;
            }
            for (auto& stream : streams) {
                if (stream.size() < 10 && !stream.empty()) continue;  // prefixes are covered
                auto summary = path_summary_swa(rev, n, sample.mode);
                auto oracle = exact_oracle(lang, n);
                ++checks;
                if (summary->query() != oracle->query()) ++mismatches;
                for (char c : stream) {
                    summary->step(c);
                    oracle->step(c);
                    ++checks;
                    if (summary->query() != oracle->query()) ++mismatches;
                }
            }
        }
    }
    ctx.detail << checks << " instants compared, " << mismatches << " mismatches";
    return mismatches == 0;
}

// ---- 9. space growth shapes ----------------------------------------------------------

bool crit_space_shapes(Ctx& ctx) {
    std::vector<uint64_t> ns;
    for (uint64_t e = 4; e <= 16; ++e) ns.push_back(1ull << e);
    Alphabet ab("ab");

    Dfa li = regex_dfa("(a|b)*a(a|b)*", "ab");
    Dfa li_rev = minimize(reverse(li));
    Dfa a_star_b = minimize(regex_dfa("a*b", "ab"));
    Dfa ends_ab = minimize(regex_dfa("(a|b)*ab", "ab"));
    Dfa sf_rev = normalize_single_final(minimize(reverse(regex_dfa("ab*", "ab"))));

    bool ok = true;
    auto expect = [&](const char* name, const GrowthReport& report, const char* shape) {
        if (report.best_shape != shape) {
            ctx.detail << name << " fit " << report.best_shape << " expected " << shape << "; ";
            ok = false;
        }
    };

    expect("bernoulli",
           measure_space_growth(
               [&](uint64_t n, uint64_t s) { return bernoulli_swa(li_rev, n, 1.0 / (2.0 * n), s); },
               ns, ab, 8, 1),
           "const");
    expect("trivial-reject",
           measure_space_growth(
               [&](uint64_t n, uint64_t) { return trivial_reject_swa(a_star_b, n, 0.5); }, ns, ab,
               8, 2),
           "const");
    expect("lb-direct",
           measure_space_growth(
               [&](uint64_t n, uint64_t) { return lb_direct_swa(ends_ab, n, 0.5); }, ns, ab, 8, 3),
           "const");
    expect("path-summary",
           measure_space_growth(
               [&](uint64_t n, uint64_t) { return path_summary_swa(li_rev, n, QueryMode::at_most_n); },
               ns, ab, 8, 4),
           "log");
    expect("exact-oracle",
           measure_space_growth([&](uint64_t n, uint64_t) { return exact_oracle(li, n); }, ns, ab,
                                8, 5),
           "linear");
    expect("mod-prime pool index",
           measure_space_growth(
               [&](uint64_t n, uint64_t s) { return mod_prime_swa(sf_rev, n, s); }, ns, ab, 8, 6,
               {},
               [](const SwaInstance& inst) {
                   return inst.metadata()["space"]["prime_index_bits"].get<double>();
               }),
           "loglog");
    if (ok) ctx.detail << "const x3, log, linear, loglog fits as declared";
    return ok;
}

// ---- 10. witness soundness -------------------------------------------------------------

bool crit_witnesses(Ctx& ctx) {
    const char* regexes[] = {"(a|b|c)*a", "ab*", "(a|b|c)*a(a|b|c)*",
                             "a*b",       "a(a|b)*c|(a|b)*", "a(a|b|c)*"};
    int checked = 0;
    bool ok = true;
    for (const char* regex : regexes) {
        Dfa dfa = regex_dfa(regex, "abc");
        SpaceVerdict v = classify(dfa);
        for (LangClass c : kAllClasses) {
            if (v.is_member(c)) continue;
            ++checked;
            WitnessPattern w = extract_witness(dfa, c);
            if (!validate_witness(dfa, c, w, 5)) {
                ctx.detail << regex << "/" << lang_class_name(c) << " invalid; ";
                ok = false;
            }
        }
    }
    ctx.detail << checked << " witnesses validated with exponents 0..5";
    return ok;
}

// ---- 11. amplification ---------------------------------------------------------------

bool crit_amplification(Ctx& ctx) {
    bool ok = amplification_copies(0.4, 1.0 / 3.0) == 133;
    if (!ok) ctx.detail << "k = " << amplification_copies(0.4, 1.0 / 3.0) << " expected 133; ";

    // child: Bernoulli at the window boundary, error 1-(1-1/(2n))^n <= 0.4
    Dfa lang = regex_dfa("(a|b)*a(a|b)*", "ab", 'b');
    Dfa rev = minimize(reverse(lang));
    rev.pad = 'b';
    uint64_t n = 16;
    double beta = 1.0 / (2.0 * static_cast<double>(n));
    std::string stream = "a" + std::string(n - 1, 'b');

    TrialReport report = estimate_errors(
        [&](uint64_t s) {
            return amplify([&](uint64_t s2) { return bernoulli_swa(rev, n, beta, s2); }, 0.4,
                           1.0 / 3.0, s);
        },
        lang, n, stream, kTrials, 1.0 / 3.0, 0xacc11, ctx.jobs);
    auto check = verify_bounds(report, BoundKind::per_instant_error, 1.0 / 3.0);
    ok = ok && check.pass;
    ctx.detail << "k = 133, amplified worst error " << check.observed << " <= 1/3+3s";
    return ok;
}

}  // namespace

int run_acceptance(const std::function<void(const std::string&)>& emit, unsigned jobs) {
    if (jobs == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        jobs = hw == 0 ? 1 : std::min(hw, 8u);
    }

    struct Criterion {
        int id;
        const char* name;
        bool (*run)(Ctx&);
    };
    const Criterion criteria[] = {
        {1, "classification goldens", crit_goldens},
        {2, "containment lattice on random DFAs", crit_lattice},
        {3, "synchronized-pair oracle equivalence", crit_sync_oracle},
        {4, "Bernoulli acceptance law", crit_bernoulli_law},
        {5, "loglog suffix-free algorithm error", crit_loglog},
        {6, "deterministic failure ratios", crit_det_failure},
        {7, "constant-space left-ideal algorithm", crit_const_left_ideal},
        {8, "path-summary exactness", crit_path_summary},
        {9, "space growth shapes", crit_space_shapes},
        {10, "witness soundness", crit_witnesses},
        {11, "amplification", crit_amplification},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Ctx ctx{jobs, {}};
        auto start = std::chrono::steady_clock::now();
        bool pass = false;
        try {
            pass = criterion.run(ctx);
        } catch (const std::exception& e) {
            ctx.detail << "exception: " << e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line << '[' << (criterion.id < 10 ? " " : "") << criterion.id << "] "
             << (pass ? "PASS" : "FAIL") << "  " << criterion.name << " -- " << ctx.detail.str()
             << "  (" << std::fixed << secs << "s)";
        emit(line.str());
        if (!pass) ++failures;
    }
    return failures;
}

}  // namespace swx
