// Command-line front end. All functionality goes through the C API in
// swx.h; this file only parses flags, moves JSON around and renders
// tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swx.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CStr {
    char* value = nullptr;
    ~CStr() { swx_string_free(value); }
};

[[noreturn]] void die(const std::string& message, int code = kExitCheckFailed) {
    std::cerr << "swx: " << message << "\n";
    std::exit(code);
}

void check(swx_status status) {
    if (status != SWX_OK) die(swx_last_error(), status == SWX_ERR_INVALID ? kExitUsage : kExitCheckFailed);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) die("cannot read '" + path + "'", kExitUsage);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) die("cannot write '" + path + "'", kExitUsage);
    out << text;
}

// inline JSON or a file path
std::string load_json_text(const std::string& arg) {
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return arg;
    return slurp(arg);
}

swx_dfa* load_language(const std::string& lang, const std::string& regex,
                       const std::string& alphabet, char pad) {
    swx_dfa* dfa = nullptr;
    if (!regex.empty()) {
        check(swx_dfa_from_regex(regex.c_str(), alphabet.empty() ? nullptr : alphabet.c_str(), pad,
                                 &dfa));
    } else if (!lang.empty()) {
        check(swx_dfa_from_json(load_json_text(lang).c_str(), &dfa));
    } else {
        die("need --regex or --lang", kExitUsage);
    }
    return dfa;
}

// "uniform:4096[:seed]" | "literal:WORD" | "repeat:BLOCK:COUNT" |
// "witness:CLASS:M:I[:ALPHA]"
json parse_stream_text(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.empty()) die("empty stream spec", kExitUsage);
    try {
        if (parts[0] == "uniform" && parts.size() >= 2)
            return {{"kind", "uniform"},
                    {"length", std::stoull(parts[1])},
                    {"seed", parts.size() > 2 ? std::stoull(parts[2]) : 0}};
        if (parts[0] == "literal" && parts.size() == 2)
            return {{"kind", "literal"}, {"word", parts[1]}};
        if (parts[0] == "repeat" && parts.size() == 3)
            return {{"kind", "repeat"}, {"block", parts[1]}, {"count", std::stoull(parts[2])}};
        if (parts[0] == "witness" && parts.size() >= 4) {
            json spec = {{"kind", "witness-class"},
                         {"class", parts[1]},
                         {"m", std::stoull(parts[2])},
                         {"i", std::stoull(parts[3])}};
            if (parts.size() > 4) spec["alpha"] = parts[4];
            return spec;
        }
    } catch (const std::exception&) {
        die("malformed number in stream spec '" + text + "'", kExitUsage);
    }
    die("unknown stream spec '" + text + "'", kExitUsage);
}

// "2^4..2^16" | "16..1024" (powers of two) | "16,64,256"
std::vector<uint64_t> parse_n_range(const std::string& text) {
    auto parse_one = [](const std::string& token) -> uint64_t {
        size_t caret = token.find('^');
        if (caret != std::string::npos)
            return 1ull << std::stoull(token.substr(caret + 1));
        return std::stoull(token);
    };
    std::vector<uint64_t> out;
    try {
        size_t dots = text.find("..");
        if (dots != std::string::npos) {
            uint64_t lo = parse_one(text.substr(0, dots));
            uint64_t hi = parse_one(text.substr(dots + 2));
            for (uint64_t n = lo; n <= hi; n <<= 1) out.push_back(n);
        } else {
            std::stringstream ss(text);
            std::string token;
            while (std::getline(ss, token, ',')) out.push_back(parse_one(token));
        }
    } catch (const std::exception&) {
        die("malformed --n-range '" + text + "'", kExitUsage);
    }
    if (out.empty()) die("empty --n-range", kExitUsage);
    return out;
}

void print_verdict(const json& v) {
    std::printf("class membership:\n");
    for (const char* name : {"ST-Len", "ST-SF-Len", "LI-Len", "LB-PF-SF-Len", "LI-PF-Len"})
        std::printf("  %-14s %s\n", name, v["classes"][name].get<bool>() ? "yes" : "no");
    std::printf("space by setting:\n");
    for (const char* name : {"det-zero", "rand-zero", "det-failure", "rand-failure"})
        std::printf("  %-14s %s\n", name, v["settings"][name].get<std::string>().c_str());
    if (!v["witnesses"].empty()) {
        std::printf("witnesses for failed classes:\n");
        for (auto& [cls, w] : v["witnesses"].items()) {
            std::printf("  %-14s %s (case %d):", cls.c_str(),
                        w["variant"].get<std::string>().c_str(), w["case"].get<int>());
            for (auto& [role, word] : w["words"].items())
                std::printf(" %s=\"%s\"", role.c_str(), word.get<std::string>().c_str());
            std::printf("\n");
        }
    }
}

int cmd_classify(const std::string& lang, const std::string& regex, const std::string& alphabet,
                 char pad, const std::string& out_path) {
    swx_dfa* dfa = load_language(lang, regex, alphabet, pad);
    CStr verdict;
    check(swx_classify(dfa, &verdict.value));
    swx_dfa_free(dfa);
    print_verdict(json::parse(verdict.value));
    if (!out_path.empty()) spill(out_path, verdict.value);
    return kExitOk;
}

int cmd_run(const std::string& spec_path, const std::string& setting, uint64_t n,
            const std::string& stream_text, uint64_t trials, double eps, bool eps_set,
            uint64_t seed, unsigned jobs, const std::string& out_path,
            const std::string& csv_path) {
    json request = {{"spec", json::parse(load_json_text(spec_path))},
                    {"setting", setting},
                    {"n", n},
                    {"stream", parse_stream_text(stream_text)},
                    {"trials", trials},
                    {"seed", seed},
                    {"jobs", jobs}};
    if (eps_set) request["eps"] = eps;

    CStr response;
    check(swx_run_experiment(request.dump().c_str(), &response.value));
    json r = json::parse(response.value);
    const json& report = r["report"];

    double worst = 0.0;
    for (double e : report["errors"].get<std::vector<double>>()) worst = std::max(worst, e);
    std::printf("algorithm:      %s\n", report["algorithm"]["algorithm"].get<std::string>().c_str());
    std::printf("n / stream / T: %llu / %llu / %llu\n",
                (unsigned long long)report["n"].get<uint64_t>(),
                (unsigned long long)report["stream_length"].get<uint64_t>(),
                (unsigned long long)report["trials"].get<uint64_t>());
    std::printf("worst e_t:      %.6f\n", worst);
    std::printf("failure ratio:  %.6f (threshold eps = %.4f)\n",
                report["failure_ratio"].get<double>(), report["eps"].get<double>());
    std::printf("strict error:   %.6f\n", report["strict_error"].get<double>());
    std::printf("space bits:     max %llu, mean %.2f\n",
                (unsigned long long)report["space_max_bits"].get<uint64_t>(),
                report["space_mean_bits"].get<double>());

    bool all_pass = true;
    for (auto& [name, bound] : r["bounds"].items()) {
        bool pass = bound["pass"].get<bool>();
        all_pass = all_pass && pass;
        std::printf("bound %-18s %s (observed %.6f vs %.6f + %.6f)\n", name.c_str(),
                    pass ? "PASS" : "FAIL", bound["observed"].get<double>(),
                    bound["bound"].get<double>(), bound["margin"].get<double>());
    }
    if (!out_path.empty()) spill(out_path, response.value);
    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "t,error,truth\n";
        auto& errors = report["errors"];
        auto& truth = report["truth"];
        for (size_t t = 0; t < errors.size(); ++t)
            csv << t << ',' << errors[t].get<double>() << ',' << truth[t].get<int>() << '\n';
        spill(csv_path, csv.str());
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_bench(const std::string& spec_path, const std::string& setting, const std::string& range,
              uint64_t seed, uint64_t probe_factor, const std::string& out_path) {
    json request = {{"spec", json::parse(load_json_text(spec_path))},
                    {"setting", setting},
                    {"ns", parse_n_range(range)},
                    {"seed", seed},
                    {"probe_factor", probe_factor}};
    CStr response;
    check(swx_bench_space(request.dump().c_str(), &response.value));
    json r = json::parse(response.value);
    std::printf("%-12s %s\n", "n", "max space bits");
    for (auto& point : r["points"])
        std::printf("%-12llu %.2f\n", (unsigned long long)point["n"].get<uint64_t>(),
                    point["max_observed"].get<double>());
    std::printf("best fit: %s (coefficient %.4f, intercept %.4f, rmse %.4f)\n",
                r["best_shape"].get<std::string>().c_str(), r["coefficient"].get<double>(),
                r["intercept"].get<double>(), r["rmse"].get<double>());
    if (!out_path.empty()) spill(out_path, response.value);
    return kExitOk;
}

int cmd_witness(const std::string& lang, const std::string& regex, const std::string& alphabet,
                char pad, const std::string& cls) {
    swx_dfa* dfa = load_language(lang, regex, alphabet, pad);
    CStr witness;
    swx_status status = swx_witness(dfa, cls.c_str(), &witness.value);
    swx_dfa_free(dfa);
    if (status == SWX_ERR_NO_WITNESS) {
        std::printf("no witness: the language belongs to %s\n", cls.c_str());
        return kExitOk;
    }
    check(status);
    json w = json::parse(witness.value);
    std::printf("witness against %s: %s, case %d\n", cls.c_str(),
                w["variant"].get<std::string>().c_str(), w["case"].get<int>());
    for (auto& [role, word] : w["words"].items())
        std::printf("  %-4s = \"%s\"\n", role.c_str(), word.get<std::string>().c_str());
    bool valid = w["valid"].get<bool>();
    std::printf("validation by membership, exponents 0..5: %s\n", valid ? "PASS" : "FAIL");
    return valid ? kExitOk : kExitCheckFailed;
}

int cmd_verify(unsigned jobs) {
    int failures = 0;
    check(swx_verify(
        jobs,
        [](const char* line, void*) {
            std::printf("%s\n", line);
            std::fflush(stdout);
        },
        nullptr, &failures));
    std::printf(failures ? "%d criterion(s) failed\n" : "all criteria passed\n", failures);
    return failures ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sliding-window space classification and simulation for regular languages"};
    app.require_subcommand(1);

    std::string lang, regex, alphabet, out_path, csv_path, spec_path, setting, stream_text, range,
        cls;
    char pad = 0;
    uint64_t n = 0, trials = 1, seed = 0, probe_factor = 8;
    double eps = 1.0 / 3.0;
    unsigned jobs = 1;

    auto add_language_flags = [&](CLI::App* cmd) {
        cmd->add_option("--lang", lang, "DFA as JSON (inline or file path)");
        cmd->add_option("--regex", regex, "language as a regex");
        cmd->add_option("--alphabet", alphabet, "ordered alphabet symbols, e.g. abc");
        cmd->add_option("--pad", pad, "initial-window fill symbol");
    };

    CLI::App* classify = app.add_subcommand("classify", "class membership and space verdicts");
    add_language_flags(classify);
    classify->add_option("--out", out_path, "write the verdict JSON here");

    CLI::App* run = app.add_subcommand("run", "compile a spec and measure errors on a stream");
    run->add_option("--spec", spec_path, "language spec JSON (inline or file)")->required();
    run->add_option("--setting", setting, "det-zero | rand-zero | det-failure=PHI | rand-failure=PHI")
        ->required();
    run->add_option("--n", n, "window size")->required();
    run->add_option("--stream", stream_text,
                    "uniform:LEN[:SEED] | literal:WORD | repeat:BLOCK:COUNT | witness:CLASS:M:I")
        ->required();
    run->add_option("--trials", trials, "Monte Carlo trials");
    auto* eps_opt = run->add_option("--eps", eps, "error threshold for the failure ratio");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--jobs", jobs, "worker threads");
    run->add_option("--out", out_path, "write the report JSON here");
    run->add_option("--csv", csv_path, "write per-instant CSV here");

    CLI::App* bench = app.add_subcommand("bench-space", "measure space against window size");
    bench->add_option("--spec", spec_path, "language spec JSON (inline or file)")->required();
    bench->add_option("--setting", setting, "algorithm setting")->required();
    bench->add_option("--n-range", range, "2^4..2^20 or comma list")->required();
    bench->add_option("--seed", seed, "master seed");
    bench->add_option("--probe-factor", probe_factor, "probe stream length = factor * n");
    bench->add_option("--out", out_path, "write the growth report JSON here");

    CLI::App* witness = app.add_subcommand("witness", "extract and validate a witness pattern");
    add_language_flags(witness);
    witness->add_option("--class", cls, "ST-Len | ST-SF-Len | LI-Len | LB-PF-SF-Len | LI-PF-Len")
        ->required();

    CLI::App* verify = app.add_subcommand("verify", "run the built-in acceptance suite");
    verify->add_option("--jobs", jobs, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(classify)) return cmd_classify(lang, regex, alphabet, pad, out_path);
        if (app.got_subcommand(run))
            return cmd_run(spec_path, setting, n, stream_text, trials, eps, eps_opt->count() > 0,
                           seed, jobs, out_path, csv_path);
        if (app.got_subcommand(bench))
            return cmd_bench(spec_path, setting, range, seed, probe_factor, out_path);
        if (app.got_subcommand(witness)) return cmd_witness(lang, regex, alphabet, pad, cls);
        if (app.got_subcommand(verify)) return cmd_verify(jobs);
    } catch (const std::exception& e) {
        die(e.what());
    }
    return kExitUsage;
}
