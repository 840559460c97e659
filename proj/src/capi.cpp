#include "swx.h"

#include <cstring>
#include <new>
#include <string>

#include "swx/acceptance.hpp"
#include "swx/classify.hpp"
#include "swx/harness.hpp"
#include "swx/json_io.hpp"
#include "swx/regex.hpp"
#include "swx/swa.hpp"

using nlohmann::json;

// Opaque handle definitions.
struct swx_dfa {
    swx::Dfa dfa;
};
struct swx_factory {
    swx::CompiledAlgorithm algo;
};
struct swx_swa {
    swx::SwaPtr inst;
};

namespace {

thread_local std::string g_last_error;

swx_status set_error(swx_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

swx_status from_exception(const std::exception& e) {
    if (auto* err = dynamic_cast<const swx::Error*>(&e)) {
        switch (err->code()) {
            case swx::Errc::parse: return set_error(SWX_ERR_PARSE, err->what());
            case swx::Errc::invalid: return set_error(SWX_ERR_INVALID, err->what());
            case swx::Errc::contract: return set_error(SWX_ERR_CONTRACT, err->what());
            case swx::Errc::no_witness: return set_error(SWX_ERR_NO_WITNESS, err->what());
        }
    }
    return set_error(SWX_ERR_INTERNAL, e.what());
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

swx_status output_string(const std::string& s, char** out) {
    *out = dup_string(s);
    return *out ? SWX_OK : set_error(SWX_ERR_INTERNAL, "out of memory");
}

template <typename Fn>
swx_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return from_exception(e);
    } catch (...) {
        return set_error(SWX_ERR_INTERNAL, "unknown error");
    }
}

swx_status require(bool ok, const char* what) {
    return ok ? SWX_OK : set_error(SWX_ERR_INVALID, what);
}

}  // namespace

extern "C" {

const char* swx_last_error(void) { return g_last_error.c_str(); }

void swx_string_free(char* s) { delete[] s; }

swx_status swx_dfa_from_json(const char* json_text, swx_dfa** out) {
    if (require(json_text && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        json j = json::parse(json_text, nullptr, false);
        if (j.is_discarded()) return set_error(SWX_ERR_PARSE, "malformed JSON");
        *out = new swx_dfa{swx::dfa_from_json(j)};
        return SWX_OK;
    });
}

swx_status swx_dfa_from_regex(const char* pattern, const char* alphabet, char pad, swx_dfa** out) {
    if (require(pattern && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        std::string symbols;
        if (alphabet && *alphabet) {
            symbols = alphabet;
        } else {
            for (const char* p = pattern; *p; ++p) {
                char c = *p;
                if (c != '(' && c != ')' && c != '|' && c != '*' && c != '+' && c != ' ' &&
                    static_cast<unsigned char>(c) < 0x80 && symbols.find(c) == std::string::npos)
                    symbols.push_back(c);
            }
            std::sort(symbols.begin(), symbols.end());
            if (symbols.empty()) return set_error(SWX_ERR_PARSE, "cannot infer an alphabet");
        }
        *out = new swx_dfa{swx::build_dfa_from_regex(pattern, swx::Alphabet(symbols), pad)};
        return SWX_OK;
    });
}

swx_status swx_dfa_to_json(const swx_dfa* dfa, char** out_json) {
    if (require(dfa && out_json, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] { return output_string(swx::dfa_to_json(dfa->dfa).dump(), out_json); });
}

swx_status swx_dfa_accepts(const swx_dfa* dfa, const char* word, int* out) {
    if (require(dfa && word && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        *out = dfa->dfa.accepts(word) ? 1 : 0;
        return SWX_OK;
    });
}

swx_status swx_dfa_state_count(const swx_dfa* dfa, uint32_t* out) {
    if (require(dfa && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    *out = static_cast<uint32_t>(dfa->dfa.state_count());
    return SWX_OK;
}

void swx_dfa_free(swx_dfa* dfa) { delete dfa; }

swx_status swx_classify(const swx_dfa* dfa, char** out_verdict_json) {
    if (require(dfa && out_verdict_json, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        swx::SpaceVerdict v = swx::classify(dfa->dfa);
        return output_string(swx::verdict_to_json(v).dump(), out_verdict_json);
    });
}

swx_status swx_witness(const swx_dfa* dfa, const char* class_name, char** out_witness_json) {
    if (require(dfa && class_name && out_witness_json, "null argument") != SWX_OK)
        return SWX_ERR_INVALID;
    return guarded([&] {
        auto cls = swx::lang_class_from_name(class_name);
        if (!cls) return set_error(SWX_ERR_INVALID, std::string("unknown class '") + class_name + "'");
        swx::WitnessPattern w = swx::extract_witness(dfa->dfa, *cls);
        json out = swx::witness_to_json(w);
        out["valid"] = swx::validate_witness(dfa->dfa, *cls, w);
        return output_string(out.dump(), out_witness_json);
    });
}

swx_status swx_compile(const char* spec_json, const char* setting, swx_factory** out) {
    if (require(spec_json && setting && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        json j = json::parse(spec_json, nullptr, false);
        if (j.is_discarded()) return set_error(SWX_ERR_PARSE, "malformed JSON");
        swx::LanguageSpec spec = swx::language_spec_from_json(j);
        *out = new swx_factory{swx::compile(spec, swx::Setting::parse(setting))};
        return SWX_OK;
    });
}

swx_status swx_factory_metadata(const swx_factory* f, uint64_t n, char** out_json) {
    if (require(f && out_json, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        json meta = f->algo.info;
        meta["instance"] = f->algo.make(n, 0)->metadata();
        return output_string(meta.dump(), out_json);
    });
}

swx_status swx_factory_instantiate(const swx_factory* f, uint64_t n, uint64_t seed, swx_swa** out) {
    if (require(f && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        *out = new swx_swa{f->algo.make(n, seed)};
        return SWX_OK;
    });
}

void swx_factory_free(swx_factory* f) { delete f; }

swx_status swx_swa_step(swx_swa* a, char symbol) {
    if (require(a != nullptr, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        a->inst->step(symbol);
        return SWX_OK;
    });
}

swx_status swx_swa_query(const swx_swa* a, int* out) {
    if (require(a && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        *out = a->inst->query() ? 1 : 0;
        return SWX_OK;
    });
}

swx_status swx_swa_space_bits(const swx_swa* a, uint64_t* out) {
    if (require(a && out, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    *out = a->inst->space_bits();
    return SWX_OK;
}

void swx_swa_free(swx_swa* a) { delete a; }

swx_status swx_run_experiment(const char* request_json, char** out_report_json) {
    if (require(request_json && out_report_json, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        json req = json::parse(request_json, nullptr, false);
        if (req.is_discarded()) return set_error(SWX_ERR_PARSE, "malformed JSON");

        swx::LanguageSpec spec = swx::language_spec_from_json(req.at("spec"));
        swx::Setting setting = swx::Setting::parse(req.at("setting").get<std::string>());
        uint64_t n = req.at("n").get<uint64_t>();
        uint64_t trials = req.value("trials", 1ull);
        double eps = req.value("eps", setting.kind == swx::Setting::Kind::det_zero ||
                                              setting.kind == swx::Setting::Kind::det_failure
                                          ? 0.0
                                          : 1.0 / 3.0);
        uint64_t seed = req.value("seed", 0ull);
        unsigned jobs = req.value("jobs", 1u);

        swx::CompiledAlgorithm algo = swx::compile(spec, setting);

        // "witness-class" resolves an adversarial family against the spec's
        // own combined language
        json stream_json = req.at("stream");
        std::string stream;
        if (stream_json.is_object() && stream_json.value("kind", "") == "witness-class") {
            auto cls = swx::lang_class_from_name(stream_json.at("class").get<std::string>());
            if (!cls) return set_error(SWX_ERR_INVALID, "unknown class in witness stream");
            swx::WitnessPattern w = swx::extract_witness(algo.truth, *cls);
            swx::StreamSpec spec_w = swx::StreamSpec::witness(
                w, stream_json.at("m").get<uint64_t>(), stream_json.at("i").get<uint64_t>(),
                stream_json.value("alpha", ""));
            stream = swx::gen_stream(spec_w, algo.truth.alphabet);
        } else {
            stream = swx::gen_stream(swx::stream_spec_from_json(stream_json), algo.truth.alphabet);
        }

        swx::TrialReport report = swx::estimate_errors(
            [&](uint64_t s) { return algo.make(n, s); }, algo.truth, n, stream, trials, eps, seed,
            jobs);

        json bounds = json::object();
        if (setting.failure()) {
            bounds["failure_ratio"] =
                swx::verify_bounds(report, swx::BoundKind::failure_ratio, setting.phi).to_json();
        } else {
            bool randomized = setting.kind == swx::Setting::Kind::rand_zero;
            bounds["per_instant_error"] =
                swx::verify_bounds(report, swx::BoundKind::per_instant_error, eps, randomized)
                    .to_json();
        }
        json out = {{"report", report.to_json()}, {"bounds", bounds}, {"compile_info", algo.info}};
        return output_string(out.dump(), out_report_json);
    });
}

swx_status swx_bench_space(const char* request_json, char** out_report_json) {
    if (require(request_json && out_report_json, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        json req = json::parse(request_json, nullptr, false);
        if (req.is_discarded()) return set_error(SWX_ERR_PARSE, "malformed JSON");

        swx::LanguageSpec spec = swx::language_spec_from_json(req.at("spec"));
        swx::Setting setting = swx::Setting::parse(req.at("setting").get<std::string>());
        std::vector<uint64_t> ns = req.at("ns").get<std::vector<uint64_t>>();
        uint64_t seed = req.value("seed", 0ull);
        uint64_t probe_factor = req.value("probe_factor", 8ull);

        swx::CompiledAlgorithm algo = swx::compile(spec, setting);
        swx::GrowthReport growth = swx::measure_space_growth(
            [&](uint64_t n, uint64_t s) { return algo.make(n, s); }, ns, algo.truth.alphabet,
            probe_factor, seed);
        json out = growth.to_json();
        out["compile_info"] = algo.info;
        return output_string(out.dump(), out_report_json);
    });
}

swx_status swx_verify(unsigned jobs, swx_verify_line_cb cb, void* user, int* out_failures) {
    if (require(out_failures != nullptr, "null argument") != SWX_OK) return SWX_ERR_INVALID;
    return guarded([&] {
        *out_failures = swx::run_acceptance(
            [&](const std::string& line) {
                if (cb) cb(line.c_str(), user);
            },
            jobs);
        return SWX_OK;
    });
}

}  // extern "C"
