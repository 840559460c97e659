#include "swx/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "swx/regex.hpp"

namespace swx {

using nlohmann::json;

namespace {

char single_symbol(const json& j, const char* what) {
    if (!j.is_string() || j.get<std::string>().size() != 1)
        raise(Errc::parse, std::string(what) + " must be a single-character string");
    return j.get<std::string>()[0];
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) raise(Errc::parse, std::string("missing field '") + name + "'");
    return *it;
}

}  // namespace

Dfa dfa_from_json(const json& j) {
    if (!j.is_object()) raise(Errc::parse, "dfa must be a JSON object");
    std::string symbols;
    for (auto& s : field(j, "alphabet")) symbols.push_back(single_symbol(s, "alphabet entry"));

    Dfa dfa;
    dfa.alphabet = Alphabet(symbols);
    dfa.initial = field(j, "initial").get<State>();
    const json& delta = field(j, "delta");
    if (!delta.is_array() || delta.empty()) raise(Errc::parse, "delta must be a nonempty array");
    size_t states = delta.size();
    dfa.finals.assign(states, false);
    for (auto& f : field(j, "finals")) {
        uint64_t q = f.get<uint64_t>();
        if (q >= states) raise(Errc::parse, "final state out of range");
        dfa.finals[q] = true;
    }
    for (auto& row : delta) {
        if (!row.is_array() || row.size() != symbols.size())
            raise(Errc::contract, "incomplete delta");
        for (auto& target : row) dfa.delta.push_back(target.get<State>());
    }
    dfa.pad = j.contains("pad") ? single_symbol(j["pad"], "pad") : symbols[0];
    dfa.validate();
    return dfa;
}

json dfa_to_json(const Dfa& dfa) {
    dfa.validate();
    json alphabet = json::array();
    for (char c : dfa.alphabet.symbols()) alphabet.push_back(std::string(1, c));
    json finals = json::array();
    for (State q = 0; q < dfa.state_count(); ++q)
        if (dfa.finals[q]) finals.push_back(q);
    json delta = json::array();
    for (State q = 0; q < dfa.state_count(); ++q) {
        json row = json::array();
        for (size_t c = 0; c < dfa.alphabet.size(); ++c) row.push_back(dfa.next(q, c));
        delta.push_back(row);
    }
    return {{"alphabet", alphabet},
            {"initial", dfa.initial},
            {"finals", finals},
            {"delta", delta},
            {"pad", std::string(1, dfa.pad)}};
}

AtomTag tag_from_json(const json& j) {
    std::string name;
    json params = json::object();
    if (j.is_string()) {
        name = j.get<std::string>();
    } else if (j.is_object()) {
        name = field(j, "kind").get<std::string>();
        params = j;
    } else {
        raise(Errc::parse, "tag must be a string or object");
    }
    if (name == "left-ideal") return AtomTag::left_ideal();
    if (name == "prefix-free") return AtomTag::prefix_free();
    if (name == "suffix-free") return AtomTag::suffix_free();
    if (name == "bifix-free-left-ideal") return AtomTag::bifix_free_left_ideal();
    if (name == "suffix-pattern") {
        if (!params.contains("word")) raise(Errc::parse, "suffix-pattern tag needs 'word'");
        return AtomTag::suffix_pattern(params["word"].get<std::string>());
    }
    if (name == "length-mod") {
        if (params.contains("q") || params.contains("r"))
            return AtomTag::length_mod(field(params, "q").get<uint64_t>(),
                                       field(params, "r").get<uint64_t>());
        return AtomTag::length_language();
    }
    raise(Errc::parse, "unknown tag '" + name + "'");
}

json tag_to_json(const AtomTag& tag) {
    switch (tag.kind) {
        case AtomTag::Kind::left_ideal: return "left-ideal";
        case AtomTag::Kind::prefix_free: return "prefix-free";
        case AtomTag::Kind::suffix_free: return "suffix-free";
        case AtomTag::Kind::bifix_free_left_ideal: return "bifix-free-left-ideal";
        case AtomTag::Kind::suffix_pattern: return {{"kind", "suffix-pattern"}, {"word", tag.word}};
        case AtomTag::Kind::length_mod:
            if (tag.has_mod_params) return {{"kind", "length-mod"}, {"q", tag.mod_q}, {"r", tag.mod_r}};
            return "length-mod";
    }
    return "?";
}

LanguageSpec language_spec_from_json(const json& j) {
    if (!j.is_object()) raise(Errc::parse, "language spec node must be an object");
    std::string op = j.contains("op") ? j["op"].get<std::string>() : "leaf";
    LanguageSpec spec;
    if (op == "leaf") {
        spec.op = LanguageSpec::Op::leaf;
        if (j.contains("dfa")) {
            if (j["dfa"].is_string()) {
                // path to a DFA file
                std::ifstream in(j["dfa"].get<std::string>());
                if (!in) raise(Errc::parse, "cannot read dfa file '" + j["dfa"].get<std::string>() + "'");
                std::ostringstream buffer;
                buffer << in.rdbuf();
                json loaded = json::parse(buffer.str(), nullptr, false);
                if (loaded.is_discarded()) raise(Errc::parse, "malformed JSON in dfa file");
                spec.dfa = dfa_from_json(loaded);
            } else {
                spec.dfa = dfa_from_json(j["dfa"]);
            }
        } else if (j.contains("regex")) {
            std::string pattern = j["regex"].get<std::string>();
            std::string symbols;
            if (j.contains("alphabet")) {
                symbols = j["alphabet"].get<std::string>();
            } else {
                // infer the alphabet from the pattern's plain symbols
                for (char c : pattern)
                    if (c != '(' && c != ')' && c != '|' && c != '*' && c != '+' && c != ' ' &&
                        static_cast<unsigned char>(c) < 0x80 && symbols.find(c) == std::string::npos)
                        symbols.push_back(c);
                std::sort(symbols.begin(), symbols.end());
                if (symbols.empty()) raise(Errc::parse, "cannot infer an alphabet from the regex");
            }
            char pad = j.contains("pad") ? single_symbol(j["pad"], "pad") : 0;
            spec.dfa = build_dfa_from_regex(pattern, Alphabet(symbols), pad);
        } else {
            raise(Errc::parse, "leaf needs 'dfa' or 'regex'");
        }
        spec.tag = tag_from_json(field(j, "tag"));
        return spec;
    }
    if (op == "and") spec.op = LanguageSpec::Op::and_op;
    else if (op == "or") spec.op = LanguageSpec::Op::or_op;
    else if (op == "not") spec.op = LanguageSpec::Op::not_op;
    else raise(Errc::parse, "unknown op '" + op + "'");
    for (auto& c : field(j, "children")) spec.children.push_back(language_spec_from_json(c));
    if (spec.children.empty()) raise(Errc::parse, "boolean node without children");
    if (spec.op == LanguageSpec::Op::not_op && spec.children.size() != 1)
        raise(Errc::parse, "'not' takes exactly one child");
    return spec;
}

json witness_to_json(const WitnessPattern& w) {
    json words = json::object();
    for (auto& [role, word] : w.words) words[role] = word;
    return {{"variant", witness_variant_name(w.variant)}, {"case", w.which_case}, {"words", words}};
}

WitnessPattern witness_from_json(const json& j) {
    WitnessPattern w;
    std::string variant = field(j, "variant").get<std::string>();
    bool known = false;
    for (auto v : {WitnessPattern::Variant::linear_gap, WitnessPattern::Variant::log_gap,
                   WitnessPattern::Variant::loglog_gap, WitnessPattern::Variant::failure_linear_gap,
                   WitnessPattern::Variant::failure_log_gap})
        if (variant == witness_variant_name(v)) {
            w.variant = v;
            known = true;
        }
    if (!known) raise(Errc::parse, "unknown witness variant '" + variant + "'");
    w.which_case = j.contains("case") ? j["case"].get<int>() : 1;
    for (auto& [role, word] : field(j, "words").items()) w.words[role] = word.get<std::string>();
    return w;
}

json verdict_to_json(const SpaceVerdict& v) {
    json classes = json::object();
    for (LangClass c : {LangClass::st_len, LangClass::st_sf_len, LangClass::li_len,
                        LangClass::lb_pf_sf_len, LangClass::li_pf_len})
        classes[lang_class_name(c)] = v.is_member(c);
    json witnesses = json::object();
    for (auto& [name, w] : v.witnesses) witnesses[name] = witness_to_json(w);
    return {{"classes", classes},
            {"settings",
             {{"det-zero", space_class_name(v.det_zero)},
              {"rand-zero", space_class_name(v.rand_zero)},
              {"det-failure", space_class_name(v.det_failure)},
              {"rand-failure", space_class_name(v.rand_failure)}}},
            {"witnesses", witnesses}};
}

StreamSpec stream_spec_from_json(const json& j) {
    if (!j.is_object()) raise(Errc::parse, "stream spec must be an object");
    std::string kind = field(j, "kind").get<std::string>();
    if (kind == "uniform")
        return StreamSpec::uniform_stream(field(j, "length").get<uint64_t>(),
                                          j.contains("seed") ? j["seed"].get<uint64_t>() : 0);
    if (kind == "literal") return StreamSpec::literal(field(j, "word").get<std::string>());
    if (kind == "repeat")
        return StreamSpec::repeat(field(j, "block").get<std::string>(),
                                  field(j, "count").get<uint64_t>());
    if (kind == "witness")
        return StreamSpec::witness(witness_from_json(field(j, "pattern")),
                                   field(j, "m").get<uint64_t>(), field(j, "i").get<uint64_t>(),
                                   j.contains("alpha") ? j["alpha"].get<std::string>() : "");
    raise(Errc::parse, "unknown stream kind '" + kind + "'");
}

}  // namespace swx
