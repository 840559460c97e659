#pragma once

#include <string>
#include <vector>

#include "swx/automata.hpp"
#include "swx/regex.hpp"
#include "swx/rng.hpp"

// Brute-force oracles and generators shared by the test binaries. These
// stay independent of the implementation paths they check: membership is
// always decided by direct DFA simulation or plain string handling.
namespace testsup {

// All words over `symbols` of length <= max_len, shortlex order.
inline std::vector<std::string> words_up_to(const std::string& symbols, size_t max_len) {
    std::vector<std::string> out{""};
    size_t begin = 0;
    for (size_t len = 1; len <= max_len; ++len) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i)
            for (char c : symbols) out.push_back(out[i] + c);
        begin = end;
    }
    return out;
}

// Random complete DFA with the exact given state count.
inline swx::Dfa random_dfa(swx::Rng& rng, const std::string& symbols, size_t states) {
    swx::Dfa dfa;
    dfa.alphabet = swx::Alphabet(symbols);
    dfa.pad = symbols[0];
    dfa.initial = 0;
    dfa.finals.resize(states);
    for (size_t q = 0; q < states; ++q) dfa.finals[q] = rng.coin(0.4);
    for (size_t i = 0; i < states * symbols.size(); ++i)
        dfa.delta.push_back(static_cast<swx::State>(rng.below(states)));
    return dfa;
}

// Number of Myhill-Nerode classes distinguishable by words of length
// <= probe_len, evaluated on the reachable part only.
inline size_t nerode_classes(const swx::Dfa& dfa, size_t probe_len) {
    auto probes = words_up_to(dfa.alphabet.symbols(), probe_len);
    auto reach = swx::reachable_from(dfa, dfa.initial);
    std::vector<std::string> signatures;
    for (swx::State q = 0; q < dfa.state_count(); ++q) {
        if (!reach[q]) continue;
        std::string sig;
        for (auto& w : probes) sig.push_back(dfa.finals[dfa.run(q, w)] ? '1' : '0');
        signatures.push_back(sig);
    }
    std::sort(signatures.begin(), signatures.end());
    signatures.erase(std::unique(signatures.begin(), signatures.end()), signatures.end());
    return signatures.size();
}

inline std::string reversed(std::string s) {
    std::reverse(s.begin(), s.end());
    return s;
}

inline swx::Dfa regex_dfa(const std::string& pattern, const std::string& symbols, char pad = 0) {
    return swx::build_dfa_from_regex(pattern, swx::Alphabet(symbols), pad);
}

}  // namespace testsup
