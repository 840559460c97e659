#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "swx/error.hpp"

namespace swx {

using State = uint32_t;

// Ordered alphabet over single-byte symbols. The order is significant:
// it fixes pad defaults, BFS canonicalization and witness tie-breaking.
class Alphabet {
public:
    Alphabet() { idx_.fill(-1); }
    explicit Alphabet(std::string symbols);

    size_t size() const { return syms_.size(); }
    bool contains(char c) const { return idx_[static_cast<unsigned char>(c)] >= 0; }
    size_t index(char c) const;
    char symbol(size_t i) const { return syms_.at(i); }
    const std::string& symbols() const { return syms_; }
    bool operator==(const Alphabet& o) const { return syms_ == o.syms_; }

private:
    std::string syms_;
    std::array<int16_t, 256> idx_{};
};

// Complete DFA. delta is total by construction; every operation below
// keeps results complete (an explicit sink is added where needed).
// pad is the fill symbol of the initial window.
struct Dfa {
    Alphabet alphabet;
    State initial = 0;
    std::vector<bool> finals;  // indexed by state
    std::vector<State> delta;  // [state * |alphabet| + symbol index]
    char pad = 0;

    size_t state_count() const { return finals.size(); }
    State next(State q, size_t sym) const { return delta[q * alphabet.size() + sym]; }
    State step(State q, char a) const { return next(q, alphabet.index(a)); }
    State run(State q, std::string_view word) const;
    bool is_final(State q) const { return finals[q]; }
    bool accepts(std::string_view word) const { return finals[run(initial, word)]; }

    // Throws Error(contract) if delta is not total, ids are out of range
    // or pad is not a declared symbol.
    void validate() const;
};

struct Nfa {
    Alphabet alphabet;
    size_t state_count = 0;
    std::vector<State> initials;
    std::vector<State> finals;
    std::vector<std::tuple<State, uint32_t, State>> transitions;  // (from, symbol index, to)

    void validate() const;
};

// Language atoms a sliding-window compilation understands. The tag is a
// claim about the leaf language; check_atom_tag verifies it.
struct AtomTag {
    enum class Kind {
        suffix_pattern,          // language is exactly Sigma* w
        length_mod,              // membership depends on length only (optionally exactly MOD_{q,r})
        left_ideal,              // Sigma* L
        prefix_free,
        suffix_free,
        bifix_free_left_ideal,   // Sigma* K with K bifix-free
    };

    Kind kind = Kind::left_ideal;
    std::string word;            // suffix_pattern payload
    uint64_t mod_q = 0, mod_r = 0;
    bool has_mod_params = false;

    static AtomTag suffix_pattern(std::string w);
    static AtomTag length_language();
    static AtomTag length_mod(uint64_t q, uint64_t r);
    static AtomTag left_ideal() { return AtomTag{Kind::left_ideal, {}, 0, 0, false}; }
    static AtomTag prefix_free() { return AtomTag{Kind::prefix_free, {}, 0, 0, false}; }
    static AtomTag suffix_free() { return AtomTag{Kind::suffix_free, {}, 0, 0, false}; }
    static AtomTag bifix_free_left_ideal() { return AtomTag{Kind::bifix_free_left_ideal, {}, 0, 0, false}; }
};

enum class BoolOp { union_op, intersection, difference, complement };

// ---- constructions ----------------------------------------------------

// Subset construction; result is complete and accepts L(nfa).
Dfa determinize(const Nfa& nfa);

// DFA for L(dfa)^R via edge reversal + determinization.
Dfa reverse(const Dfa& dfa);

// Unique minimal complete DFA, states renumbered in BFS order from the
// initial state (symbols in alphabet order) so outputs are stable.
Dfa minimize(const Dfa& dfa);

Dfa combine(BoolOp op, const Dfa& a, const Dfa& b);
Dfa complement(const Dfa& a);

// Re-root a at `initial` (same states/transitions).
Dfa rerooted(const Dfa& a, State initial);

bool language_empty(const Dfa& a);
bool language_subset(const Dfa& a, const Dfa& b);
bool language_equal(const Dfa& a, const Dfa& b);

struct SccInfo {
    std::vector<uint32_t> component;          // state -> SCC id
    std::vector<std::vector<State>> members;  // SCC id -> states
    std::vector<bool> nontrivial;             // state lies on some cycle
    std::vector<bool> maximal;                // SCC id -> no transition leaves it
};

SccInfo sccs(const Dfa& dfa);

bool check_atom_tag(const Dfa& dfa, const AtomTag& tag);

// Suffix of pad^n . stream of length n (the active window).
std::string last_n(size_t n, std::string_view stream, char pad);

// ---- small graph helpers shared with the classifier -------------------

std::vector<bool> reachable_from(const Dfa& dfa, State start);

// DFA for Sigma* w over the given alphabet.
Dfa suffix_pattern_dfa(const Alphabet& alphabet, std::string_view w, char pad);

// DFA for MOD_{q,r} = Sigma^r (Sigma^q)^*.
Dfa length_mod_dfa(const Alphabet& alphabet, uint64_t q, uint64_t r, char pad);

// delta(initial, pad^n) computed through the pad orbit in O(|Q|).
State pad_power_state(const Dfa& dfa, uint64_t n);

}  // namespace swx
