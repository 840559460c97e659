#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swx/automata.hpp"

namespace swx {

// The five language classes the window-space classification is phrased in,
// ordered by the containment lattice:
//   st_len <= st_sf_len <= li_len <= li_pf_len and
//   st_sf_len <= lb_pf_sf_len <= li_pf_len.
enum class LangClass { st_len, st_sf_len, li_len, lb_pf_sf_len, li_pf_len };

const char* lang_class_name(LangClass c);                 // "ST-Len", ...
std::optional<LangClass> lang_class_from_name(std::string_view name);

enum class SpaceClass { constant, loglog, logarithmic, linear };
const char* space_class_name(SpaceClass c);               // "Const", "LogLog", "Log", "Linear"

// Witness words certifying that a language falls outside one of the five
// classes. Components are over the language's own alphabet; `which_case`
// selects the polarity/shape variant of the underlying pattern.
struct WitnessPattern {
    enum class Variant { linear_gap, log_gap, loglog_gap, failure_linear_gap, failure_log_gap };
    Variant variant;
    int which_case = 1;
    std::map<std::string, std::string> words;

    std::string word(const std::string& role) const;
};

const char* witness_variant_name(WitnessPattern::Variant v);

struct SpaceVerdict {
    bool member[5] = {false, false, false, false, false};  // indexed by LangClass
    SpaceClass det_zero, rand_zero, det_failure, rand_failure;
    std::map<std::string, WitnessPattern> witnesses;  // keyed by class name, failed classes only

    bool is_member(LangClass c) const { return member[static_cast<int>(c)]; }
};

// ---- structural primitives (all run on a DFA, usually the minimized
// ---- reversal automaton) ----------------------------------------------

// States q such that delta(q0,x) = q = delta(q,x) for some nonempty x.
std::vector<bool> positively_idempotent_states(const Dfa& dfa);

// Ordered pairs (p,q) with equal-length nonempty x,y,z satisfying
// delta(p,x)=p, delta(p,y)=q, delta(q,z)=q. Decided by reachability of
// (p,q,q) from (p,p,q) in the independent-letter triple graph.
std::vector<std::vector<bool>> synchronized_pairs(const Dfa& dfa);

// Same decision through per-length boolean matrix powers (lengths up to
// |Q|^3). Exists solely as an independent oracle for tests.
std::vector<std::vector<bool>> synchronized_pairs_matrix_oracle(const Dfa& dfa);

// Shortest equal-length word pair from (anchor,anchor) to an F-inconsistent
// state pair in the independent-letter pair graph, if one exists.
struct InconsistentPair {
    State first, second;
    std::string word_first, word_second;
};
std::optional<InconsistentPair> equal_length_inconsistent_pair(const Dfa& dfa, State anchor);

// Well-behavedness of every SCC reachable from the initial state. On
// failure reports an offending SCC id together with an inconsistent pair
// reached from a common SCC state by equal-length words.
struct WellBehavedReport {
    bool well_behaved;
    uint32_t scc = 0;
    State anchor = 0;
    InconsistentPair pair{};
};
WellBehavedReport well_behaved(const Dfa& dfa);

// ---- classification ----------------------------------------------------

// Class membership flags for L(dfa_for_l) via pattern checks on the
// minimized reversal automaton, the per-setting space classes, and a
// validated witness for every class that fails.
SpaceVerdict classify(const Dfa& dfa_for_l);

// Witness extraction for one failed class. Throws Error(no_witness) when
// the language belongs to the class.
WitnessPattern extract_witness(const Dfa& dfa_for_l, LangClass failed);

// Checks the defining conditions of a witness by membership evaluation
// with all exponents (and block sequences) up to max_exponent.
bool validate_witness(const Dfa& dfa_for_l, LangClass failed, const WitnessPattern& w,
                      unsigned max_exponent = 5);

}  // namespace swx
