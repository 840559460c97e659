#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "swx/classify.hpp"

// Search primitives shared between the classifier and witness extraction.
namespace swx::detail {

std::optional<InconsistentPair> st_len_pattern(const Dfa& dfa, State q1);

// Shortest nonempty x with delta(q0,x) = q = delta(q,x).
std::string loop_to_state_word(const Dfa& dfa, State q);

std::string classify_shortest_word(const Dfa& dfa, State from, State to);

std::optional<InconsistentPair> restricted_inconsistent_pair(const Dfa& dfa,
                                                             const std::vector<State>& sources,
                                                             const std::vector<bool>& mask,
                                                             State* found_root);

std::optional<std::array<std::string, 3>> sync_witness_words(const Dfa& dfa, State p, State q);

}  // namespace swx::detail
