#pragma once

#include <string_view>

#include "swx/automata.hpp"

namespace swx {

// Dialect: concatenation, union '|', postfix '*' and '+', parentheses,
// and the literals U+2205 (empty language) and U+03B5 (empty word).
// No character classes. Symbols must belong to `alphabet`.
Nfa regex_to_nfa(std::string_view pattern, const Alphabet& alphabet);

// Parse + determinize + minimize. pad defaults to the first alphabet
// symbol when `pad` is 0.
Dfa build_dfa_from_regex(std::string_view pattern, const Alphabet& alphabet, char pad = 0);

}  // namespace swx
