#pragma once

#include <string>

#include "json.hpp"
#include "swx/classify.hpp"
#include "swx/harness.hpp"
#include "swx/swa.hpp"

namespace swx {

// {"alphabet": ["a","b"], "initial": 0, "finals": [1],
//  "delta": [[1,2],[1,1],[2,2]], "pad": "a"} -- delta[state][symbol index].
Dfa dfa_from_json(const nlohmann::json& j);
nlohmann::json dfa_to_json(const Dfa& dfa);

AtomTag tag_from_json(const nlohmann::json& j);
nlohmann::json tag_to_json(const AtomTag& tag);

// {"op": "and"|"or"|"not"|"leaf", "children": [...],
//  "dfa": {...} | "regex": "...", "alphabet": "abc", "tag": "left-ideal", ...}
LanguageSpec language_spec_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const SpaceVerdict& v);
nlohmann::json witness_to_json(const WitnessPattern& w);
WitnessPattern witness_from_json(const nlohmann::json& j);

// {"kind": "uniform", "length": N, "seed": S} | {"kind": "literal", ...}
StreamSpec stream_spec_from_json(const nlohmann::json& j);

}  // namespace swx
