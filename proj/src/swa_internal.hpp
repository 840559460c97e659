#pragma once

#include <string>

#include "swx/swa.hpp"

// Building blocks shared between swa.cpp, compile.cpp and the harness.
namespace swx::swa_internal {

SwaPtr suffix_compare_swa(const Alphabet& alphabet, uint64_t n, std::string word, char pad);
SwaPtr constant_swa(const Alphabet& alphabet, uint64_t n, bool answer, std::string name);
SwaPtr metadata_wrap(SwaPtr child, nlohmann::json meta);

// Current window content of an exact oracle (harness self-checks).
std::string exact_oracle_window(const SwaInstance& inst);

// Per-state values of a path-summary instance (test oracle access).
std::vector<uint64_t> path_summary_values(const SwaInstance& inst);

}  // namespace swx::swa_internal
