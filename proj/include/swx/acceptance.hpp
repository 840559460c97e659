#pragma once

#include <functional>
#include <string>

namespace swx {

// Built-in acceptance suite: one entry per shipped guarantee, each checked
// at its stated tolerance. `emit` receives one line per criterion
// ("[ 3] PASS synchronized-pair oracle equivalence ..."). Returns the
// number of failed criteria.
int run_acceptance(const std::function<void(const std::string&)>& emit, unsigned jobs = 0);

}  // namespace swx
