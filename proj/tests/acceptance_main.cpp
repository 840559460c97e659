// Acceptance suite runner: one line per shipped guarantee, nonzero exit on
// any failure.
#include <cstdio>
#include <cstdlib>

#include "swx/acceptance.hpp"

int main() {
    unsigned jobs = 0;
    if (const char* env = std::getenv("SWX_JOBS")) jobs = static_cast<unsigned>(std::atoi(env));
    int failures = swx::run_acceptance([](const std::string& line) {
        std::puts(line.c_str());
        std::fflush(stdout);
    }, jobs);
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures;
}
