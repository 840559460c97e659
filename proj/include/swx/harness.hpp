#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "swx/classify.hpp"
#include "swx/swa.hpp"

namespace swx {

// Deterministic stream generators. Witness families expand the adversarial
// stream encodings used by the lower-bound reductions.
struct StreamSpec {
    enum class Kind { uniform, literal, repeat, witness_family };
    Kind kind = Kind::literal;

    uint64_t length = 0;  // uniform
    uint64_t seed = 0;    // uniform
    std::string word;     // literal / repeat block
    uint64_t count = 0;   // repeat

    WitnessPattern pattern;  // witness_family
    uint64_t m = 0;          // block count / outer exponent
    uint64_t index = 0;      // inner exponent i
    std::string alpha;       // bit string for indexed families; empty = alternating

    static StreamSpec uniform_stream(uint64_t length, uint64_t seed);
    static StreamSpec literal(std::string word);
    static StreamSpec repeat(std::string block, uint64_t count);
    static StreamSpec witness(WitnessPattern pattern, uint64_t m, uint64_t index,
                              std::string alpha = "");
};

std::string gen_stream(const StreamSpec& spec, const Alphabet& alphabet);

// Monte Carlo estimates of the per-instant error, failure ratio at a
// threshold, strict error, and space statistics for one (algorithm,
// stream) experiment. A pure function of (factory, stream, trials, seed).
struct TrialReport {
    uint64_t n = 0;
    uint64_t stream_length = 0;
    uint64_t trials = 0;
    double eps = 0.0;
    std::vector<double> error;   // e_t for t in [0, m]
    std::vector<bool> truth;     // window membership per instant
    double failure_ratio = 0.0;  // |{t : e_t > eps}| / (m+1)
    double strict_error = 0.0;   // fraction of runs with any wrong output
    uint64_t space_max_bits = 0;
    double space_mean_bits = 0.0;
    uint64_t seed = 0;
    nlohmann::json algorithm;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

TrialReport estimate_errors(const SwaSeedFactory& factory, const Dfa& truth_dfa, uint64_t n,
                            std::string_view stream, uint64_t trials, double eps,
                            uint64_t master_seed, unsigned jobs = 1);

// One bound check: probabilistic bounds get a 3-sigma binomial margin,
// deterministic ones compare exactly.
struct BoundCheck {
    bool pass = false;
    double observed = 0.0;
    double bound = 0.0;
    double margin = 0.0;

    nlohmann::json to_json() const;
};

enum class BoundKind { per_instant_error, failure_ratio, space_max };

BoundCheck verify_bounds(const TrialReport& report, BoundKind kind, double bound,
                         bool probabilistic = true);

// ---- space growth ------------------------------------------------------

struct GrowthPoint {
    uint64_t n;
    double value;  // observed max of the measured quantity
};

struct GrowthReport {
    std::vector<GrowthPoint> points;
    std::string best_shape;  // "const", "loglog", "log", "linear"
    double coefficient = 0.0;
    double intercept = 0.0;
    double rmse = 0.0;
    nlohmann::json fits;  // residuals per candidate shape

    nlohmann::json to_json() const;
};

using SwaFamily = std::function<SwaPtr(uint64_t n, uint64_t seed)>;

// Instantiates the family at every n, drives it over a uniform probe
// stream of length probe_factor * n plus the given extra streams, records
// the max of `measure` (default: total space bits), and reports the best
// least-squares fit among {1, loglog n, log n, n}.
GrowthReport measure_space_growth(
    const SwaFamily& family, const std::vector<uint64_t>& ns, const Alphabet& alphabet,
    uint64_t probe_factor, uint64_t seed,
    const std::vector<StreamSpec>& extra_streams = {},
    const std::function<double(const SwaInstance&)>& measure = {});

// Least-squares shape selection, exposed for tests.
GrowthReport fit_growth(const std::vector<GrowthPoint>& points);

}  // namespace swx
