#include "swx/harness.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "swa_internal.hpp"
#include "swx/rng.hpp"

namespace swx {

using nlohmann::json;

// ---- stream generation -------------------------------------------------------

StreamSpec StreamSpec::uniform_stream(uint64_t length, uint64_t seed) {
    StreamSpec s;
    s.kind = Kind::uniform;
    s.length = length;
    s.seed = seed;
    return s;
}

StreamSpec StreamSpec::literal(std::string word) {
    StreamSpec s;
    s.kind = Kind::literal;
    s.word = std::move(word);
    return s;
}

StreamSpec StreamSpec::repeat(std::string block, uint64_t count) {
    StreamSpec s;
    s.kind = Kind::repeat;
    s.word = std::move(block);
    s.count = count;
    return s;
}

StreamSpec StreamSpec::witness(WitnessPattern pattern, uint64_t m, uint64_t index, std::string alpha) {
    StreamSpec s;
    s.kind = Kind::witness_family;
    s.pattern = std::move(pattern);
    s.m = m;
    s.index = index;
    s.alpha = std::move(alpha);
    return s;
}

namespace {

std::string repeat_word(const std::string& block, uint64_t count) {
    std::string out;
    out.reserve(block.size() * count);
    for (uint64_t i = 0; i < count; ++i) out += block;
    return out;
}

// bit t of the family index, defaulting to alternating 1,0,1,0,...
int alpha_bit(const std::string& alpha, uint64_t t) {
    if (alpha.empty()) return t % 2 == 0 ? 1 : 0;
    char c = alpha[t % alpha.size()];
    if (c != '0' && c != '1') raise(Errc::parse, "alpha must be a bit string");
    return c - '0';
}

std::string expand_witness(const StreamSpec& spec) {
    const WitnessPattern& w = spec.pattern;
    switch (w.variant) {
        case WitnessPattern::Variant::linear_gap: {
            // w_alpha (x0 u0)^i u
            std::string out;
            for (uint64_t t = 0; t < spec.m; ++t) {
                int b = alpha_bit(spec.alpha, t);
                out += w.word(b ? "x1" : "x0");
                out += w.word(b ? "u1" : "u0");
            }
            out += repeat_word(w.word("x0") + w.word("u0"), spec.index);
            out += w.word("u");
            return out;
        }
        case WitnessPattern::Variant::log_gap:
        case WitnessPattern::Variant::loglog_gap:
            // z^m y x^i u
            return repeat_word(w.word("z"), spec.m) + w.word("y") +
                   repeat_word(w.word("x"), spec.index) + w.word("u");
        case WitnessPattern::Variant::failure_linear_gap: {
            // w_alpha u x^i with blocks z_b y_b
            std::string out;
            for (uint64_t t = 0; t < spec.m; ++t) {
                int b = alpha_bit(spec.alpha, t);
                out += w.word(b ? "z1" : "z0");
                out += w.word(b ? "y1" : "y0");
            }
            out += w.word("u");
            out += repeat_word(w.word("x"), spec.index);
            return out;
        }
        case WitnessPattern::Variant::failure_log_gap:
            // x^{m-1} w v (uv)^i
            return repeat_word(w.word("x"), spec.m == 0 ? 0 : spec.m - 1) + w.word("w") +
                   w.word("v") + repeat_word(w.word("u") + w.word("v"), spec.index);
    }
    raise(Errc::invalid, "unknown witness variant");
}

}  // namespace

std::string gen_stream(const StreamSpec& spec, const Alphabet& alphabet) {
    std::string out;
    switch (spec.kind) {
        case StreamSpec::Kind::uniform: {
            Rng rng(spec.seed);
            out.reserve(spec.length);
            for (uint64_t i = 0; i < spec.length; ++i)
                out.push_back(alphabet.symbol(rng.below(alphabet.size())));
            break;
        }
        case StreamSpec::Kind::literal:
            out = spec.word;
            break;
        case StreamSpec::Kind::repeat:
            out = repeat_word(spec.word, spec.count);
            break;
        case StreamSpec::Kind::witness_family:
            out = expand_witness(spec);
            break;
    }
    for (char c : out)
        if (!alphabet.contains(c))
            raise(Errc::contract, std::string("stream symbol '") + c + "' outside the alphabet");
    return out;
}

// ---- error estimation ----------------------------------------------------------

namespace {

struct Tally {
    std::vector<uint64_t> wrong;   // per instant
    uint64_t strict_wrong = 0;     // runs with any wrong output
    uint64_t space_max = 0;
    uint64_t space_sum = 0;

    void merge(const Tally& o) {
        for (size_t i = 0; i < wrong.size(); ++i) wrong[i] += o.wrong[i];
        strict_wrong += o.strict_wrong;
        space_max = std::max(space_max, o.space_max);
        space_sum += o.space_sum;
    }
};

void run_trials(const SwaSeedFactory& factory, const std::vector<bool>& truth,
                std::string_view stream, uint64_t first, uint64_t last, uint64_t master_seed,
                Tally& tally) {
    tally.wrong.assign(truth.size(), 0);
    for (uint64_t trial = first; trial < last; ++trial) {
        SwaPtr inst = factory(derive_seed(master_seed, trial));
        bool any_wrong = false;
        uint64_t space = inst->space_bits();
        tally.space_max = std::max(tally.space_max, space);
        tally.space_sum += space;
        if (inst->query() != truth[0]) {
            ++tally.wrong[0];
            any_wrong = true;
        }
        for (size_t t = 0; t < stream.size(); ++t) {
            inst->step(stream[t]);
            space = inst->space_bits();
            tally.space_max = std::max(tally.space_max, space);
            tally.space_sum += space;
            if (inst->query() != truth[t + 1]) {
                ++tally.wrong[t + 1];
                any_wrong = true;
            }
        }
        if (any_wrong) ++tally.strict_wrong;
    }
}

}  // namespace

TrialReport estimate_errors(const SwaSeedFactory& factory, const Dfa& truth_dfa, uint64_t n,
                            std::string_view stream, uint64_t trials, double eps,
                            uint64_t master_seed, unsigned jobs) {
    truth_dfa.validate();
    if (trials < 1) raise(Errc::invalid, "need at least one trial");
    for (char c : stream) truth_dfa.alphabet.index(c);  // alphabet mismatch check

    // ground truth, with a periodic re-derivation straight from the window
    // definition
    std::vector<bool> truth(stream.size() + 1);
    {
        SwaPtr oracle = exact_oracle(truth_dfa, n);
        truth[0] = oracle->query();
        for (size_t t = 0; t < stream.size(); ++t) {
            oracle->step(stream[t]);
            truth[t + 1] = oracle->query();
            if ((t + 1) % 100 == 0) {
                std::string window = last_n(n, stream.substr(0, t + 1), truth_dfa.pad);
                if (swa_internal::exact_oracle_window(*oracle) != window ||
                    truth[t + 1] != truth_dfa.accepts(window))
                    raise(Errc::invalid, "exact oracle self-check failed");
            }
        }
    }

    unsigned workers = jobs == 0 ? 1 : jobs;
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, trials));
    Tally total;
    total.wrong.assign(truth.size(), 0);
    if (workers <= 1) {
        run_trials(factory, truth, stream, 0, trials, master_seed, total);
    } else {
        std::vector<Tally> parts(workers);
        std::vector<std::thread> threads;
        uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            uint64_t first = w * chunk, last = std::min<uint64_t>(trials, first + chunk);
            threads.emplace_back(run_trials, std::cref(factory), std::cref(truth), stream, first,
                                 last, master_seed, std::ref(parts[w]));
        }
        for (auto& th : threads) th.join();
        for (auto& p : parts) total.merge(p);
    }

    TrialReport report;
    report.n = n;
    report.stream_length = stream.size();
    report.trials = trials;
    report.eps = eps;
    report.seed = master_seed;
    report.truth = truth;
    report.error.resize(truth.size());
    uint64_t failing = 0;
    for (size_t t = 0; t < truth.size(); ++t) {
        report.error[t] = static_cast<double>(total.wrong[t]) / static_cast<double>(trials);
        if (report.error[t] > eps) ++failing;
    }
    report.failure_ratio = static_cast<double>(failing) / static_cast<double>(truth.size());
    report.strict_error = static_cast<double>(total.strict_wrong) / static_cast<double>(trials);
    report.space_max_bits = total.space_max;
    report.space_mean_bits =
        static_cast<double>(total.space_sum) / static_cast<double>(trials * truth.size());
    report.algorithm = factory(derive_seed(master_seed, 0))->metadata();
    return report;
}

json TrialReport::to_json() const {
    json truth_bits = json::array();
    for (bool b : truth) truth_bits.push_back(b ? 1 : 0);
    return {{"n", n},
            {"stream_length", stream_length},
            {"trials", trials},
            {"eps", eps},
            {"seed", seed},
            {"failure_ratio", failure_ratio},
            {"strict_error", strict_error},
            {"space_max_bits", space_max_bits},
            {"space_mean_bits", space_mean_bits},
            {"algorithm", algorithm},
            {"errors", error},
            {"truth", truth_bits}};
}

std::string TrialReport::to_csv() const {
    std::ostringstream out;
    out << "t,error,truth\n";
    for (size_t t = 0; t < error.size(); ++t)
        out << t << ',' << error[t] << ',' << (truth[t] ? 1 : 0) << '\n';
    return out.str();
}

// ---- bound verification --------------------------------------------------------

json BoundCheck::to_json() const {
    return {{"pass", pass}, {"observed", observed}, {"bound", bound}, {"margin", margin}};
}

BoundCheck verify_bounds(const TrialReport& report, BoundKind kind, double bound,
                         bool probabilistic) {
    BoundCheck check;
    check.bound = bound;
    switch (kind) {
        case BoundKind::per_instant_error: {
            double worst = 0.0;
            for (double e : report.error) worst = std::max(worst, e);
            check.observed = worst;
            if (probabilistic)
                check.margin =
                    3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(report.trials));
            break;
        }
        case BoundKind::failure_ratio:
            check.observed = report.failure_ratio;
            break;
        case BoundKind::space_max:
            check.observed = static_cast<double>(report.space_max_bits);
            break;
    }
    check.pass = check.observed <= check.bound + check.margin;
    return check;
}

// ---- space growth ----------------------------------------------------------------

GrowthReport fit_growth(const std::vector<GrowthPoint>& points) {
    if (points.size() < 2) raise(Errc::invalid, "growth fit needs at least two points");
    size_t count = points.size();

    struct Shape {
        const char* name;
        std::function<double(double)> f;  // nullptr-like flag via intercept_only
        bool intercept_only;
    };
    std::vector<Shape> shapes = {
        {"const", [](double) { return 0.0; }, true},
        {"loglog", [](double n) { return std::log2(std::max(2.0, std::log2(std::max(2.0, n)))); }, false},
        {"log", [](double n) { return std::log2(std::max(1.0, n)); }, false},
        {"linear", [](double n) { return n; }, false},
    };

    GrowthReport report;
    report.points = points;
    report.fits = json::object();
    double best = std::numeric_limits<double>::infinity();
    for (auto& shape : shapes) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& p : points) {
            double x = shape.f(static_cast<double>(p.n));
            sx += x;
            sy += p.value;
            sxx += x * x;
            sxy += x * p.value;
        }
        double nd = static_cast<double>(count);
        double a = 0.0;
        double denom = nd * sxx - sx * sx;
        if (!shape.intercept_only && std::abs(denom) > 1e-12) a = (nd * sxy - sx * sy) / denom;
        if (a < 0.0) a = 0.0;  // growth shapes only
        double b = (sy - a * sx) / nd;
        double sse = 0.0;
        for (auto& p : points) {
            double r = p.value - (a * shape.f(static_cast<double>(p.n)) + b);
            sse += r * r;
        }
        double rmse = std::sqrt(sse / nd);
        report.fits[shape.name] = {{"coefficient", a}, {"intercept", b}, {"rmse", rmse}};
        // simplicity order wins ties: shapes are listed simplest first
        if (!std::isfinite(best) || rmse < best - std::max(1e-9, 0.01 * best)) {
            best = rmse;
            report.best_shape = shape.name;
            report.coefficient = a;
            report.intercept = b;
            report.rmse = rmse;
        }
    }
    return report;
}

GrowthReport measure_space_growth(const SwaFamily& family, const std::vector<uint64_t>& ns,
                                  const Alphabet& alphabet, uint64_t probe_factor, uint64_t seed,
                                  const std::vector<StreamSpec>& extra_streams,
                                  const std::function<double(const SwaInstance&)>& measure) {
    if (ns.empty()) raise(Errc::invalid, "need at least one window size");
    auto measured = measure ? measure : [](const SwaInstance& inst) {
        return static_cast<double>(inst.space_bits());
    };

    std::vector<GrowthPoint> points;
    for (size_t i = 0; i < ns.size(); ++i) {
        uint64_t n = ns[i];
        std::vector<StreamSpec> streams = extra_streams;
        streams.insert(streams.begin(),
                       StreamSpec::uniform_stream(probe_factor * n, derive_seed(seed, n)));
        double peak = 0.0;
        for (auto& sp : streams) {
            std::string stream = gen_stream(sp, alphabet);
            SwaPtr inst = family(n, derive_seed(seed, n ^ 0x5bd1e995));
            peak = std::max(peak, measured(*inst));
            for (char c : stream) {
                inst->step(c);
                peak = std::max(peak, measured(*inst));
            }
        }
        points.push_back({n, peak});
    }
    GrowthReport report = fit_growth(points);
    return report;
}

json GrowthReport::to_json() const {
    json pts = json::array();
    for (auto& p : points) pts.push_back({{"n", p.n}, {"max_observed", p.value}});
    return {{"points", pts},
            {"best_shape", best_shape},
            {"coefficient", coefficient},
            {"intercept", intercept},
            {"rmse", rmse},
            {"fits", fits}};
}

}  // namespace swx
