#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "swx/automata.hpp"

namespace swx {

// One streaming algorithm for one window size. step consumes a symbol,
// query answers "last_n(stream so far) in L" under the algorithm's error
// contract, space_bits is the declared encoding length of the current
// state.
class SwaInstance {
public:
    virtual ~SwaInstance() = default;

    virtual void step(char symbol) = 0;
    virtual bool query() const = 0;
    virtual uint64_t space_bits() const = 0;
    virtual nlohmann::json metadata() const = 0;

    const Alphabet& alphabet() const { return alphabet_; }
    uint64_t window() const { return n_; }

    void feed(std::string_view stream) {
        for (char c : stream) step(c);
    }

protected:
    SwaInstance(Alphabet alphabet, uint64_t n) : alphabet_(std::move(alphabet)), n_(n) {}

    Alphabet alphabet_;
    uint64_t n_;
};

using SwaPtr = std::unique_ptr<SwaInstance>;
using SwaSeedFactory = std::function<SwaPtr(uint64_t seed)>;

enum class QueryMode { at_most_n, exactly_n };

// ---- algorithms --------------------------------------------------------

// Ground truth: ring buffer of the last n symbols, query replays the DFA.
SwaPtr exact_oracle(const Dfa& dfa_for_l, uint64_t n);

// Deterministic sketch holding l_w(q) for every state of a DFA for L^R,
// saturated at n+1 with a separate infinity sentinel n+2.
// at_most_n answers for left ideals, exactly_n for suffix-free languages.
SwaPtr path_summary_swa(const Dfa& dfa_for_l_rev, uint64_t n, QueryMode mode);

// Constant-space randomized approximation of the path summary: one decaying
// Boolean flag per state, acceptance probability (1-beta)^{l_w(q0)}.
SwaPtr bernoulli_swa(const Dfa& dfa_for_l_rev, uint64_t n, double beta, uint64_t seed);

// l_w mod p for a prime p drawn from the first 3k primes, where k is
// minimal with p_1 ... p_k >= n. Accepts iff l_w(q0) is finite and
// congruent to n mod p.
SwaPtr mod_prime_swa(const Dfa& dfa_for_l_rev, uint64_t n, uint64_t seed);

// Conjunction of bernoulli (beta = 1/(2n)) and mod_prime on the normalized
// single-final-state automaton; raw error <= 0.4 for n >= 12, exact oracle
// below. L must be suffix-free.
SwaPtr loglog_suffix_free_swa(const Dfa& dfa_for_l_rev, uint64_t n, uint64_t seed);

// Parameters of the constant-space left-ideal algorithm for a target
// failure ratio phi and |Q| states: xi with (1-xi) q (1+1/xi) < phi/2,
// epsilon with epsilon^xi + epsilon - 1 > 0, and the first window size n1
// from which both finite-n inequalities hold.
struct XiEpsilon {
    double xi;
    double epsilon;
    uint64_t n1;
};
XiEpsilon solve_xi_epsilon(uint64_t q_count, double phi);

// Bernoulli algorithm with beta = ln(1/epsilon)/n for n >= n1, exact
// oracle below; failure ratio <= phi at error threshold epsilon.
// L must be a nonempty left ideal; dfa_for_l_rev is minimized internally.
SwaPtr const_left_ideal_swa(const Dfa& dfa_for_l_rev, uint64_t n, double phi, uint64_t seed);

// Always-reject single state for prefix-free or suffix-free L once
// n >= 2|Q|/phi, exact oracle below.
SwaPtr trivial_reject_swa(const Dfa& dfa_for_l, uint64_t n, double phi);

// For L = Sigma* K with K bifix-free: run the DFA for L itself, started at
// delta(q0, pad^n). Only false positives; failure ratio <= phi for
// n >= 2|Q|/phi, exact oracle below.
SwaPtr lb_direct_swa(const Dfa& dfa_for_l, uint64_t n, double phi);

// ---- combinators -------------------------------------------------------

struct TruthFn {
    std::string name;
    size_t arity = 0;  // 0 = variadic
    std::function<bool(const std::vector<bool>&)> eval;

    static TruthFn all_of();
    static TruthFn any_of();
    static TruthFn negation();
    static TruthFn identity();
    static TruthFn majority();
};

// Parallel simulation; query applies fn to the children's answers. Space
// is accounted as 2 * sum of the children (separator encoding).
SwaPtr boolean_combine(std::vector<SwaPtr> children, TruthFn fn);

// Smallest odd k >= ln(1/eps_target) * 2(1-eps) / (1/2 - eps)^2.
uint64_t amplification_copies(double eps, double eps_target);

// Majority vote over independent copies; per-instant error <= eps_target
// wherever the child's error is <= eps.
SwaPtr amplify(const SwaSeedFactory& child, double eps, double eps_target, uint64_t seed);

// Absorbing reject once the child's encoding exceeds budget_bits.
SwaPtr space_cap(SwaPtr child, uint64_t budget_bits);

// ---- compilation -------------------------------------------------------

struct LanguageSpec {
    enum class Op { leaf, and_op, or_op, not_op };
    Op op = Op::leaf;
    std::vector<LanguageSpec> children;
    Dfa dfa;      // leaves only
    AtomTag tag;  // leaves only

    size_t leaf_count() const;
};

struct Setting {
    enum class Kind { det_zero, rand_zero, det_failure, rand_failure };
    Kind kind = Kind::det_zero;
    double phi = 0.0;  // failure settings only

    static Setting parse(std::string_view text);  // "det-zero", "rand-failure=0.1", ...
    std::string name() const;
    bool failure() const { return kind == Kind::det_failure || kind == Kind::rand_failure; }
};

struct CompiledAlgorithm {
    std::function<SwaPtr(uint64_t n, uint64_t seed)> make;
    nlohmann::json info;  // per-leaf dispatch decisions and budgets
    Dfa truth;            // DFA for the spec's combined language
};

// Verifies every leaf tag, then dispatches per leaf and setting, splitting
// failure/error budgets evenly across leaves.
CompiledAlgorithm compile(const LanguageSpec& spec, const Setting& setting);

// ---- shared internals exposed for tests ---------------------------------

constexpr uint64_t kEllInfinity = UINT64_MAX;

// l_epsilon(q) = inf{k : delta(q, pad^k) in F}, computed by iterating pad
// up to `cap` steps; unresolved entries report kEllInfinity.
std::vector<uint64_t> initial_path_summary(const Dfa& dfa, uint64_t cap);

// Single final state with a post-final sink; language preserved. Requires
// L(dfa) prefix-free.
Dfa normalize_single_final(const Dfa& dfa);

// k minimal with p_1 ... p_k >= n, and the pool of the first 3k primes.
std::pair<uint64_t, std::vector<uint32_t>> mod_prime_pool(uint64_t n);

}  // namespace swx
