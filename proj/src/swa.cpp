#include "swx/swa.hpp"

#include <algorithm>
#include <cmath>

#include "swx/rng.hpp"

namespace swx {

using nlohmann::json;

namespace {

uint64_t ceil_log2(uint64_t v) {
    uint64_t bits = 0;
    while ((1ull << bits) < v) ++bits;
    return bits;
}

// Wraps a child to present different metadata (algorithm families that are
// instantiations of another algorithm, fallback regimes).
class MetadataWrap final : public SwaInstance {
public:
    MetadataWrap(SwaPtr child, json meta)
        : SwaInstance(child->alphabet(), child->window()), child_(std::move(child)), meta_(std::move(meta)) {}

    void step(char symbol) override { child_->step(symbol); }
    bool query() const override { return child_->query(); }
    uint64_t space_bits() const override { return child_->space_bits(); }
    json metadata() const override { return meta_; }

private:
    SwaPtr child_;
    json meta_;
};

class ConstantSwa final : public SwaInstance {
public:
    ConstantSwa(Alphabet alphabet, uint64_t n, bool answer, std::string name)
        : SwaInstance(std::move(alphabet), n), answer_(answer), name_(std::move(name)) {}

    void step(char symbol) override { alphabet_.index(symbol); }
    bool query() const override { return answer_; }
    uint64_t space_bits() const override { return 0; }  // one-state algorithm
    json metadata() const override {
        return {{"algorithm", name_}, {"n", n_}, {"params", {{"answer", answer_}}}, {"space_bits_max", 0}};
    }

private:
    bool answer_;
    std::string name_;
};

class ExactOracle final : public SwaInstance {
public:
    ExactOracle(const Dfa& dfa, uint64_t n) : SwaInstance(dfa.alphabet, n), dfa_(dfa) {
        dfa_.validate();
        ring_.assign(n, dfa_.pad);
    }

    void step(char symbol) override {
        dfa_.alphabet.index(symbol);
        if (n_ == 0) return;
        ring_[pos_] = symbol;
        pos_ = (pos_ + 1) % n_;
    }

    bool query() const override {
        State q = dfa_.initial;
        for (uint64_t i = 0; i < n_; ++i) q = dfa_.step(q, ring_[(pos_ + i) % n_]);
        return dfa_.finals[q];
    }

    std::string window() const {
        std::string w;
        for (uint64_t i = 0; i < n_; ++i) w.push_back(ring_[(pos_ + i) % n_]);
        return w;
    }

    uint64_t space_bits() const override { return n_ * ceil_log2(alphabet_.size()); }
    json metadata() const override {
        return {{"algorithm", "exact-oracle"},
                {"n", n_},
                {"params", {{"states", dfa_.state_count()}}},
                {"space_bits_max", space_bits()}};
    }

private:
    Dfa dfa_;
    std::string ring_;
    uint64_t pos_ = 0;
};

}  // namespace

std::vector<uint64_t> initial_path_summary(const Dfa& dfa, uint64_t cap) {
    size_t m = dfa.state_count();
    size_t pad = dfa.alphabet.index(dfa.pad);
    std::vector<uint64_t> ell(m, kEllInfinity);
    std::vector<State> cur(m);
    for (State q = 0; q < m; ++q) cur[q] = q;

    // the pad orbit closes within |Q| steps; beyond that nothing resolves
    uint64_t steps = std::min<uint64_t>(cap, m);
    size_t unresolved = m;
    for (uint64_t k = 0; k <= steps && unresolved; ++k) {
        for (State q = 0; q < m; ++q) {
            if (ell[q] == kEllInfinity && dfa.finals[cur[q]]) {
                ell[q] = k;
                --unresolved;
            }
            cur[q] = dfa.next(cur[q], pad);
        }
    }
    return ell;
}

// ---- path summary ---------------------------------------------------------

namespace {

class PathSummarySwa final : public SwaInstance {
public:
    PathSummarySwa(const Dfa& rev, uint64_t n, QueryMode mode)
        : SwaInstance(rev.alphabet, n), dfa_(rev), mode_(mode) {
        dfa_.validate();
        inf_ = n + 2;
        auto ell = initial_path_summary(dfa_, n + 1);
        values_.resize(dfa_.state_count());
        scratch_.resize(dfa_.state_count());
        for (size_t q = 0; q < values_.size(); ++q)
            values_[q] = ell[q] == kEllInfinity ? inf_ : std::min<uint64_t>(ell[q], n + 1);
    }

    void step(char symbol) override {
        size_t c = dfa_.alphabet.index(symbol);
        for (State q = 0; q < values_.size(); ++q) {
            if (dfa_.finals[q]) {
                scratch_[q] = 0;
            } else {
                uint64_t v = values_[dfa_.next(q, c)];
                scratch_[q] = v >= inf_ ? inf_ : std::min(v + 1, n_ + 1);
            }
        }
        values_.swap(scratch_);
    }

    bool query() const override {
        uint64_t v = values_[dfa_.initial];
        return mode_ == QueryMode::at_most_n ? v <= n_ : v == n_;
    }

    const std::vector<uint64_t>& values() const { return values_; }

    uint64_t space_bits() const override { return values_.size() * ceil_log2(n_ + 3); }
    json metadata() const override {
        return {{"algorithm", "path-summary"},
                {"n", n_},
                {"params", {{"mode", mode_ == QueryMode::at_most_n ? "at-most-n" : "exactly-n"},
                            {"states", values_.size()}}},
                {"space_bits_max", space_bits()}};
    }

private:
    Dfa dfa_;
    QueryMode mode_;
    uint64_t inf_;
    std::vector<uint64_t> values_, scratch_;
};

// ---- Bernoulli flags --------------------------------------------------------

class BernoulliSwa final : public SwaInstance {
public:
    BernoulliSwa(const Dfa& rev, uint64_t n, double beta, uint64_t seed)
        : SwaInstance(rev.alphabet, n), dfa_(rev), beta_(beta), rng_(seed) {
        dfa_.validate();
        if (!(beta >= 0.0 && beta <= 1.0)) raise(Errc::invalid, "beta outside [0,1]");
        auto ell = initial_path_summary(dfa_, n + 1);
        flags_.resize(dfa_.state_count());
        scratch_.resize(dfa_.state_count());
        nonfinal_ = 0;
        for (State q = 0; q < dfa_.state_count(); ++q) {
            if (dfa_.finals[q]) {
                flags_[q] = 1;  // pinned forever
                continue;
            }
            ++nonfinal_;
            // acceptance-from-q probability (1-beta)^ell, with x^inf = 0
            double p = ell[q] == kEllInfinity ? 0.0 : std::pow(1.0 - beta, static_cast<double>(ell[q]));
            flags_[q] = rng_.coin(p) ? 1 : 0;
        }
    }

    void step(char symbol) override {
        size_t c = dfa_.alphabet.index(symbol);
        // simultaneous update: read the previous vector for every state
        for (State q = 0; q < dfa_.state_count(); ++q) {
            if (dfa_.finals[q]) {
                scratch_[q] = 1;
            } else if (rng_.coin(beta_)) {
                scratch_[q] = 0;
            } else {
                scratch_[q] = flags_[dfa_.next(q, c)];
            }
        }
        flags_.swap(scratch_);
    }

    bool query() const override { return flags_[dfa_.initial] != 0; }

    uint64_t space_bits() const override { return nonfinal_; }
    json metadata() const override {
        return {{"algorithm", "bernoulli"},
                {"n", n_},
                {"params", {{"beta", beta_}, {"states", dfa_.state_count()}}},
                {"space_bits_max", nonfinal_}};
    }

private:
    Dfa dfa_;
    double beta_;
    Rng rng_;
    uint64_t nonfinal_;
    std::vector<uint8_t> flags_, scratch_;
};

constexpr uint32_t kPrimes[] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,
                                41,  43,  47,  53,  59,  61,  67,  71,  73,  79,  83,  89,
                                97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151};

}  // namespace

std::pair<uint64_t, std::vector<uint32_t>> mod_prime_pool(uint64_t n) {
    if (n < 1) raise(Errc::invalid, "window size must be at least 1");
    uint64_t k = 0;
    unsigned __int128 product = 1;
    while (product < n) {
        if (k >= std::size(kPrimes)) raise(Errc::invalid, "window size beyond the prime table");
        product *= kPrimes[k++];
    }
    if (k == 0) k = 1;  // n = 1
    if (3 * k > std::size(kPrimes)) raise(Errc::invalid, "window size beyond the prime table");
    std::vector<uint32_t> pool(kPrimes, kPrimes + 3 * k);
    return {k, pool};
}

namespace {

class ModPrimeSwa final : public SwaInstance {
public:
    ModPrimeSwa(const Dfa& rev, uint64_t n, uint64_t seed) : SwaInstance(rev.alphabet, n), dfa_(rev) {
        dfa_.validate();
        auto [k, pool] = mod_prime_pool(n);
        k_ = k;
        pool_size_ = pool.size();
        p_max_ = pool.back();
        Rng rng(seed);
        prime_ = pool[rng.below(pool.size())];
        target_ = n % prime_;

        // residues need the exact initial summary; the pad orbit resolves
        // every finite value within |Q| steps
        auto ell = initial_path_summary(dfa_, std::max<uint64_t>(n + 1, dfa_.state_count()));
        finite_.resize(dfa_.state_count());
        residue_.resize(dfa_.state_count());
        fin_scratch_.resize(dfa_.state_count());
        res_scratch_.resize(dfa_.state_count());
        for (State q = 0; q < dfa_.state_count(); ++q) {
            finite_[q] = ell[q] != kEllInfinity;
            residue_[q] = finite_[q] ? static_cast<uint32_t>(ell[q] % prime_) : 0;
        }
    }

    void step(char symbol) override {
        size_t c = dfa_.alphabet.index(symbol);
        for (State q = 0; q < dfa_.state_count(); ++q) {
            if (dfa_.finals[q]) {
                fin_scratch_[q] = 1;
                res_scratch_[q] = 0;
            } else {
                State t = dfa_.next(q, c);
                fin_scratch_[q] = finite_[t];
                uint32_t r = residue_[t] + 1;
                res_scratch_[q] = r == prime_ ? 0 : r;
            }
        }
        finite_.swap(fin_scratch_);
        residue_.swap(res_scratch_);
    }

    bool query() const override {
        return finite_[dfa_.initial] && residue_[dfa_.initial] == target_;
    }

    uint64_t space_bits() const override {
        return ceil_log2(pool_size_) + dfa_.state_count() * (ceil_log2(p_max_) + 1);
    }
    json metadata() const override {
        return {{"algorithm", "mod-prime"},
                {"n", n_},
                {"params", {{"k", k_}, {"pool", pool_size_}, {"prime", prime_}, {"states", dfa_.state_count()}}},
                {"space", {{"total_bits", space_bits()},
                           {"prime_index_bits", std::log2(static_cast<double>(pool_size_))},
                           {"residue_bits", dfa_.state_count() * (ceil_log2(p_max_) + 1)}}},
                {"space_bits_max", space_bits()}};
    }

private:
    Dfa dfa_;
    uint64_t k_ = 0, pool_size_ = 0;
    uint32_t p_max_ = 0, prime_ = 0, target_ = 0;
    std::vector<uint8_t> finite_, fin_scratch_;
    std::vector<uint32_t> residue_, res_scratch_;
};

}  // namespace

SwaPtr exact_oracle(const Dfa& dfa_for_l, uint64_t n) { return std::make_unique<ExactOracle>(dfa_for_l, n); }

SwaPtr path_summary_swa(const Dfa& dfa_for_l_rev, uint64_t n, QueryMode mode) {
    return std::make_unique<PathSummarySwa>(dfa_for_l_rev, n, mode);
}

SwaPtr bernoulli_swa(const Dfa& dfa_for_l_rev, uint64_t n, double beta, uint64_t seed) {
    return std::make_unique<BernoulliSwa>(dfa_for_l_rev, n, beta, seed);
}

SwaPtr mod_prime_swa(const Dfa& dfa_for_l_rev, uint64_t n, uint64_t seed) {
    return std::make_unique<ModPrimeSwa>(dfa_for_l_rev, n, seed);
}

Dfa normalize_single_final(const Dfa& dfa) {
    dfa.validate();
    // prefix-freeness makes every reachable final state's residual {eps};
    // rerouting final out-edges to a sink and minimizing merges them
    size_t k = dfa.alphabet.size();
    Dfa out = dfa;
    State sink = static_cast<State>(out.state_count());
    out.finals.push_back(false);
    out.delta.resize(out.finals.size() * k);
    for (size_t c = 0; c < k; ++c) out.delta[sink * k + c] = sink;
    for (State q = 0; q < sink; ++q)
        if (out.finals[q])
            for (size_t c = 0; c < k; ++c) out.delta[q * k + c] = sink;
    return minimize(out);
}

// ---- combinators ------------------------------------------------------------

TruthFn TruthFn::all_of() {
    return {"and", 0, [](const std::vector<bool>& v) {
                return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
            }};
}
TruthFn TruthFn::any_of() {
    return {"or", 0, [](const std::vector<bool>& v) {
                return std::any_of(v.begin(), v.end(), [](bool b) { return b; });
            }};
}
TruthFn TruthFn::negation() {
    return {"not", 1, [](const std::vector<bool>& v) { return !v[0]; }};
}
TruthFn TruthFn::identity() {
    return {"id", 1, [](const std::vector<bool>& v) { return v[0]; }};
}
TruthFn TruthFn::majority() {
    return {"majority", 0, [](const std::vector<bool>& v) {
                size_t yes = 0;
                for (bool b : v) yes += b;
                return 2 * yes > v.size();
            }};
}

namespace {

class CombinedSwa final : public SwaInstance {
public:
    CombinedSwa(std::vector<SwaPtr> children, TruthFn fn)
        : SwaInstance(children.front()->alphabet(), children.front()->window()),
          children_(std::move(children)),
          fn_(std::move(fn)) {
        for (auto& c : children_) {
            if (!(c->alphabet() == alphabet_) || c->window() != n_)
                raise(Errc::contract, "combined algorithms need one alphabet and window size");
        }
        if (fn_.arity != 0 && fn_.arity != children_.size())
            raise(Errc::invalid, "arity mismatch in boolean combination");
        space_ = 0;
        for (auto& c : children_) space_ += c->space_bits();
        space_ *= 2;  // separator encoding of the child states
        answers_.resize(children_.size());
    }

    void step(char symbol) override {
        for (auto& c : children_) c->step(symbol);
    }

    bool query() const override {
        for (size_t i = 0; i < children_.size(); ++i) answers_[i] = children_[i]->query();
        return fn_.eval(answers_);
    }

    uint64_t space_bits() const override { return space_; }

    json metadata() const override {
        json kids = json::array();
        for (auto& c : children_) kids.push_back(c->metadata());
        return {{"algorithm", "boolean-combine"},
                {"n", n_},
                {"params", {{"fn", fn_.name}, {"arity", children_.size()}}},
                {"children", kids},
                {"space_bits_max", space_}};
    }

private:
    std::vector<SwaPtr> children_;
    TruthFn fn_;
    uint64_t space_;
    mutable std::vector<bool> answers_;
};

}  // namespace

SwaPtr boolean_combine(std::vector<SwaPtr> children, TruthFn fn) {
    if (children.empty()) raise(Errc::invalid, "boolean combination needs at least one child");
    return std::make_unique<CombinedSwa>(std::move(children), std::move(fn));
}

uint64_t amplification_copies(double eps, double eps_target) {
    if (!(eps_target > 0.0 && eps_target < eps && eps < 0.5))
        raise(Errc::invalid, "amplification needs 0 < eps' < eps < 1/2");
    double k = std::log(1.0 / eps_target) * 2.0 * (1.0 - eps) / ((0.5 - eps) * (0.5 - eps));
    uint64_t copies = static_cast<uint64_t>(std::ceil(k));
    if (copies % 2 == 0) ++copies;  // unambiguous majority
    return std::max<uint64_t>(copies, 1);
}

SwaPtr amplify(const SwaSeedFactory& child, double eps, double eps_target, uint64_t seed) {
    uint64_t copies = amplification_copies(eps, eps_target);
    std::vector<SwaPtr> kids;
    kids.reserve(copies);
    for (uint64_t i = 0; i < copies; ++i) kids.push_back(child(derive_seed(seed, i)));
    json child_meta = kids.front()->metadata();
    auto combined = boolean_combine(std::move(kids), TruthFn::majority());
    json meta = {{"algorithm", "amplify"},
                 {"n", combined->window()},
                 {"params", {{"copies", copies}, {"eps", eps}, {"eps_target", eps_target}}},
                 {"child", child_meta},
                 {"space_bits_max", combined->space_bits()}};
    return std::make_unique<MetadataWrap>(std::move(combined), std::move(meta));
}

namespace {

class SpaceCapSwa final : public SwaInstance {
public:
    SpaceCapSwa(SwaPtr child, uint64_t budget)
        : SwaInstance(child->alphabet(), child->window()), child_(std::move(child)), budget_(budget) {
        if (budget_ < 1) raise(Errc::invalid, "space budget must be at least 1 bit");
        meta_ = {{"algorithm", "space-cap"},
                 {"n", n_},
                 {"params", {{"budget_bits", budget_}}},
                 {"child", child_->metadata()},
                 {"space_bits_max", budget_}};
        if (child_->space_bits() > budget_) absorb();
    }

    void step(char symbol) override {
        if (absorbed_) {
            alphabet_.index(symbol);
            return;
        }
        child_->step(symbol);
        if (child_->space_bits() > budget_) absorb();
    }

    // the bottom state has a fixed output: reject
    bool query() const override { return absorbed_ ? false : child_->query(); }

    uint64_t space_bits() const override { return absorbed_ ? 1 : child_->space_bits(); }
    json metadata() const override { return meta_; }

private:
    void absorb() {
        absorbed_ = true;
        child_.reset();
    }

    SwaPtr child_;
    uint64_t budget_;
    bool absorbed_ = false;
    json meta_;
};

}  // namespace

SwaPtr space_cap(SwaPtr child, uint64_t budget_bits) {
    return std::make_unique<SpaceCapSwa>(std::move(child), budget_bits);
}

// ---- loglog suffix-free algorithm ------------------------------------------

SwaPtr loglog_suffix_free_swa(const Dfa& dfa_for_l_rev, uint64_t n, uint64_t seed) {
    dfa_for_l_rev.validate();
    if (!check_atom_tag(dfa_for_l_rev, AtomTag::prefix_free()))
        raise(Errc::contract, "loglog algorithm needs a suffix-free language");
    if (language_empty(dfa_for_l_rev))
        return std::make_unique<ConstantSwa>(dfa_for_l_rev.alphabet, n, false, "constant-reject");
    if (n < 12) {
        auto oracle = exact_oracle(reverse(dfa_for_l_rev), n);
        json meta = {{"algorithm", "loglog-suffix-free"},
                     {"n", n},
                     {"params", {{"fallback", "exact-oracle"}}},
                     {"space_bits_max", oracle->space_bits()}};
        return std::make_unique<MetadataWrap>(std::move(oracle), std::move(meta));
    }

    Dfa norm = normalize_single_final(dfa_for_l_rev);
    std::vector<SwaPtr> kids;
    kids.push_back(bernoulli_swa(norm, n, 1.0 / (2.0 * static_cast<double>(n)), derive_seed(seed, 1)));
    kids.push_back(mod_prime_swa(norm, n, derive_seed(seed, 2)));
    auto combined = boolean_combine(std::move(kids), TruthFn::all_of());
    json meta = {{"algorithm", "loglog-suffix-free"},
                 {"n", n},
                 {"params", {{"states", norm.state_count()}, {"raw_error", 0.4}}},
                 {"child", combined->metadata()},
                 {"space_bits_max", combined->space_bits()}};
    return std::make_unique<MetadataWrap>(std::move(combined), std::move(meta));
}

// ---- constant-space left-ideal algorithm ------------------------------------

XiEpsilon solve_xi_epsilon(uint64_t q_count, double phi) {
    if (!(phi > 0.0 && phi < 1.0)) raise(Errc::invalid, "failure ratio must be in (0,1)");
    if (q_count < 1) raise(Errc::invalid, "state count must be positive");
    double q = static_cast<double>(q_count);

    // (1-xi) q (1+1/xi) is strictly decreasing on (0,1); keep the phi/2
    // slack so the finite-n correction below has room
    auto h = [&](double xi) { return (1.0 - xi) * q * (1.0 + 1.0 / xi); };
    double lo = 1e-9, hi = 1.0 - 1e-12;
    while (hi - lo > 1e-9) {
        double mid = 0.5 * (lo + hi);
        (h(mid) < phi / 2.0 ? hi : lo) = mid;
    }
    double xi = hi;

    // epsilon^xi + epsilon - 1 is increasing in epsilon with a root below
    // 1/2; pick the midpoint of (root, 1/2) for numerical headroom
    auto g = [&](double x) { return std::pow(x, xi) + x - 1.0; };
    lo = 1e-9;
    hi = 0.5;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    double eps = 0.5 * (hi + 0.5);

    double c = std::log(1.0 / eps);
    auto failure_ok = [&](uint64_t n) {
        return (1.0 - xi + 1.0 / static_cast<double>(n)) * q * (1.0 + 1.0 / xi) <= phi;
    };
    auto error_ok = [&](uint64_t n) {
        double base = 1.0 - c / static_cast<double>(n);
        if (base <= 0.0) return false;
        return 1.0 - eps <= std::pow(base, xi * static_cast<double>(n));
    };
    uint64_t n1 = std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(c)));
    while (!(failure_ok(n1) && error_ok(n1))) {
        ++n1;
        if (n1 > (1ull << 40)) raise(Errc::invalid, "no feasible window size found");
    }
    return {xi, eps, n1};
}

SwaPtr const_left_ideal_swa(const Dfa& dfa_for_l_rev, uint64_t n, double phi, uint64_t seed) {
    Dfa ar = minimize(dfa_for_l_rev);
    if (language_empty(ar)) raise(Errc::contract, "constant-space algorithm needs a nonempty left ideal");

    // the minimal DFA of L^R for a left ideal L has a single absorbing
    // final state
    size_t finals = 0;
    State qf = 0;
    for (State q = 0; q < ar.state_count(); ++q)
        if (ar.finals[q]) {
            ++finals;
            qf = q;
        }
    bool absorbing = finals == 1;
    for (size_t c = 0; absorbing && c < ar.alphabet.size(); ++c) absorbing = ar.next(qf, c) == qf;
    if (!absorbing) raise(Errc::contract, "language is not a left ideal");

    XiEpsilon sol = solve_xi_epsilon(ar.state_count(), phi);
    json params = {{"phi", phi}, {"xi", sol.xi}, {"epsilon", sol.epsilon}, {"n1", sol.n1},
                   {"states", ar.state_count()}};
    if (n < sol.n1) {
        auto oracle = exact_oracle(reverse(ar), n);
        params["fallback"] = "exact-oracle";
        json meta = {{"algorithm", "const-left-ideal"}, {"n", n}, {"params", params},
                     {"space_bits_max", oracle->space_bits()}};
        return std::make_unique<MetadataWrap>(std::move(oracle), std::move(meta));
    }
    double beta = std::log(1.0 / sol.epsilon) / static_cast<double>(n);
    auto child = bernoulli_swa(ar, n, beta, seed);
    params["beta"] = beta;
    json meta = {{"algorithm", "const-left-ideal"}, {"n", n}, {"params", params},
                 {"space_bits_max", child->space_bits()}};
    return std::make_unique<MetadataWrap>(std::move(child), std::move(meta));
}

// ---- deterministic failure-ratio algorithms ----------------------------------

SwaPtr trivial_reject_swa(const Dfa& dfa_for_l, uint64_t n, double phi) {
    dfa_for_l.validate();
    if (!(phi > 0.0 && phi <= 1.0)) raise(Errc::invalid, "failure ratio must be in (0,1]");
    uint64_t n0 = static_cast<uint64_t>(
        std::ceil(2.0 * static_cast<double>(dfa_for_l.state_count()) / phi));
    if (n >= n0) {
        auto constant =
            std::make_unique<ConstantSwa>(dfa_for_l.alphabet, n, false, "trivial-reject");
        json meta = {{"algorithm", "trivial-reject"},
                     {"n", n},
                     {"params", {{"phi", phi}, {"n0", n0}, {"states", dfa_for_l.state_count()}}},
                     {"space_bits_max", 0}};
        return std::make_unique<MetadataWrap>(std::move(constant), std::move(meta));
    }
    auto oracle = exact_oracle(dfa_for_l, n);
    json meta = {{"algorithm", "trivial-reject"},
                 {"n", n},
                 {"params", {{"phi", phi}, {"n0", n0}, {"fallback", "exact-oracle"}}},
                 {"space_bits_max", oracle->space_bits()}};
    return std::make_unique<MetadataWrap>(std::move(oracle), std::move(meta));
}

namespace {

class LbDirectSwa final : public SwaInstance {
public:
    LbDirectSwa(const Dfa& dfa, uint64_t n) : SwaInstance(dfa.alphabet, n), dfa_(dfa) {
        dfa_.validate();
        state_ = pad_power_state(dfa_, n);
    }

    void step(char symbol) override { state_ = dfa_.step(state_, symbol); }
    bool query() const override { return dfa_.finals[state_]; }
    uint64_t space_bits() const override { return ceil_log2(dfa_.state_count()); }
    json metadata() const override {
        return {{"algorithm", "lb-direct"},
                {"n", n_},
                {"params", {{"states", dfa_.state_count()}}},
                {"space_bits_max", space_bits()}};
    }

private:
    Dfa dfa_;
    State state_;
};

}  // namespace

SwaPtr lb_direct_swa(const Dfa& dfa_for_l, uint64_t n, double phi) {
    dfa_for_l.validate();
    if (!(phi > 0.0 && phi <= 1.0)) raise(Errc::invalid, "failure ratio must be in (0,1]");
    uint64_t n0 = static_cast<uint64_t>(
        std::ceil(2.0 * static_cast<double>(dfa_for_l.state_count()) / phi));
    if (n >= n0) return std::make_unique<LbDirectSwa>(dfa_for_l, n);
    auto oracle = exact_oracle(dfa_for_l, n);
    json meta = {{"algorithm", "lb-direct"},
                 {"n", n},
                 {"params", {{"phi", phi}, {"n0", n0}, {"fallback", "exact-oracle"}}},
                 {"space_bits_max", oracle->space_bits()}};
    return std::make_unique<MetadataWrap>(std::move(oracle), std::move(meta));
}

// ---- suffix comparator (compile leaf for Sigma* w) ----------------------------

namespace swa_internal {

class SuffixCompareSwa final : public SwaInstance {
public:
    SuffixCompareSwa(Alphabet alphabet, uint64_t n, std::string word, char pad)
        : SwaInstance(std::move(alphabet), n), word_(std::move(word)) {
        ring_.assign(std::max<size_t>(word_.size(), 1), pad);
    }

    void step(char symbol) override {
        alphabet_.index(symbol);
        ring_[pos_] = symbol;
        pos_ = (pos_ + 1) % ring_.size();
    }

    bool query() const override {
        if (n_ < word_.size()) return false;  // the window is shorter than w
        for (size_t i = 0; i < word_.size(); ++i)
            if (ring_[(pos_ + ring_.size() - word_.size() + i) % ring_.size()] != word_[i]) return false;
        return true;
    }

    uint64_t space_bits() const override { return word_.size() * ceil_log2(alphabet_.size()); }
    json metadata() const override {
        return {{"algorithm", "suffix-compare"},
                {"n", n_},
                {"params", {{"word", word_}}},
                {"space_bits_max", space_bits()}};
    }

private:
    std::string word_;
    std::string ring_;
    size_t pos_ = 0;
};

SwaPtr suffix_compare_swa(const Alphabet& alphabet, uint64_t n, std::string word, char pad) {
    return std::make_unique<SuffixCompareSwa>(alphabet, n, std::move(word), pad);
}

SwaPtr constant_swa(const Alphabet& alphabet, uint64_t n, bool answer, std::string name) {
    return std::make_unique<ConstantSwa>(alphabet, n, answer, std::move(name));
}

SwaPtr metadata_wrap(SwaPtr child, nlohmann::json meta) {
    return std::make_unique<MetadataWrap>(std::move(child), std::move(meta));
}

std::string exact_oracle_window(const SwaInstance& inst) {
    auto* oracle = dynamic_cast<const ExactOracle*>(&inst);
    if (!oracle) raise(Errc::invalid, "not an exact oracle");
    return oracle->window();
}

std::vector<uint64_t> path_summary_values(const SwaInstance& inst) {
    auto* summary = dynamic_cast<const PathSummarySwa*>(&inst);
    if (!summary) raise(Errc::invalid, "not a path-summary instance");
    return summary->values();
}

}  // namespace swa_internal

size_t LanguageSpec::leaf_count() const {
    if (op == Op::leaf) return 1;
    size_t total = 0;
    for (auto& c : children) total += c.leaf_count();
    return total;
}

Setting Setting::parse(std::string_view text) {
    Setting s;
    auto parse_phi = [&](std::string_view tail) {
        double phi = 0.0;
        try {
            phi = std::stod(std::string(tail));
        } catch (const std::exception&) {
            raise(Errc::parse, "bad failure ratio in setting");
        }
        if (!(phi > 0.0 && phi <= 1.0)) raise(Errc::invalid, "failure ratio must be in (0,1]");
        return phi;
    };
    if (text == "det-zero") {
        s.kind = Kind::det_zero;
    } else if (text == "rand-zero") {
        s.kind = Kind::rand_zero;
    } else if (text.starts_with("det-failure=")) {
        s.kind = Kind::det_failure;
        s.phi = parse_phi(text.substr(12));
    } else if (text.starts_with("rand-failure=")) {
        s.kind = Kind::rand_failure;
        s.phi = parse_phi(text.substr(13));
    } else {
        raise(Errc::parse, "unknown setting '" + std::string(text) + "'");
    }
    return s;
}

std::string Setting::name() const {
    switch (kind) {
        case Kind::det_zero: return "det-zero";
        case Kind::rand_zero: return "rand-zero";
        case Kind::det_failure: return "det-failure=" + std::to_string(phi);
        case Kind::rand_failure: return "rand-failure=" + std::to_string(phi);
    }
    return "?";
}

}  // namespace swx
