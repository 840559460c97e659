#include "swx/classify.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace swx {

const char* lang_class_name(LangClass c) {
    switch (c) {
        case LangClass::st_len: return "ST-Len";
        case LangClass::st_sf_len: return "ST-SF-Len";
        case LangClass::li_len: return "LI-Len";
        case LangClass::lb_pf_sf_len: return "LB-PF-SF-Len";
        case LangClass::li_pf_len: return "LI-PF-Len";
    }
    return "?";
}

std::optional<LangClass> lang_class_from_name(std::string_view name) {
    for (LangClass c : {LangClass::st_len, LangClass::st_sf_len, LangClass::li_len,
                        LangClass::lb_pf_sf_len, LangClass::li_pf_len})
        if (name == lang_class_name(c)) return c;
    return std::nullopt;
}

const char* space_class_name(SpaceClass c) {
    switch (c) {
        case SpaceClass::constant: return "Const";
        case SpaceClass::loglog: return "LogLog";
        case SpaceClass::logarithmic: return "Log";
        case SpaceClass::linear: return "Linear";
    }
    return "?";
}

const char* witness_variant_name(WitnessPattern::Variant v) {
    switch (v) {
        case WitnessPattern::Variant::linear_gap: return "linear-gap";
        case WitnessPattern::Variant::log_gap: return "log-gap";
        case WitnessPattern::Variant::loglog_gap: return "loglog-gap";
        case WitnessPattern::Variant::failure_linear_gap: return "failure-linear-gap";
        case WitnessPattern::Variant::failure_log_gap: return "failure-log-gap";
    }
    return "?";
}

std::string WitnessPattern::word(const std::string& role) const {
    auto it = words.find(role);
    if (it == words.end()) raise(Errc::invalid, "witness has no component '" + role + "'");
    return it->second;
}

// ---- file-local search helpers -------------------------------------------
//
// All product-graph searches below that require paths of length >= 1 use
// the same scheme: the source node is not pre-marked; its successors are
// seeded as depth-1 roots (parent = -2), so the source may be re-entered.

namespace {

std::string shortest_word(const Dfa& dfa, State from, State to) {
    if (from == to) return "";
    size_t k = dfa.alphabet.size();
    std::vector<int64_t> parent(dfa.state_count(), -1);
    std::vector<char> via(dfa.state_count(), 0);
    std::deque<State> queue{from};
    parent[from] = -2;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (size_t c = 0; c < k; ++c) {
            State t = dfa.next(q, c);
            if (parent[t] != -1) continue;
            parent[t] = static_cast<int64_t>(q);
            via[t] = dfa.alphabet.symbol(c);
            if (t == to) {
                std::string w;
                for (int64_t s = t; s != static_cast<int64_t>(from); s = parent[s]) w.push_back(via[s]);
                std::reverse(w.begin(), w.end());
                return w;
            }
            queue.push_back(t);
        }
    }
    raise(Errc::invalid, "no path between states");
}

// Shortest x with |x| >= 1, delta(a0,x) = ta, delta(b0,x) = tb, both
// components reading the same letters.
std::optional<std::string> same_letter_word(const Dfa& dfa, State a0, State b0, State ta, State tb) {
    size_t m = dfa.state_count(), k = dfa.alphabet.size();
    auto id = [m](State a, State b) { return static_cast<size_t>(a) * m + b; };
    std::vector<int64_t> parent(m * m, -1);
    std::vector<char> via(m * m, 0);
    std::deque<size_t> queue;

    auto finish = [&](size_t node) {
        std::string w;
        for (size_t s = node;; s = static_cast<size_t>(parent[s])) {
            w.push_back(via[s]);
            if (parent[s] == -2) break;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    for (size_t c = 0; c < k; ++c) {
        size_t node = id(dfa.next(a0, c), dfa.next(b0, c));
        if (parent[node] != -1) continue;
        parent[node] = -2;
        via[node] = dfa.alphabet.symbol(c);
        if (node == id(ta, tb)) return finish(node);
        queue.push_back(node);
    }
    while (!queue.empty()) {
        size_t here = queue.front();
        queue.pop_front();
        State a = static_cast<State>(here / m), b = static_cast<State>(here % m);
        for (size_t c = 0; c < k; ++c) {
            size_t node = id(dfa.next(a, c), dfa.next(b, c));
            if (parent[node] != -1) continue;
            parent[node] = static_cast<int64_t>(here);
            via[node] = dfa.alphabet.symbol(c);
            if (node == id(ta, tb)) return finish(node);
            queue.push_back(node);
        }
    }
    return std::nullopt;
}

std::vector<std::vector<bool>> reachability_matrix(const Dfa& dfa) {
    size_t m = dfa.state_count();
    std::vector<std::vector<bool>> reach(m);
    for (State q = 0; q < m; ++q) reach[q] = reachable_from(dfa, q);
    return reach;
}

}  // namespace

// ---- positively idempotent states ------------------------------------------

std::vector<bool> positively_idempotent_states(const Dfa& dfa) {
    dfa.validate();
    size_t m = dfa.state_count();
    std::vector<bool> out(m, false);
    for (State q = 0; q < m; ++q)
        out[q] = same_letter_word(dfa, dfa.initial, q, q, q).has_value();
    return out;
}

// ---- synchronized pairs ------------------------------------------------------

namespace {

// Reachability of (p,q,q) from (p,p,q) in >= 1 step in the triple graph
// with independent letters. Nodes are pruned to triples whose components
// can still reach (p,q,q); every witness path lies inside that set.
bool triple_reachable(const Dfa& dfa, State p, State q,
                      const std::vector<std::vector<bool>>& reach, std::vector<uint32_t>& stamp,
                      uint32_t epoch) {
    size_t m = dfa.state_count(), k = dfa.alphabet.size();
    auto id = [m](State a, State b, State c) { return (static_cast<size_t>(a) * m + b) * m + c; };
    size_t target = id(p, q, q);

    std::deque<std::array<State, 3>> queue{{p, p, q}};
    bool source = true;
    while (!queue.empty()) {
        auto [a, b, c] = queue.front();
        queue.pop_front();
        for (size_t ca = 0; ca < k; ++ca) {
            State na = dfa.next(a, ca);
            if (!reach[na][p]) continue;
            for (size_t cb = 0; cb < k; ++cb) {
                State nb = dfa.next(b, cb);
                if (!reach[nb][q]) continue;
                for (size_t cc = 0; cc < k; ++cc) {
                    State nc = dfa.next(c, cc);
                    if (!reach[nc][q]) continue;
                    size_t node = id(na, nb, nc);
                    if (node == target) return true;
                    if (stamp[node] != epoch) {
                        stamp[node] = epoch;
                        queue.push_back({na, nb, nc});
                    }
                }
            }
        }
        if (source) {
            source = false;
            stamp[id(p, p, q)] = epoch;  // successors may still re-enter it
        }
    }
    return false;
}

}  // namespace

std::vector<std::vector<bool>> synchronized_pairs(const Dfa& dfa) {
    dfa.validate();
    size_t m = dfa.state_count();
    auto info = sccs(dfa);
    auto reach = reachability_matrix(dfa);

    std::vector<std::vector<bool>> out(m, std::vector<bool>(m, false));
    std::vector<uint32_t> stamp(m * m * m, UINT32_MAX);
    uint32_t epoch = 0;
    for (State p = 0; p < m; ++p) {
        if (!info.nontrivial[p]) continue;  // delta(p,x) = p needs a cycle
        for (State q = 0; q < m; ++q) {
            if (!info.nontrivial[q] || !reach[p][q]) continue;
            out[p][q] = triple_reachable(dfa, p, q, reach, stamp, epoch++);
        }
    }
    return out;
}

std::vector<std::vector<bool>> synchronized_pairs_matrix_oracle(const Dfa& dfa) {
    dfa.validate();
    size_t m = dfa.state_count(), k = dfa.alphabet.size();

    std::vector<std::vector<bool>> step(m, std::vector<bool>(m, false));
    for (State q = 0; q < m; ++q)
        for (size_t c = 0; c < k; ++c) step[q][dfa.next(q, c)] = true;

    std::vector<std::vector<bool>> out(m, std::vector<bool>(m, false));
    std::vector<std::vector<bool>> power = step;
    uint64_t limit = static_cast<uint64_t>(m) * m * m;
    for (uint64_t len = 1; len <= limit; ++len) {
        if (len > 1) {
            std::vector<std::vector<bool>> next(m, std::vector<bool>(m, false));
            for (size_t a = 0; a < m; ++a)
                for (size_t b = 0; b < m; ++b) {
                    if (!power[a][b]) continue;
                    for (size_t c = 0; c < m; ++c)
                        if (step[b][c]) next[a][c] = true;
                }
            power = std::move(next);
        }
        for (State p = 0; p < m; ++p)
            for (State q = 0; q < m; ++q)
                if (power[p][p] && power[p][q] && power[q][q]) out[p][q] = true;
    }
    return out;
}

// ---- equal-length inconsistency ---------------------------------------------

namespace {

// BFS over the independent-letter pair graph from diagonal sources,
// optionally restricted to a state mask. Reports the first F-inconsistent
// pair together with the equal-length word pair leading to it.
struct PairSearch {
    const Dfa& dfa;
    std::vector<int64_t> parent;  // -1 unvisited, -2 source
    std::vector<char> via_a, via_b;
    std::vector<State> root;

    explicit PairSearch(const Dfa& d)
        : dfa(d),
          parent(d.state_count() * d.state_count(), -1),
          via_a(parent.size(), 0),
          via_b(parent.size(), 0),
          root(parent.size(), 0) {}

    size_t id(State a, State b) const { return static_cast<size_t>(a) * dfa.state_count() + b; }

    std::optional<InconsistentPair> run(std::vector<State> sources, const std::vector<bool>* mask,
                                        State* found_root) {
        size_t m = dfa.state_count(), k = dfa.alphabet.size();
        std::sort(sources.begin(), sources.end());
        std::deque<size_t> queue;
        for (State s : sources) {
            size_t node = id(s, s);
            if (parent[node] != -1) continue;
            parent[node] = -2;
            root[node] = s;
            queue.push_back(node);
        }
        while (!queue.empty()) {
            size_t here = queue.front();
            queue.pop_front();
            State a = static_cast<State>(here / m), b = static_cast<State>(here % m);
            for (size_t ca = 0; ca < k; ++ca) {
                State na = dfa.next(a, ca);
                if (mask && !(*mask)[na]) continue;
                for (size_t cb = 0; cb < k; ++cb) {
                    State nb = dfa.next(b, cb);
                    if (mask && !(*mask)[nb]) continue;
                    size_t node = id(na, nb);
                    if (parent[node] != -1) continue;
                    parent[node] = static_cast<int64_t>(here);
                    via_a[node] = dfa.alphabet.symbol(ca);
                    via_b[node] = dfa.alphabet.symbol(cb);
                    root[node] = root[here];
                    if (dfa.finals[na] != dfa.finals[nb]) {
                        if (found_root) *found_root = root[node];
                        return extract(na, nb);
                    }
                    queue.push_back(node);
                }
            }
        }
        return std::nullopt;
    }

    InconsistentPair extract(State a, State b) const {
        InconsistentPair out;
        out.first = a;
        out.second = b;
        for (size_t node = id(a, b); parent[node] != -2; node = static_cast<size_t>(parent[node])) {
            out.word_first.push_back(via_a[node]);
            out.word_second.push_back(via_b[node]);
        }
        std::reverse(out.word_first.begin(), out.word_first.end());
        std::reverse(out.word_second.begin(), out.word_second.end());
        return out;
    }
};

}  // namespace

std::optional<InconsistentPair> equal_length_inconsistent_pair(const Dfa& dfa, State anchor) {
    dfa.validate();
    if (anchor >= dfa.state_count()) raise(Errc::invalid, "anchor state out of range");
    PairSearch search(dfa);
    return search.run({anchor}, nullptr, nullptr);
}

WellBehavedReport well_behaved(const Dfa& dfa) {
    dfa.validate();
    auto info = sccs(dfa);
    auto reachable = reachable_from(dfa, dfa.initial);

    for (uint32_t scc = 0; scc < info.members.size(); ++scc) {
        if (!reachable[info.members[scc].front()]) continue;
        std::vector<bool> mask(dfa.state_count(), false);
        for (State q : info.members[scc]) mask[q] = true;

        PairSearch search(dfa);
        State anchor = 0;
        if (auto hit = search.run(info.members[scc], &mask, &anchor))
            return WellBehavedReport{false, scc, anchor, *hit};
    }
    return WellBehavedReport{true, 0, 0, {}};
}

// ---- classification -----------------------------------------------------------

namespace detail {

// Forbidden pattern of <ST,Len>: from (q1,q1) reach, in >= 1 step, a pair
// (q1, q2) that is F-inconsistent. Returns the word pair (x, y) with
// delta(q1,x) = q1, delta(q1,y) = q2.
std::optional<InconsistentPair> st_len_pattern(const Dfa& dfa, State q1) {
    size_t m = dfa.state_count(), k = dfa.alphabet.size();
    PairSearch search(dfa);
    auto target = [&](size_t node) {
        State na = static_cast<State>(node / m), nb = static_cast<State>(node % m);
        return na == q1 && dfa.finals[q1] != dfa.finals[nb];
    };
    // unlike the diagonal-source searches, the depth-1 seeds carry a via
    // symbol that belongs on the extracted path
    auto finish = [&](size_t node) {
        InconsistentPair out;
        out.first = static_cast<State>(node / m);
        out.second = static_cast<State>(node % m);
        while (true) {
            out.word_first.push_back(search.via_a[node]);
            out.word_second.push_back(search.via_b[node]);
            if (search.parent[node] == -2) break;
            node = static_cast<size_t>(search.parent[node]);
        }
        std::reverse(out.word_first.begin(), out.word_first.end());
        std::reverse(out.word_second.begin(), out.word_second.end());
        return out;
    };

    std::deque<size_t> queue;
    // seed depth-1 nodes from (q1,q1)
    for (size_t ca = 0; ca < k; ++ca)
        for (size_t cb = 0; cb < k; ++cb) {
            size_t node = search.id(dfa.next(q1, ca), dfa.next(q1, cb));
            if (search.parent[node] != -1) continue;
            search.parent[node] = -2;
            search.via_a[node] = dfa.alphabet.symbol(ca);
            search.via_b[node] = dfa.alphabet.symbol(cb);
            if (target(node)) return finish(node);
            queue.push_back(node);
        }
    while (!queue.empty()) {
        size_t here = queue.front();
        queue.pop_front();
        State a = static_cast<State>(here / m), b = static_cast<State>(here % m);
        for (size_t ca = 0; ca < k; ++ca)
            for (size_t cb = 0; cb < k; ++cb) {
                size_t node = search.id(dfa.next(a, ca), dfa.next(b, cb));
                if (search.parent[node] != -1) continue;
                search.parent[node] = static_cast<int64_t>(here);
                search.via_a[node] = dfa.alphabet.symbol(ca);
                search.via_b[node] = dfa.alphabet.symbol(cb);
                if (target(node)) return finish(node);
                queue.push_back(node);
            }
    }
    return std::nullopt;
}

std::string loop_to_state_word(const Dfa& dfa, State q) {
    auto w = same_letter_word(dfa, dfa.initial, q, q, q);
    if (!w) raise(Errc::invalid, "state is not positively idempotent");
    return *w;
}

std::string classify_shortest_word(const Dfa& dfa, State from, State to) {
    return shortest_word(dfa, from, to);
}

std::optional<InconsistentPair> restricted_inconsistent_pair(const Dfa& dfa,
                                                             const std::vector<State>& sources,
                                                             const std::vector<bool>& mask,
                                                             State* found_root) {
    PairSearch search(dfa);
    return search.run(sources, &mask, found_root);
}

// Shortest equal-length nonempty (x,y,z) with delta(p,x) = p,
// delta(p,y) = q, delta(q,z) = q, via the triple graph with parents.
std::optional<std::array<std::string, 3>> sync_witness_words(const Dfa& dfa, State p, State q) {
    size_t m = dfa.state_count(), k = dfa.alphabet.size();
    auto id = [m](State a, State b, State c) { return (static_cast<size_t>(a) * m + b) * m + c; };
    size_t target = id(p, q, q);

    std::vector<int64_t> parent(m * m * m, -1);
    std::vector<std::array<char, 3>> via(m * m * m);
    std::deque<size_t> queue;

    auto finish = [&](size_t node) {
        std::array<std::string, 3> words;
        for (size_t s = node;; s = static_cast<size_t>(parent[s])) {
            for (int i = 0; i < 3; ++i) words[i].push_back(via[s][i]);
            if (parent[s] == -2) break;
        }
        for (auto& w : words) std::reverse(w.begin(), w.end());
        return words;
    };

    auto expand = [&](std::array<State, 3> from, int64_t parent_id)
        -> std::optional<std::array<std::string, 3>> {
        auto [a, b, c] = from;
        for (size_t ca = 0; ca < k; ++ca)
            for (size_t cb = 0; cb < k; ++cb)
                for (size_t cc = 0; cc < k; ++cc) {
                    size_t node = id(dfa.next(a, ca), dfa.next(b, cb), dfa.next(c, cc));
                    if (parent[node] != -1) continue;
                    parent[node] = parent_id;
                    via[node] = {dfa.alphabet.symbol(ca), dfa.alphabet.symbol(cb),
                                 dfa.alphabet.symbol(cc)};
                    if (node == target) return finish(node);
                    queue.push_back(node);
                }
        return std::nullopt;
    };

    if (auto hit = expand({p, p, q}, -2)) return hit;
    while (!queue.empty()) {
        size_t here = queue.front();
        queue.pop_front();
        State a = static_cast<State>(here / (m * m));
        State b = static_cast<State>((here / m) % m);
        State c = static_cast<State>(here % m);
        if (auto hit = expand({a, b, c}, static_cast<int64_t>(here))) return hit;
    }
    return std::nullopt;
}

}  // namespace detail

namespace {

bool st_len_pattern_free(const Dfa& dfa) {
    for (State q1 = 0; q1 < dfa.state_count(); ++q1)
        if (detail::st_len_pattern(dfa, q1)) return false;
    return true;
}

}  // namespace

SpaceVerdict classify(const Dfa& dfa_for_l) {
    dfa_for_l.validate();
    Dfa ar = minimize(reverse(dfa_for_l));  // every state reachable

    auto sync = synchronized_pairs(ar);
    auto idem = positively_idempotent_states(ar);
    auto reach = reachability_matrix(ar);
    auto wb = well_behaved(ar);

    // <ST,SF,Len>: every synchronized pair reachable from q0 F-consistent.
    // <LB,PF,SF,Len>: only pairs reachable from a positively idempotent state.
    bool st_sf_len = true;
    bool lb_pf_sf_len = true;
    for (State p = 0; p < ar.state_count(); ++p)
        for (State q = 0; q < ar.state_count(); ++q) {
            if (!sync[p][q] || ar.finals[p] == ar.finals[q]) continue;
            st_sf_len = false;
            for (State r = 0; r < ar.state_count(); ++r)
                if (idem[r] && reach[r][p]) {
                    lb_pf_sf_len = false;
                    break;
                }
        }

    // <LI,PF,Len>: every SCC reachable from a positively idempotent state
    // is well-behaved.
    bool li_pf_len = true;
    {
        auto info = sccs(ar);
        std::vector<bool> from_idem(ar.state_count(), false);
        for (State r = 0; r < ar.state_count(); ++r)
            if (idem[r])
                for (State q = 0; q < ar.state_count(); ++q)
                    if (reach[r][q]) from_idem[q] = true;
        for (uint32_t scc = 0; scc < info.members.size() && li_pf_len; ++scc) {
            if (!from_idem[info.members[scc].front()]) continue;
            std::vector<bool> mask(ar.state_count(), false);
            for (State q : info.members[scc]) mask[q] = true;
            if (detail::restricted_inconsistent_pair(ar, info.members[scc], mask, nullptr))
                li_pf_len = false;
        }
    }

    SpaceVerdict v;
    v.member[static_cast<int>(LangClass::st_len)] = st_len_pattern_free(ar);
    v.member[static_cast<int>(LangClass::st_sf_len)] = st_sf_len;
    v.member[static_cast<int>(LangClass::li_len)] = wb.well_behaved;
    v.member[static_cast<int>(LangClass::lb_pf_sf_len)] = lb_pf_sf_len;
    v.member[static_cast<int>(LangClass::li_pf_len)] = li_pf_len;

    auto pick = [&](std::initializer_list<std::pair<LangClass, SpaceClass>> steps) {
        for (auto& [cls, space] : steps)
            if (v.is_member(cls)) return space;
        return SpaceClass::linear;
    };
    v.det_zero = pick({{LangClass::st_len, SpaceClass::constant},
                       {LangClass::li_len, SpaceClass::logarithmic}});
    v.rand_zero = pick({{LangClass::st_len, SpaceClass::constant},
                        {LangClass::st_sf_len, SpaceClass::loglog},
                        {LangClass::li_len, SpaceClass::logarithmic}});
    v.det_failure = pick({{LangClass::lb_pf_sf_len, SpaceClass::constant},
                          {LangClass::li_pf_len, SpaceClass::logarithmic}});
    v.rand_failure = pick({{LangClass::li_pf_len, SpaceClass::constant}});

    for (LangClass c : {LangClass::st_len, LangClass::st_sf_len, LangClass::li_len,
                        LangClass::lb_pf_sf_len, LangClass::li_pf_len})
        if (!v.is_member(c)) v.witnesses.emplace(lang_class_name(c), extract_witness(dfa_for_l, c));
    return v;
}

}  // namespace swx
