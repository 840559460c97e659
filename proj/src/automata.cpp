#include "swx/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace swx {

Alphabet::Alphabet(std::string symbols) : syms_(std::move(symbols)) {
    idx_.fill(-1);
    if (syms_.empty()) raise(Errc::invalid, "alphabet must not be empty");
    for (size_t i = 0; i < syms_.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(syms_[i]);
        if (idx_[c] >= 0) raise(Errc::invalid, std::string("duplicate alphabet symbol '") + syms_[i] + "'");
        idx_[c] = static_cast<int16_t>(i);
    }
}

size_t Alphabet::index(char c) const {
    int16_t i = idx_[static_cast<unsigned char>(c)];
    if (i < 0) raise(Errc::contract, std::string("symbol '") + c + "' is not in the alphabet");
    return static_cast<size_t>(i);
}

State Dfa::run(State q, std::string_view word) const {
    for (char c : word) q = step(q, c);
    return q;
}

void Dfa::validate() const {
    size_t m = state_count();
    if (m == 0) raise(Errc::contract, "dfa needs at least one state");
    if (alphabet.size() == 0) raise(Errc::contract, "dfa needs a nonempty alphabet");
    if (initial >= m) raise(Errc::contract, "initial state out of range");
    if (delta.size() != m * alphabet.size()) raise(Errc::contract, "incomplete delta");
    for (State t : delta)
        if (t >= m) raise(Errc::contract, "transition target out of range");
    if (!alphabet.contains(pad)) raise(Errc::contract, "pad symbol is not in the alphabet");
}

void Nfa::validate() const {
    for (State q : initials)
        if (q >= state_count) raise(Errc::contract, "nfa initial state out of range");
    for (State q : finals)
        if (q >= state_count) raise(Errc::contract, "nfa final state out of range");
    for (auto& [from, sym, to] : transitions)
        if (from >= state_count || to >= state_count || sym >= alphabet.size())
            raise(Errc::contract, "nfa transition out of range");
}

AtomTag AtomTag::suffix_pattern(std::string w) {
    return AtomTag{Kind::suffix_pattern, std::move(w), 0, 0, false};
}
AtomTag AtomTag::length_language() { return AtomTag{Kind::length_mod, {}, 0, 0, false}; }
AtomTag AtomTag::length_mod(uint64_t q, uint64_t r) { return AtomTag{Kind::length_mod, {}, q, r, true}; }

// ---- determinization ----------------------------------------------------

Dfa determinize(const Nfa& nfa) {
    nfa.validate();
    size_t k = nfa.alphabet.size();

    // successor sets per (state, symbol)
    std::vector<std::vector<State>> succ(nfa.state_count * k);
    for (auto& [from, sym, to] : nfa.transitions) succ[from * k + sym].push_back(to);

    auto norm = [](std::vector<State> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };

    std::map<std::vector<State>, State> ids;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> s) {
        auto [it, fresh] = ids.emplace(std::move(s), static_cast<State>(subsets.size()));
        if (fresh) subsets.push_back(it->first);
        return it->second;
    };

    std::vector<bool> nfa_final(nfa.state_count, false);
    for (State q : nfa.finals) nfa_final[q] = true;

    Dfa out;
    out.alphabet = nfa.alphabet;
    out.pad = nfa.alphabet.symbol(0);
    out.initial = intern(norm(nfa.initials));

    for (State cur = 0; cur < subsets.size(); ++cur) {
        const std::vector<State> here = subsets[cur];  // copy: subsets grows below
        out.finals.push_back(std::any_of(here.begin(), here.end(), [&](State q) { return nfa_final[q]; }));
        for (size_t c = 0; c < k; ++c) {
            std::vector<State> nxt;
            for (State q : here) {
                auto& s = succ[q * k + c];
                nxt.insert(nxt.end(), s.begin(), s.end());
            }
            out.delta.push_back(intern(norm(std::move(nxt))));
        }
    }
    out.validate();
    return out;
}

Dfa reverse(const Dfa& dfa) {
    dfa.validate();
    size_t k = dfa.alphabet.size();
    Nfa rev;
    rev.alphabet = dfa.alphabet;
    rev.state_count = dfa.state_count();
    rev.finals = {dfa.initial};
    for (State q = 0; q < dfa.state_count(); ++q) {
        if (dfa.finals[q]) rev.initials.push_back(q);
        for (size_t c = 0; c < k; ++c) rev.transitions.emplace_back(dfa.next(q, c), c, q);
    }
    Dfa out = determinize(rev);
    out.pad = dfa.pad;
    return out;
}

// ---- minimization (Hopcroft partition refinement) -----------------------

namespace {

Dfa trim_unreachable(const Dfa& dfa) {
    auto reach = reachable_from(dfa, dfa.initial);
    std::vector<State> remap(dfa.state_count(), 0);
    State m = 0;
    for (State q = 0; q < dfa.state_count(); ++q)
        if (reach[q]) remap[q] = m++;
    Dfa out;
    out.alphabet = dfa.alphabet;
    out.pad = dfa.pad;
    out.initial = remap[dfa.initial];
    out.finals.assign(m, false);
    out.delta.assign(m * dfa.alphabet.size(), 0);
    for (State q = 0; q < dfa.state_count(); ++q) {
        if (!reach[q]) continue;
        out.finals[remap[q]] = dfa.finals[q];
        for (size_t c = 0; c < dfa.alphabet.size(); ++c)
            out.delta[remap[q] * dfa.alphabet.size() + c] = remap[dfa.next(q, c)];
    }
    return out;
}

// Renumber states in BFS order from the initial state, symbols in
// alphabet order, so equal languages yield identical tables.
Dfa bfs_canonicalize(const Dfa& dfa) {
    std::vector<State> order(dfa.state_count(), UINT32_MAX);
    std::deque<State> queue{dfa.initial};
    order[dfa.initial] = 0;
    State seen = 1;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (size_t c = 0; c < dfa.alphabet.size(); ++c) {
            State t = dfa.next(q, c);
            if (order[t] == UINT32_MAX) {
                order[t] = seen++;
                queue.push_back(t);
            }
        }
    }
    Dfa out;
    out.alphabet = dfa.alphabet;
    out.pad = dfa.pad;
    out.initial = 0;
    out.finals.assign(dfa.state_count(), false);
    out.delta.assign(dfa.delta.size(), 0);
    for (State q = 0; q < dfa.state_count(); ++q) {
        out.finals[order[q]] = dfa.finals[q];
        for (size_t c = 0; c < dfa.alphabet.size(); ++c)
            out.delta[order[q] * dfa.alphabet.size() + c] = order[dfa.next(q, c)];
    }
    return out;
}

}  // namespace

Dfa minimize(const Dfa& input) {
    input.validate();
    Dfa dfa = trim_unreachable(input);
    size_t m = dfa.state_count();
    size_t k = dfa.alphabet.size();

    std::vector<std::vector<State>> preimage(m * k);
    for (State q = 0; q < m; ++q)
        for (size_t c = 0; c < k; ++c) preimage[dfa.next(q, c) * k + c].push_back(q);

    // blocks[i] = states of block i; block_of[q] = i
    std::vector<std::vector<State>> blocks;
    std::vector<uint32_t> block_of(m, 0);
    {
        std::vector<State> fin, non;
        for (State q = 0; q < m; ++q) (dfa.finals[q] ? fin : non).push_back(q);
        if (!fin.empty()) blocks.push_back(std::move(fin));
        if (!non.empty()) blocks.push_back(std::move(non));
        for (uint32_t b = 0; b < blocks.size(); ++b)
            for (State q : blocks[b]) block_of[q] = b;
    }

    std::deque<std::pair<uint32_t, size_t>> work;  // (block, symbol)
    for (uint32_t b = 0; b < blocks.size(); ++b)
        for (size_t c = 0; c < k; ++c) work.emplace_back(b, c);

    std::vector<uint32_t> touched_count(blocks.size() + m, 0);  // scratch, grows with blocks
    while (!work.empty()) {
        auto [splitter, c] = work.front();
        work.pop_front();

        // X = preimage of the splitter block under symbol c
        std::vector<State> x;
        for (State q : blocks[splitter])
            for (State p : preimage[q * k + c]) x.push_back(p);
        if (x.empty()) continue;

        std::vector<uint32_t> touched;
        if (touched_count.size() < blocks.size()) touched_count.resize(blocks.size() * 2, 0);
        for (State p : x) {
            uint32_t b = block_of[p];
            if (touched_count[b]++ == 0) touched.push_back(b);
        }
        for (uint32_t b : touched) {
            uint32_t in_x = touched_count[b];
            touched_count[b] = 0;
            if (in_x == blocks[b].size()) continue;  // block not split

            std::vector<State> stay, move;
            for (State q : blocks[b]) {
                bool hit = std::find(x.begin(), x.end(), q) != x.end();
                (hit ? move : stay).push_back(q);
            }
            uint32_t fresh = static_cast<uint32_t>(blocks.size());
            blocks[b] = std::move(stay);
            blocks.push_back(std::move(move));
            if (touched_count.size() < blocks.size()) touched_count.resize(blocks.size() * 2, 0);
            for (State q : blocks[fresh]) block_of[q] = fresh;

            // requeue both halves; pending entries for b now mean the
            // stay half, so the move half needs its own entries
            for (size_t cc = 0; cc < k; ++cc) {
                work.emplace_back(b, cc);
                work.emplace_back(fresh, cc);
            }
        }
    }

    Dfa merged;
    merged.alphabet = dfa.alphabet;
    merged.pad = dfa.pad;
    merged.initial = block_of[dfa.initial];
    merged.finals.assign(blocks.size(), false);
    merged.delta.assign(blocks.size() * k, 0);
    for (uint32_t b = 0; b < blocks.size(); ++b) {
        State rep = blocks[b].front();
        merged.finals[b] = dfa.finals[rep];
        for (size_t c = 0; c < k; ++c) merged.delta[b * k + c] = block_of[dfa.next(rep, c)];
    }
    return bfs_canonicalize(merged);
}

// ---- boolean combinations -----------------------------------------------

Dfa complement(const Dfa& a) {
    a.validate();
    Dfa out = a;
    out.finals.flip();
    return out;
}

Dfa combine(BoolOp op, const Dfa& a, const Dfa& b) {
    if (op == BoolOp::complement) return complement(a);
    a.validate();
    b.validate();
    if (!(a.alphabet == b.alphabet)) raise(Errc::contract, "alphabet mismatch in boolean combination");
    size_t k = a.alphabet.size();

    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto [it, fresh] = ids.emplace(std::make_pair(x, y), static_cast<State>(pairs.size()));
        if (fresh) pairs.emplace_back(x, y);
        return it->second;
    };

    Dfa out;
    out.alphabet = a.alphabet;
    out.pad = a.pad;
    out.initial = intern(a.initial, b.initial);
    for (State cur = 0; cur < pairs.size(); ++cur) {
        auto [x, y] = pairs[cur];
        bool fa = a.finals[x], fb = b.finals[y];
        switch (op) {
            case BoolOp::union_op: out.finals.push_back(fa || fb); break;
            case BoolOp::intersection: out.finals.push_back(fa && fb); break;
            case BoolOp::difference: out.finals.push_back(fa && !fb); break;
            case BoolOp::complement: break;  // handled above
        }
        for (size_t c = 0; c < k; ++c) out.delta.push_back(intern(a.next(x, c), b.next(y, c)));
    }
    return out;
}

Dfa rerooted(const Dfa& a, State initial) {
    if (initial >= a.state_count()) raise(Errc::invalid, "reroot state out of range");
    Dfa out = a;
    out.initial = initial;
    return out;
}

std::vector<bool> reachable_from(const Dfa& dfa, State start) {
    std::vector<bool> seen(dfa.state_count(), false);
    std::deque<State> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (size_t c = 0; c < dfa.alphabet.size(); ++c) {
            State t = dfa.next(q, c);
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    return seen;
}

bool language_empty(const Dfa& a) {
    auto reach = reachable_from(a, a.initial);
    for (State q = 0; q < a.state_count(); ++q)
        if (reach[q] && a.finals[q]) return false;
    return true;
}

namespace {

// Emptiness of { w : delta_a(sa,w) in F_a and delta_b(sb,w) not in F_b }
// by pair-graph search, without materializing the product.
bool subset_from(const Dfa& a, State sa, const Dfa& b, State sb) {
    size_t k = a.alphabet.size();
    std::vector<bool> seen(a.state_count() * b.state_count(), false);
    std::deque<std::pair<State, State>> queue{{sa, sb}};
    seen[sa * b.state_count() + sb] = true;
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        if (a.finals[x] && !b.finals[y]) return false;
        for (size_t c = 0; c < k; ++c) {
            State nx = a.next(x, c), ny = b.next(y, c);
            if (!seen[nx * b.state_count() + ny]) {
                seen[nx * b.state_count() + ny] = true;
                queue.emplace_back(nx, ny);
            }
        }
    }
    return true;
}

}  // namespace

bool language_subset(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet == b.alphabet)) raise(Errc::contract, "alphabet mismatch in language comparison");
    return subset_from(a, a.initial, b, b.initial);
}

bool language_equal(const Dfa& a, const Dfa& b) {
    return language_subset(a, b) && language_subset(b, a);
}

// ---- SCC analysis (iterative Tarjan) -------------------------------------

SccInfo sccs(const Dfa& dfa) {
    dfa.validate();
    size_t m = dfa.state_count();
    size_t k = dfa.alphabet.size();

    SccInfo info;
    info.component.assign(m, UINT32_MAX);
    info.nontrivial.assign(m, false);

    std::vector<uint32_t> index(m, UINT32_MAX), low(m, 0);
    std::vector<bool> on_stack(m, false);
    std::vector<State> stack;
    uint32_t counter = 0;

    struct Frame {
        State q;
        size_t edge;
    };
    for (State root = 0; root < m; ++root) {
        if (index[root] != UINT32_MAX) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < k) {
                State t = dfa.next(f.q, f.edge++);
                if (index[t] == UINT32_MAX) {
                    index[t] = low[t] = counter++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    frames.push_back({t, 0});
                } else if (on_stack[t]) {
                    low[f.q] = std::min(low[f.q], index[t]);
                }
            } else {
                if (low[f.q] == index[f.q]) {
                    uint32_t id = static_cast<uint32_t>(info.members.size());
                    info.members.emplace_back();
                    State s;
                    do {
                        s = stack.back();
                        stack.pop_back();
                        on_stack[s] = false;
                        info.component[s] = id;
                        info.members[id].push_back(s);
                    } while (s != f.q);
                }
                State done = f.q;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().q] = std::min(low[frames.back().q], low[done]);
            }
        }
    }

    info.maximal.assign(info.members.size(), true);
    for (State q = 0; q < m; ++q) {
        bool self_loop = false;
        for (size_t c = 0; c < k; ++c) {
            State t = dfa.next(q, c);
            if (t == q) self_loop = true;
            if (info.component[t] != info.component[q]) info.maximal[info.component[q]] = false;
        }
        info.nontrivial[q] = self_loop || info.members[info.component[q]].size() > 1;
    }
    return info;
}

// ---- atom tags ------------------------------------------------------------

namespace {

bool prefix_free_check(const Dfa& dfa) {
    auto reach = reachable_from(dfa, dfa.initial);
    size_t k = dfa.alphabet.size();

    // states from which some final state is reachable (within the
    // reachable part; unreachable states cannot matter)
    std::vector<bool> to_final(dfa.state_count(), false);
    bool changed = true;
    for (State q = 0; q < dfa.state_count(); ++q) to_final[q] = dfa.finals[q];
    while (changed) {
        changed = false;
        for (State q = 0; q < dfa.state_count(); ++q) {
            if (to_final[q]) continue;
            for (size_t c = 0; c < k; ++c)
                if (to_final[dfa.next(q, c)]) {
                    to_final[q] = true;
                    changed = true;
                    break;
                }
        }
    }
    for (State q = 0; q < dfa.state_count(); ++q) {
        if (!reach[q] || !dfa.finals[q]) continue;
        for (size_t c = 0; c < k; ++c)
            if (to_final[dfa.next(q, c)]) return false;  // final reaches final in >= 1 step
    }
    return true;
}

bool left_ideal_check(const Dfa& dfa) {
    // Sigma L subset of L <=> Sigma* L = L; one containment per symbol:
    // every w in L must be accepted from delta(q0, a) as well.
    for (size_t c = 0; c < dfa.alphabet.size(); ++c)
        if (!subset_from(dfa, dfa.initial, dfa, dfa.next(dfa.initial, c))) return false;
    return true;
}

bool length_language_check(const Dfa& dfa) {
    // no F-inconsistent pair reachable from (q0, q0) with independent letters
    size_t m = dfa.state_count(), k = dfa.alphabet.size();
    std::vector<bool> seen(m * m, false);
    std::deque<std::pair<State, State>> queue{{dfa.initial, dfa.initial}};
    seen[dfa.initial * m + dfa.initial] = true;
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        if (dfa.finals[x] != dfa.finals[y]) return false;
        for (size_t cx = 0; cx < k; ++cx)
            for (size_t cy = 0; cy < k; ++cy) {
                State nx = dfa.next(x, cx), ny = dfa.next(y, cy);
                if (!seen[nx * m + ny]) {
                    seen[nx * m + ny] = true;
                    queue.emplace_back(nx, ny);
                }
            }
    }
    return true;
}

Dfa min_generator(const Dfa& dfa) {
    // K = L \ Sigma L; for left ideals this is min(L) with L = Sigma* K.
    Nfa sl;
    sl.alphabet = dfa.alphabet;
    sl.state_count = dfa.state_count() + 1;
    State fresh = static_cast<State>(dfa.state_count());
    sl.initials = {fresh};
    for (State q = 0; q < dfa.state_count(); ++q) {
        if (dfa.finals[q]) sl.finals.push_back(q);
        for (size_t c = 0; c < dfa.alphabet.size(); ++c)
            sl.transitions.emplace_back(q, static_cast<uint32_t>(c), dfa.next(q, c));
    }
    for (size_t c = 0; c < dfa.alphabet.size(); ++c)
        sl.transitions.emplace_back(fresh, static_cast<uint32_t>(c), dfa.initial);
    Dfa sigma_l = determinize(sl);
    sigma_l.pad = dfa.pad;
    return minimize(combine(BoolOp::difference, dfa, sigma_l));
}

}  // namespace

bool check_atom_tag(const Dfa& dfa, const AtomTag& tag) {
    dfa.validate();
    switch (tag.kind) {
        case AtomTag::Kind::prefix_free:
            return prefix_free_check(dfa);
        case AtomTag::Kind::suffix_free:
            return prefix_free_check(reverse(dfa));
        case AtomTag::Kind::left_ideal:
            return left_ideal_check(dfa);
        case AtomTag::Kind::length_mod:
            if (!length_language_check(dfa)) return false;
            if (tag.has_mod_params)
                return language_equal(dfa, length_mod_dfa(dfa.alphabet, tag.mod_q, tag.mod_r, dfa.pad));
            return true;
        case AtomTag::Kind::suffix_pattern:
            return language_equal(dfa, suffix_pattern_dfa(dfa.alphabet, tag.word, dfa.pad));
        case AtomTag::Kind::bifix_free_left_ideal: {
            if (!left_ideal_check(dfa)) return false;
            Dfa k = min_generator(dfa);
            return prefix_free_check(k) && prefix_free_check(reverse(k));
        }
    }
    raise(Errc::invalid, "unknown atom tag");
}

std::string last_n(size_t n, std::string_view stream, char pad) {
    if (n <= stream.size()) return std::string(stream.substr(stream.size() - n));
    std::string out(n - stream.size(), pad);
    out += stream;
    return out;
}

Dfa suffix_pattern_dfa(const Alphabet& alphabet, std::string_view w, char pad) {
    Nfa nfa;
    nfa.alphabet = alphabet;
    nfa.state_count = w.size() + 1;
    nfa.initials = {0};
    nfa.finals = {static_cast<State>(w.size())};
    for (size_t c = 0; c < alphabet.size(); ++c) nfa.transitions.emplace_back(0, static_cast<uint32_t>(c), 0);
    for (size_t i = 0; i < w.size(); ++i)
        nfa.transitions.emplace_back(static_cast<State>(i), static_cast<uint32_t>(alphabet.index(w[i])),
                                     static_cast<State>(i + 1));
    Dfa out = minimize(determinize(nfa));
    out.pad = pad;
    return out;
}

Dfa length_mod_dfa(const Alphabet& alphabet, uint64_t q, uint64_t r, char pad) {
    Dfa out;
    out.alphabet = alphabet;
    out.pad = pad;
    out.initial = 0;
    size_t k = alphabet.size();
    if (q == 0) {
        // Sigma^r exactly, plus a sink
        size_t m = r + 2;
        out.finals.assign(m, false);
        out.finals[r] = true;
        out.delta.assign(m * k, 0);
        for (size_t s = 0; s < m; ++s) {
            State t = static_cast<State>(std::min<uint64_t>(s + 1, m - 1));
            for (size_t c = 0; c < k; ++c) out.delta[s * k + c] = t;
        }
    } else {
        size_t m = r + q;
        out.finals.assign(m, false);
        out.finals[r] = true;
        out.delta.assign(m * k, 0);
        for (size_t s = 0; s < m; ++s) {
            State t = static_cast<State>(s + 1 < m ? s + 1 : r);
            for (size_t c = 0; c < k; ++c) out.delta[s * k + c] = t;
        }
    }
    return minimize(out);
}

State pad_power_state(const Dfa& dfa, uint64_t n) {
    size_t c = dfa.alphabet.index(dfa.pad);
    std::vector<int64_t> seen_at(dfa.state_count(), -1);
    std::vector<State> orbit;
    State q = dfa.initial;
    uint64_t t = 0;
    while (true) {
        if (t == n) return q;
        if (seen_at[q] >= 0) {
            uint64_t pre = static_cast<uint64_t>(seen_at[q]);
            uint64_t period = t - pre;
            return orbit[pre + (n - pre) % period];
        }
        seen_at[q] = static_cast<int64_t>(t);
        orbit.push_back(q);
        q = dfa.next(q, c);
        ++t;
    }
}

}  // namespace swx
