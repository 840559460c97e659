#include <cmath>

#include "swa_internal.hpp"
#include "swx/rng.hpp"
#include "swx/swa.hpp"

// Compilation of tagged language specs into sliding-window algorithms:
// per-leaf dispatch on (tag, setting), even split of the failure ratio or
// error budget across leaves, and a formula evaluator on top.

namespace swx {

using nlohmann::json;

namespace {

const char* tag_name(AtomTag::Kind k) {
    switch (k) {
        case AtomTag::Kind::suffix_pattern: return "suffix-pattern";
        case AtomTag::Kind::length_mod: return "length-mod";
        case AtomTag::Kind::left_ideal: return "left-ideal";
        case AtomTag::Kind::prefix_free: return "prefix-free";
        case AtomTag::Kind::suffix_free: return "suffix-free";
        case AtomTag::Kind::bifix_free_left_ideal: return "bifix-free-left-ideal";
    }
    return "?";
}

// Everything a leaf needs at instantiation time, precomputed once.
struct LeafPlan {
    Dfa dfa;
    Dfa rev_min;  // minimize(reverse(dfa)), for summary-based algorithms
    AtomTag tag;
    double phi_leaf = 0.0;  // failure settings
    double eps_leaf = 0.0;  // rand-zero suffix-free leaves
    json info;

    SwaPtr make(const Setting& setting, uint64_t n, uint64_t seed) const {
        switch (tag.kind) {
            case AtomTag::Kind::suffix_pattern:
                return swa_internal::suffix_compare_swa(dfa.alphabet, n, tag.word, dfa.pad);
            case AtomTag::Kind::length_mod: {
                // windows all have length exactly n, so membership is a
                // constant decided by any length-n probe
                bool answer = dfa.finals[pad_power_state(dfa, n)];
                return swa_internal::constant_swa(dfa.alphabet, n, answer, "length-constant");
            }
            case AtomTag::Kind::left_ideal:
                if (setting.kind == Setting::Kind::rand_failure)
                    return const_left_ideal_swa(rev_min, n, phi_leaf, seed);
                return path_summary_swa(rev_min, n, QueryMode::at_most_n);
            case AtomTag::Kind::bifix_free_left_ideal:
                if (setting.failure()) return lb_direct_swa(dfa, n, phi_leaf);
                return path_summary_swa(rev_min, n, QueryMode::at_most_n);
            case AtomTag::Kind::prefix_free:
                if (setting.failure()) return trivial_reject_swa(dfa, n, phi_leaf);
                return exact_oracle(dfa, n);
            case AtomTag::Kind::suffix_free:
                if (setting.failure()) return trivial_reject_swa(dfa, n, phi_leaf);
                if (setting.kind == Setting::Kind::det_zero)
                    return path_summary_swa(rev_min, n, QueryMode::exactly_n);
                return amplify(
                    [this, n](uint64_t s) { return loglog_suffix_free_swa(rev_min, n, s); }, 0.4,
                    eps_leaf, seed);
        }
        raise(Errc::invalid, "unknown atom tag");
    }
};

void collect_leaves(const LanguageSpec& spec, std::vector<const LanguageSpec*>& out) {
    if (spec.op == LanguageSpec::Op::leaf) {
        out.push_back(&spec);
        return;
    }
    for (auto& c : spec.children) collect_leaves(c, out);
}

Dfa truth_dfa(const LanguageSpec& spec) {
    switch (spec.op) {
        case LanguageSpec::Op::leaf:
            return spec.dfa;
        case LanguageSpec::Op::not_op:
            if (spec.children.size() != 1) raise(Errc::parse, "'not' takes exactly one child");
            return complement(truth_dfa(spec.children[0]));
        case LanguageSpec::Op::and_op:
        case LanguageSpec::Op::or_op: {
            if (spec.children.empty()) raise(Errc::parse, "boolean node without children");
            Dfa acc = truth_dfa(spec.children[0]);
            BoolOp op = spec.op == LanguageSpec::Op::and_op ? BoolOp::intersection : BoolOp::union_op;
            for (size_t i = 1; i < spec.children.size(); ++i)
                acc = combine(op, acc, truth_dfa(spec.children[i]));
            return acc;
        }
    }
    raise(Errc::parse, "unknown spec node");
}

// Evaluate the formula tree over leaf answers, consuming them in leaf order.
bool eval_tree(const LanguageSpec& spec, const std::vector<bool>& answers, size_t& cursor) {
    switch (spec.op) {
        case LanguageSpec::Op::leaf:
            return answers[cursor++];
        case LanguageSpec::Op::not_op:
            return !eval_tree(spec.children[0], answers, cursor);
        case LanguageSpec::Op::and_op: {
            bool all = true;
            for (auto& c : spec.children) all &= eval_tree(c, answers, cursor);
            return all;
        }
        case LanguageSpec::Op::or_op: {
            bool any = false;
            for (auto& c : spec.children) any |= eval_tree(c, answers, cursor);
            return any;
        }
    }
    raise(Errc::parse, "unknown spec node");
}

}  // namespace

CompiledAlgorithm compile(const LanguageSpec& spec, const Setting& setting) {
    std::vector<const LanguageSpec*> leaves;
    collect_leaves(spec, leaves);
    if (leaves.empty()) raise(Errc::parse, "language spec has no leaves");

    const Alphabet& alphabet = leaves.front()->dfa.alphabet;
    for (auto* leaf : leaves)
        if (!(leaf->dfa.alphabet == alphabet))
            raise(Errc::contract, "all leaves must share one alphabet");

    auto plans = std::make_shared<std::vector<LeafPlan>>();
    json leaf_info = json::array();
    size_t k = leaves.size();
    for (size_t i = 0; i < k; ++i) {
        const LanguageSpec& leaf = *leaves[i];
        leaf.dfa.validate();
        if (!check_atom_tag(leaf.dfa, leaf.tag))
            raise(Errc::contract, std::string("leaf ") + std::to_string(i) + " fails its '" +
                                      tag_name(leaf.tag.kind) + "' tag check");
        LeafPlan plan;
        plan.dfa = leaf.dfa;
        plan.tag = leaf.tag;
        plan.rev_min = minimize(reverse(leaf.dfa));
        plan.phi_leaf = setting.failure() ? setting.phi / static_cast<double>(k) : 0.0;
        plan.eps_leaf = 1.0 / (3.0 * static_cast<double>(k));

        json li = {{"tag", tag_name(leaf.tag.kind)}};
        if (setting.failure()) li["phi_leaf"] = plan.phi_leaf;
        if (setting.kind == Setting::Kind::rand_zero && leaf.tag.kind == AtomTag::Kind::suffix_free)
            li["eps_leaf"] = plan.eps_leaf;
        // a zero-error setting has no sublinear algorithm keyed on these tags
        if (!setting.failure() && leaf.tag.kind == AtomTag::Kind::prefix_free)
            li["fallback"] = "exact-oracle";
        leaf_info.push_back(li);
        plans->push_back(std::move(plan));
    }

    // shared_ptr: the factory outlives this function
    auto tree = std::make_shared<LanguageSpec>(spec);
    Setting set = setting;

    CompiledAlgorithm out;
    out.truth = truth_dfa(spec);
    out.info = {{"setting", set.name()}, {"leaves", leaf_info}};
    out.make = [plans, tree, set](uint64_t n, uint64_t seed) -> SwaPtr {
        if (tree->op == LanguageSpec::Op::leaf) return plans->front().make(set, n, seed);
        std::vector<SwaPtr> kids;
        kids.reserve(plans->size());
        for (size_t i = 0; i < plans->size(); ++i)
            kids.push_back((*plans)[i].make(set, n, derive_seed(seed, i)));
        TruthFn fn{"formula", plans->size(), [tree](const std::vector<bool>& answers) {
                       size_t cursor = 0;
                       return eval_tree(*tree, answers, cursor);
                   }};
        return boolean_combine(std::move(kids), std::move(fn));
    };
    return out;
}

}  // namespace swx
