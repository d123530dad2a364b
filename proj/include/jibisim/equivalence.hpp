#pragma once

#include "jibisim/formula.hpp"
#include "jibisim/lts.hpp"
#include "jibisim/relation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace jibisim {

namespace detail {

/// One refinement pass; deletes pairs violating (forth), and (back) too when
/// `back` is set. Returns whether anything changed.
inline bool refine_pass(const Lts& l, const Lts& r, Relation& rel, bool back) {
    bool changed = false;
    for (StateId s = 0; s < l.num_states(); ++s) {
        for (StateId t = 0; t < r.num_states(); ++t) {
            if (!rel.contains(s, t)) continue;
            bool ok = true;
            for (ActionId a = 0; ok && a < l.alphabet().size(); ++a) {
                for (StateId sp : l.successors(s, a)) {
                    bool matched = false;
                    for (StateId tp : r.successors(t, a))
                        if (rel.contains(sp, tp)) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
                if (!ok || !back) continue;
                for (StateId tp : r.successors(t, a)) {
                    bool matched = false;
                    for (StateId sp : l.successors(s, a))
                        if (rel.contains(sp, tp)) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) {
                rel.erase(s, t);
                changed = true;
            }
        }
    }
    return changed;
}

inline std::pair<Lts, Lts> aligned(const Lts& l, const Lts& r) {
    if (l.alphabet() == r.alphabet()) return {l, r};
    const Alphabet u = union_alphabet(l.alphabet(), r.alphabet());
    return {reinterned(l, u), reinterned(r, u)};
}

} // namespace detail

/// Largest bisimulation between states of `l` and states of `r`, as the
/// greatest fixpoint of the forth/back refinement operator. The two systems
/// may be the same object.
inline Relation bisimilarity(const Lts& l_in, const Lts& r_in) {
    auto [l, r] = detail::aligned(l_in, r_in);
    Relation rel(l.num_states(), r.num_states(), true);
    while (detail::refine_pass(l, r, rel, /*back=*/true)) {
    }
    return rel;
}

/// Largest simulation: (s, t) in the result means t simulates s.
inline Relation simulation_preorder(const Lts& l_in, const Lts& r_in) {
    auto [l, r] = detail::aligned(l_in, r_in);
    Relation rel(l.num_states(), r.num_states(), true);
    while (detail::refine_pass(l, r, rel, /*back=*/false)) {
    }
    return rel;
}

/// Stable partition of one system's states under bisimilarity, computed by
/// signature-based splitting. Returns one block id per state; ids are dense
/// and assigned in order of first occurrence.
inline std::vector<int> bisimulation_partition(const Lts& lts) {
    const std::size_t n = lts.num_states();
    std::vector<int> block(n, 0);
    std::size_t num_blocks = n == 0 ? 0 : 1;
    for (;;) {
        using Signature = std::vector<std::pair<ActionId, int>>;
        std::map<std::pair<int, Signature>, int> ids;
        std::vector<int> next(n);
        for (StateId s = 0; s < n; ++s) {
            Signature sig;
            for (ActionId a = 0; a < lts.alphabet().size(); ++a)
                for (StateId t : lts.successors(s, a)) sig.emplace_back(a, block[t]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto key = std::make_pair(block[s], std::move(sig));
            auto [it, inserted] = ids.emplace(std::move(key), static_cast<int>(ids.size()));
            next[s] = it->second;
        }
        if (ids.size() == num_blocks) return next;
        num_blocks = ids.size();
        block = std::move(next);
    }
}

/// Partition-refinement route to the same relation as bisimilarity():
/// refine the disjoint union, then read off cross pairs in equal blocks.
inline Relation bisimilarity_pr(const Lts& l, const Lts& r) {
    auto [united, offset] = disjoint_union(l, r);
    const std::vector<int> block = bisimulation_partition(united);
    Relation rel(l.num_states(), r.num_states());
    for (StateId s = 0; s < l.num_states(); ++s)
        for (StateId t = 0; t < r.num_states(); ++t)
            if (block[s] == block[t + offset]) rel.insert(s, t);
    return rel;
}

/// Bisimulation quotient restricted to the part reachable from `root`.
/// Block numbering follows first reachable occurrence, so the result is
/// deterministic.
inline Process quotient_reachable(const Lts& lts, StateId root) {
    const std::vector<int> block = bisimulation_partition(lts);
    const std::vector<StateId> reach = lts.reachable(root);

    std::map<int, StateId> block_to_state;
    std::vector<std::string> labels;
    // reach is sorted by id; visit root first so it becomes state 0.
    std::vector<StateId> order{root};
    for (StateId s : reach)
        if (s != root) order.push_back(s);
    for (StateId s : order) {
        if (block_to_state.emplace(block[s], static_cast<StateId>(labels.size())).second)
            labels.push_back(lts.label(s));
    }
    std::vector<Transition> ts;
    for (StateId s : order) {
        for (ActionId a = 0; a < lts.alphabet().size(); ++a)
            for (StateId t : lts.successors(s, a))
                ts.push_back({block_to_state.at(block[s]), a, block_to_state.at(block[t])});
    }
    return {Lts(lts.alphabet(), std::move(labels), std::move(ts)), block_to_state.at(block[root])};
}

namespace detail {

/// Stratified approximants R_0 (full) down to the stable fixpoint, with the
/// first level at which each pair is refuted.
struct Approximants {
    std::vector<Relation> levels; // levels[k] = R_k
    // first_refuted(s, t) = min k with (s, t) not in R_k, or -1 if related.
    int first_refuted(StateId s, StateId t) const {
        for (std::size_t k = 0; k < levels.size(); ++k)
            if (!levels[k].contains(s, t)) return static_cast<int>(k);
        return -1;
    }
};

inline Approximants approximants(const Lts& l, const Lts& r, bool back) {
    Approximants out;
    out.levels.emplace_back(l.num_states(), r.num_states(), true);
    for (;;) {
        Relation next = out.levels.back();
        // Refine against the previous level, not chaotically, to get the
        // exact stratification.
        Relation prev = out.levels.back();
        bool changed = false;
        for (StateId s = 0; s < l.num_states(); ++s)
            for (StateId t = 0; t < r.num_states(); ++t) {
                if (!prev.contains(s, t)) continue;
                bool ok = true;
                for (ActionId a = 0; ok && a < l.alphabet().size(); ++a) {
                    for (StateId sp : l.successors(s, a)) {
                        bool matched = false;
                        for (StateId tp : r.successors(t, a))
                            if (prev.contains(sp, tp)) {
                                matched = true;
                                break;
                            }
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok || !back) continue;
                    for (StateId tp : r.successors(t, a)) {
                        bool matched = false;
                        for (StateId sp : l.successors(s, a))
                            if (prev.contains(sp, tp)) {
                                matched = true;
                                break;
                            }
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) {
                    next.erase(s, t);
                    changed = true;
                }
            }
        if (!changed) return out;
        out.levels.push_back(std::move(next));
    }
}

struct DistinguishContext {
    const Lts& l;
    const Lts& r;
    Approximants approx;
    bool back; // back moves allowed (bisimulation game) or forth-only
    std::map<std::pair<bool, std::pair<StateId, StateId>>, Formula> memo;

    int level(bool swapped, StateId s, StateId t) const {
        return swapped ? approx.first_refuted(t, s) : approx.first_refuted(s, t);
    }

    const Lts& left(bool swapped) const { return swapped ? r : l; }
    const Lts& right(bool swapped) const { return swapped ? l : r; }

    /// A formula satisfied by s (in left(swapped)) and refuted by t (in
    /// right(swapped)) of minimal modal depth, smallest under the formula
    /// order among same-depth candidates.
    Formula build(bool swapped, StateId s, StateId t) {
        const auto key = std::make_pair(swapped, std::make_pair(s, t));
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const int k = level(swapped, s, t);
        if (k < 0) throw ContractError("no distinguishing formula: states are related");

        const Lts& L = left(swapped);
        const Lts& R = right(swapped);
        std::optional<Formula> best;
        auto consider = [&](Formula f) {
            if (!best || f.compare(*best) < 0) best = std::move(f);
        };

        for (ActionId a = 0; a < L.alphabet().size(); ++a) {
            const std::string& name = L.alphabet().name(a);
            // Challenge on the s side: some s -a-> s' that no t response
            // survives at the previous level.
            for (StateId sp : L.successors(s, a)) {
                bool all_refuted = true;
                for (StateId tp : R.successors(t, a))
                    if (level(swapped, sp, tp) < 0 || level(swapped, sp, tp) >= k) {
                        all_refuted = false;
                        break;
                    }
                if (!all_refuted) continue;
                std::vector<Formula> parts;
                for (StateId tp : R.successors(t, a)) parts.push_back(build(swapped, sp, tp));
                consider(Formula::diamond(name, Formula::conj(std::move(parts))));
            }
            if (!back) continue;
            // Challenge on the t side; the formula holds at t, so negate.
            for (StateId tp : R.successors(t, a)) {
                bool all_refuted = true;
                for (StateId sp : L.successors(s, a))
                    if (level(swapped, sp, tp) < 0 || level(swapped, sp, tp) >= k) {
                        all_refuted = false;
                        break;
                    }
                if (!all_refuted) continue;
                std::vector<Formula> parts;
                for (StateId sp : L.successors(s, a))
                    parts.push_back(build(!swapped, tp, sp));
                consider(Formula::neg(
                    Formula::diamond(name, Formula::conj(std::move(parts)))));
            }
        }
        if (!best)
            throw ContractError("refuted pair without a witnessing challenge");
        memo.emplace(key, *best);
        return *best;
    }
};

} // namespace detail

/// A formula satisfied by s but not by t, for a non-bisimilar pair. Minimal
/// modal depth; deterministic tie-break (depth, then size, then structure).
inline Formula distinguish_bisim(const Lts& l_in, StateId s, const Lts& r_in, StateId t) {
    auto [l, r] = detail::aligned(l_in, r_in);
    detail::DistinguishContext ctx{l, r, detail::approximants(l, r, true), true, {}};
    return ctx.build(false, s, t);
}

/// A positive formula satisfied by s but not by t, for a pair outside the
/// simulation preorder.
inline Formula distinguish_sim(const Lts& l_in, StateId s, const Lts& r_in, StateId t) {
    auto [l, r] = detail::aligned(l_in, r_in);
    detail::DistinguishContext ctx{l, r, detail::approximants(l, r, false), false, {}};
    Formula f = ctx.build(false, s, t);
    if (!f.is_positive()) throw ContractError("simulation witness must be positive");
    return f;
}

/// Depth-stratified bisimulation approximant: the pairs surviving k rounds
/// of forth/back refinement from the full relation.
inline Relation bisim_approximant(const Lts& l_in, const Lts& r_in, int k) {
    auto [l, r] = detail::aligned(l_in, r_in);
    auto approx = detail::approximants(l, r, true);
    const std::size_t i = std::min<std::size_t>(k, approx.levels.size() - 1);
    return approx.levels[i];
}

} // namespace jibisim
