#pragma once

#include "jibisim/equivalence.hpp"
#include "jibisim/error.hpp"
#include "jibisim/interaction.hpp"
#include "jibisim/lts.hpp"
#include "jibisim/relation.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace jibisim {

/// One relation over process pairs per environment state. The verdict of a
/// family-based check is membership of the queried pair in the component of
/// the queried environment state.
struct IndexedFamily {
    std::vector<Relation> components; // indexed by environment StateId

    const Relation& at(StateId env_state) const { return components.at(env_state); }
};

/// One joint step of an interaction run: the environment transition that
/// was consumed and the matching process transitions on both sides.
struct TraceStep {
    Transition env;
    Transition left;
    Transition right;
};

/// The unmatched challenge ending a mismatch explanation: after the
/// environment transition, the stated side can take `challenge` but the
/// other side has no counterpart that the family condition accepts.
struct MismatchChallenge {
    Transition env;
    bool from_left; // true: the left process issues the challenge
    Transition challenge;
};

struct MismatchTrace {
    std::vector<TraceStep> steps;
    MismatchChallenge challenge;
};

struct Verdict {
    bool related = false;
    std::optional<Formula> formula_witness;
    std::optional<MismatchTrace> trace_witness;
};

enum class ParamMode { Bisim, Sim };

namespace detail {

/// Inputs of a parameterized check after alphabet alignment: one process
/// system containing both compared states, and one environment system.
struct AlignedTriple {
    Lts proc;
    StateId p, q;
    Lts env;
    StateId e;
};

inline AlignedTriple align_triple(const Lts& proc_in, StateId p, StateId q, const Lts& env_in,
                                  StateId e) {
    const Alphabet shared = union_alphabet(proc_in.alphabet(), env_in.alphabet());
    return {reinterned(proc_in, shared), p, q, reinterned(env_in, shared), e};
}

/// Greatest fixpoint of the family refinement operator: start from the full
/// family and delete (x, y) from the component of f whenever some
/// environment step f -a-> f' enables a challenge on one side that the
/// other side cannot match into the component of f'. Deletion scans in
/// (environment index, pair index) order.
inline IndexedFamily family_fixpoint(const Lts& proc, const Lts& env, ParamMode mode) {
    const std::size_t n = proc.num_states();
    IndexedFamily family;
    family.components.assign(env.num_states(), Relation(n, n, true));

    const bool back = mode == ParamMode::Bisim;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId f = 0; f < env.num_states(); ++f) {
            Relation& component = family.components[f];
            for (StateId x = 0; x < n; ++x) {
                for (StateId y = 0; y < n; ++y) {
                    if (!component.contains(x, y)) continue;
                    bool ok = true;
                    for (ActionId a = 0; ok && a < env.alphabet().size(); ++a) {
                        for (StateId fp : env.successors(f, a)) {
                            const Relation& next = family.components[fp];
                            for (StateId xp : proc.successors(x, a)) {
                                bool matched = false;
                                for (StateId yp : proc.successors(y, a))
                                    if (next.contains(xp, yp)) {
                                        matched = true;
                                        break;
                                    }
                                if (!matched) {
                                    ok = false;
                                    break;
                                }
                            }
                            if (!ok) break;
                            if (!back) continue;
                            for (StateId yp : proc.successors(y, a)) {
                                bool matched = false;
                                for (StateId xp : proc.successors(x, a))
                                    if (next.contains(xp, yp)) {
                                        matched = true;
                                        break;
                                    }
                                if (!matched) {
                                    ok = false;
                                    break;
                                }
                            }
                            if (!ok) break;
                        }
                    }
                    if (!ok) {
                        component.erase(x, y);
                        changed = true;
                    }
                }
            }
        }
    }
    return family;
}

/// Refutation depths for all triples outside the family: depth 1 means a
/// challenge exists whose responder side has no move at all; depth d+1
/// means a challenge exists all of whose responses are refuted within
/// depth d. Every triple outside the greatest fixpoint gets a finite depth.
class RefutationDepths {
public:
    RefutationDepths(const Lts& proc, const Lts& env, const IndexedFamily& family,
                     ParamMode mode)
        : proc_(proc), env_(env), family_(family), mode_(mode),
          depth_(env.num_states(),
                 std::vector<int>(proc.num_states() * proc.num_states(), kUnset)) {
        bool changed = true;
        for (int round = 1; changed; ++round) {
            changed = false;
            for (StateId f = 0; f < env_.num_states(); ++f)
                for (StateId x = 0; x < proc_.num_states(); ++x)
                    for (StateId y = 0; y < proc_.num_states(); ++y) {
                        if (family_.components[f].contains(x, y)) continue;
                        if (depth(f, x, y) != kUnset) continue;
                        if (refutable_within(f, x, y, round - 1)) {
                            set_depth(f, x, y, round);
                            changed = true;
                        }
                    }
        }
    }

    static constexpr int kUnset = std::numeric_limits<int>::max();

    int depth(StateId f, StateId x, StateId y) const {
        return depth_[f][static_cast<std::size_t>(x) * proc_.num_states() + y];
    }

    const Lts& proc() const { return proc_; }
    const Lts& env() const { return env_; }
    ParamMode mode() const { return mode_; }

    /// Challenges of (f, x, y) valid against depths <= bound. Returns the
    /// first one in (env transition, side, challenger move) order, together
    /// with the responder move of smallest depth (none when terminal).
    struct Witness {
        Transition env;
        bool from_left;
        Transition challenge;
        std::optional<TraceStep> step; // filled when a response exists
        StateId next_env = 0;
        StateId next_x = 0, next_y = 0;
    };

    std::optional<Witness> find_witness(StateId f, StateId x, StateId y, int bound) const {
        for (ActionId a = 0; a < env_.alphabet().size(); ++a) {
            for (StateId fp : env_.successors(f, a)) {
                for (int side = 0; side < (mode_ == ParamMode::Bisim ? 2 : 1); ++side) {
                    const bool from_left = side == 0;
                    const StateId challenger = from_left ? x : y;
                    const StateId responder = from_left ? y : x;
                    for (StateId cp : proc_.successors(challenger, a)) {
                        bool valid = true;
                        std::optional<StateId> best_response;
                        int best_depth = kUnset;
                        for (StateId rp : proc_.successors(responder, a)) {
                            const StateId xp = from_left ? cp : rp;
                            const StateId yp = from_left ? rp : cp;
                            const int d = depth(fp, xp, yp);
                            if (family_.components[fp].contains(xp, yp) || d == kUnset ||
                                d > bound) {
                                valid = false;
                                break;
                            }
                            if (d < best_depth) {
                                best_depth = d;
                                best_response = rp;
                            }
                        }
                        if (!valid) continue;
                        Witness w;
                        w.env = {f, a, fp};
                        w.from_left = from_left;
                        w.challenge = {challenger, a, cp};
                        if (best_response) {
                            const StateId rp = *best_response;
                            const StateId xp = from_left ? cp : rp;
                            const StateId yp = from_left ? rp : cp;
                            w.step = TraceStep{{f, a, fp},
                                               {x, a, xp},
                                               {y, a, yp}};
                            w.next_env = fp;
                            w.next_x = xp;
                            w.next_y = yp;
                        }
                        return w;
                    }
                }
            }
        }
        return std::nullopt;
    }

private:
    bool refutable_within(StateId f, StateId x, StateId y, int bound) const {
        return find_witness(f, x, y, bound).has_value();
    }

    void set_depth(StateId f, StateId x, StateId y, int d) {
        depth_[f][static_cast<std::size_t>(x) * proc_.num_states() + y] = d;
    }

    const Lts& proc_;
    const Lts& env_;
    const IndexedFamily& family_;
    ParamMode mode_;
    std::vector<std::vector<int>> depth_;
};

} // namespace detail

/// Shortest-first replayable explanation of a failed parameterized check:
/// joint steps that keep the triple refuted, ending in a challenge without
/// an acceptable counterpart.
inline MismatchTrace explain_param_mismatch(const Lts& proc_in, StateId p, StateId q,
                                            const Lts& env_in, StateId e, ParamMode mode) {
    const auto t = detail::align_triple(proc_in, p, q, env_in, e);
    const IndexedFamily family = detail::family_fixpoint(t.proc, t.env, mode);
    if (family.components[t.e].contains(t.p, t.q))
        throw ContractError("explain_param_mismatch called on a related triple");

    const detail::RefutationDepths depths(t.proc, t.env, family, mode);
    MismatchTrace trace;
    StateId f = t.e, x = t.p, y = t.q;
    for (;;) {
        const int d = depths.depth(f, x, y);
        if (d == detail::RefutationDepths::kUnset)
            throw ContractError("refuted triple without finite refutation depth");
        auto w = depths.find_witness(f, x, y, d - 1);
        if (!w) throw ContractError("refuted triple without witness");
        if (!w->step) {
            trace.challenge = {w->env, w->from_left, w->challenge};
            return trace;
        }
        trace.steps.push_back(*w->step);
        f = w->next_env;
        x = w->next_x;
        y = w->next_y;
    }
}

struct ParamResult {
    Verdict verdict;
    IndexedFamily family;
};

/// Larsen-style parameterized bisimilarity by the direct family fixpoint.
inline ParamResult param_bisim_direct(const Lts& proc, StateId p, StateId q, const Lts& env,
                                      StateId e, bool explain = false) {
    const auto t = detail::align_triple(proc, p, q, env, e);
    ParamResult out{{}, detail::family_fixpoint(t.proc, t.env, ParamMode::Bisim)};
    out.verdict.related = out.family.components[t.e].contains(t.p, t.q);
    if (!out.verdict.related && explain)
        out.verdict.trace_witness = explain_param_mismatch(proc, p, q, env, e, ParamMode::Bisim);
    return out;
}

/// Parameterized simulatability (forth conditions only) by the family
/// fixpoint.
inline ParamResult param_sim_direct(const Lts& proc, StateId p, StateId q, const Lts& env,
                                    StateId e, bool explain = false) {
    const auto t = detail::align_triple(proc, p, q, env, e);
    ParamResult out{{}, detail::family_fixpoint(t.proc, t.env, ParamMode::Sim)};
    out.verdict.related = out.family.components[t.e].contains(t.p, t.q);
    if (!out.verdict.related && explain)
        out.verdict.trace_witness = explain_param_mismatch(proc, p, q, env, e, ParamMode::Sim);
    return out;
}

/// Parameterized bisimilarity as bisimilarity of right-determinized joins;
/// agrees with param_bisim_direct on every input.
inline Verdict param_bisim_via_joindot(const Lts& proc, StateId p, StateId q, const Lts& env,
                                       StateId e, bool explain = false,
                                       std::size_t budget = kDefaultStateBudget) {
    const JoindotProduct prod = joindot_product(proc, {p, q}, env, e, budget);
    const Relation bisim = bisimilarity(prod.lts, prod.lts);
    Verdict v;
    v.related = bisim.contains(prod.roots[0], prod.roots[1]);
    if (!v.related && explain)
        v.formula_witness = distinguish_bisim(prod.lts, prod.roots[0], prod.lts, prod.roots[1]);
    return v;
}

/// Parameterized simulatability as simulatability of right-determinized
/// joins; agrees with param_sim_direct on every input.
inline Verdict param_sim_via_joindot(const Lts& proc, StateId p, StateId q, const Lts& env,
                                     StateId e, bool explain = false,
                                     std::size_t budget = kDefaultStateBudget) {
    const JoindotProduct prod = joindot_product(proc, {p, q}, env, e, budget);
    const Relation sim = simulation_preorder(prod.lts, prod.lts);
    Verdict v;
    v.related = sim.contains(prod.roots[0], prod.roots[1]);
    if (!v.related && explain)
        v.formula_witness = distinguish_sim(prod.lts, prod.roots[0], prod.lts, prod.roots[1]);
    return v;
}

/// Bisimilarity of the plain join interactions with a common environment.
inline Verdict ji_param_bisim(const Lts& proc, StateId p, StateId q, const Lts& env, StateId e,
                              bool explain = false, std::size_t budget = kDefaultStateBudget) {
    const JoinProduct prod = join_product(proc, {p, q}, env, e, budget);
    const Relation bisim = bisimilarity(prod.lts, prod.lts);
    Verdict v;
    v.related = bisim.contains(prod.roots[0], prod.roots[1]);
    if (!v.related && explain)
        v.formula_witness = distinguish_bisim(prod.lts, prod.roots[0], prod.lts, prod.roots[1]);
    return v;
}

/// Simulatability of the plain join interactions with a common environment.
inline Verdict ji_param_sim(const Lts& proc, StateId p, StateId q, const Lts& env, StateId e,
                            bool explain = false, std::size_t budget = kDefaultStateBudget) {
    const JoinProduct prod = join_product(proc, {p, q}, env, e, budget);
    const Relation sim = simulation_preorder(prod.lts, prod.lts);
    Verdict v;
    v.related = sim.contains(prod.roots[0], prod.roots[1]);
    if (!v.related && explain)
        v.formula_witness = distinguish_sim(prod.lts, prod.roots[0], prod.lts, prod.roots[1]);
    return v;
}

/// Simulation equivalence of the joins: simulatability in both directions.
inline Verdict ji_param_sim_equiv(const Lts& proc, StateId p, StateId q, const Lts& env,
                                  StateId e, bool explain = false,
                                  std::size_t budget = kDefaultStateBudget) {
    Verdict fwd = ji_param_sim(proc, p, q, env, e, explain, budget);
    if (!fwd.related) return fwd;
    return ji_param_sim(proc, q, p, env, e, explain, budget);
}

// Process-level conveniences: the two compared processes may live in
// different systems; they are placed side by side first.

namespace detail {

struct UnitedTriple {
    Lts proc;
    StateId p, q;
};

inline UnitedTriple unite(const Process& p, const Process& q) {
    auto [united, offset] = disjoint_union(p.lts, q.lts);
    return {std::move(united), p.root, static_cast<StateId>(q.root + offset)};
}

} // namespace detail

inline ParamResult param_bisim_direct(const Process& p, const Process& env, const Process& q,
                                      bool explain = false) {
    const auto u = detail::unite(p, q);
    return param_bisim_direct(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline ParamResult param_sim_direct(const Process& p, const Process& env, const Process& q,
                                    bool explain = false) {
    const auto u = detail::unite(p, q);
    return param_sim_direct(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline Verdict param_bisim_via_joindot(const Process& p, const Process& env, const Process& q,
                                       bool explain = false) {
    const auto u = detail::unite(p, q);
    return param_bisim_via_joindot(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline Verdict param_sim_via_joindot(const Process& p, const Process& env, const Process& q,
                                     bool explain = false) {
    const auto u = detail::unite(p, q);
    return param_sim_via_joindot(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline Verdict ji_param_bisim(const Process& p, const Process& env, const Process& q,
                              bool explain = false) {
    const auto u = detail::unite(p, q);
    return ji_param_bisim(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline Verdict ji_param_sim(const Process& p, const Process& env, const Process& q,
                            bool explain = false) {
    const auto u = detail::unite(p, q);
    return ji_param_sim(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline Verdict ji_param_sim_equiv(const Process& p, const Process& env, const Process& q,
                                  bool explain = false) {
    const auto u = detail::unite(p, q);
    return ji_param_sim_equiv(u.proc, u.p, u.q, env.lts, env.root, explain);
}

inline MismatchTrace explain_param_mismatch(const Process& p, const Process& env,
                                            const Process& q, ParamMode mode) {
    const auto u = detail::unite(p, q);
    return explain_param_mismatch(u.proc, u.p, u.q, env.lts, env.root, mode);
}

/// Replays a mismatch trace against its inputs: every recorded transition
/// must exist, every intermediate triple must stay refuted, and the final
/// challenge must have no counterpart landing in the family component.
inline bool validate_mismatch_trace(const Lts& proc_in, StateId p, StateId q, const Lts& env_in,
                                    StateId e, ParamMode mode, const MismatchTrace& trace) {
    const auto t = detail::align_triple(proc_in, p, q, env_in, e);
    const IndexedFamily family = detail::family_fixpoint(t.proc, t.env, mode);

    auto has_transition = [](const Lts& lts, const Transition& tr) {
        auto succ = lts.successors(tr.src, tr.action);
        return std::find(succ.begin(), succ.end(), tr.tgt) != succ.end();
    };

    StateId f = t.e, x = t.p, y = t.q;
    if (family.components[f].contains(x, y)) return false;
    for (const TraceStep& step : trace.steps) {
        if (step.env.src != f || step.left.src != x || step.right.src != y) return false;
        if (step.env.action != step.left.action || step.env.action != step.right.action)
            return false;
        if (!has_transition(t.env, step.env) || !has_transition(t.proc, step.left) ||
            !has_transition(t.proc, step.right))
            return false;
        f = step.env.tgt;
        x = step.left.tgt;
        y = step.right.tgt;
        if (family.components[f].contains(x, y)) return false;
    }

    const MismatchChallenge& ch = trace.challenge;
    if (ch.env.src != f || !has_transition(t.env, ch.env)) return false;
    if (mode == ParamMode::Sim && !ch.from_left) return false;
    const StateId challenger = ch.from_left ? x : y;
    const StateId responder = ch.from_left ? y : x;
    if (ch.challenge.src != challenger || ch.challenge.action != ch.env.action) return false;
    if (!has_transition(t.proc, ch.challenge)) return false;
    for (StateId rp : t.proc.successors(responder, ch.env.action)) {
        const StateId xp = ch.from_left ? ch.challenge.tgt : rp;
        const StateId yp = ch.from_left ? rp : ch.challenge.tgt;
        if (family.components[ch.env.tgt].contains(xp, yp)) return false;
    }
    return true;
}

inline bool validate_mismatch_trace(const Process& p, const Process& env, const Process& q,
                                    ParamMode mode, const MismatchTrace& trace) {
    const auto u = detail::unite(p, q);
    return validate_mismatch_trace(u.proc, u.p, u.q, env.lts, env.root, mode, trace);
}

} // namespace jibisim
