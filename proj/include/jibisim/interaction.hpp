#pragma once

#include "jibisim/error.hpp"
#include "jibisim/lts.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jibisim {

/// Label of a right-determinized product transition: the shared action plus
/// the environment state it moves to.
struct PairLabel {
    ActionId action;    // id in the shared plain alphabet
    StateId env_target; // state of the environment system

    friend auto operator<=>(const PairLabel&, const PairLabel&) = default;
};

/// A product system built from requested roots; keeps the (process state,
/// environment state) decomposition of every product state.
struct JoinProduct {
    Lts lts;
    std::vector<StateId> roots; // one per requested process root
    std::vector<std::pair<StateId, StateId>> components;
};

/// Like JoinProduct, but transitions carry PairLabels. The product's
/// alphabet is local: one interned name "a@envLabel" per label that occurs.
struct JoindotProduct {
    Lts lts;
    std::vector<StateId> roots;
    std::vector<std::pair<StateId, StateId>> components;
    std::vector<PairLabel> labels; // product action id -> pair label
    Alphabet plain_alphabet;       // what PairLabel::action refers to
};

namespace detail {

inline std::string product_label(const std::string& p, const std::string& e) {
    return p + " & " + e;
}

template <typename EmitTransition>
inline std::vector<std::pair<StateId, StateId>>
explore_product(const Lts& proc, const std::vector<StateId>& proc_roots, const Lts& env,
                StateId env_root, std::size_t budget, std::vector<StateId>& roots_out,
                std::vector<std::string>& labels_out, EmitTransition&& emit) {
    std::map<std::pair<StateId, StateId>, StateId> index;
    std::vector<std::pair<StateId, StateId>> states;
    std::vector<std::pair<StateId, StateId>> queue;

    auto intern = [&](StateId p, StateId e) {
        auto key = std::make_pair(p, e);
        if (auto it = index.find(key); it != index.end()) return it->second;
        if (states.size() >= budget)
            throw BudgetError("state budget exceeded while building product (budget " +
                              std::to_string(budget) + ")");
        const auto id = static_cast<StateId>(states.size());
        index.emplace(key, id);
        states.push_back(key);
        labels_out.push_back(product_label(proc.label(p), env.label(e)));
        queue.push_back(key);
        return id;
    };

    for (StateId r : proc_roots) roots_out.push_back(intern(r, env_root));

    for (std::size_t next = 0; next < queue.size(); ++next) {
        const auto [p, e] = queue[next];
        const StateId src = index.at({p, e});
        for (ActionId a = 0; a < proc.alphabet().size(); ++a) {
            for (StateId pp : proc.successors(p, a))
                for (StateId ep : env.successors(e, a))
                    emit(src, a, ep, intern(pp, ep));
        }
    }
    return states;
}

} // namespace detail

/// Join interaction: the product has an a-transition iff both components do,
/// and both move. Only the part reachable from the requested roots is built.
inline JoinProduct join_product(const Lts& proc_in, const std::vector<StateId>& proc_roots,
                                const Lts& env_in, StateId env_root,
                                std::size_t budget = kDefaultStateBudget) {
    const Alphabet shared = union_alphabet(proc_in.alphabet(), env_in.alphabet());
    const Lts proc = reinterned(proc_in, shared);
    const Lts env = reinterned(env_in, shared);

    std::vector<StateId> roots;
    std::vector<std::string> labels;
    std::vector<Transition> transitions;
    auto components = detail::explore_product(
        proc, proc_roots, env, env_root, budget, roots, labels,
        [&](StateId src, ActionId a, StateId, StateId tgt) {
            transitions.push_back({src, a, tgt});
        });
    return {Lts(shared, std::move(labels), std::move(transitions), budget),
            std::move(roots), std::move(components)};
}

inline JoinProduct join_product(const Process& proc, const Process& env,
                                std::size_t budget = kDefaultStateBudget) {
    return join_product(proc.lts, {proc.root}, env.lts, env.root, budget);
}

/// Right-determinizing join interaction: transitions are labeled with the
/// pair of the shared action and the environment's target state, so
/// distinct environment branches stay visible.
inline JoindotProduct joindot_product(const Lts& proc_in, const std::vector<StateId>& proc_roots,
                                      const Lts& env_in, StateId env_root,
                                      std::size_t budget = kDefaultStateBudget) {
    const Alphabet shared = union_alphabet(proc_in.alphabet(), env_in.alphabet());
    const Lts proc = reinterned(proc_in, shared);
    const Lts env = reinterned(env_in, shared);

    Alphabet product_alphabet;
    std::vector<PairLabel> labels;
    std::map<PairLabel, ActionId> label_index;
    auto intern_label = [&](ActionId a, StateId ep) {
        const PairLabel pl{a, ep};
        if (auto it = label_index.find(pl); it != label_index.end()) return it->second;
        std::string name = shared.name(a) + "@" + env.label(ep);
        if (product_alphabet.find(name))
            name += "#" + std::to_string(ep); // display labels may collide
        const ActionId id = product_alphabet.intern(name);
        label_index.emplace(pl, id);
        labels.push_back(pl);
        return id;
    };

    std::vector<StateId> roots;
    std::vector<std::string> state_labels;
    std::vector<Transition> transitions;
    auto components = detail::explore_product(
        proc, proc_roots, env, env_root, budget, roots, state_labels,
        [&](StateId src, ActionId a, StateId ep, StateId tgt) {
            transitions.push_back({src, intern_label(a, ep), tgt});
        });
    return {Lts(product_alphabet, std::move(state_labels), std::move(transitions), budget),
            std::move(roots), std::move(components), std::move(labels), shared};
}

inline JoindotProduct joindot_product(const Process& proc, const Process& env,
                                      std::size_t budget = kDefaultStateBudget) {
    return joindot_product(proc.lts, {proc.root}, env.lts, env.root, budget);
}

/// The one-state process that permits every action forever.
inline Process universal_process(const Alphabet& alphabet) {
    if (alphabet.size() == 0)
        throw InputError("universal process needs a non-empty alphabet");
    std::vector<Transition> ts;
    for (ActionId a = 0; a < alphabet.size(); ++a) ts.push_back({0, a, 0});
    return {Lts(alphabet, {"U"}, std::move(ts)), 0};
}

} // namespace jibisim
