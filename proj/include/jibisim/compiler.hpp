#pragma once

#include "jibisim/equivalence.hpp"
#include "jibisim/error.hpp"
#include "jibisim/interaction.hpp"
#include "jibisim/lts.hpp"
#include "jibisim/term.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace jibisim {

namespace detail {

inline void collect_actions(const ProcessTerm& t, std::vector<std::string>& out,
                            std::set<std::string>& seen) {
    switch (t.kind()) {
    case ProcessTerm::Kind::Nil:
    case ProcessTerm::Kind::Ref:
        return;
    case ProcessTerm::Kind::Prefix:
        if (seen.insert(t.action()).second) out.push_back(t.action());
        collect_actions(t.body(), out, seen);
        return;
    case ProcessTerm::Kind::Sum:
    case ProcessTerm::Kind::Join:
        collect_actions(t.left(), out, seen);
        collect_actions(t.right(), out, seen);
        return;
    }
}

/// Structural-operational-semantics engine shared by the compile entry
/// points. States are terms after top-level definition unfolding, identified
/// by their injective key, so structurally identical unfoldings share a
/// state.
class TermCompiler {
public:
    TermCompiler(const DefinitionSet& defs, Alphabet alphabet, std::size_t budget)
        : defs_(defs), alphabet_(std::move(alphabet)), budget_(budget) {
        if (auto cyclic = find_unguarded_cycle(defs_))
            throw InputError("unguarded recursion through '" + *cyclic + "'");
    }

    StateId add_root(const ProcessTerm& t) {
        std::set<std::string> seen(alphabet_.names().begin(), alphabet_.names().end());
        std::vector<std::string> fresh;
        collect_actions(t, fresh, seen);
        for (const auto& [name, body] : defs_.entries()) collect_actions(body, fresh, seen);
        for (const auto& a : fresh) alphabet_.intern(a);
        return intern(resolve(t));
    }

    Lts finish() {
        for (std::size_t next = 0; next < states_.size(); ++next) {
            const ProcessTerm t = states_[next]; // copy: states_ may grow
            for (const auto& [action, target] : derivatives(t)) {
                const ActionId a = *alphabet_.find(action);
                transitions_.push_back({static_cast<StateId>(next), a, intern(target)});
            }
        }
        std::vector<std::string> labels;
        labels.reserve(states_.size());
        for (const auto& t : states_) labels.push_back(t.to_string());
        return Lts(alphabet_, std::move(labels), std::move(transitions_), budget_);
    }

private:
    ProcessTerm resolve(ProcessTerm t) const {
        while (t.kind() == ProcessTerm::Kind::Ref) {
            const ProcessTerm* body = defs_.find(t.name());
            if (!body) throw InputError("unbound name '" + t.name() + "'");
            t = *body;
        }
        return t;
    }

    StateId intern(const ProcessTerm& resolved) {
        const std::string key = resolved.key();
        if (auto it = index_.find(key); it != index_.end()) return it->second;
        if (states_.size() >= budget_)
            throw BudgetError("state budget exceeded while compiling term (budget " +
                              std::to_string(budget_) + ")");
        const auto id = static_cast<StateId>(states_.size());
        index_.emplace(key, id);
        states_.push_back(resolved);
        return id;
    }

    /// The outgoing moves of a term: distinct (action, resolved target)
    /// pairs, sorted for reproducible state numbering.
    const std::vector<std::pair<std::string, ProcessTerm>>& derivatives(const ProcessTerm& t) {
        const std::string key = t.key();
        if (auto it = deriv_memo_.find(key); it != deriv_memo_.end()) return it->second;

        std::vector<std::pair<std::string, ProcessTerm>> out;
        switch (t.kind()) {
        case ProcessTerm::Kind::Nil:
            break;
        case ProcessTerm::Kind::Prefix:
            out.emplace_back(t.action(), resolve(t.body()));
            break;
        case ProcessTerm::Kind::Sum: {
            for (const auto& d : derivatives(resolve(t.left()))) out.push_back(d);
            for (const auto& d : derivatives(resolve(t.right()))) out.push_back(d);
            break;
        }
        case ProcessTerm::Kind::Join: {
            const auto ls = derivatives(resolve(t.left()));
            const auto rs = derivatives(resolve(t.right()));
            for (const auto& [la, lt] : ls)
                for (const auto& [ra, rt] : rs)
                    if (la == ra) out.emplace_back(la, ProcessTerm::join(lt, rt));
            break;
        }
        case ProcessTerm::Kind::Ref:
            out = derivatives(resolve(t));
            break;
        }
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second.key() < y.second.key();
        });
        out.erase(std::unique(out.begin(), out.end(),
                              [](const auto& x, const auto& y) {
                                  return x.first == y.first && x.second == y.second;
                              }),
                  out.end());
        return deriv_memo_.emplace(key, std::move(out)).first->second;
    }

    const DefinitionSet& defs_;
    Alphabet alphabet_;
    std::size_t budget_;
    std::map<std::string, StateId> index_;
    std::vector<ProcessTerm> states_;
    std::vector<Transition> transitions_;
    std::map<std::string, std::vector<std::pair<std::string, ProcessTerm>>> deriv_memo_;
};

} // namespace detail

/// Compiles a term to the reachable fragment of its operational semantics.
/// Actions of `base_alphabet` keep their ids; newly discovered actions are
/// appended in first-occurrence order.
inline Process compile(const ProcessTerm& term, const DefinitionSet& defs = {},
                       const Alphabet& base_alphabet = {},
                       std::size_t budget = kDefaultStateBudget) {
    detail::TermCompiler c(defs, base_alphabet, budget);
    const StateId root = c.add_root(term);
    return {c.finish(), root};
}

/// Compiles several terms into one shared system (structurally identical
/// states coincide across the inputs). Returns the system and one root per
/// term.
inline std::pair<Lts, std::vector<StateId>>
compile_batch(const std::vector<ProcessTerm>& terms, const DefinitionSet& defs = {},
              const Alphabet& base_alphabet = {}, std::size_t budget = kDefaultStateBudget) {
    detail::TermCompiler c(defs, base_alphabet, budget);
    std::vector<StateId> roots;
    roots.reserve(terms.size());
    for (const auto& t : terms) roots.push_back(c.add_root(t));
    return {c.finish(), std::move(roots)};
}

/// All canonical terms over 0, prefix and sum with size (one plus the
/// number of action occurrences) at most max_size. Sums are right-nested
/// over a sorted operand multiset, so each associativity/commutativity
/// class appears exactly once. The order is stable across runs.
inline std::vector<ProcessTerm> enumerate_terms(const std::vector<std::string>& actions,
                                                int max_size) {
    if (max_size < 1) throw InputError("max_size must be at least 1");
    const int max_weight = max_size - 1; // action occurrences

    // terms_by_weight[w] = canonical terms with exactly w action occurrences
    std::vector<std::vector<ProcessTerm>> terms_by_weight(max_weight + 1);
    terms_by_weight[0] = {ProcessTerm::nil()};

    // prefixes_by_weight[w] = sorted prefix terms a.t with 1 + weight(t) = w
    std::vector<std::vector<ProcessTerm>> prefixes_by_weight(max_weight + 1);

    for (int w = 1; w <= max_weight; ++w) {
        for (const auto& a : actions)
            for (const auto& t : terms_by_weight[w - 1])
                prefixes_by_weight[w].push_back(ProcessTerm::prefix(a, t));
        std::sort(prefixes_by_weight[w].begin(), prefixes_by_weight[w].end());

        // Non-decreasing multisets of prefixes with total weight w, built
        // over the pools of weight 1..w.
        std::vector<ProcessTerm> chosen;
        std::vector<ProcessTerm>& out = terms_by_weight[w];
        // extend(min_w, min_i, remaining): next pick is from pool min_w at
        // index >= min_i, or any later pool.
        std::function<void(int, std::size_t, int)> extend = [&](int min_w, std::size_t min_i,
                                                                int remaining) {
            if (remaining == 0) {
                if (chosen.empty()) return;
                ProcessTerm t = chosen.back();
                for (auto it = std::next(chosen.rbegin()); it != chosen.rend(); ++it)
                    t = ProcessTerm::sum(*it, std::move(t));
                out.push_back(std::move(t));
                return;
            }
            for (int pw = min_w; pw <= remaining; ++pw) {
                const auto& pool = prefixes_by_weight[pw];
                for (std::size_t i = (pw == min_w ? min_i : 0); i < pool.size(); ++i) {
                    chosen.push_back(pool[i]);
                    extend(pw, i, remaining - pw);
                    chosen.pop_back();
                }
            }
        };
        extend(1, 0, w);
    }

    std::vector<ProcessTerm> result;
    for (const auto& bucket : terms_by_weight)
        result.insert(result.end(), bucket.begin(), bucket.end());
    return result;
}

inline bool roots_bisimilar(const Process& a, const Process& b) {
    return bisimilarity(a.lts, b.lts).contains(a.root, b.root);
}

/// Extends a universe of processes with pairwise join interactions,
/// `rounds` times, deduplicating new members up to bisimilarity. New
/// members are stored as quotients of the reachable product.
inline std::vector<Process> close_under_join(std::vector<Process> universe, int rounds,
                                             std::size_t budget = kDefaultStateBudget) {
    for (int round = 0; round < rounds; ++round) {
        const std::size_t before = universe.size();
        for (std::size_t i = 0; i < before; ++i) {
            for (std::size_t j = i; j < before; ++j) { // join is commutative up to ~
                JoinProduct prod =
                    join_product(universe[i].lts, {universe[i].root}, universe[j].lts,
                                 universe[j].root, budget);
                Process candidate = quotient_reachable(prod.lts, prod.roots[0]);
                bool fresh = true;
                for (const auto& member : universe)
                    if (roots_bisimilar(member, candidate)) {
                        fresh = false;
                        break;
                    }
                if (fresh) universe.push_back(std::move(candidate));
            }
        }
    }
    return universe;
}

} // namespace jibisim
