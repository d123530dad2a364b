#pragma once

#include "jibisim/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace jibisim {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

/// Interned action alphabet. Ids are dense and assigned in insertion order,
/// so two alphabets built from the same name sequence agree on every id.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(const std::vector<std::string>& names) {
        for (const auto& n : names) intern(n);
    }

    ActionId intern(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        const auto id = static_cast<ActionId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    std::optional<ActionId> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(ActionId a) const {
        if (a >= names_.size()) throw InputError("unknown action id " + std::to_string(a));
        return names_[a];
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const Alphabet& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, ActionId> index_;
};

struct Transition {
    StateId src;
    ActionId action;
    StateId tgt;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// A finite labeled transition system. Immutable once built; every query is
/// safe for concurrent readers. Successor sets are materialized in sorted
/// order so all derived computations are reproducible.
class Lts {
public:
    Lts(Alphabet alphabet, std::vector<std::string> state_labels,
        std::vector<Transition> transitions,
        std::size_t state_budget = kDefaultStateBudget)
        : alphabet_(std::move(alphabet)), labels_(std::move(state_labels)) {
        if (labels_.size() > state_budget) {
            throw BudgetError("state budget exceeded: " + std::to_string(labels_.size()) +
                              " states, budget " + std::to_string(state_budget));
        }
        std::sort(transitions.begin(), transitions.end());
        transitions.erase(std::unique(transitions.begin(), transitions.end()),
                          transitions.end());
        for (const auto& t : transitions) {
            if (t.src >= labels_.size() || t.tgt >= labels_.size())
                throw InputError("transition endpoint is not a declared state");
            if (t.action >= alphabet_.size())
                throw InputError("transition action is not in the alphabet");
        }
        transitions_ = std::move(transitions);

        // CSR index over (state, action) -> target span.
        const std::size_t cells = labels_.size() * alphabet_.size() + 1;
        offsets_.assign(cells, 0);
        targets_.reserve(transitions_.size());
        std::size_t pos = 0;
        for (StateId s = 0; s < labels_.size(); ++s) {
            for (ActionId a = 0; a < alphabet_.size(); ++a) {
                offsets_[cell(s, a)] = pos;
                while (pos < transitions_.size() && transitions_[pos].src == s &&
                       transitions_[pos].action == a) {
                    targets_.push_back(transitions_[pos].tgt);
                    ++pos;
                }
            }
        }
        offsets_.back() = pos;
    }

    std::size_t num_states() const { return labels_.size(); }
    std::size_t num_actions() const { return alphabet_.size(); }
    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::string& label(StateId s) const {
        check_state(s);
        return labels_[s];
    }
    const std::vector<std::string>& labels() const { return labels_; }

    /// All a-derivatives of s, sorted by id.
    std::span<const StateId> successors(StateId s, ActionId a) const {
        check_state(s);
        check_action(a);
        const auto begin = offsets_[cell(s, a)];
        const auto end = offsets_[cell(s, a) + 1];
        return {targets_.data() + begin, targets_.data() + end};
    }

    bool permits(StateId s, ActionId a) const { return !successors(s, a).empty(); }

    /// Everything reachable from s via transition paths, s included, sorted.
    std::vector<StateId> reachable(StateId s) const {
        check_state(s);
        std::vector<bool> seen(num_states(), false);
        std::vector<StateId> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const StateId cur = stack.back();
            stack.pop_back();
            for (ActionId a = 0; a < alphabet_.size(); ++a) {
                for (StateId t : successors(cur, a)) {
                    if (!seen[t]) {
                        seen[t] = true;
                        stack.push_back(t);
                    }
                }
            }
        }
        std::vector<StateId> out;
        for (StateId i = 0; i < num_states(); ++i)
            if (seen[i]) out.push_back(i);
        return out;
    }

    /// True iff every state reachable from s has at most one a-derivative
    /// per action.
    bool is_deterministic(StateId s) const {
        for (StateId r : reachable(s))
            for (ActionId a = 0; a < alphabet_.size(); ++a)
                if (successors(r, a).size() > 1) return false;
        return true;
    }

    /// Always true here: these systems are finite by construction. Kept so
    /// the property reads the same as in the image-finiteness side
    /// conditions it discharges.
    bool is_image_finite(StateId s) const {
        check_state(s);
        return true;
    }

    bool operator==(const Lts& other) const {
        return alphabet_ == other.alphabet_ && labels_ == other.labels_ &&
               transitions_ == other.transitions_;
    }

private:
    std::size_t cell(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * alphabet_.size() + a;
    }
    void check_state(StateId s) const {
        if (s >= labels_.size()) throw InputError("unknown state id " + std::to_string(s));
    }
    void check_action(ActionId a) const {
        if (a >= alphabet_.size())
            throw InputError("unknown action id " + std::to_string(a));
    }

    Alphabet alphabet_;
    std::vector<std::string> labels_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> offsets_;
    std::vector<StateId> targets_;
};

/// Incremental construction helper; enforces the state budget as states are
/// added so runaway products fail early.
class LtsBuilder {
public:
    explicit LtsBuilder(Alphabet alphabet, std::size_t state_budget = kDefaultStateBudget)
        : alphabet_(std::move(alphabet)), budget_(state_budget) {}

    StateId add_state(std::string label) {
        if (labels_.size() >= budget_)
            throw BudgetError("state budget exceeded while building LTS (budget " +
                              std::to_string(budget_) + ")");
        labels_.push_back(std::move(label));
        return static_cast<StateId>(labels_.size() - 1);
    }

    void add_transition(StateId src, ActionId action, StateId tgt) {
        transitions_.push_back({src, action, tgt});
    }

    std::size_t num_states() const { return labels_.size(); }

    Lts build() && {
        return Lts(std::move(alphabet_), std::move(labels_), std::move(transitions_),
                   budget_ < labels_.size() ? labels_.size() : budget_);
    }

private:
    Alphabet alphabet_;
    std::size_t budget_;
    std::vector<std::string> labels_;
    std::vector<Transition> transitions_;
};

/// An LTS together with one distinguished root state.
struct Process {
    Lts lts;
    StateId root = 0;
};

/// Union alphabet: all names of `l` in order, then the names of `r` not
/// already present.
inline Alphabet union_alphabet(const Alphabet& l, const Alphabet& r) {
    Alphabet u(l.names());
    for (const auto& n : r.names()) u.intern(n);
    return u;
}

/// Same transition structure over a larger alphabet (actions re-interned by
/// name). Every cross-LTS algorithm funnels through this so that action ids
/// always agree.
inline Lts reinterned(const Lts& lts, const Alphabet& alphabet) {
    std::vector<Transition> ts;
    ts.reserve(lts.transitions().size());
    for (const auto& t : lts.transitions()) {
        auto a = alphabet.find(lts.alphabet().name(t.action));
        if (!a) throw InputError("target alphabet misses action " +
                                 lts.alphabet().name(t.action));
        ts.push_back({t.src, *a, t.tgt});
    }
    return Lts(alphabet, lts.labels(), std::move(ts), std::max(kDefaultStateBudget, lts.num_states()));
}

/// Disjoint union; the right system's states are shifted by the left one's
/// state count. Returns the combined system plus the right-side offset.
inline std::pair<Lts, StateId> disjoint_union(const Lts& l, const Lts& r) {
    const Alphabet u = union_alphabet(l.alphabet(), r.alphabet());
    const Lts lu = reinterned(l, u);
    const Lts ru = reinterned(r, u);
    const auto offset = static_cast<StateId>(lu.num_states());
    std::vector<std::string> labels = lu.labels();
    labels.insert(labels.end(), ru.labels().begin(), ru.labels().end());
    std::vector<Transition> ts = lu.transitions();
    for (const auto& t : ru.transitions())
        ts.push_back({t.src + offset, t.action, t.tgt + offset});
    return {Lts(u, std::move(labels), std::move(ts),
                std::max(kDefaultStateBudget, labels.size())),
            offset};
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

/// GraphViz rendering: one node per state, one labeled edge per transition.
/// An optional root gets a doubled border.
inline void write_dot(std::ostream& os, const Lts& lts,
                      std::optional<StateId> root = std::nullopt) {
    os << "digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (StateId s = 0; s < lts.num_states(); ++s) {
        os << "  s" << s << " [label=\"" << dot_escape(lts.label(s)) << '"';
        if (root && *root == s) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (const auto& t : lts.transitions()) {
        os << "  s" << t.src << " -> s" << t.tgt << " [label=\""
           << dot_escape(lts.alphabet().name(t.action)) << "\"];\n";
    }
    os << "}\n";
}

inline std::string to_dot(const Lts& lts, std::optional<StateId> root = std::nullopt) {
    std::ostringstream os;
    write_dot(os, lts, root);
    return os.str();
}

} // namespace jibisim
