#pragma once

#include "jibisim/error.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace jibisim {

/// Abstract syntax of the process language: 0, action prefix, binary sum,
/// binary join, and references to named definitions. Immutable, cheap to
/// copy.
class ProcessTerm {
public:
    enum class Kind { Nil, Prefix, Sum, Join, Ref };

    static ProcessTerm nil() {
        static const ProcessTerm n{std::make_shared<Node>(Kind::Nil)};
        return n;
    }
    static ProcessTerm prefix(std::string action, ProcessTerm body) {
        auto node = std::make_shared<Node>(Kind::Prefix);
        node->text = std::move(action);
        node->children = {std::move(body)};
        return ProcessTerm{std::move(node)};
    }
    static ProcessTerm sum(ProcessTerm left, ProcessTerm right) {
        auto node = std::make_shared<Node>(Kind::Sum);
        node->children = {std::move(left), std::move(right)};
        return ProcessTerm{std::move(node)};
    }
    static ProcessTerm join(ProcessTerm left, ProcessTerm right) {
        auto node = std::make_shared<Node>(Kind::Join);
        node->children = {std::move(left), std::move(right)};
        return ProcessTerm{std::move(node)};
    }
    static ProcessTerm ref(std::string name) {
        auto node = std::make_shared<Node>(Kind::Ref);
        node->text = std::move(name);
        return ProcessTerm{std::move(node)};
    }

    Kind kind() const { return node_->kind; }
    const std::string& action() const { return node_->text; } // Prefix
    const std::string& name() const { return node_->text; }   // Ref
    const ProcessTerm& body() const { return node_->children[0]; }
    const ProcessTerm& left() const { return node_->children[0]; }
    const ProcessTerm& right() const { return node_->children[1]; }

    /// Number of action occurrences; the enumerator's size measure is one
    /// more than this.
    int action_count() const {
        switch (kind()) {
        case Kind::Nil:
        case Kind::Ref:
            return 0;
        case Kind::Prefix:
            return 1 + body().action_count();
        case Kind::Sum:
        case Kind::Join:
            return left().action_count() + right().action_count();
        }
        return 0;
    }

    int compare(const ProcessTerm& other) const {
        if (node_ == other.node_) return 0;
        if (kind() != other.kind())
            return static_cast<int>(kind()) < static_cast<int>(other.kind()) ? -1 : 1;
        if (int c = node_->text.compare(other.node_->text); c != 0) return c < 0 ? -1 : 1;
        for (std::size_t i = 0; i < std::min(node_->children.size(), other.node_->children.size()); ++i)
            if (int c = node_->children[i].compare(other.node_->children[i]); c != 0) return c;
        if (node_->children.size() != other.node_->children.size())
            return node_->children.size() < other.node_->children.size() ? -1 : 1;
        return 0;
    }
    bool operator==(const ProcessTerm& other) const { return compare(other) == 0; }
    bool operator<(const ProcessTerm& other) const { return compare(other) < 0; }

    /// Display form, re-parseable: prefix binds tightest, then '&', then
    /// '+'; "a" abbreviates "a.0". Associative chains are printed flat.
    std::string to_string() const {
        std::string out;
        print(out, 0);
        return out;
    }

    /// Fully parenthesized form; injective on terms, used as a state key.
    std::string key() const {
        std::string out;
        print_key(out);
        return out;
    }

private:
    struct Node {
        explicit Node(Kind kind) : kind(kind) {}
        Kind kind;
        std::string text; // action (Prefix) or name (Ref)
        std::vector<ProcessTerm> children;
    };

    explicit ProcessTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    // precedence levels: 0 sum, 1 join, 2 prefix/atom
    void print(std::string& out, int min_prec) const {
        const int prec = kind() == Kind::Sum ? 0 : kind() == Kind::Join ? 1 : 2;
        const bool parens = prec < min_prec;
        if (parens) out += '(';
        switch (kind()) {
        case Kind::Nil:
            out += '0';
            break;
        case Kind::Ref:
            out += name();
            break;
        case Kind::Prefix:
            out += action();
            if (body().kind() != Kind::Nil) {
                out += '.';
                body().print(out, 2);
            }
            break;
        case Kind::Sum:
            left().print(out, 0);
            out += " + ";
            right().print(out, 0);
            break;
        case Kind::Join:
            left().print(out, 1);
            out += " & ";
            right().print(out, 1);
            break;
        }
        if (parens) out += ')';
    }

    void print_key(std::string& out) const {
        switch (kind()) {
        case Kind::Nil:
            out += '0';
            break;
        case Kind::Ref:
            out += '@';
            out += name();
            break;
        case Kind::Prefix:
            out += action();
            out += ".(";
            body().print_key(out);
            out += ')';
            break;
        case Kind::Sum:
            out += '(';
            left().print_key(out);
            out += ")+(";
            right().print_key(out);
            out += ')';
            break;
        case Kind::Join:
            out += '(';
            left().print_key(out);
            out += ")&(";
            right().print_key(out);
            out += ')';
            break;
        }
    }

    std::shared_ptr<const Node> node_;
};

/// Named definitions in declaration order. Names are unique, references
/// resolvable and recursion guarded; the parser and compiler enforce this.
class DefinitionSet {
public:
    bool add(const std::string& name, ProcessTerm body) {
        if (index_.count(name)) return false;
        index_.emplace(name, entries_.size());
        entries_.emplace_back(name, std::move(body));
        return true;
    }

    const ProcessTerm* find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return nullptr;
        return &entries_[it->second].second;
    }

    const std::vector<std::pair<std::string, ProcessTerm>>& entries() const {
        return entries_;
    }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::string, ProcessTerm>> entries_;
    std::map<std::string, std::size_t> index_;
};

/// Reference names that can act before any prefix guard: these are the
/// occurrences that make recursion unguarded when they close a cycle.
inline void unguarded_refs(const ProcessTerm& t, std::set<std::string>& out) {
    switch (t.kind()) {
    case ProcessTerm::Kind::Nil:
    case ProcessTerm::Kind::Prefix:
        return;
    case ProcessTerm::Kind::Ref:
        out.insert(t.name());
        return;
    case ProcessTerm::Kind::Sum:
    case ProcessTerm::Kind::Join:
        unguarded_refs(t.left(), out);
        unguarded_refs(t.right(), out);
        return;
    }
}

inline void all_refs(const ProcessTerm& t, std::set<std::string>& out) {
    switch (t.kind()) {
    case ProcessTerm::Kind::Nil:
        return;
    case ProcessTerm::Kind::Ref:
        out.insert(t.name());
        return;
    case ProcessTerm::Kind::Prefix:
        all_refs(t.body(), out);
        return;
    case ProcessTerm::Kind::Sum:
    case ProcessTerm::Kind::Join:
        all_refs(t.left(), out);
        all_refs(t.right(), out);
        return;
    }
}

/// Finds a definition involved in an unguarded reference cycle, if any.
inline std::optional<std::string> find_unguarded_cycle(const DefinitionSet& defs) {
    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> mark;
    for (const auto& [name, _] : defs.entries()) mark[name] = Mark::White;

    std::function<bool(const std::string&)> visit = [&](const std::string& name) {
        mark[name] = Mark::Grey;
        std::set<std::string> next;
        if (const ProcessTerm* body = defs.find(name)) unguarded_refs(*body, next);
        for (const auto& n : next) {
            auto it = mark.find(n);
            if (it == mark.end()) continue; // unbound; reported elsewhere
            if (it->second == Mark::Grey) return true;
            if (it->second == Mark::White && visit(n)) return true;
        }
        mark[name] = Mark::Black;
        return false;
    };
    for (const auto& [name, _] : defs.entries())
        if (mark[name] == Mark::White && visit(name)) return name;
    return std::nullopt;
}

} // namespace jibisim
