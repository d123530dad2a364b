#pragma once

#include "jibisim/error.hpp"
#include "jibisim/lts.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace jibisim {

/// Modal formulas: T, negation, finite conjunction and diamond modalities.
/// Values are immutable and cheap to copy. Conjunctions are kept canonical:
/// flattened, operands sorted and duplicate-free, never fewer than two
/// operands. Nested negation is allowed and not collapsed.
class Formula {
public:
    enum class Kind { Top, Neg, And, Diamond };

    static Formula top() {
        static const Formula t{std::make_shared<Node>(Kind::Top, "", std::vector<Formula>{})};
        return t;
    }

    static Formula neg(Formula body) {
        return Formula{std::make_shared<Node>(Kind::Neg, "", std::vector<Formula>{std::move(body)})};
    }

    static Formula diamond(std::string action, Formula body) {
        return Formula{std::make_shared<Node>(Kind::Diamond, std::move(action),
                                              std::vector<Formula>{std::move(body)})};
    }

    /// Canonicalizing conjunction: flattens nested conjunctions, sorts and
    /// deduplicates operands, collapses trivial cases.
    static Formula conj(std::vector<Formula> operands) {
        std::vector<Formula> flat;
        for (auto& f : operands) {
            if (f.kind() == Kind::And)
                flat.insert(flat.end(), f.operands().begin(), f.operands().end());
            else
                flat.push_back(std::move(f));
        }
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        if (flat.empty()) return top();
        if (flat.size() == 1) return flat.front();
        return Formula{std::make_shared<Node>(Kind::And, "", std::move(flat))};
    }

    Kind kind() const { return node_->kind; }
    const std::string& action() const { return node_->action; }
    const Formula& body() const { return node_->children.front(); }
    const std::vector<Formula>& operands() const { return node_->children; }

    int modal_depth() const { return node_->modal_depth; }
    int size() const { return node_->size; }
    bool is_positive() const { return node_->positive; }

    /// Total order used for operand sorting, enumeration order and witness
    /// tie-breaking: depth first, then size, then structure.
    int compare(const Formula& other) const {
        if (node_ == other.node_) return 0;
        if (node_->modal_depth != other.node_->modal_depth)
            return node_->modal_depth < other.node_->modal_depth ? -1 : 1;
        if (node_->size != other.node_->size)
            return node_->size < other.node_->size ? -1 : 1;
        if (node_->kind != other.node_->kind)
            return static_cast<int>(node_->kind) < static_cast<int>(other.node_->kind) ? -1 : 1;
        if (int c = node_->action.compare(other.node_->action); c != 0) return c < 0 ? -1 : 1;
        const auto& a = node_->children;
        const auto& b = other.node_->children;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            if (int c = a[i].compare(b[i]); c != 0) return c;
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        return 0;
    }

    bool operator==(const Formula& other) const { return compare(other) == 0; }
    bool operator<(const Formula& other) const { return compare(other) < 0; }

    /// Text form: "T", "!f", "<a>f", "f & g"; parentheses around
    /// conjunction operands of ! and <a>.
    std::string to_string() const {
        std::string out;
        print(out);
        return out;
    }

    const void* id() const { return node_.get(); }
    std::shared_ptr<const void> handle() const { return node_; }

private:
    struct Node {
        Node(Kind kind, std::string action, std::vector<Formula> children)
            : kind(kind), action(std::move(action)), children(std::move(children)) {
            switch (kind) {
            case Kind::Top:
                modal_depth = 0;
                size = 1;
                positive = true;
                break;
            case Kind::Neg:
                modal_depth = this->children[0].modal_depth();
                size = 1 + this->children[0].size();
                positive = false;
                break;
            case Kind::Diamond:
                modal_depth = 1 + this->children[0].modal_depth();
                size = 1 + this->children[0].size();
                positive = this->children[0].is_positive();
                break;
            case Kind::And:
                modal_depth = 0;
                size = 1;
                positive = true;
                for (const auto& c : this->children) {
                    modal_depth = std::max(modal_depth, c.modal_depth());
                    size += c.size();
                    positive = positive && c.is_positive();
                }
                break;
            }
        }
        Kind kind;
        std::string action;
        std::vector<Formula> children;
        int modal_depth = 0;
        int size = 0;
        bool positive = true;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    void print(std::string& out) const {
        switch (kind()) {
        case Kind::Top:
            out += 'T';
            break;
        case Kind::Neg:
            out += '!';
            print_tight(body(), out);
            break;
        case Kind::Diamond:
            out += '<';
            out += action();
            out += '>';
            print_tight(body(), out);
            break;
        case Kind::And:
            for (std::size_t i = 0; i < operands().size(); ++i) {
                if (i) out += " & ";
                operands()[i].print(out);
            }
            break;
        }
    }

    static void print_tight(const Formula& f, std::string& out) {
        if (f.kind() == Kind::And) {
            out += '(';
            f.print(out);
            out += ')';
        } else {
            f.print(out);
        }
    }

    std::shared_ptr<const Node> node_;
};

/// Formula parser for the text syntax above. Diamond actions may carry an
/// "@target" suffix as produced for right-determinized product labels.
inline Formula parse_formula(const std::string& text) {
    struct Parser {
        const std::string& s;
        std::size_t pos = 0;
        int line = 1, col = 1;

        void advance() {
            if (s[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
        void skip_ws() {
            while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' ||
                                      s[pos] == '\r'))
                advance();
        }
        [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

        // a lowercase identifier, optionally carrying a product "@target"
        static bool valid_action(const std::string& a) {
            if (a.empty() || !std::islower(static_cast<unsigned char>(a[0]))) return false;
            for (std::size_t i = 1; i < a.size(); ++i) {
                if (a[i] == '@') return true;
                const auto c = static_cast<unsigned char>(a[i]);
                if (!std::islower(c) && !std::isdigit(c) && a[i] != '_') return false;
            }
            return true;
        }

        Formula parse_conj() {
            std::vector<Formula> ops{parse_unary()};
            skip_ws();
            while (pos < s.size() && s[pos] == '&') {
                advance();
                ops.push_back(parse_unary());
                skip_ws();
            }
            return ops.size() == 1 ? ops.front() : Formula::conj(std::move(ops));
        }

        Formula parse_unary() {
            skip_ws();
            if (pos >= s.size()) fail("unexpected end of formula");
            const char c = s[pos];
            if (c == 'T') {
                advance();
                return Formula::top();
            }
            if (c == '!') {
                advance();
                return Formula::neg(parse_unary());
            }
            if (c == '<') {
                advance();
                std::string action;
                while (pos < s.size() && s[pos] != '>') {
                    action.push_back(s[pos]);
                    advance();
                }
                if (pos >= s.size()) fail("unterminated '<'");
                advance();
                if (!valid_action(action)) fail("invalid action name in diamond");
                return Formula::diamond(std::move(action), parse_unary());
            }
            if (c == '(') {
                advance();
                Formula f = parse_conj();
                skip_ws();
                if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
                advance();
                return f;
            }
            fail(std::string("unexpected character '") + c + "' in formula");
        }

        Formula parse_all() {
            Formula f = parse_conj();
            skip_ws();
            if (pos != s.size()) fail("trailing input after formula");
            return f;
        }
    };
    Parser p{text};
    return p.parse_all();
}

/// Batch evaluator sharing one memo across many formulas of one system.
/// Memoized subformulas are pinned for the cache's lifetime, so node
/// addresses stay unique keys even when callers drop their formulas.
class SatisfactionCache {
public:
    explicit SatisfactionCache(const Lts& lts) : lts_(lts) {}

    bool satisfies(StateId s, const Formula& f) {
        const auto key = std::make_pair(f.id(), s);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool result = false;
        switch (f.kind()) {
        case Formula::Kind::Top:
            result = true;
            break;
        case Formula::Kind::Neg:
            result = !satisfies(s, f.body());
            break;
        case Formula::Kind::And:
            result = true;
            for (const auto& c : f.operands())
                if (!satisfies(s, c)) {
                    result = false;
                    break;
                }
            break;
        case Formula::Kind::Diamond: {
            // Actions the system does not know are treated as never enabled.
            const auto a = lts_.alphabet().find(f.action());
            if (!a) {
                result = false;
                break;
            }
            for (StateId t : lts_.successors(s, *a))
                if (satisfies(t, f.body())) {
                    result = true;
                    break;
                }
            break;
        }
        }
        if (memo_.emplace(key, result).second) pinned_.push_back(f.handle());
        return result;
    }

private:
    const Lts& lts_;
    std::map<std::pair<const void*, StateId>, bool> memo_;
    std::vector<std::shared_ptr<const void>> pinned_;
};

/// Structural satisfaction check; memoizes per (subformula, state) within
/// one invocation.
inline bool satisfies(const Lts& lts, StateId s, const Formula& f) {
    SatisfactionCache cache(lts);
    return cache.satisfies(s, f);
}

/// Negation erasure. Positive input comes back unchanged; the result is
/// always positive and the map is idempotent.
inline Formula positive_projection(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::Top:
        return Formula::top();
    case Formula::Kind::Neg:
        return positive_projection(f.body());
    case Formula::Kind::Diamond:
        return Formula::diamond(f.action(), positive_projection(f.body()));
    case Formula::Kind::And: {
        std::vector<Formula> ops;
        ops.reserve(f.operands().size());
        for (const auto& c : f.operands()) ops.push_back(positive_projection(c));
        return Formula::conj(std::move(ops));
    }
    }
    throw ContractError("unreachable formula kind");
}

/// Membership in the negation closure of a positive formula: does erasing
/// all negations from `candidate` yield exactly `positive`?
inline bool in_negation_closure(const Formula& candidate, const Formula& positive) {
    return positive_projection(candidate) == positive;
}

/// All canonical positive formulas with modal depth <= max_depth and at
/// most max_width conjuncts per conjunction, in canonical order.
inline std::vector<Formula> enumerate_positive(const std::vector<std::string>& actions,
                                               int max_depth, int max_width) {
    std::vector<Formula> current{Formula::top()};
    for (int d = 1; d <= max_depth; ++d) {
        std::vector<Formula> non_and{Formula::top()};
        for (const auto& a : actions)
            for (const auto& f : current) non_and.push_back(Formula::diamond(a, f));
        std::sort(non_and.begin(), non_and.end());
        non_and.erase(std::unique(non_and.begin(), non_and.end()), non_and.end());

        std::vector<Formula> next = non_and;
        // Conjunctions over distinct non-conjunction operands.
        std::vector<std::size_t> picked;
        std::function<void(std::size_t)> choose = [&](std::size_t start) {
            if (picked.size() >= 2) {
                std::vector<Formula> ops;
                ops.reserve(picked.size());
                for (auto i : picked) ops.push_back(non_and[i]);
                next.push_back(Formula::conj(std::move(ops)));
            }
            if (static_cast<int>(picked.size()) >= max_width) return;
            for (std::size_t i = start; i < non_and.size(); ++i) {
                picked.push_back(i);
                choose(i + 1);
                picked.pop_back();
            }
        };
        choose(0);
        current = std::move(next);
    }
    std::sort(current.begin(), current.end());
    current.erase(std::unique(current.begin(), current.end()), current.end());
    return current;
}

/// One representative per Boolean decoration of `positive`: every
/// subformula position is independently negated or left alone, giving
/// 2^(number of positions) formulas whose projection is `positive`.
inline std::vector<Formula> enumerate_negclosure(const Formula& positive) {
    if (!positive.is_positive())
        throw InputError("negation closure requires a positive formula");

    std::function<std::vector<Formula>(const Formula&)> decorate =
        [&](const Formula& f) -> std::vector<Formula> {
        std::vector<Formula> bare;
        switch (f.kind()) {
        case Formula::Kind::Top:
            bare.push_back(Formula::top());
            break;
        case Formula::Kind::Diamond:
            for (const auto& b : decorate(f.body()))
                bare.push_back(Formula::diamond(f.action(), b));
            break;
        case Formula::Kind::And: {
            std::vector<std::vector<Formula>> per_child;
            for (const auto& c : f.operands()) per_child.push_back(decorate(c));
            std::vector<Formula> acc;
            std::vector<Formula> ops;
            std::function<void(std::size_t)> combine = [&](std::size_t i) {
                if (i == per_child.size()) {
                    acc.push_back(Formula::conj(ops));
                    return;
                }
                for (const auto& v : per_child[i]) {
                    ops.push_back(v);
                    combine(i + 1);
                    ops.pop_back();
                }
            };
            combine(0);
            bare = std::move(acc);
            break;
        }
        case Formula::Kind::Neg:
            throw ContractError("positive formula contains a negation");
        }
        std::vector<Formula> out;
        out.reserve(bare.size() * 2);
        for (auto& b : bare) {
            out.push_back(b);
            out.push_back(Formula::neg(std::move(b)));
        }
        return out;
    };

    std::vector<Formula> out = decorate(positive);
    std::sort(out.begin(), out.end());
    return out;
}

/// Rewrites every diamond action through `rename`; conjunctions are
/// re-canonicalized since renaming can merge operands.
inline Formula rename_actions(const Formula& f,
                              const std::function<std::string(const std::string&)>& rename) {
    switch (f.kind()) {
    case Formula::Kind::Top:
        return Formula::top();
    case Formula::Kind::Neg:
        return Formula::neg(rename_actions(f.body(), rename));
    case Formula::Kind::Diamond:
        return Formula::diamond(rename(f.action()), rename_actions(f.body(), rename));
    case Formula::Kind::And: {
        std::vector<Formula> ops;
        ops.reserve(f.operands().size());
        for (const auto& c : f.operands()) ops.push_back(rename_actions(c, rename));
        return Formula::conj(std::move(ops));
    }
    }
    throw ContractError("unreachable formula kind");
}

} // namespace jibisim
