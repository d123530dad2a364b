#pragma once

#include "jibisim/compiler.hpp"
#include "jibisim/formula.hpp"
#include "jibisim/interaction.hpp"
#include "jibisim/parameterized.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace jibisim {

/// Drops the environment-target component from the modalities of a formula
/// over a right-determinized product alphabet: <a@target> becomes <a>.
inline Formula act_project(const Formula& f) {
    return rename_actions(f, [](const std::string& name) {
        const auto at = name.find('@');
        return at == std::string::npos ? name : name.substr(0, at);
    });
}

/// Outcome of an enumeration-bounded characterization check. The soundness
/// side is exhaustive within the bounds; when the relation fails, the
/// completeness side may stay inconclusive if no distinguishing formula
/// fits the bounds.
struct ConsistencyReport {
    bool relation_holds = false;
    int depth = 0;
    int width = 0;
    std::vector<Formula> violations;       // soundness counterexamples (expect none)
    std::optional<Formula> distinguishing; // found by enumeration when the relation fails
    std::optional<Formula> witness;        // product-derived witness, when applicable
    bool conclusive = false;

    bool consistent() const { return violations.empty(); }
};

namespace detail {

inline int default_char_depth(const Lts& a, StateId ra, const Lts& b, StateId rb) {
    return static_cast<int>(a.reachable(ra).size() * b.reachable(rb).size());
}

inline int max_out_degree(const Lts& lts) {
    std::size_t deg = 1;
    for (StateId s = 0; s < lts.num_states(); ++s)
        for (ActionId a = 0; a < lts.alphabet().size(); ++a)
            deg = std::max(deg, lts.successors(s, a).size());
    return static_cast<int>(deg);
}

} // namespace detail

/// A positive formula satisfied by p and by e but not by q; exists exactly
/// when p is not ji-simulatable by q with respect to e. Obtained by
/// distinguishing the join products and verified against all three inputs.
inline Formula witness_formula_paramsim(const Process& p, const Process& e, const Process& q) {
    const auto u = detail::unite(p, q);
    const JoinProduct prod = join_product(u.proc, {u.p, u.q}, e.lts, e.root);
    const Relation sim = simulation_preorder(prod.lts, prod.lts);
    if (sim.contains(prod.roots[0], prod.roots[1]))
        throw ContractError("witness_formula_paramsim called on a related triple");
    const Formula f = distinguish_sim(prod.lts, prod.roots[0], prod.lts, prod.roots[1]);
    if (!satisfies(p.lts, p.root, f) || !satisfies(e.lts, e.root, f) ||
        satisfies(q.lts, q.root, f))
        throw ContractError("paramsim witness failed the membership triple check");
    return f;
}

/// Bounded check of the positive-formula characterization of
/// (ji-)parameterized simulatability: when the relation holds, no positive
/// formula within bounds may be satisfied by p and e but not q; when it
/// fails, searches for such a formula and also returns the product-derived
/// witness.
inline ConsistencyReport check_char_paramsim(const Process& p, const Process& e,
                                             const Process& q, int depth, int width) {
    ConsistencyReport report;
    report.depth = depth;
    report.width = width;
    report.relation_holds = ji_param_sim(p, e, q).related;

    std::vector<std::string> actions = p.lts.alphabet().names();
    for (const auto& n : e.lts.alphabet().names())
        if (std::find(actions.begin(), actions.end(), n) == actions.end())
            actions.push_back(n);
    for (const auto& n : q.lts.alphabet().names())
        if (std::find(actions.begin(), actions.end(), n) == actions.end())
            actions.push_back(n);

    SatisfactionCache sat_p(p.lts), sat_e(e.lts), sat_q(q.lts);
    for (const Formula& f : enumerate_positive(actions, depth, width)) {
        if (!sat_p.satisfies(p.root, f) || !sat_e.satisfies(e.root, f)) continue;
        if (sat_q.satisfies(q.root, f)) continue;
        if (report.relation_holds) {
            report.violations.push_back(f);
        } else if (!report.distinguishing) {
            report.distinguishing = f;
        }
    }
    if (!report.relation_holds) report.witness = witness_formula_paramsim(p, e, q);
    report.conclusive = report.relation_holds || report.distinguishing.has_value();
    return report;
}

inline ConsistencyReport check_char_paramsim(const Process& p, const Process& e,
                                             const Process& q) {
    const JoinProduct pe = join_product(p, e);
    const JoinProduct qe = join_product(q, e);
    const int depth = detail::default_char_depth(pe.lts, pe.roots[0], qe.lts, qe.roots[0]);
    const int width = std::max(detail::max_out_degree(pe.lts), detail::max_out_degree(qe.lts));
    return check_char_paramsim(p, e, q, depth, width);
}

/// Bounded check of the negation-closure characterization of parameterized
/// bisimilarity: for every positive formula the environment satisfies, p
/// and q must agree on its whole negation closure iff they are related.
/// The closure is enumerated in one-negation-per-position normal form.
inline ConsistencyReport check_char_parambisim(const Process& p, const Process& e,
                                               const Process& q, int depth, int width) {
    ConsistencyReport report;
    report.depth = depth;
    report.width = width;
    report.relation_holds = param_bisim_direct(p, e, q).verdict.related;

    std::vector<std::string> actions = p.lts.alphabet().names();
    for (const auto& n : e.lts.alphabet().names())
        if (std::find(actions.begin(), actions.end(), n) == actions.end())
            actions.push_back(n);
    for (const auto& n : q.lts.alphabet().names())
        if (std::find(actions.begin(), actions.end(), n) == actions.end())
            actions.push_back(n);

    SatisfactionCache sat_p(p.lts), sat_e(e.lts), sat_q(q.lts);
    for (const Formula& base : enumerate_positive(actions, depth, width)) {
        if (!sat_e.satisfies(e.root, base)) continue;
        for (const Formula& f : enumerate_negclosure(base)) {
            if (sat_p.satisfies(p.root, f) == sat_q.satisfies(q.root, f)) continue;
            if (report.relation_holds) {
                report.violations.push_back(f);
            } else if (!report.distinguishing) {
                report.distinguishing = f;
            }
        }
    }
    report.conclusive = report.relation_holds || report.distinguishing.has_value();
    return report;
}

inline ConsistencyReport check_char_parambisim(const Process& p, const Process& e,
                                               const Process& q) {
    const JoindotProduct pe = joindot_product(p, e);
    const JoindotProduct qe = joindot_product(q, e);
    const int depth = detail::default_char_depth(pe.lts, pe.roots[0], qe.lts, qe.roots[0]);
    const int width = std::max(detail::max_out_degree(pe.lts), detail::max_out_degree(qe.lts));
    return check_char_parambisim(p, e, q, depth, width);
}

} // namespace jibisim
