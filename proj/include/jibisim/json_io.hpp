#pragma once

#include "jibisim/discrimination.hpp"
#include "jibisim/lts.hpp"
#include "jibisim/modal_checks.hpp"
#include "jibisim/parameterized.hpp"
#include "jibisim/relation.hpp"

#include <json.hpp>

#include <string>

namespace jibisim {

using OrderedJson = nlohmann::ordered_json;

/// {"states": [...], "alphabet": [...], "transitions": [[src, act, tgt], ...]}
inline OrderedJson lts_to_json(const Lts& lts) {
    OrderedJson j;
    j["states"] = lts.labels();
    j["alphabet"] = lts.alphabet().names();
    auto& ts = j["transitions"] = OrderedJson::array();
    for (const auto& t : lts.transitions()) ts.push_back({t.src, t.action, t.tgt});
    return j;
}

inline Lts lts_from_json(const OrderedJson& j,
                         std::size_t budget = kDefaultStateBudget) {
    if (!j.contains("states") || !j.contains("alphabet") || !j.contains("transitions"))
        throw InputError("LTS JSON needs states, alphabet and transitions");
    std::vector<std::string> labels = j["states"].get<std::vector<std::string>>();
    Alphabet alphabet(j["alphabet"].get<std::vector<std::string>>());
    std::vector<Transition> ts;
    for (const auto& row : j["transitions"]) {
        if (!row.is_array() || row.size() != 3)
            throw InputError("transition rows must be [src, action, tgt]");
        ts.push_back({row[0].get<StateId>(), row[1].get<ActionId>(), row[2].get<StateId>()});
    }
    return Lts(std::move(alphabet), std::move(labels), std::move(ts), budget);
}

/// [[leftState, rightState], ...] in row-major order.
inline OrderedJson relation_to_json(const Relation& rel) {
    OrderedJson j = OrderedJson::array();
    for (const auto& [s, t] : rel.pairs()) j.push_back({s, t});
    return j;
}

inline OrderedJson trace_to_json(const MismatchTrace& trace, const Lts& proc, const Lts& env) {
    auto tr = [](const Lts& lts, const char* side, const Transition& t) {
        return OrderedJson::array(
            {side, lts.label(t.src), lts.alphabet().name(t.action), lts.label(t.tgt)});
    };
    OrderedJson steps = OrderedJson::array();
    for (const auto& step : trace.steps) {
        steps.push_back(tr(env, "env", step.env));
        steps.push_back(tr(proc, "left", step.left));
        steps.push_back(tr(proc, "right", step.right));
    }
    steps.push_back(tr(env, "env", trace.challenge.env));
    steps.push_back(tr(proc, trace.challenge.from_left ? "left" : "right",
                       trace.challenge.challenge));
    OrderedJson j;
    j["transitions"] = std::move(steps);
    j["challenge"] = OrderedJson{{"side", trace.challenge.from_left ? "left" : "right"},
                                 {"action", env.alphabet().name(trace.challenge.env.action)}};
    return j;
}

/// {"relation": ..., "related": ..., "witness": ...?}
inline OrderedJson verdict_to_json(const std::string& relation, const Verdict& verdict,
                                   const Lts* proc = nullptr, const Lts* env = nullptr) {
    OrderedJson j;
    j["relation"] = relation;
    j["related"] = verdict.related;
    if (verdict.formula_witness) j["witness"] = verdict.formula_witness->to_string();
    if (verdict.trace_witness && proc && env)
        j["witness"] = trace_to_json(*verdict.trace_witness, *proc, *env);
    return j;
}

inline OrderedJson universe_params_to_json(const UniverseParams& p) {
    OrderedJson j;
    j["alphabet"] = p.alphabet;
    j["max_term_size"] = p.max_term_size;
    j["join_rounds"] = p.join_rounds;
    j["include_universal"] = p.include_universal;
    return j;
}

/// {"mode", "universe_params", "pairs": [{e, f, sim_leq, discr_leq, witness?}],
///  "violations": [...]}
inline OrderedJson report_to_json(const DiscriminationReport& report) {
    OrderedJson j;
    j["mode"] = report.mode;
    j["suite"] = report.suite;
    j["universe_params"] = universe_params_to_json(report.params);
    auto& pairs = j["pairs"] = OrderedJson::array();
    for (const auto& row : report.pairs) {
        OrderedJson r;
        r["e"] = row.e;
        r["f"] = row.f;
        r["sim_leq"] = row.sim_leq;
        r["discr_leq"] = row.discr_leq;
        if (row.witness) r["witness"] = *row.witness;
        pairs.push_back(std::move(r));
    }
    j["violations"] = report.violations;
    j["findings"] = report.findings;
    return j;
}

inline OrderedJson consistency_report_to_json(const ConsistencyReport& report) {
    OrderedJson j;
    j["relation_holds"] = report.relation_holds;
    j["depth"] = report.depth;
    j["width"] = report.width;
    j["consistent"] = report.consistent();
    j["conclusive"] = report.conclusive;
    auto& v = j["violations"] = OrderedJson::array();
    for (const auto& f : report.violations) v.push_back(f.to_string());
    if (report.distinguishing) j["distinguishing"] = report.distinguishing->to_string();
    if (report.witness) j["witness"] = report.witness->to_string();
    return j;
}

} // namespace jibisim
