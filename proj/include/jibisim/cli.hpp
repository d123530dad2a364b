#pragma once

#include "jibisim/compiler.hpp"
#include "jibisim/discrimination.hpp"
#include "jibisim/equivalence.hpp"
#include "jibisim/interaction.hpp"
#include "jibisim/json_io.hpp"
#include "jibisim/modal_checks.hpp"
#include "jibisim/parameterized.hpp"
#include "jibisim/parser.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jibisim::cli {

inline std::size_t state_budget_from_env() {
    if (const char* raw = std::getenv("JI_BISIM_STATE_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(raw, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultStateBudget;
}

/// Term arguments are inline source unless they name an existing file.
inline std::string load_source(const std::string& arg) {
    if (std::filesystem::exists(arg)) {
        std::ifstream in(arg);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
    return arg;
}

inline Process compile_arg(const std::string& arg, std::size_t budget) {
    auto [term, defs] = parse_process(load_source(arg));
    return compile(term, defs, Alphabet{}, budget);
}

struct CheckOptions {
    std::string relation;
    std::string left;
    std::string right;
    std::string env;
    bool explain = false;
    bool json = false;
};

inline const char* relation_symbol(const std::string& relation) {
    if (relation == "bisim") return "~";
    if (relation == "sim") return "<=";
    if (relation == "param-bisim") return "~_e";
    if (relation == "param-sim") return "<=_e";
    if (relation == "ji-bisim") return "~ji_e";
    if (relation == "ji-sim") return "<=ji_e";
    if (relation == "ji-simeq") return "~=ji_e";
    return "?";
}

inline void print_trace(std::ostream& out, const MismatchTrace& trace, const Lts& proc,
                        const Lts& env) {
    auto show = [](const Lts& lts, const Transition& t) {
        return lts.label(t.src) + " --" + lts.alphabet().name(t.action) + "--> " +
               lts.label(t.tgt);
    };
    out << "mismatch trace:\n";
    for (const auto& step : trace.steps)
        out << "  env: " << show(env, step.env) << "   left: " << show(proc, step.left)
            << "   right: " << show(proc, step.right) << "\n";
    out << "  challenge (" << (trace.challenge.from_left ? "left" : "right")
        << "): " << show(proc, trace.challenge.challenge) << " with env "
        << show(env, trace.challenge.env) << " unmatched\n";
}

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
    const std::size_t budget = state_budget_from_env();
    const bool needs_env = opt.relation != "bisim" && opt.relation != "sim";
    if (needs_env && opt.env.empty()) {
        err << "error: --rel " << opt.relation << " requires --env\n";
        return 2;
    }

    const Process left = compile_arg(opt.left, budget);
    const Process right = compile_arg(opt.right, budget);

    Verdict verdict;
    std::optional<Lts> trace_proc;
    std::optional<Process> env;
    if (!needs_env) {
        if (opt.relation == "bisim") {
            verdict.related = bisimilarity(left.lts, right.lts).contains(left.root, right.root);
            if (!verdict.related && opt.explain)
                verdict.formula_witness =
                    distinguish_bisim(left.lts, left.root, right.lts, right.root);
        } else {
            verdict.related =
                simulation_preorder(left.lts, right.lts).contains(left.root, right.root);
            if (!verdict.related && opt.explain)
                verdict.formula_witness =
                    distinguish_sim(left.lts, left.root, right.lts, right.root);
        }
    } else {
        env = compile_arg(opt.env, budget);
        auto [proc, offset] = disjoint_union(left.lts, right.lts);
        const StateId p = left.root;
        const StateId q = right.root + offset;
        trace_proc = proc;

        if (opt.relation == "param-bisim") {
            verdict = param_bisim_direct(proc, p, q, env->lts, env->root, opt.explain).verdict;
            const Verdict cross =
                param_bisim_via_joindot(proc, p, q, env->lts, env->root, false, budget);
            if (cross.related != verdict.related) {
                err << "internal error: family fixpoint and product route disagree\n";
                return 2;
            }
        } else if (opt.relation == "param-sim") {
            verdict = param_sim_direct(proc, p, q, env->lts, env->root, opt.explain).verdict;
            const Verdict cross =
                param_sim_via_joindot(proc, p, q, env->lts, env->root, false, budget);
            if (cross.related != verdict.related) {
                err << "internal error: family fixpoint and product route disagree\n";
                return 2;
            }
        } else if (opt.relation == "ji-bisim") {
            verdict = ji_param_bisim(proc, p, q, env->lts, env->root, opt.explain, budget);
        } else if (opt.relation == "ji-sim") {
            verdict = ji_param_sim(proc, p, q, env->lts, env->root, opt.explain, budget);
        } else if (opt.relation == "ji-simeq") {
            verdict = ji_param_sim_equiv(proc, p, q, env->lts, env->root, opt.explain, budget);
        } else {
            err << "error: unknown relation '" << opt.relation << "'\n";
            return 2;
        }
    }

    if (opt.json) {
        out << verdict_to_json(opt.relation, verdict, trace_proc ? &*trace_proc : nullptr,
                               env ? &env->lts : nullptr)
                   .dump(2)
            << "\n";
    } else {
        out << left.lts.label(left.root) << " " << relation_symbol(opt.relation) << " "
            << right.lts.label(right.root);
        if (env) out << "  [e = " << env->lts.label(env->root) << "]";
        out << ": " << (verdict.related ? "true" : "false") << "\n";
        if (verdict.formula_witness)
            out << "witness: " << verdict.formula_witness->to_string() << "\n";
        if (verdict.trace_witness && trace_proc && env)
            print_trace(out, *verdict.trace_witness, *trace_proc, env->lts);
    }
    return verdict.related ? 0 : 1;
}

inline int cmd_eval(const std::string& term_arg, const std::string& formula_arg, bool json,
                    std::ostream& out) {
    const std::size_t budget = state_budget_from_env();
    const Process p = compile_arg(term_arg, budget);
    const Formula f = parse_formula(load_source(formula_arg));
    const bool sat = satisfies(p.lts, p.root, f);
    if (json) {
        OrderedJson j;
        j["term"] = p.lts.label(p.root);
        j["formula"] = f.to_string();
        j["satisfied"] = sat;
        out << j.dump(2) << "\n";
    } else {
        out << (sat ? "true" : "false") << "\n";
    }
    return sat ? 0 : 1;
}

struct ExampleCase {
    std::string name;
    std::string description;
    bool (*run)();
};

namespace detail {

inline Process mk(const char* text) {
    auto [term, defs] = parse_process(text);
    return compile(term, defs, Alphabet({"a", "b"}));
}

} // namespace detail

/// The registered golden examples: every externally documented claim about
/// the tiny systems around a.b and a.b + a, runnable as one table.
inline const std::vector<ExampleCase>& example_registry() {
    using detail::mk;
    static const std::vector<ExampleCase> cases = {
        {"fig1-parse", "a.b + a parses as (a.(b.0)) + (a.0)",
         [] {
             auto [t, defs] = parse_process("a.b + a");
             return t.kind() == ProcessTerm::Kind::Sum && t.left().action() == "a" &&
                    t.left().body().action() == "b" && t.right().action() == "a";
         }},
        {"fig1-successors", "a.b + a has two a-derivatives",
         [] {
             const Process q = mk("a.b + a");
             return q.lts.successors(q.root, *q.lts.alphabet().find("a")).size() == 2;
         }},
        {"fig1-nondeterministic", "a.b + a is not deterministic",
         [] {
             const Process q = mk("a.b + a");
             return !q.lts.is_deterministic(q.root);
         }},
        {"fig1-join-products-bisimilar", "a.b & e ~ (a.b + a) & e for e = a.b + a",
         [] {
             const JoinProduct pe = join_product(mk("a.b"), mk("a.b + a"));
             const JoinProduct qe = join_product(mk("a.b + a"), mk("a.b + a"));
             return bisimilarity(pe.lts, qe.lts).contains(pe.roots[0], qe.roots[0]);
         }},
        {"fig1-join-left-successors", "a.b & (a.b + a) has a-derivatives {b&b, b&0}",
         [] {
             const JoinProduct pe = join_product(mk("a.b"), mk("a.b + a"));
             return pe.lts.successors(pe.roots[0], *pe.lts.alphabet().find("a")).size() == 2;
         }},
        {"fig1-join-right-successors", "(a.b + a) & (a.b + a) has four a-derivatives",
         [] {
             const JoinProduct qe = join_product(mk("a.b + a"), mk("a.b + a"));
             return qe.lts.successors(qe.roots[0], *qe.lts.alphabet().find("a")).size() == 4;
         }},
        {"fig1-joindot-left", "a.b &. (a.b + a): one a@b and one a@0 transition",
         [] {
             const JoindotProduct pe = joindot_product(mk("a.b"), mk("a.b + a"));
             std::size_t labels = 0, transitions = 0;
             for (ActionId a = 0; a < pe.lts.alphabet().size(); ++a) {
                 const auto succ = pe.lts.successors(pe.roots[0], a);
                 if (!succ.empty()) ++labels;
                 transitions += succ.size();
             }
             return labels == 2 && transitions == 2;
         }},
        {"fig1-joindot-right", "(a.b + a) &. (a.b + a): four transitions, two per label",
         [] {
             const JoindotProduct qe = joindot_product(mk("a.b + a"), mk("a.b + a"));
             std::size_t transitions = 0;
             bool two_each = true;
             for (ActionId a = 0; a < qe.lts.alphabet().size(); ++a) {
                 const auto succ = qe.lts.successors(qe.roots[0], a);
                 if (!succ.empty() && succ.size() != 2) two_each = false;
                 transitions += succ.size();
             }
             return transitions == 4 && two_each;
         }},
        {"fig1-joindot-products-differ", "a.b &. e and (a.b + a) &. e are not bisimilar",
         [] {
             return !param_bisim_via_joindot(mk("a.b"), mk("a.b + a"), mk("a.b + a")).related;
         }},
        {"fig1-param-bisim-fails", "a.b and a.b + a are not bisimilar wrt e = a.b + a",
         [] {
             return !param_bisim_direct(mk("a.b"), mk("a.b + a"), mk("a.b + a"))
                         .verdict.related;
         }},
        {"fig1-ji-bisim-holds", "a.b and a.b + a are ji-bisimilar wrt e = a.b + a",
         [] { return ji_param_bisim(mk("a.b"), mk("a.b + a"), mk("a.b + a")).related; }},
        {"fig1-mismatch-trace", "the mismatch replays: joint a-step, then an unmatched b",
         [] {
             const Process p = mk("a.b"), q = mk("a.b + a"), e = mk("a.b + a");
             const MismatchTrace t = explain_param_mismatch(p, e, q, ParamMode::Bisim);
             return t.steps.size() == 1 &&
                    validate_mismatch_trace(p, e, q, ParamMode::Bisim, t);
         }},
        {"b-vs-0", "b and 0 are not bisimilar wrt e = b",
         [] { return !param_bisim_direct(mk("b"), mk("b"), mk("0")).verdict.related; }},
        {"prop-iv-ji-simeq", "a.b and a.b + a are ji simulation equivalent wrt e = a.b",
         [] { return ji_param_sim_equiv(mk("a.b"), mk("a.b"), mk("a.b + a")).related; }},
        {"prop-iv-ji-bisim-fails", "a.b and a.b + a are not ji-bisimilar wrt e = a.b",
         [] { return !ji_param_bisim(mk("a.b"), mk("a.b"), mk("a.b + a")).related; }},
        {"env-sim", "a.b is simulatable by a.b + a",
         [] {
             const Process e = mk("a.b"), f = mk("a.b + a");
             return simulation_preorder(e.lts, f.lts).contains(e.root, f.root);
         }},
        {"discrimination-failure",
         "e = a.b, f = a.b + a: e <= f, yet the ji-bisim relation wrt f is not contained "
         "in the one wrt e (witness p = e, q = f)",
         [] {
             return ji_param_bisim(mk("a.b"), mk("a.b + a"), mk("a.b + a")).related &&
                    !ji_param_bisim(mk("a.b"), mk("a.b"), mk("a.b + a")).related;
         }},
        {"larsen-forward-instance", "e <= f implies the param-bisim containment for the pair",
         [] {
             Universe u = build_universe({{"a", "b"}, 3, 0, false});
             UniverseRelations rels(u, {{"a.b", detail::mk("a.b")},
                                        {"a.b + a", detail::mk("a.b + a")}});
             return rels.env_sim_leq(0, 1) &&
                    rels.discriminates_leq(RelationMode::ParamBisim, 0, 1);
         }},
    };
    return cases;
}

inline int cmd_examples(const std::string& only, bool json, std::ostream& out) {
    OrderedJson rows = OrderedJson::array();
    bool all_pass = true;
    std::size_t width = 0;
    for (const auto& c : example_registry())
        if (only.empty() || c.name.find(only) != std::string::npos)
            width = std::max(width, c.name.size());
    bool any = false;
    for (const auto& c : example_registry()) {
        if (!only.empty() && c.name.find(only) == std::string::npos) continue;
        any = true;
        const bool pass = c.run();
        all_pass = all_pass && pass;
        if (json) {
            rows.push_back({{"name", c.name}, {"pass", pass}, {"description", c.description}});
        } else {
            out << (pass ? "[pass] " : "[FAIL] ") << c.name
                << std::string(width - c.name.size() + 2, ' ') << c.description << "\n";
        }
    }
    if (json) {
        OrderedJson j;
        j["cases"] = std::move(rows);
        j["all_pass"] = all_pass;
        out << j.dump(2) << "\n";
    } else if (!any) {
        out << "no registered example matches '" << only << "'\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}

struct ExperimentOptions {
    std::string suite;
    std::vector<std::string> alphabet{"a", "b"};
    int size = 4;
    int join_rounds = -1;     // -1: suite default
    int universal = -1;       // -1: suite default
    std::string out_file;
    bool json = false;
};

inline int cmd_experiment(const ExperimentOptions& opt, std::ostream& out, std::ostream& err) {
    const std::size_t budget = state_budget_from_env();
    UniverseParams params;
    params.alphabet = opt.alphabet;
    params.max_term_size = opt.size;
    const bool theorem_suite = opt.suite == "jisim-theorem";
    params.join_rounds = opt.join_rounds >= 0 ? opt.join_rounds : (theorem_suite ? 1 : 0);
    params.include_universal = opt.universal >= 0 ? opt.universal != 0 : theorem_suite;

    const Universe universe = build_universe(params, budget);
    DiscriminationReport report;
    if (opt.suite == "larsen-forward") {
        report = check_larsen_forward(universe, {}, budget);
    } else if (opt.suite == "jisim-theorem") {
        report = check_jisim_theorem(universe, {}, budget);
    } else if (opt.suite == "lemma-aux1") {
        report = check_lemma_aux1(universe.members, params, budget);
    } else if (opt.suite == "p2-search") {
        report = search_open_problem_p2(universe, {}, budget);
    } else {
        err << "error: unknown suite '" << opt.suite << "'\n";
        return 2;
    }

    const OrderedJson j = report_to_json(report);
    if (!opt.out_file.empty()) {
        std::ofstream f(opt.out_file);
        if (!f) {
            err << "error: cannot write " << opt.out_file << "\n";
            return 2;
        }
        f << j.dump(2) << "\n";
    }
    if (opt.json) {
        out << j.dump(2) << "\n";
    } else {
        out << "suite: " << report.suite << "\n";
        out << "universe: " << universe.size() << " processes (size <= " << params.max_term_size
            << ", join rounds " << params.join_rounds
            << (params.include_universal ? ", universal included" : "") << ")\n";
        out << "pairs checked: " << report.pairs.size() << "\n";
        for (const auto& v : report.violations) out << "violation: " << v << "\n";
        for (const auto& f : report.findings) out << "finding: " << f << "\n";
        out << (report.ok() ? "OK" : "VIOLATIONS FOUND") << "\n";
    }
    return report.ok() ? 0 : 1;
}

struct ExportOptions {
    std::string term;
    std::string env;
    std::string product; // "", "join", "joindot"
    bool dot = false;
    bool json = false;
    std::string out_file;
};

inline int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream& err) {
    const std::size_t budget = state_budget_from_env();
    const Process base = compile_arg(opt.term, budget);

    Lts lts = base.lts;
    StateId root = base.root;
    if (!opt.product.empty()) {
        if (opt.env.empty()) {
            err << "error: --product requires --env\n";
            return 2;
        }
        const Process env = compile_arg(opt.env, budget);
        if (opt.product == "join") {
            JoinProduct p = join_product(base.lts, {base.root}, env.lts, env.root, budget);
            lts = p.lts;
            root = p.roots[0];
        } else if (opt.product == "joindot") {
            JoindotProduct p =
                joindot_product(base.lts, {base.root}, env.lts, env.root, budget);
            lts = p.lts;
            root = p.roots[0];
        } else {
            err << "error: unknown product '" << opt.product << "'\n";
            return 2;
        }
    }

    std::string payload;
    if (opt.json && !opt.dot)
        payload = lts_to_json(lts).dump(2) + "\n";
    else
        payload = to_dot(lts, root);

    if (!opt.out_file.empty()) {
        std::ofstream f(opt.out_file);
        if (!f) {
            err << "error: cannot write " << opt.out_file << "\n";
            return 2;
        }
        f << payload;
    } else {
        out << payload;
    }
    return 0;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"behavioral relation checker for finite labeled transition systems"};
    app.require_subcommand(1);

    CheckOptions check;
    CLI::App* c = app.add_subcommand("check", "decide a behavioral relation between two terms");
    c->add_option("--rel", check.relation, "relation: bisim|sim|param-bisim|param-sim|ji-bisim|ji-sim|ji-simeq")
        ->required();
    c->add_option("left", check.left, "left process term (inline or file)")->required();
    c->add_option("right", check.right, "right process term (inline or file)")->required();
    c->add_option("--env", check.env, "environment term (inline or file)");
    c->add_flag("--explain", check.explain, "attach a witness to negative verdicts");
    c->add_flag("--json", check.json, "machine-readable output");

    std::string eval_term, eval_formula;
    bool eval_json = false;
    CLI::App* ev = app.add_subcommand("eval", "evaluate a modal formula on a term");
    ev->add_option("term", eval_term, "process term (inline or file)")->required();
    ev->add_option("formula", eval_formula, "formula, e.g. \"<a>!<b>T\"")->required();
    ev->add_flag("--json", eval_json, "machine-readable output");

    std::string only;
    bool examples_json = false;
    CLI::App* ex = app.add_subcommand("examples", "replay the registered golden examples");
    ex->add_option("--only", only, "run only examples whose name contains this substring");
    ex->add_flag("--json", examples_json, "machine-readable output");

    ExperimentOptions exp;
    CLI::App* xp = app.add_subcommand("experiment", "run a theorem-check suite on an enumerated universe");
    xp->add_option("--suite", exp.suite, "larsen-forward|jisim-theorem|lemma-aux1|p2-search")
        ->required();
    xp->add_option("--alphabet", exp.alphabet, "comma-separated actions")->delimiter(',');
    xp->add_option("--size", exp.size, "maximum term size for the universe");
    xp->add_option("--join-rounds", exp.join_rounds, "join closure rounds (suite default otherwise)");
    xp->add_flag("--universal,!--no-universal", exp.universal, "include the universal process");
    xp->add_option("--out", exp.out_file, "write the JSON report to a file");
    xp->add_flag("--json", exp.json, "print the JSON report");

    ExportOptions xo;
    CLI::App* xport = app.add_subcommand("export", "export a system (or a product) as DOT or JSON");
    xport->add_option("term", xo.term, "process term (inline or file)")->required();
    xport->add_option("--env", xo.env, "environment term for --product");
    xport->add_option("--product", xo.product, "join|joindot");
    xport->add_flag("--dot", xo.dot, "GraphViz output (default)");
    xport->add_flag("--json", xo.json, "JSON output");
    xport->add_option("--out", xo.out_file, "write to a file instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("jibisim");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*c) return cmd_check(check, out, err);
        if (*ev) return cmd_eval(eval_term, eval_formula, eval_json, out);
        if (*ex) return cmd_examples(only, examples_json, out);
        if (*xp) return cmd_experiment(exp, out, err);
        if (*xport) return cmd_export(xo, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace jibisim::cli
