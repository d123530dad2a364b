#include "jibisim/equivalence.hpp"
#include "jibisim/interaction.hpp"
#include "jibisim/modal_checks.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace jibisim;
using jibisim::testing::proc;

TEST_CASE("satisfaction on the running examples", "[modal]") {
    const Process ab = proc("a.b");
    REQUIRE(satisfies(ab.lts, ab.root, parse_formula("<a><b>T")));
    const Process q = proc("a.b + a");
    REQUIRE(satisfies(q.lts, q.root, parse_formula("<a>!<b>T")));
    const Process nil = proc("0");
    REQUIRE(satisfies(nil.lts, nil.root, parse_formula("!<a>T")));

    // unknown actions are never enabled
    REQUIRE_FALSE(satisfies(ab.lts, ab.root, parse_formula("<zz>T")));
    REQUIRE(satisfies(ab.lts, ab.root, parse_formula("!<zz>T")));
}

TEST_CASE("formula text syntax round-trips", "[modal]") {
    for (const char* text : {"T", "<a>T", "!<a>!<b>T", "<a>T & <b>T", "<a>(<a>T & <b>T)",
                             "!(<a>T & <b>T)", "<a@b>T"}) {
        const Formula f = parse_formula(text);
        REQUIRE(parse_formula(f.to_string()) == f);
    }
    REQUIRE(parse_formula("(<a>T)").to_string() == "<a>T");
    REQUIRE(parse_formula("<b>T & <a>T").to_string() == "<a>T & <b>T"); // canonical order
    REQUIRE(parse_formula("<a>T & <a>T").to_string() == "<a>T");        // duplicates collapse
    REQUIRE_THROWS_AS(parse_formula("<a>"), ParseError);
    REQUIRE_THROWS_AS(parse_formula("x"), ParseError);
}

TEST_CASE("positive projection erases negations", "[modal]") {
    REQUIRE(positive_projection(parse_formula("!<a>!<b>T")) == parse_formula("<a><b>T"));
    REQUIRE(positive_projection(parse_formula("<a>T")) == parse_formula("<a>T"));
    REQUIRE(positive_projection(Formula::top()) == Formula::top());

    for (const Formula& base : enumerate_positive({"a", "b"}, 2, 2))
        for (const Formula& f : enumerate_negclosure(base)) {
            const Formula once = positive_projection(f);
            REQUIRE(once.is_positive());
            REQUIRE(positive_projection(once) == once); // idempotent
            REQUIRE(in_negation_closure(f, once));
        }
}

TEST_CASE("negation closure membership", "[modal]") {
    REQUIRE(in_negation_closure(parse_formula("!<a>T"), parse_formula("<a>T")));
    REQUIRE_FALSE(in_negation_closure(parse_formula("<a>T"), parse_formula("<b>T")));
    REQUIRE(in_negation_closure(parse_formula("!<a>!<b>T"), parse_formula("<a><b>T")));
}

TEST_CASE("positive formula enumeration matches independent counts", "[modal]") {
    const auto d0 = enumerate_positive({"a"}, 0, 1);
    REQUIRE(d0.size() == 1);
    REQUIRE(d0[0] == Formula::top());

    const auto d1 = enumerate_positive({"a"}, 1, 1);
    REQUIRE(d1.size() == 2);
    REQUIRE(d1[1] == parse_formula("<a>T"));

    // frozen by tests/oracles/count_formulas.py
    REQUIRE(enumerate_positive({"a", "b"}, 1, 2).size() == 6);
    REQUIRE(enumerate_positive({"a", "b"}, 2, 2).size() == 91);
    REQUIRE(enumerate_positive({"a"}, 2, 2).size() == 10);

    const auto all = enumerate_positive({"a", "b"}, 2, 2);
    std::set<std::string> seen;
    for (const auto& f : all) {
        REQUIRE(f.is_positive());
        REQUIRE(f.modal_depth() <= 2);
        REQUIRE(seen.insert(f.to_string()).second);
    }
    REQUIRE(all == enumerate_positive({"a", "b"}, 2, 2));
}

TEST_CASE("negation closure enumeration covers every decoration", "[modal]") {
    const auto top = enumerate_negclosure(Formula::top());
    REQUIRE(top.size() == 2);

    const auto one = enumerate_negclosure(parse_formula("<a>T"));
    REQUIRE(one.size() == 4);
    std::set<std::string> texts;
    for (const auto& f : one) texts.insert(f.to_string());
    REQUIRE(texts == std::set<std::string>{"<a>T", "!<a>T", "<a>!T", "!<a>!T"});

    REQUIRE(enumerate_negclosure(parse_formula("<a><b>T")).size() == 8);
    for (const auto& f : enumerate_negclosure(parse_formula("<a><b>T")))
        REQUIRE(positive_projection(f) == parse_formula("<a><b>T"));
}

TEST_CASE("act projection drops environment targets", "[modal]") {
    REQUIRE(act_project(parse_formula("<a@b>T")) == parse_formula("<a>T"));
    REQUIRE(act_project(Formula::top()) == Formula::top());

    // a distinguishing formula of the right-determinized products projects
    // to a formula of the left process within the environment's closure
    const Process p = proc("a.b"), q = proc("a.b + a"), e = proc("a.b + a");
    const auto u = detail::unite(p, q);
    const JoindotProduct prod = joindot_product(u.proc, {u.p, u.q}, e.lts, e.root);
    const Formula f = distinguish_bisim(prod.lts, prod.roots[0], prod.lts, prod.roots[1]);
    REQUIRE(satisfies(prod.lts, prod.roots[0], f));
    REQUIRE_FALSE(satisfies(prod.lts, prod.roots[1], f));
    const Formula plain = act_project(f);
    REQUIRE(satisfies(p.lts, p.root, plain));
    REQUIRE(satisfies(e.lts, e.root, positive_projection(plain)));
}

TEST_CASE("paramsim characterization check", "[modal]") {
    const ConsistencyReport fig1 =
        check_char_paramsim(proc("a.b"), proc("a.b + a"), proc("a.b + a"), 3, 2);
    REQUIRE(fig1.relation_holds);
    REQUIRE(fig1.consistent());
    REQUIRE(fig1.conclusive);

    const ConsistencyReport simple = check_char_paramsim(proc("a"), proc("a"), proc("0"), 2, 2);
    REQUIRE_FALSE(simple.relation_holds);
    REQUIRE(simple.distinguishing);
    REQUIRE(simple.distinguishing->to_string() == "<a>T");
    REQUIRE(simple.witness);

    const ConsistencyReport ab = check_char_paramsim(proc("a.b"), proc("a.b"), proc("a"), 2, 2);
    REQUIRE_FALSE(ab.relation_holds);
    REQUIRE(ab.distinguishing->to_string() == "<a><b>T");
}

TEST_CASE("paramsim witness formulas verify their membership triple", "[modal]") {
    REQUIRE(witness_formula_paramsim(proc("a"), proc("a"), proc("0")).to_string() == "<a>T");
    REQUIRE(witness_formula_paramsim(proc("a.b"), proc("a.b"), proc("a")).to_string() ==
            "<a><b>T");
    // this triple is related, so no witness exists
    REQUIRE_THROWS_AS(witness_formula_paramsim(proc("a.b + a"), proc("a.b + a"), proc("a.b")),
                      ContractError);
}

TEST_CASE("parambisim characterization check", "[modal]") {
    const ConsistencyReport fig1 =
        check_char_parambisim(proc("a.b"), proc("a.b + a"), proc("a.b + a"), 2, 2);
    REQUIRE_FALSE(fig1.relation_holds);
    REQUIRE(fig1.distinguishing);
    REQUIRE(fig1.distinguishing->modal_depth() <= 2);

    const ConsistencyReport same =
        check_char_parambisim(proc("a.b + a"), proc("a.b + a"), proc("a.b + a"), 2, 2);
    REQUIRE(same.relation_holds);
    REQUIRE(same.consistent());

    const ConsistencyReport b0 = check_char_parambisim(proc("b"), proc("b"), proc("0"), 2, 2);
    REQUIRE_FALSE(b0.relation_holds);
    REQUIRE(b0.distinguishing->to_string() == "<b>T");
}

TEST_CASE("join products satisfy exactly the common positive formulas", "[modal]") {
    const auto procs = jibisim::testing::compiled_universe_terms(2);
    const auto formulas = enumerate_positive({"a", "b"}, 2, 2);
    for (const auto& p : procs)
        for (const auto& q : procs) {
            const JoinProduct pq = join_product(p, q);
            SatisfactionCache sat_pq(pq.lts), sat_p(p.lts), sat_q(q.lts);
            for (const Formula& f : formulas)
                REQUIRE(sat_pq.satisfies(pq.roots[0], f) ==
                        (sat_p.satisfies(p.root, f) && sat_q.satisfies(q.root, f)));
        }
}

TEST_CASE("modal characterizations are sound on enumerated pairs", "[modal]") {
    const auto procs = jibisim::testing::compiled_universe_terms(3);
    const auto bases = enumerate_positive({"a", "b"}, 2, 2);
    for (const auto& l : procs) {
        for (const auto& r : procs) {
            const bool bisim = bisimilarity(l.lts, r.lts).contains(l.root, r.root);
            const bool sim = simulation_preorder(l.lts, r.lts).contains(l.root, r.root);
            SatisfactionCache sat_l(l.lts), sat_r(r.lts);
            for (const Formula& base : bases) {
                if (sim)
                    REQUIRE((!sat_l.satisfies(l.root, base) || sat_r.satisfies(r.root, base)));
                if (bisim)
                    for (const Formula& f : enumerate_negclosure(base))
                        REQUIRE(sat_l.satisfies(l.root, f) == sat_r.satisfies(r.root, f));
            }
        }
    }
}
