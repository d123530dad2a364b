#include "jibisim/discrimination.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace jibisim;
using jibisim::testing::proc;

namespace {

bool has_member_bisimilar_to(const Universe& u, const Process& p) {
    for (const auto& m : u.members)
        if (roots_bisimilar(m.proc, p)) return true;
    return false;
}

} // namespace

TEST_CASE("build_universe produces deduplicated, stable universes", "[discrimination]") {
    const Universe tiny = build_universe({{"a"}, 2, 0, false});
    REQUIRE(tiny.size() == 2);
    REQUIRE(tiny.members[0].name == "0");
    REQUIRE(tiny.members[1].name == "a");

    const Universe u = build_universe({{"a", "b"}, 4, 0, true});
    for (const char* t : {"0", "b", "a.b", "a.b + a"})
        REQUIRE(has_member_bisimilar_to(u, proc(t)));
    REQUIRE(has_member_bisimilar_to(u, universal_process(Alphabet({"a", "b"}))));

    // no two members bisimilar
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
            REQUIRE_FALSE(roots_bisimilar(u.members[i].proc, u.members[j].proc));

    // regeneration is stable
    const Universe again = build_universe({{"a", "b"}, 4, 0, true});
    REQUIRE(again.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        REQUIRE(again.members[i].name == u.members[i].name);
}

TEST_CASE("join closure adds nothing over a saturated single-action universe",
          "[discrimination]") {
    const Universe base = build_universe({{"a"}, 3, 0, true});
    const Universe closed = build_universe({{"a"}, 3, 1, true});
    REQUIRE(base.size() == closed.size());
}

TEST_CASE("discriminates_leq on the registered environments", "[discrimination]") {
    const Universe u = build_universe({{"a", "b"}, 4, 0, false});
    UniverseRelations rels(u, {{"e", proc("a.b")}, {"f", proc("a.b + a")}});

    REQUIRE(rels.env_sim_leq(0, 1));
    REQUIRE(rels.discriminates_leq(RelationMode::ParamBisim, 0, 1));

    REQUIRE_FALSE(rels.discriminates_leq(RelationMode::JiParamBisim, 0, 1));
    const auto witness = rels.containment_witness(RelationMode::JiParamBisim, 0, 1);
    REQUIRE(witness);
    REQUIRE(roots_bisimilar(u.members[witness->first].proc, proc("a.b")));
    REQUIRE(roots_bisimilar(u.members[witness->second].proc, proc("a.b + a")));

    for (const RelationMode mode :
         {RelationMode::ParamBisim, RelationMode::JiParamBisim, RelationMode::JiParamSim,
          RelationMode::JiParamSimEquiv}) {
        REQUIRE(rels.discriminates_leq(mode, 0, 0));
        REQUIRE(rels.discriminates_leq(mode, 1, 1));
    }
}

TEST_CASE("discrimination tables have the advertised relation structure", "[discrimination]") {
    const Universe u = build_universe({{"a", "b"}, 3, 0, false});
    UniverseRelations rels(u, u.members);
    for (std::size_t e = 0; e < u.size(); ++e) {
        REQUIRE(rels.table(RelationMode::JiParamBisim, e).is_equivalence());
        REQUIRE(rels.table(RelationMode::JiParamSimEquiv, e).is_equivalence());
        REQUIRE(rels.table(RelationMode::JiParamSim, e).is_preorder());
        REQUIRE(rels.table(RelationMode::ParamBisim, e).is_equivalence());
    }
}

TEST_CASE("discriminates_leq is itself a preorder over environments", "[discrimination]") {
    const Universe u = build_universe({{"a", "b"}, 3, 0, false});
    UniverseRelations rels(u, u.members);
    const std::size_t n = u.size();
    for (const RelationMode mode : {RelationMode::ParamBisim, RelationMode::JiParamSim}) {
        for (std::size_t e = 0; e < n; ++e) REQUIRE(rels.discriminates_leq(mode, e, e));
        for (std::size_t e = 0; e < n; ++e)
            for (std::size_t f = 0; f < n; ++f)
                for (std::size_t g = 0; g < n; ++g)
                    if (rels.discriminates_leq(mode, e, f) &&
                        rels.discriminates_leq(mode, f, g))
                        REQUIRE(rels.discriminates_leq(mode, e, g));
    }
}

TEST_CASE("larsen forward direction on a small universe", "[discrimination]") {
    const Universe u = build_universe({{"a", "b"}, 3, 0, false});
    const DiscriminationReport report = check_larsen_forward(u);
    REQUIRE(report.ok());
    REQUIRE(report.pairs.size() == u.size() * u.size());
    REQUIRE(report.mode == "parambisim");
}

TEST_CASE("jisim theorem holds in both directions on a closed universe", "[discrimination]") {
    const Universe u = build_universe({{"a", "b"}, 3, 1, true});
    const DiscriminationReport report = check_jisim_theorem(u);
    REQUIRE(report.ok());

    // the f-side relation is not contained in the e-side one when f is more
    // discriminating, witnessed through the universal process machinery
    UniverseRelations rels(u, {{"e", proc("a.b")}, {"f", proc("a.b + a")}});
    REQUIRE(rels.env_sim_leq(0, 1));
    REQUIRE(rels.discriminates_leq(RelationMode::JiParamSim, 0, 1));
    REQUIRE_FALSE(rels.env_sim_leq(1, 0));
    REQUIRE_FALSE(rels.discriminates_leq(RelationMode::JiParamSim, 1, 0));
}

TEST_CASE("lemma aux1 biconditional", "[discrimination]") {
    const std::vector<UniverseMember> envs = {
        {"a.b", proc("a.b")}, {"a.b + a", proc("a.b + a")}, {"a", proc("a")}, {"b", proc("b")}};
    const DiscriminationReport report = check_lemma_aux1(envs);
    REQUIRE(report.ok());

    // spot checks of the two sides
    const Process e = proc("a.b"), f = proc("a.b + a");
    const JoinProduct fe = join_product(f, e);
    REQUIRE(simulation_preorder(e.lts, fe.lts).contains(e.root, fe.roots[0]));
    const Process a = proc("a"), b = proc("b");
    const JoinProduct ba = join_product(b, a);
    REQUIRE_FALSE(simulation_preorder(a.lts, ba.lts).contains(a.root, ba.roots[0]));
}

TEST_CASE("open problem search reports findings without asserting", "[discrimination]") {
    const Universe u = build_universe({{"a", "b"}, 3, 0, false});
    // a.b + a.b is bisimilar to a.b but structurally different
    const std::vector<UniverseMember> envs = {{"e1", proc("a.b")},
                                              {"e2", proc("a.b + a.b")},
                                              {"f", proc("a.b + a")}};
    const DiscriminationReport report = search_open_problem_p2(u, envs);
    REQUIRE(report.suite == "p2-search");
    REQUIRE(report.violations.empty()); // never asserts

    bool saw_bisimilar_pair = false;
    for (const auto& row : report.pairs) {
        if (row.e == "e1" && row.f == "e2") {
            saw_bisimilar_pair = true;
            REQUIRE(row.sim_leq);   // bisimilar environments
            REQUIRE(row.discr_leq); // identical relations over the universe
        }
        if (row.e == "e1" && row.f == "f") REQUIRE_FALSE(row.discr_leq);
    }
    REQUIRE(saw_bisimilar_pair);
    REQUIRE(report.findings.empty());
}

TEST_CASE("universe growth only shrinks discrimination containments", "[discrimination]") {
    const Universe small = build_universe({{"a", "b"}, 3, 0, false});
    const Universe large = build_universe({{"a", "b"}, 4, 0, false});
    const std::vector<UniverseMember> envs = {{"e", proc("a.b")},
                                              {"f", proc("a.b + a")},
                                              {"g", proc("a + b")},
                                              {"h", proc("b.a")}};
    UniverseRelations rs(small, envs), rl(large, envs);
    for (const RelationMode mode : {RelationMode::ParamBisim, RelationMode::JiParamBisim}) {
        for (std::size_t e = 0; e < envs.size(); ++e)
            for (std::size_t f = 0; f < envs.size(); ++f)
                if (rl.discriminates_leq(mode, e, f))
                    REQUIRE(rs.discriminates_leq(mode, e, f));
    }
}
