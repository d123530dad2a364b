#include "jibisim/equivalence.hpp"
#include "jibisim/interaction.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace jibisim;
using jibisim::testing::proc;

namespace {

bool bisim_roots(const Process& l, const Process& r) {
    return bisimilarity(l.lts, r.lts).contains(l.root, r.root);
}

bool sim_roots(const Process& l, const Process& r) {
    return simulation_preorder(l.lts, r.lts).contains(l.root, r.root);
}

Lts random_lts(std::mt19937& rng, int max_states, int max_actions) {
    std::uniform_int_distribution<int> nstates(1, max_states);
    std::uniform_int_distribution<int> nactions(1, max_actions);
    const int n = nstates(rng);
    const int k = nactions(rng);
    Alphabet alphabet;
    for (int a = 0; a < k; ++a) alphabet.intern(std::string(1, static_cast<char>('a' + a)));
    std::vector<std::string> labels;
    for (int s = 0; s < n; ++s) labels.push_back("s" + std::to_string(s));
    std::vector<Transition> ts;
    std::uniform_int_distribution<int> out_degree(0, 3);
    std::uniform_int_distribution<int> target(0, n - 1);
    for (StateId s = 0; s < static_cast<StateId>(n); ++s)
        for (ActionId a = 0; a < static_cast<ActionId>(k); ++a) {
            const int d = out_degree(rng);
            for (int i = 0; i < d; ++i)
                ts.push_back({s, a, static_cast<StateId>(target(rng))});
        }
    return Lts(std::move(alphabet), std::move(labels), std::move(ts));
}

} // namespace

TEST_CASE("bisimilarity on the running examples", "[equivalence]") {
    REQUIRE(bisim_roots(proc("a.b + a"), proc("a.b + a")));

    const JoinProduct pe = join_product(proc("a.b"), proc("a.b + a"));
    const JoinProduct qe = join_product(proc("a.b + a"), proc("a.b + a"));
    REQUIRE(bisimilarity(pe.lts, qe.lts).contains(pe.roots[0], qe.roots[0]));

    REQUIRE_FALSE(bisim_roots(proc("a.b"), proc("a.b + a")));
}

TEST_CASE("simulation preorder on the running examples", "[equivalence]") {
    REQUIRE(sim_roots(proc("a.b"), proc("a.b + a")));
    REQUIRE(sim_roots(proc("a.b + a"), proc("a.b"))); // both a-branches embed
    for (const char* t : {"0", "a.b", "a.b + a"}) REQUIRE(sim_roots(proc("0"), proc(t)));
    REQUIRE_FALSE(sim_roots(proc("a"), proc("b")));
}

TEST_CASE("computed relations have the advertised structure", "[equivalence]") {
    const Process q = proc("a.b + a + b.a");
    const Relation bisim = bisimilarity(q.lts, q.lts);
    REQUIRE(bisim.is_equivalence());
    const Relation sim = simulation_preorder(q.lts, q.lts);
    REQUIRE(sim.is_preorder());

    // bisimilarity refines mutual similarity
    const Relation mutual = [&] {
        Relation out(sim.left_size(), sim.right_size());
        for (StateId s = 0; s < sim.left_size(); ++s)
            for (StateId t = 0; t < sim.right_size(); ++t)
                if (sim.contains(s, t) && sim.contains(t, s)) out.insert(s, t);
        return out;
    }();
    REQUIRE(bisim.subset_of(mutual));
}

TEST_CASE("on deterministic roots, bisimilarity equals mutual similarity", "[equivalence]") {
    const auto procs = jibisim::testing::compiled_universe_terms(4);
    for (const auto& l : procs) {
        if (!l.lts.is_deterministic(l.root)) continue;
        for (const auto& r : procs) {
            if (!r.lts.is_deterministic(r.root)) continue;
            const bool mutual = sim_roots(l, r) && sim_roots(r, l);
            REQUIRE(bisim_roots(l, r) == mutual);
        }
    }
}

TEST_CASE("partition refinement agrees with the naive fixpoint", "[equivalence]") {
    REQUIRE(bisimilarity_pr(proc("a.b").lts, proc("a.b + a").lts) ==
            bisimilarity(proc("a.b").lts, proc("a.b + a").lts));

    const Process dead = proc("0");
    REQUIRE(bisimilarity_pr(dead.lts, dead.lts).contains(0, 0));

    std::mt19937 rng(7);
    for (int i = 0; i < 25; ++i) {
        const Lts l = random_lts(rng, 12, 3);
        const Lts r = random_lts(rng, 12, 3);
        REQUIRE(bisimilarity_pr(l, r) == bisimilarity(l, r));
    }
}

TEST_CASE("quotient preserves behavior", "[equivalence]") {
    const Process p = proc("a.b + a.b + a");
    const Process q = quotient_reachable(p.lts, p.root);
    REQUIRE(q.lts.num_states() <= p.lts.num_states());
    REQUIRE(bisim_roots(p, q));
}

TEST_CASE("distinguishing formulas for bisimilarity failures", "[equivalence]") {
    const Process p = proc("a.b");
    const Process q = proc("a.b + a");
    const Formula f = distinguish_bisim(p.lts, p.root, q.lts, q.root);
    REQUIRE(f.to_string() == "!<a>!<b>T");
    REQUIRE(f.modal_depth() == 2);
    REQUIRE(satisfies(p.lts, p.root, f));
    REQUIRE_FALSE(satisfies(q.lts, q.root, f));

    REQUIRE(distinguish_bisim(proc("a").lts, 0, proc("0").lts, 0).to_string() == "<a>T");
    REQUIRE(distinguish_bisim(proc("0").lts, 0, proc("a").lts, 0).to_string() == "!<a>T");

    REQUIRE_THROWS_AS(distinguish_bisim(p.lts, p.root, p.lts, p.root), ContractError);
}

TEST_CASE("distinguishing formulas for simulation failures", "[equivalence]") {
    REQUIRE(distinguish_sim(proc("a.b").lts, 0, proc("a").lts, 0).to_string() == "<a><b>T");
    const Process pq = proc("a.b + a");
    const Formula f = distinguish_sim(pq.lts, pq.root, proc("a").lts, 0);
    REQUIRE(f.to_string() == "<a><b>T");
    REQUIRE(f.is_positive());
    REQUIRE(distinguish_sim(proc("a").lts, 0, proc("0").lts, 0).to_string() == "<a>T");

    REQUIRE_THROWS_AS(distinguish_sim(proc("0").lts, 0, proc("a").lts, 0), ContractError);
}

TEST_CASE("distinguishing formulas split membership on enumerated pairs", "[equivalence]") {
    const auto procs = jibisim::testing::compiled_universe_terms(4);
    const Relation empty{};
    for (const auto& l : procs) {
        for (const auto& r : procs) {
            const Relation bisim = bisimilarity(l.lts, r.lts);
            if (!bisim.contains(l.root, r.root)) {
                const Formula f = distinguish_bisim(l.lts, l.root, r.lts, r.root);
                REQUIRE(satisfies(l.lts, l.root, f));
                REQUIRE_FALSE(satisfies(r.lts, r.root, f));
            }
            const Relation sim = simulation_preorder(l.lts, r.lts);
            if (!sim.contains(l.root, r.root)) {
                const Formula f = distinguish_sim(l.lts, l.root, r.lts, r.root);
                REQUIRE(f.is_positive());
                REQUIRE(satisfies(l.lts, l.root, f));
                REQUIRE_FALSE(satisfies(r.lts, r.root, f));
            }
        }
    }
}

TEST_CASE("distinguishing depth matches the approximant level", "[equivalence]") {
    const auto procs = jibisim::testing::compiled_universe_terms(3);
    for (const auto& l : procs) {
        for (const auto& r : procs) {
            if (bisimilarity(l.lts, r.lts).contains(l.root, r.root)) continue;
            int k = 0;
            while (bisim_approximant(l.lts, r.lts, k + 1).contains(l.root, r.root)) ++k;
            // related at depth k, refuted at depth k + 1
            const Formula f = distinguish_bisim(l.lts, l.root, r.lts, r.root);
            REQUIRE(f.modal_depth() == k + 1);
            const std::size_t bound = l.lts.num_states() * r.lts.num_states();
            REQUIRE(static_cast<std::size_t>(f.modal_depth()) <= bound);
        }
    }
}
