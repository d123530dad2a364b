#pragma once

#include "jibisim/compiler.hpp"
#include "jibisim/equivalence.hpp"
#include "jibisim/interaction.hpp"
#include "jibisim/parameterized.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jibisim {

struct UniverseParams {
    std::vector<std::string> alphabet;
    int max_term_size = 4;
    int join_rounds = 0;
    bool include_universal = false;
};

struct UniverseMember {
    std::string name;
    Process proc;
};

/// A finite collection of pairwise non-bisimilar processes, stable across
/// regeneration with the same parameters. Members are stored as quotients,
/// which changes none of the relations computed over them.
struct Universe {
    UniverseParams params;
    std::vector<UniverseMember> members;

    std::size_t size() const { return members.size(); }
};

inline Universe build_universe(const UniverseParams& params,
                               std::size_t budget = kDefaultStateBudget) {
    Universe u;
    u.params = params;
    const Alphabet alphabet(params.alphabet);

    auto add_if_fresh = [&](std::string name, Process proc) {
        for (const auto& m : u.members)
            if (roots_bisimilar(m.proc, proc)) return false;
        u.members.push_back({std::move(name), std::move(proc)});
        return true;
    };

    for (const ProcessTerm& t : enumerate_terms(params.alphabet, params.max_term_size)) {
        Process compiled = compile(t, {}, alphabet, budget);
        add_if_fresh(t.to_string(), quotient_reachable(compiled.lts, compiled.root));
    }
    if (params.include_universal) add_if_fresh("U", universal_process(alphabet));

    for (int round = 0; round < params.join_rounds; ++round) {
        const std::size_t before = u.members.size();
        for (std::size_t i = 0; i < before; ++i) {
            for (std::size_t j = i; j < before; ++j) {
                JoinProduct prod = join_product(u.members[i].proc, u.members[j].proc, budget);
                add_if_fresh(u.members[i].name + " & " + u.members[j].name,
                             quotient_reachable(prod.lts, prod.roots[0]));
            }
        }
    }
    return u;
}

enum class RelationMode { ParamBisim, JiParamBisim, JiParamSim, JiParamSimEquiv, CanJiParamSim };

inline std::string to_string(RelationMode mode) {
    switch (mode) {
    case RelationMode::ParamBisim: return "parambisim";
    case RelationMode::JiParamBisim: return "jiparambisim";
    case RelationMode::JiParamSim: return "jiparamsim";
    case RelationMode::JiParamSimEquiv: return "jiparamsimequiv";
    case RelationMode::CanJiParamSim: return "canjiparamsim";
    }
    return "?";
}

inline std::optional<RelationMode> relation_mode_from_string(const std::string& s) {
    if (s == "parambisim") return RelationMode::ParamBisim;
    if (s == "jiparambisim") return RelationMode::JiParamBisim;
    if (s == "jiparamsim") return RelationMode::JiParamSim;
    if (s == "jiparamsimequiv") return RelationMode::JiParamSimEquiv;
    if (s == "canjiparamsim") return RelationMode::CanJiParamSim;
    return std::nullopt;
}

/// Caches, per environment, the relation over all universe members. All
/// members are laid side by side in one system, so one fixpoint per
/// environment covers every ordered pair at once.
class UniverseRelations {
public:
    UniverseRelations(const Universe& universe, std::vector<UniverseMember> envs,
                      std::size_t budget = kDefaultStateBudget)
        : universe_(universe), envs_(std::move(envs)), budget_(budget) {
        if (universe.members.empty()) throw InputError("empty universe");
        Lts united = universe.members.front().proc.lts;
        roots_.push_back(universe.members.front().proc.root);
        for (std::size_t i = 1; i < universe.members.size(); ++i) {
            auto [next, offset] = disjoint_union(united, universe.members[i].proc.lts);
            united = std::move(next);
            roots_.push_back(universe.members[i].proc.root + offset);
        }
        united_ = std::make_unique<Lts>(std::move(united));
    }

    const Universe& universe() const { return universe_; }
    const std::vector<UniverseMember>& envs() const { return envs_; }

    /// rel(i, j) over member indices for the given mode and environment.
    const Relation& table(RelationMode mode, std::size_t env_idx) {
        const auto key = std::make_pair(mode, env_idx);
        if (auto it = tables_.find(key); it != tables_.end()) return it->second;
        Relation t = compute_table(mode, env_idx);
        return tables_.emplace(key, std::move(t)).first->second;
    }

    /// e is at most as discriminating as f: every pair f relates, e relates
    /// (equivalently, pairs distinguished by e are distinguished by f).
    bool discriminates_leq(RelationMode mode, std::size_t e_idx, std::size_t f_idx) {
        return table(mode, f_idx).subset_of(table(mode, e_idx));
    }

    /// First member pair related under f's relation but not under e's.
    std::optional<std::pair<std::size_t, std::size_t>>
    containment_witness(RelationMode mode, std::size_t e_idx, std::size_t f_idx) {
        const Relation& re = table(mode, e_idx);
        const Relation& rf = table(mode, f_idx);
        for (std::size_t i = 0; i < universe_.size(); ++i)
            for (std::size_t j = 0; j < universe_.size(); ++j)
                if (rf.contains(i, j) && !re.contains(i, j)) return std::make_pair(i, j);
        return std::nullopt;
    }

    /// Simulation preorder between environment entries.
    bool env_sim_leq(std::size_t e_idx, std::size_t f_idx) {
        const auto key = std::make_pair(e_idx, f_idx);
        if (auto it = env_sim_.find(key); it != env_sim_.end()) return it->second;
        const bool leq = simulation_preorder(envs_[e_idx].proc.lts, envs_[f_idx].proc.lts)
                             .contains(envs_[e_idx].proc.root, envs_[f_idx].proc.root);
        env_sim_.emplace(key, leq);
        return leq;
    }

    bool env_bisim(std::size_t e_idx, std::size_t f_idx) {
        return roots_bisimilar(envs_[e_idx].proc, envs_[f_idx].proc);
    }

private:
    Relation extract_roots(const Relation& full, const std::vector<StateId>& roots) const {
        Relation out(roots.size(), roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i)
            for (std::size_t j = 0; j < roots.size(); ++j)
                if (full.contains(roots[i], roots[j])) out.insert(i, j);
        return out;
    }

    Relation compute_table(RelationMode mode, std::size_t env_idx) {
        const Process& env = envs_[env_idx].proc;
        switch (mode) {
        case RelationMode::JiParamSim: {
            const JoinProduct prod =
                join_product(*united_, roots_, env.lts, env.root, budget_);
            return extract_roots(simulation_preorder(prod.lts, prod.lts), prod.roots);
        }
        case RelationMode::JiParamBisim: {
            const JoinProduct prod =
                join_product(*united_, roots_, env.lts, env.root, budget_);
            return extract_roots(bisimilarity(prod.lts, prod.lts), prod.roots);
        }
        case RelationMode::JiParamSimEquiv: {
            const Relation& sim = table(RelationMode::JiParamSim, env_idx);
            Relation out(sim.left_size(), sim.right_size());
            for (std::size_t i = 0; i < sim.left_size(); ++i)
                for (std::size_t j = 0; j < sim.right_size(); ++j)
                    if (sim.contains(i, j) && sim.contains(j, i)) out.insert(i, j);
            return out;
        }
        case RelationMode::CanJiParamSim:
            return table(RelationMode::JiParamSim, env_idx).converse();
        case RelationMode::ParamBisim: {
            const Alphabet shared = union_alphabet(united_->alphabet(), env.lts.alphabet());
            const Lts proc = reinterned(*united_, shared);
            const Lts envl = reinterned(env.lts, shared);
            const IndexedFamily family =
                detail::family_fixpoint(proc, envl, ParamMode::Bisim);
            return extract_roots(family.components[env.root], roots_);
        }
        }
        throw ContractError("unreachable relation mode");
    }

    const Universe& universe_;
    std::vector<UniverseMember> envs_;
    std::size_t budget_;
    std::unique_ptr<Lts> united_;
    std::vector<StateId> roots_;
    std::map<std::pair<RelationMode, std::size_t>, Relation> tables_;
    std::map<std::pair<std::size_t, std::size_t>, bool> env_sim_;
};

struct PairFinding {
    std::string e, f;
    bool sim_leq = false;
    bool discr_leq = false;
    std::optional<std::string> witness;
};

struct DiscriminationReport {
    std::string suite;
    std::string mode;
    UniverseParams params;
    std::vector<PairFinding> pairs;
    std::vector<std::string> violations;
    std::vector<std::string> findings;

    bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::vector<UniverseMember> default_envs(const Universe& u) { return u.members; }

inline std::string pair_name(const UniverseRelations& rels,
                             std::pair<std::size_t, std::size_t> w) {
    return "(" + rels.universe().members[w.first].name + ", " +
           rels.universe().members[w.second].name + ")";
}

} // namespace detail

/// The one-sided discrimination theorem for parameterized bisimilarity:
/// whenever e is simulatable by f, f discriminates at least as much. The
/// converse is only reported, never asserted: small universes can satisfy
/// containments spuriously.
inline DiscriminationReport check_larsen_forward(const Universe& universe,
                                                 std::vector<UniverseMember> envs = {},
                                                 std::size_t budget = kDefaultStateBudget) {
    if (envs.empty()) envs = detail::default_envs(universe);
    UniverseRelations rels(universe, std::move(envs), budget);

    DiscriminationReport report;
    report.suite = "larsen-forward";
    report.mode = to_string(RelationMode::ParamBisim);
    report.params = universe.params;
    const std::size_t n = rels.envs().size();
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t f = 0; f < n; ++f) {
            PairFinding row;
            row.e = rels.envs()[e].name;
            row.f = rels.envs()[f].name;
            row.sim_leq = rels.env_sim_leq(e, f);
            row.discr_leq = rels.discriminates_leq(RelationMode::ParamBisim, e, f);
            if (!row.discr_leq)
                if (auto w = rels.containment_witness(RelationMode::ParamBisim, e, f))
                    row.witness = detail::pair_name(rels, *w);
            if (row.sim_leq && !row.discr_leq)
                report.violations.push_back("e=" + row.e + " <= f=" + row.f +
                                            " but discrimination containment fails at " +
                                            *row.witness);
            if (row.discr_leq && !row.sim_leq)
                report.findings.push_back("converse direction not witnessed for e=" + row.e +
                                          ", f=" + row.f +
                                          " (containment holds, e <= f fails; not asserted)");
            report.pairs.push_back(std::move(row));
        }
    }
    return report;
}

/// Both directions of the discrimination theorem for ji-parameterized
/// simulatability, its converse form and simulation equivalence. Needs a
/// universe that contains the environments, a universal process and one
/// round of join closure.
inline DiscriminationReport check_jisim_theorem(const Universe& universe,
                                                std::vector<UniverseMember> envs = {},
                                                std::size_t budget = kDefaultStateBudget) {
    if (envs.empty()) envs = detail::default_envs(universe);
    UniverseRelations rels(universe, std::move(envs), budget);

    DiscriminationReport report;
    report.suite = "jisim-theorem";
    report.mode = to_string(RelationMode::JiParamSim);
    report.params = universe.params;
    const RelationMode modes[] = {RelationMode::JiParamSim, RelationMode::CanJiParamSim,
                                  RelationMode::JiParamSimEquiv};
    const std::size_t n = rels.envs().size();
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t f = 0; f < n; ++f) {
            PairFinding row;
            row.e = rels.envs()[e].name;
            row.f = rels.envs()[f].name;
            row.sim_leq = rels.env_sim_leq(e, f);
            row.discr_leq = rels.discriminates_leq(RelationMode::JiParamSim, e, f);
            for (RelationMode mode : modes) {
                const bool discr = rels.discriminates_leq(mode, e, f);
                if (discr == row.sim_leq) continue;
                std::string msg = to_string(mode) + ": e=" + row.e + ", f=" + row.f +
                                  ": simulatability " + (row.sim_leq ? "holds" : "fails") +
                                  " but containment " + (discr ? "holds" : "fails");
                if (!discr)
                    if (auto w = rels.containment_witness(mode, e, f))
                        msg += ", witness " + detail::pair_name(rels, *w);
                report.violations.push_back(std::move(msg));
            }
            if (!row.discr_leq)
                if (auto w = rels.containment_witness(RelationMode::JiParamSim, e, f))
                    row.witness = detail::pair_name(rels, *w);
            report.pairs.push_back(std::move(row));
        }
    }
    return report;
}

/// e is simulatable by the join of f and e exactly when e is simulatable by
/// f. The joins are built on demand.
inline DiscriminationReport check_lemma_aux1(const std::vector<UniverseMember>& envs,
                                             const UniverseParams& params = {},
                                             std::size_t budget = kDefaultStateBudget) {
    DiscriminationReport report;
    report.suite = "lemma-aux1";
    report.mode = "simulatability";
    report.params = params;
    for (const auto& e : envs) {
        for (const auto& f : envs) {
            PairFinding row;
            row.e = e.name;
            row.f = f.name;
            row.sim_leq = simulation_preorder(e.proc.lts, f.proc.lts)
                              .contains(e.proc.root, f.proc.root);
            const JoinProduct fe = join_product(f.proc, e.proc, budget);
            row.discr_leq = simulation_preorder(e.proc.lts, fe.lts)
                                .contains(e.proc.root, fe.roots[0]);
            if (row.sim_leq != row.discr_leq)
                report.violations.push_back(
                    "e=" + row.e + ", f=" + row.f + ": e <= f " +
                    (row.sim_leq ? "holds" : "fails") + " but e <= f & e " +
                    (row.discr_leq ? "holds" : "fails"));
            report.pairs.push_back(std::move(row));
        }
    }
    return report;
}

/// Exploratory search: do environments with equal ji-parameterized
/// bisimilarity relations over the universe have bisimilar roots? Reports
/// findings only; asserts nothing.
inline DiscriminationReport search_open_problem_p2(const Universe& universe,
                                                   std::vector<UniverseMember> envs = {},
                                                   std::size_t budget = kDefaultStateBudget) {
    if (envs.empty()) envs = detail::default_envs(universe);
    UniverseRelations rels(universe, std::move(envs), budget);

    DiscriminationReport report;
    report.suite = "p2-search";
    report.mode = to_string(RelationMode::JiParamBisim);
    report.params = universe.params;
    const std::size_t n = rels.envs().size();
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t f = e + 1; f < n; ++f) {
            PairFinding row;
            row.e = rels.envs()[e].name;
            row.f = rels.envs()[f].name;
            row.sim_leq = rels.env_bisim(e, f); // here: bisimilarity of the environments
            row.discr_leq = rels.table(RelationMode::JiParamBisim, e) ==
                            rels.table(RelationMode::JiParamBisim, f);
            if (row.sim_leq && !row.discr_leq)
                report.findings.push_back("unexpected: e=" + row.e + " ~ f=" + row.f +
                                          " but the relations differ over this universe");
            if (row.discr_leq && !row.sim_leq)
                report.findings.push_back(
                    "counterexample candidate: relations of e=" + row.e + " and f=" + row.f +
                    " agree over this universe, yet e and f are not bisimilar");
            report.pairs.push_back(std::move(row));
        }
    }
    return report;
}

} // namespace jibisim
