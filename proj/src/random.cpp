#include "shapeval/random.hpp"

#include <algorithm>

namespace shapeval {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
    return xs.at(uniform(rng, 0, static_cast<int>(xs.size()) - 1));
}

Role random_role(Rng& rng, const Vocabulary& v, bool inverses) {
    Role r{uniform(rng, 0, static_cast<int>(v.num_roles()) - 1), false};
    if (inverses && chance(rng, 0.3)) r = invert_role(r);
    return r;
}

int random_concept(Rng& rng, const Vocabulary& v, double top = 0.0) {
    if (top > 0 && chance(rng, top)) return kTop;
    return uniform(rng, 0, static_cast<int>(v.num_concepts()) - 1);
}

}  // namespace

ABox random_abox(Rng& rng, const Vocabulary& v, int concept_atoms, int role_atoms) {
    ABox a;
    const int n = static_cast<int>(v.num_individuals());
    if (n == 0) return a;
    for (int i = 0; i < concept_atoms && v.num_concepts(); ++i) a.add_concept(random_concept(rng, v), uniform(rng, 0, n - 1));
    for (int i = 0; i < role_atoms && v.num_roles(); ++i)
        a.add_role(Role{uniform(rng, 0, static_cast<int>(v.num_roles()) - 1), false}, uniform(rng, 0, n - 1),
                   uniform(rng, 0, n - 1));
    return a;
}

RandomKb random_kb(Rng& rng, const KbParams& p) {
    RandomKb kb;
    auto& v = kb.v;
    for (int i = 0; i < p.concepts; ++i) v.concept_id("A" + std::to_string(i));
    for (int i = 0; i < p.roles; ++i) v.role_id("r" + std::to_string(i));
    for (int i = 0; i < p.individuals; ++i) v.individual_id("a" + std::to_string(i));

    auto at_most = [&] { return AtMostOne{random_concept(rng, v, 0.2), random_role(rng, v, p.inverses), random_concept(rng, v, 0.3)}; };
    bool have_at_most = false;
    for (int i = 0; i < p.axioms; ++i) {
        int kind = uniform(rng, 0, 9);
        if (kind <= 2) {
            ConjInclusion c;
            int k = uniform(rng, 1, 2);
            for (int j = 0; j < k; ++j) c.lhs.push_back(random_concept(rng, v, 0.1));
            std::sort(c.lhs.begin(), c.lhs.end());
            c.lhs.erase(std::unique(c.lhs.begin(), c.lhs.end()), c.lhs.end());
            c.rhs = p.bottom && chance(rng, 0.15) ? kBottom : random_concept(rng, v);
            kb.t.axioms.push_back(c);
        } else if (kind <= 5) {
            kb.t.axioms.push_back(ExistsInclusion{random_concept(rng, v, 0.1), random_role(rng, v, p.inverses), random_concept(rng, v, 0.15)});
        } else if (kind <= 7) {
            kb.t.axioms.push_back(ValueRestriction{random_concept(rng, v, 0.1), random_role(rng, v, p.inverses), random_concept(rng, v)});
        } else if (kind == 8 && p.at_most) {
            kb.t.axioms.push_back(at_most());
            have_at_most = true;
        } else if (p.role_inclusions && v.num_roles() > 1) {
            Role a = random_role(rng, v, p.inverses), b = random_role(rng, v, p.inverses);
            if (a.name != b.name) kb.t.axioms.push_back(RoleInclusion{a, b});
        } else {
            kb.t.axioms.push_back(ExistsInclusion{random_concept(rng, v), random_role(rng, v, p.inverses), random_concept(rng, v)});
        }
    }
    if (p.require_at_most && !have_at_most) {
        // make the F2 axiom bite: reuse an existential's role and filler
        std::vector<ExistsInclusion> ex;
        for (auto& ax : kb.t.axioms)
            if (auto* e = std::get_if<ExistsInclusion>(&ax)) ex.push_back(*e);
        if (!ex.empty() && chance(rng, 0.7)) {
            auto e = pick(rng, ex);
            kb.t.axioms.push_back(AtMostOne{random_concept(rng, v, 0.3), e.r, e.b});
        } else {
            kb.t.axioms.push_back(at_most());
        }
    }
    kb.a = random_abox(rng, v, p.concept_atoms, p.role_atoms);
    return kb;
}

std::optional<FiniteKb> random_finite_kb(Rng& rng, const KbParams& p, int depth, std::size_t node_bound, int attempts) {
    for (int i = 1; i <= attempts; ++i) {
        RandomKb kb = random_kb(rng, p);
        auto [t, ren] = collapse_role_cycles(kb.t, kb.v.num_roles());
        if (!ren.identity()) continue;
        auto sat = saturate(kb.t, kb.v);
        auto comp = complete_abox(sat, kb.a, kb.v.num_individuals());
        if (comp.inconsistent) continue;
        auto can = build_can(sat, comp, depth);
        if (!can.complete || can.size() > node_bound) continue;
        return FiniteKb{std::move(kb), i};
    }
    return std::nullopt;
}

NormalizedShapes random_normal_shapes(Rng& rng, Vocabulary& v, const ConstraintParams& p) {
    NormalizedShapes out;
    std::vector<int> ids, level;
    for (int i = 0; i < p.shapes; ++i) {
        ids.push_back(v.shape_id("s" + std::to_string(i)));
        level.push_back(p.strata > 1 ? uniform(rng, 0, p.strata - 1) : 0);
    }
    auto at_most = [&](int lvl, bool strict) {
        std::vector<int> xs;
        for (int i = 0; i < p.shapes; ++i)
            if (strict ? level[i] < lvl : level[i] <= lvl) xs.push_back(i);
        return xs;
    };
    for (int k = 0; k < p.constraints; ++k) {
        int h = uniform(rng, 0, p.shapes - 1);
        int head = ids[h];
        auto pos = at_most(level[h], false);
        auto neg = at_most(level[h], true);
        for (int tries = 0; tries < 8; ++tries) {
            int form = uniform(rng, 0, 9);
            if (form == 0 && p.individuals && v.num_individuals()) {
                out.constraints.push_back(nc_individual(head, uniform(rng, 0, static_cast<int>(v.num_individuals()) - 1)));
            } else if (form <= 2 && v.num_concepts()) {
                out.constraints.push_back(nc_concept(head, random_concept(rng, v, 0.1)));
            } else if (form == 3) {
                int s = ids[pick(rng, pos)];
                if (s == head) continue;
                out.constraints.push_back(nc_shape(head, s));
            } else if (form <= 5) {
                out.constraints.push_back(nc_and(head, ids[pick(rng, pos)], ids[pick(rng, pos)]));
            } else if (form <= 8 && v.num_roles()) {
                std::vector<Role> roles{random_role(rng, v, true)};
                if (chance(rng, 0.15)) roles.push_back(random_role(rng, v, true));
                std::sort(roles.begin(), roles.end());
                roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
                out.constraints.push_back(nc_exists(head, roles, ids[pick(rng, pos)]));
            } else if (p.negation && !neg.empty()) {
                out.constraints.push_back(nc_not(head, ids[pick(rng, neg)]));
            } else {
                continue;
            }
            break;
        }
    }
    std::set<int> heads;
    for (auto& c : out.constraints) heads.insert(c.head);
    for (int s : heads)
        for (std::size_t a = 0; a < v.num_individuals(); ++a) out.targets.push_back({s, static_cast<int>(a)});
    return out;
}

std::optional<RandomCase> random_case(Rng& rng, const CaseParams& p) {
    KbParams kp;
    kp.concepts = uniform(rng, 1, p.max_concepts);
    kp.roles = uniform(rng, 1, p.max_roles);
    kp.individuals = uniform(rng, 1, p.max_individuals);
    kp.axioms = uniform(rng, 1, p.max_axioms);
    kp.concept_atoms = uniform(rng, 1, 6);
    kp.role_atoms = uniform(rng, 0, 5);
    kp.at_most = p.at_most;
    kp.require_at_most = p.require_at_most;
    auto fk = random_finite_kb(rng, kp, p.depth, p.node_bound);
    if (!fk) return std::nullopt;
    ConstraintParams cp;
    cp.shapes = uniform(rng, 1, p.max_shapes);
    cp.constraints = uniform(rng, 1, p.max_constraints);
    cp.strata = p.strata;
    RandomCase c{std::move(fk->kb.v), std::move(fk->kb.t), std::move(fk->kb.a), {}};
    c.shapes = random_normal_shapes(rng, c.v, cp);
    return c;
}

namespace {

struct GraphGen {
    Rng& rng;
    Vocabulary& v;
    const GraphParams& p;
    std::vector<int> ids, level;

    RegexPtr regex(int depth) {
        int k = depth <= 0 ? 0 : uniform(rng, 0, 5);
        switch (k) {
            case 0:
            case 1:
            case 2: return regex_role(random_role(rng, v, true));
            case 3: return regex_alt(regex(depth - 1), regex(depth - 1));
            case 4: return regex_seq(regex(depth - 1), regex(depth - 1));
            default: return regex_star(regex(depth - 1));
        }
    }

    ShapeExprPtr expr(int h, int depth) {
        std::vector<int> pos, neg;
        for (int i = 0; i < p.shapes; ++i) {
            if (level[i] <= level[h]) pos.push_back(ids[i]);
            if (level[i] < level[h]) neg.push_back(ids[i]);
        }
        int k = depth <= 0 ? uniform(rng, 0, 3) : uniform(rng, 0, 10);
        int n_ind = static_cast<int>(v.num_individuals());
        switch (k) {
            case 0: return n_ind ? sx_individual(uniform(rng, 0, n_ind - 1)) : sx_top();
            case 1: return sx_concept(random_concept(rng, v, 0.1));
            case 2: return sx_shape(pick(rng, pos));
            case 3: return neg.empty() ? sx_concept(random_concept(rng, v)) : sx_not(pick(rng, neg));
            case 4: return sx_or(expr(h, depth - 1), expr(h, depth - 1));
            case 5:
            case 6: return sx_and(expr(h, depth - 1), expr(h, depth - 1));
            case 7: {
                std::vector<Role> roles{random_role(rng, v, true)};
                if (chance(rng, 0.2)) roles.push_back(random_role(rng, v, true));
                return sx_exists(roles, expr(h, depth - 1));
            }
            case 8:
            case 9: return sx_exists_path(regex(2), expr(h, depth - 1));
            default: {
                if (!p.eq || !n_ind) return sx_concept(random_concept(rng, v));
                int c = uniform(rng, 0, n_ind - 1);
                return chance(rng, 0.5) ? sx_eq(c, regex(2), regex(2)) : sx_disj(c, regex(2), regex(2));
            }
        }
    }
};

}  // namespace

ShapesGraph random_shapes_graph(Rng& rng, Vocabulary& v, const GraphParams& p) {
    GraphGen g{rng, v, p, {}, {}};
    for (int i = 0; i < p.shapes; ++i) {
        g.ids.push_back(v.shape_id("s" + std::to_string(i)));
        g.level.push_back(uniform(rng, 0, 1));
    }
    ShapesGraph sg;
    for (int k = 0; k < p.constraints; ++k) {
        int h = uniform(rng, 0, p.shapes - 1);
        sg.constraints.push_back({g.ids[h], g.expr(h, p.depth)});
    }
    sg.targets = all_targets(sg, v);
    return sg;
}

std::vector<Target> all_targets(const ShapesGraph& sg, const Vocabulary& v) {
    std::vector<Target> out;
    for (int s : sg.defined_shapes())
        for (std::size_t a = 0; a < v.num_individuals(); ++a) out.push_back({s, static_cast<int>(a)});
    return out;
}

}  // namespace shapeval
