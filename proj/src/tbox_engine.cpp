#include "shapeval/tbox_engine.hpp"

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>
#include <set>

namespace shapeval {

namespace {

using ExKey = std::tuple<Bits, Bits, Bits>;
using ConjKey = std::pair<Bits, int>;

void put(Bits& b, int c) {
    if (c >= 0) b.set(c);
}

Bits with(Bits b, int c) {
    put(b, c);
    return b;
}

std::vector<Bits> role_hierarchy(const TBox& tbox, std::size_t slots) {
    std::vector<Bits> sup(slots, Bits(slots));
    for (std::size_t i = 0; i < slots; ++i) sup[i].set(i);
    std::vector<std::pair<int, int>> edges;
    for (const auto& ax : tbox.axioms)
        if (const auto* ri = std::get_if<RoleInclusion>(&ax)) {
            edges.emplace_back(ri->sub.index(), ri->sup.index());
            edges.emplace_back(invert_role(ri->sub).index(), invert_role(ri->sup).index());
        }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a, b] : edges)
            for (std::size_t i = 0; i < slots; ++i)
                if (sup[i].test(a) && !sup[b].is_subset_of(sup[i])) {
                    sup[i] |= sup[b];
                    changed = true;
                }
    }
    return sup;
}

}  // namespace

bool RoleRenaming::identity() const {
    for (std::size_t i = 0; i < representative.size(); ++i)
        if (representative[i] != Role{static_cast<int>(i), false}) return false;
    return true;
}

std::pair<TBox, RoleRenaming> collapse_role_cycles(const TBox& tbox, std::size_t num_roles) {
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    const std::size_t slots = 2 * num_roles;
    Graph g(slots);
    for (const auto& ax : tbox.axioms)
        if (const auto* ri = std::get_if<RoleInclusion>(&ax)) {
            boost::add_edge(ri->sub.index(), ri->sup.index(), g);
            boost::add_edge(invert_role(ri->sub).index(), invert_role(ri->sup).index(), g);
        }
    std::vector<int> comp(slots);
    if (slots > 0) boost::strong_components(g, comp.data());
    std::map<int, int> rep;  // component -> smallest slot
    for (std::size_t i = 0; i < slots; ++i) {
        auto [it, fresh] = rep.emplace(comp[i], static_cast<int>(i));
        if (!fresh) it->second = std::min(it->second, static_cast<int>(i));
    }
    RoleRenaming ren;
    for (std::size_t p = 0; p < num_roles; ++p)
        ren.representative.push_back(Role::from_index(rep[comp[2 * p]]));

    TBox out;
    std::set<std::pair<int, int>> seen_inclusions;
    for (const auto& ax : tbox.axioms) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, RoleInclusion>) {
                    Role sub = ren.apply(a.sub), sup = ren.apply(a.sup);
                    if (sub == sup) return;
                    if (!seen_inclusions.emplace(sub.index(), sup.index()).second) return;
                    out.axioms.push_back(RoleInclusion{sub, sup});
                } else if constexpr (std::is_same_v<T, ConjInclusion>) {
                    out.axioms.push_back(a);
                } else {
                    T b = a;
                    b.r = ren.apply(a.r);
                    out.axioms.push_back(b);
                }
            },
            ax);
    }
    return {out, ren};
}

ABox rename_roles(const ABox& abox, const RoleRenaming& ren) {
    ABox out;
    out.concept_atoms = abox.concept_atoms;
    for (const auto& [r, a, b] : abox.role_atoms) out.add_role(ren.apply(Role{r, false}), a, b);
    return out;
}

Bits SaturatedTBox::role_closure(const Bits& roles) const {
    Bits out = roles;
    for (auto i = roles.find_first(); i != Bits::npos; i = roles.find_next(i)) out |= super_[i];
    return out;
}

Closure SaturatedTBox::closure(const Bits& m) const {
    {
        std::lock_guard lock(cache_->mu);
        if (auto it = cache_->closures.find(m); it != cache_->closures.end()) return it->second;
    }
    Closure c{m, false};
    bool changed = true;
    while (changed && !c.bottom) {
        changed = false;
        for (const auto& f : conj_) {
            if (!f.lhs.is_subset_of(c.concepts)) continue;
            if (f.head == kBottom) {
                c.bottom = true;
                break;
            }
            if (!c.concepts.test(f.head)) {
                c.concepts.set(f.head);
                changed = true;
            }
        }
    }
    std::lock_guard lock(cache_->mu);
    cache_->closures.emplace(m, c);
    return c;
}

const std::vector<OneHalfType>& SaturatedTBox::maximal_existentials(const Bits& m) const {
    {
        std::lock_guard lock(cache_->mu);
        if (auto it = cache_->existentials.find(m); it != cache_->existentials.end()) return it->second;
    }
    std::vector<OneHalfType> out;
    Closure cl = closure(m);
    if (!cl.bottom) {
        std::vector<OneHalfType> cand;
        for (const auto& f : exists_)
            if (f.lhs.is_subset_of(cl.concepts)) cand.push_back(OneHalfType{f.roles, f.concepts});
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (std::size_t i = 0; i < cand.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < cand.size() && !dominated; ++j)
                dominated = i != j && cand[i].subsumed_by(cand[j]);
            if (!dominated) out.push_back(cand[i]);
        }
    }
    std::lock_guard lock(cache_->mu);
    return cache_->existentials.emplace(m, std::move(out)).first->second;
}

SaturatedTBox saturate(const TBox& tbox, std::size_t nc, std::size_t slots) {
    SaturatedTBox s;
    s.source_ = tbox;
    s.n_concepts_ = nc;
    s.role_slots_ = slots;
    s.signature_ = tbox.concepts(nc);
    s.super_ = role_hierarchy(tbox, slots);

    std::set<ConjKey> conj;
    std::set<ExKey> ex;
    const Bits none(nc);
    for (const auto& ax : tbox.axioms) {
        if (const auto* a = std::get_if<ConjInclusion>(&ax)) {
            Bits lhs(nc);
            for (int c : a->lhs) put(lhs, c);
            if (a->rhs != kTop) conj.emplace(lhs, a->rhs);
        } else if (const auto* a = std::get_if<AtMostOne>(&ax)) {
            s.at_most_.push_back({a->a, a->r, a->b});
        } else if (const auto* a = std::get_if<ValueRestriction>(&ax)) {
            s.forall_.push_back({a->a, a->r, a->b});
        } else if (const auto* a = std::get_if<ExistsInclusion>(&ax)) {
            s.exists_axioms_.push_back({a->a, a->r, a->b});
            if (a->b == kBottom)
                conj.emplace(with(none, a->a), kBottom);
            else {
                Bits r(slots);
                r.set(a->r.index());
                ex.emplace(with(none, a->a), r, with(none, a->b));
            }
        }
    }

    auto close = [&](Bits x) -> Closure {
        Closure c{std::move(x), false};
        bool changed = true;
        while (changed && !c.bottom) {
            changed = false;
            for (const auto& [lhs, head] : conj) {
                if (!lhs.is_subset_of(c.concepts)) continue;
                if (head == kBottom) {
                    c.bottom = true;
                    break;
                }
                if (!c.concepts.test(head)) {
                    c.concepts.set(head);
                    changed = true;
                }
            }
        }
        return c;
    };
    auto role_close = [&](const Bits& r) {
        Bits out = r;
        for (auto i = r.find_first(); i != Bits::npos; i = r.find_next(i)) out |= s.super_[i];
        return out;
    };

    for (;;) {
        const auto before_conj = conj;
        const auto before_ex = ex;

        // Conjunction absorption into heads, role hierarchy, and R_⊥.
        std::set<ExKey> normal;
        for (const auto& [m, r, n] : ex) {
            Closure c = close(n);
            if (c.bottom)
                conj.emplace(m, kBottom);
            else
                normal.emplace(m, role_close(r), c.concepts);
        }
        std::vector<ExKey> facts(normal.begin(), normal.end());
        std::set<ExKey> derived = normal;

        for (const auto& [m, r, n] : facts) {
            for (const auto& v : s.forall_) {
                // R_∀: the parent's value restriction reaches the successor.
                if (r.test(v.r.index())) {
                    if (v.b == kBottom)
                        conj.emplace(with(m, v.a), kBottom);
                    else if (v.b != kTop)
                        derived.emplace(with(m, v.a), r, with(n, v.b));
                }
                // R_∀⁻: the successor's value restriction reaches back.
                if (r.test(invert_role(v.r).index()) && holds(n, v.a) && v.b != kTop) conj.emplace(m, v.b);
            }
        }
        for (const auto& al : s.at_most_) {
            if (al.b == kBottom) continue;
            const int ri = al.r.index(), rinv = invert_role(al.r).index();
            for (std::size_t i = 0; i < facts.size(); ++i) {
                const auto& [m1, r1, n1] = facts[i];
                // R_≤: two successors that are both r-neighbours in B collapse.
                if (r1.test(ri) && holds(n1, al.b))
                    for (std::size_t j = i + 1; j < facts.size(); ++j) {
                        const auto& [m2, r2, n2] = facts[j];
                        if (r2.test(ri) && holds(n2, al.b)) derived.emplace(with(m1 | m2, al.a), r1 | r2, n1 | n2);
                    }
                // R_≤⁻: the successor's own r-successor in B is the parent.
                if (r1.test(rinv) && holds(n1, al.a))
                    for (const auto& [k, r2, n2] : facts) {
                        if (!k.is_subset_of(n1) || !r2.test(ri) || !holds(n2, al.b)) continue;
                        Bits parent = with(m1, al.b);
                        for (auto c = n2.find_first(); c != Bits::npos; c = n2.find_next(c))
                            conj.emplace(parent, static_cast<int>(c));
                        derived.emplace(parent, r1 | invert_roles(r2), n1);
                    }
            }
        }

        // Drop facts dominated by a fact with a smaller body and larger head.
        std::vector<ExKey> all(derived.begin(), derived.end());
        ex.clear();
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto& [m, r, n] = all[i];
            bool dominated = false;
            for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
                if (i == j) continue;
                const auto& [m2, r2, n2] = all[j];
                dominated = m2.is_subset_of(m) && r.is_subset_of(r2) && n.is_subset_of(n2);
            }
            if (!dominated) ex.insert(all[i]);
        }
        std::set<ConjKey> kept;
        for (const auto& f : conj) {
            bool dominated = false;
            for (const auto& g : conj)
                if (g.second == f.second && g.first != f.first && g.first.is_subset_of(f.first)) {
                    dominated = true;
                    break;
                }
            if (!dominated) kept.insert(f);
        }
        conj = std::move(kept);

        if (conj == before_conj && ex == before_ex) break;
    }

    for (const auto& [lhs, head] : conj) s.conj_.push_back({lhs, head});
    for (const auto& [m, r, n] : ex) s.exists_.push_back({m, r, n});
    return s;
}

bool entails_conj(const SaturatedTBox& sat, const Bits& m, int b) {
    if (b == kTop) return true;
    Closure c = sat.closure(m);
    if (c.bottom) return true;
    return b >= 0 && c.concepts.test(b);
}

std::vector<OneHalfType> implied_existentials(const SaturatedTBox& sat, const Bits& m) {
    return sat.maximal_existentials(m);
}

bool is_locally_consistent(const SaturatedTBox& sat, const TwoType& t) {
    Closure c1 = sat.closure(t.c1), c2 = sat.closure(t.c2);
    if (c1.bottom || c2.bottom || c1.concepts != t.c1 || c2.concepts != t.c2) return false;
    if (sat.role_closure(t.roles) != t.roles) return false;
    for (const auto& v : sat.value_restrictions()) {
        if (holds(t.c1, v.a) && t.roles.test(v.r.index()) && !holds(t.c2, v.b)) return false;
        if (holds(t.c2, v.a) && t.roles.test(invert_role(v.r).index()) && !holds(t.c1, v.b)) return false;
    }
    return true;
}

}  // namespace shapeval
