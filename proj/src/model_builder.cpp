#include "shapeval/model_builder.hpp"

#include <algorithm>
#include <atomic>

namespace shapeval {

Bits CompletedABox::roles_between(int a, int b) const {
    auto it = roles.find({a, b});
    if (it != roles.end()) return it->second;
    return Bits(role_slots);
}

ABox CompletedABox::atoms() const {
    ABox out;
    for (std::size_t a = 0; a < types.size(); ++a)
        for (auto c = types[a].find_first(); c != Bits::npos; c = types[a].find_next(c))
            out.add_concept(static_cast<int>(c), static_cast<int>(a));
    for (const auto& [ab, r] : roles)
        for (auto i = r.find_first(); i != Bits::npos; i = r.find_next(i)) {
            Role role = Role::from_index(static_cast<int>(i));
            if (!role.inverted) out.add_role(role, ab.first, ab.second);
        }
    return out;
}

CompletedABox complete_abox(const SaturatedTBox& sat, const ABox& abox, std::size_t n) {
    CompletedABox out;
    out.base = abox;
    out.role_slots = sat.role_slots();
    out.types.assign(n, sat.empty_concepts());
    for (const auto& [c, a] : abox.concept_atoms) out.types.at(a).set(c);
    auto edge = [&](int a, int b) -> Bits& {
        auto [it, fresh] = out.roles.try_emplace({a, b}, sat.empty_roles());
        return it->second;
    };
    for (const auto& [r, a, b] : abox.role_atoms) {
        edge(a, b).set(Role{r, false}.index());
        edge(b, a).set(Role{r, true}.index());
    }
    auto add_roles = [&](int a, int b, const Bits& r) {
        Bits& fwd = edge(a, b);
        Bits& bwd = edge(b, a);
        Bits nf = sat.role_closure(fwd | r);
        bool changed = nf != fwd;
        fwd = nf;
        bwd |= invert_roles(nf);
        return changed;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& t : out.types) {
            Closure c = sat.closure(t);
            if (c.bottom) {
                out.inconsistent = true;
                return out;
            }
            if (c.concepts != t) {
                t = c.concepts;
                changed = true;
            }
        }
        std::vector<std::pair<int, int>> pairs;
        for (const auto& [ab, r] : out.roles) pairs.push_back(ab);
        for (auto [a, b] : pairs) changed |= add_roles(a, b, sat.empty_roles());

        for (auto [a, b] : pairs) {
            const Bits r = out.roles.at({a, b});
            for (const auto& v : sat.value_restrictions()) {
                if (!holds(out.types[a], v.a) || !r.test(v.r.index())) continue;
                if (v.b == kBottom) {
                    out.inconsistent = true;
                    return out;
                }
                if (v.b >= 0 && !out.types[b].test(v.b)) {
                    out.types[b].set(v.b);
                    changed = true;
                }
            }
        }

        for (std::size_t a = 0; a < n; ++a) {
            for (const auto& al : sat.at_most_ones()) {
                if (!holds(out.types[a], al.a) || al.b == kBottom) continue;
                std::vector<int> targets;
                for (auto [x, b] : pairs)
                    if (x == static_cast<int>(a) && out.roles.at({x, b}).test(al.r.index()) && holds(out.types[b], al.b))
                        targets.push_back(b);
                if (targets.size() > 1) {
                    // Standard names: two distinct named r-neighbours in B violate ≤1.
                    out.inconsistent = true;
                    return out;
                }
                if (targets.empty()) continue;
                int b = targets.front();
                for (const auto& u : sat.maximal_existentials(out.types[a])) {
                    if (!u.roles.test(al.r.index()) || !holds(u.concepts, al.b)) continue;
                    if (!u.concepts.is_subset_of(out.types[b])) {
                        out.types[b] |= u.concepts;
                        changed = true;
                    }
                    changed |= add_roles(static_cast<int>(a), b, u.roles);
                }
            }
        }
    }
    return out;
}

bool is_consistent(const SaturatedTBox& sat, const ABox& abox, std::size_t num_individuals) {
    return !complete_abox(sat, abox, num_individuals).inconsistent;
}

namespace {
std::atomic<bool> flip_r4{false};
}

void set_fault_flip_r4(bool on) { flip_r4 = on; }
bool fault_flip_r4() { return flip_r4; }

std::vector<OneHalfType> succ_config(const SaturatedTBox& sat, const std::vector<TwoType>& f) {
    std::vector<OneHalfType> out;
    if (f.empty()) return out;
    for (const auto& u : sat.maximal_existentials(f.front().c1)) {
        bool covered = std::any_of(f.begin(), f.end(), [&](const TwoType& t) {
            return u.roles.is_subset_of(t.roles) && u.concepts.is_subset_of(t.c2);
        });
        if (covered == flip_r4.load(std::memory_order_relaxed)) out.push_back(u);
    }
    return out;
}

std::vector<TwoType> children(const SaturatedTBox& sat, const TwoType& t) {
    std::vector<TwoType> out;
    for (const auto& u : succ_config(sat, {invert_two_type(t)})) out.push_back(TwoType{t.c2, u.roles, u.concepts});
    return out;
}

std::vector<TwoType> root_frontier(const SaturatedTBox& sat, const CompletedABox& completed, int a) {
    std::set<TwoType> f;
    f.insert(TwoType{completed.types.at(a), sat.empty_roles(), sat.empty_concepts()});
    for (const auto& [ab, r] : completed.roles)
        if (ab.first == a && r.any()) f.insert(TwoType{completed.types.at(a), r, completed.types.at(ab.second)});
    return {f.begin(), f.end()};
}

Interpretation completed_interpretation(const CompletedABox& completed, std::size_t role_slots) {
    std::size_t nc = completed.types.empty() ? 0 : completed.types.front().size();
    Interpretation I(nc, role_slots);
    for (std::size_t a = 0; a < completed.types.size(); ++a) {
        int id = I.add_node(Node{static_cast<int>(a), {}, {}});
        I.set_label(id, completed.types[a]);
    }
    for (const auto& [ab, r] : completed.roles)
        for (auto i = r.find_first(); i != Bits::npos; i = r.find_next(i)) {
            Role role = Role::from_index(static_cast<int>(i));
            if (!role.inverted) I.add_edge(role, ab.first, ab.second);
        }
    return I;
}

Interpretation build_can(const SaturatedTBox& sat, const CompletedABox& completed, int depth) {
    Interpretation I = completed_interpretation(completed, sat.role_slots());
    struct Pending {
        int parent;
        TwoType tail;
        int position;
    };
    std::vector<Pending> pending;
    for (std::size_t a = 0; a < completed.types.size(); ++a) {
        auto kids = succ_config(sat, root_frontier(sat, completed, static_cast<int>(a)));
        int pos = 0;
        for (const auto& u : kids)
            pending.push_back({static_cast<int>(a), TwoType{completed.types[a], u.roles, u.concepts}, ++pos});
    }
    for (int level = 1; level <= depth && !pending.empty(); ++level) {
        std::vector<Pending> next;
        for (const auto& p : pending) {
            const Node& parent = I.node(p.parent);
            Node n{parent.root, parent.word, parent.path};
            n.word.push_back(p.tail);
            n.path.push_back(p.position);
            int id = I.add_node(std::move(n));
            I.set_label(id, p.tail.c2);
            I.add_roles(p.tail.roles, p.parent, id);
            int pos = 0;
            for (const auto& k : children(sat, p.tail)) next.push_back({id, k, ++pos});
        }
        pending = std::move(next);
    }
    I.complete = pending.empty();
    return I;
}

bool is_model(const Interpretation& I, const SaturatedTBox& sat, const ABox& abox) {
    for (const auto& [c, a] : abox.concept_atoms) {
        auto n = I.node_of_individual(a);
        if (!n || !I.has_concept(*n, c)) return false;
    }
    for (const auto& [r, a, b] : abox.role_atoms) {
        auto x = I.node_of_individual(a), y = I.node_of_individual(b);
        if (!x || !y || !I.has_edge(Role{r, false}, *x, *y)) return false;
    }
    for (std::size_t xi = 0; xi < I.size(); ++xi) {
        const int x = static_cast<int>(xi);
        const Bits& lx = I.label(x);
        for (const auto& ax : sat.source().axioms) {
            bool ok = std::visit(
                [&](const auto& a) -> bool {
                    using T = std::decay_t<decltype(a)>;
                    if constexpr (std::is_same_v<T, ConjInclusion>) {
                        for (int c : a.lhs)
                            if (!holds(lx, c)) return true;
                        return holds(lx, a.rhs);
                    } else if constexpr (std::is_same_v<T, RoleInclusion>) {
                        for (const auto& [y, r] : I.neighbours(x))
                            if (r.test(a.sub.index()) && !r.test(a.sup.index())) return false;
                        return true;
                    } else {
                        if (!holds(lx, a.a)) return true;
                        int count = 0;
                        for (const auto& [y, r] : I.neighbours(x)) {
                            if (!r.test(a.r.index())) continue;
                            bool in_b = holds(I.label(y), a.b);
                            if constexpr (std::is_same_v<T, ValueRestriction>) {
                                if (!in_b) return false;
                            } else if (in_b) {
                                ++count;
                            }
                        }
                        if constexpr (std::is_same_v<T, AtMostOne>) return count <= 1;
                        if constexpr (std::is_same_v<T, ExistsInclusion>) return count >= 1;
                        return true;
                    }
                },
                ax);
            if (!ok) return false;
        }
    }
    return true;
}

}  // namespace shapeval
