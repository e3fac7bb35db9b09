#include "shapeval/chase.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace shapeval {

int AtomSet::add_named(int individual) {
    if (auto x = node_of_individual(individual)) return *x;
    individual_.push_back(individual);
    labels_.emplace_back(n_concepts_);
    adj_.emplace_back();
    return static_cast<int>(labels_.size()) - 1;
}

int AtomSet::add_blank() {
    individual_.push_back(-1);
    labels_.emplace_back(n_concepts_);
    adj_.emplace_back();
    return static_cast<int>(labels_.size()) - 1;
}

void AtomSet::add_roles(const Bits& roles, int x, int y) {
    if (roles.none()) return;
    auto& fwd = adj_.at(x)[y];
    if (fwd.size() != role_slots_) fwd.resize(role_slots_);
    fwd |= roles;
    auto& bwd = adj_.at(y)[x];
    if (bwd.size() != role_slots_) bwd.resize(role_slots_);
    bwd |= invert_roles(roles);
}

void AtomSet::add_role(Role r, int x, int y) {
    Bits b(role_slots_);
    b.set(r.index());
    add_roles(b, x, y);
}

std::optional<int> AtomSet::node_of_individual(int ind) const {
    for (std::size_t x = 0; x < individual_.size(); ++x)
        if (individual_[x] == ind) return static_cast<int>(x);
    return std::nullopt;
}

Bits AtomSet::roles_between(int x, int y) const {
    auto it = adj_.at(x).find(y);
    return it == adj_.at(x).end() ? Bits(role_slots_) : it->second;
}

std::size_t AtomSet::num_atoms() const {
    std::size_t n = 0;
    for (std::size_t x = 0; x < size(); ++x) {
        n += labels_[x].count();
        for (auto& [y, roles] : adj_[x])
            for (auto i = roles.find_first(); i != Bits::npos; i = roles.find_next(i))
                if (i % 2 == 0) ++n;
    }
    return n;
}

AtomSet AtomSet::restrict_to(const std::vector<bool>& keep) const {
    AtomSet out(n_concepts_, role_slots_);
    std::vector<int> to(size(), -1);
    for (std::size_t x = 0; x < size(); ++x) {
        if (!keep[x]) continue;
        to[x] = individual_[x] >= 0 ? out.add_named(individual_[x]) : out.add_blank();
        out.labels_[to[x]] = labels_[x];
    }
    for (std::size_t x = 0; x < size(); ++x)
        for (auto& [y, roles] : adj_[x])
            if (to[x] >= 0 && to[y] >= 0) out.add_roles(roles, to[x], to[y]);
    return out;
}

AtomSet AtomSet::merge(int y, int z) const {
    AtomSet out(n_concepts_, role_slots_);
    auto to = [&](int k) {
        if (k == y) k = z;
        return k > y ? k - 1 : k;
    };
    for (std::size_t x = 0; x < size(); ++x) {
        if (static_cast<int>(x) == y) continue;
        individual_[x] >= 0 ? out.add_named(individual_[x]) : out.add_blank();
    }
    for (std::size_t x = 0; x < size(); ++x) {
        out.labels_[to(static_cast<int>(x))] |= labels_[x];
        for (auto& [w, roles] : adj_[x]) out.add_roles(roles, to(static_cast<int>(x)), to(w));
    }
    return out;
}

std::vector<std::string> AtomSet::dump(const Vocabulary& v) const {
    auto name = [&](int x) {
        return individual_[x] >= 0 ? v.individual_name(individual_[x]) : "_:b" + std::to_string(x);
    };
    std::vector<std::string> out;
    for (std::size_t x = 0; x < size(); ++x) {
        for (auto c = labels_[x].find_first(); c != Bits::npos; c = labels_[x].find_next(c))
            out.push_back(v.concept_name(static_cast<int>(c)) + "(" + name(static_cast<int>(x)) + ")");
        for (auto& [y, roles] : adj_[x])
            for (auto i = roles.find_first(); i != Bits::npos; i = roles.find_next(i))
                if (i % 2 == 0)
                    out.push_back(v.role_base_name(static_cast<int>(i / 2)) + "(" + name(static_cast<int>(x)) + "," +
                                  name(y) + ")");
    }
    std::sort(out.begin(), out.end());
    return out;
}

AtomSet atoms_of(const ABox& abox, std::size_t n_concepts, std::size_t role_slots) {
    AtomSet out(n_concepts, role_slots);
    for (int a : abox.individuals()) out.add_named(a);
    for (auto& [c, a] : abox.concept_atoms) out.add_concept(*out.node_of_individual(a), c);
    for (auto& [r, a, b] : abox.role_atoms) out.add_role(Role{r, false}, *out.node_of_individual(a), *out.node_of_individual(b));
    return out;
}

// Every individual of the vocabulary is a domain element, as in interpretation_of.
AtomSet atoms_of(const ABox& abox, const Vocabulary& v) {
    AtomSet out(v.num_concepts(), v.role_slots());
    for (std::size_t a = 0; a < v.num_individuals(); ++a) out.add_named(static_cast<int>(a));
    for (auto& [c, a] : abox.concept_atoms) out.add_concept(*out.node_of_individual(a), c);
    for (auto& [r, a, b] : abox.role_atoms)
        out.add_role(Role{r, false}, *out.node_of_individual(a), *out.node_of_individual(b));
    return out;
}

AtomSet atoms_of(const Interpretation& in) {
    AtomSet out(in.num_concepts(), in.role_slots());
    for (std::size_t x = 0; x < in.size(); ++x) {
        const Node& n = in.node(static_cast<int>(x));
        int id = (!n.anonymous() && n.root >= 0) ? out.add_named(n.root) : out.add_blank();
        for (auto c = in.label(static_cast<int>(x)).find_first(); c != Bits::npos;
             c = in.label(static_cast<int>(x)).find_next(c))
            out.add_concept(id, static_cast<int>(c));
    }
    for (std::size_t x = 0; x < in.size(); ++x)
        for (auto& [y, roles] : in.neighbours(static_cast<int>(x))) out.add_roles(roles, static_cast<int>(x), y);
    return out;
}

Interpretation interpretation_of(const AtomSet& atoms) {
    Interpretation in(atoms.n_concepts(), atoms.role_slots());
    for (std::size_t x = 0; x < atoms.size(); ++x) {
        int id = in.add_node(Node{atoms.individual(static_cast<int>(x)), {}, {}});
        in.set_label(id, atoms.label(static_cast<int>(x)));
    }
    for (std::size_t x = 0; x < atoms.size(); ++x)
        for (auto& [y, roles] : atoms.neighbours(static_cast<int>(x))) in.add_roles(roles, static_cast<int>(x), y);
    return in;
}

namespace {

bool has(const Bits& label, int c) { return c == kTop || (c >= 0 && label.test(c)); }
bool has_role(const Bits& roles, Role r) { return roles.test(r.index()); }

}  // namespace

AtomSet fire_axioms(const TBox& tbox, const AtomSet& atoms, ChaseState& state) {
    AtomSet out = atoms;
    const int n = static_cast<int>(atoms.size());
    for (std::size_t i = 0; i < tbox.axioms.size(); ++i) {
        std::visit(
            [&](const auto& ax) {
                using T = std::decay_t<decltype(ax)>;
                if constexpr (std::is_same_v<T, ConjInclusion>) {
                    for (int x = 0; x < n; ++x) {
                        const Bits& l = atoms.label(x);
                        if (!std::all_of(ax.lhs.begin(), ax.lhs.end(), [&](int c) { return has(l, c); })) continue;
                        if (ax.rhs == kBottom)
                            state.clash = true;
                        else if (!has(l, ax.rhs))
                            out.add_concept(x, ax.rhs);
                    }
                } else if constexpr (std::is_same_v<T, ValueRestriction>) {
                    for (int x = 0; x < n; ++x) {
                        if (!has(atoms.label(x), ax.a)) continue;
                        for (auto& [y, roles] : atoms.neighbours(x)) {
                            if (!has_role(roles, ax.r)) continue;
                            if (ax.b == kBottom)
                                state.clash = true;
                            else if (!has(atoms.label(y), ax.b))
                                out.add_concept(y, ax.b);
                        }
                    }
                } else if constexpr (std::is_same_v<T, RoleInclusion>) {
                    for (int x = 0; x < n; ++x)
                        for (auto& [y, roles] : atoms.neighbours(x))
                            if (has_role(roles, ax.sub) && !has_role(roles, ax.sup)) out.add_role(ax.sup, x, y);
                } else if constexpr (std::is_same_v<T, ExistsInclusion>) {
                    for (int x = 0; x < n; ++x) {
                        if (!has(atoms.label(x), ax.a)) continue;
                        if (state.variant == ChaseVariant::Restricted) {
                            bool satisfied = false;
                            for (auto& [y, roles] : atoms.neighbours(x))
                                satisfied = satisfied || (has_role(roles, ax.r) && has(atoms.label(y), ax.b));
                            if (satisfied) continue;
                        } else if (!state.fired.emplace(i, x).second) {
                            continue;
                        }
                        int z = out.add_blank();
                        out.add_role(ax.r, x, z);
                        if (ax.b != kTop) out.add_concept(z, ax.b);
                    }
                }
            },
            tbox.axioms[i]);
    }

    // ≤1 substitutions until none applies
    for (bool again = true; again && !state.clash;) {
        again = false;
        for (auto& axiom : tbox.axioms) {
            auto* ax = std::get_if<AtMostOne>(&axiom);
            if (!ax) continue;
            for (int x = 0; x < static_cast<int>(out.size()) && !again; ++x) {
                if (!has(out.label(x), ax->a)) continue;
                std::vector<int> succ;
                for (auto& [y, roles] : out.neighbours(x))
                    if (has_role(roles, ax->r) && has(out.label(y), ax->b)) succ.push_back(y);
                if (succ.size() < 2) continue;
                int y = succ[0], z = succ[1];
                if (!out.is_blank(y) && !out.is_blank(z)) {
                    // find a blank one among the rest, else a clash under unique names
                    auto blank = std::find_if(succ.begin(), succ.end(), [&](int w) { return out.is_blank(w); });
                    if (blank == succ.end()) {
                        state.clash = true;
                        return out;
                    }
                    z = *blank;
                }
                // keep named nodes, otherwise the smaller index
                int keep = !out.is_blank(y) ? y : !out.is_blank(z) ? z : std::min(y, z);
                int drop = keep == y ? z : y;
                out = out.merge(drop, keep);
                auto to = [&](int k) {
                    if (k == drop) k = keep;
                    return k > drop ? k - 1 : k;
                };
                std::set<std::pair<std::size_t, int>> fired;
                for (auto& [i, k] : state.fired) fired.emplace(i, to(k));
                state.fired = std::move(fired);
                again = true;
            }
            if (again) break;
        }
    }
    return out;
}

ChaseResult run_chase(const TBox& tbox, const AtomSet& start, ChaseVariant variant, int max_rounds,
                      std::size_t max_nodes) {
    ChaseResult r;
    ChaseState st;
    st.variant = variant;
    r.atoms = start;
    for (r.rounds = 0; r.rounds < max_rounds;) {
        AtomSet next = fire_axioms(tbox, r.atoms, st);
        ++r.rounds;
        if (st.clash) {
            r.clash = true;
            r.atoms = std::move(next);
            return r;
        }
        if (next == r.atoms) {
            r.terminated = true;
            return r;
        }
        r.atoms = std::move(next);
        r.history.push_back(r.atoms);
        if (r.atoms.size() > max_nodes) break;
    }
    return r;
}

namespace {

struct Search {
    const AtomSet& a;
    const AtomSet& b;
    std::vector<bool> allowed;
    bool injective = false;
    std::vector<int> order;
    std::vector<int> h;
    std::vector<bool> used;

    Search(const AtomSet& a_, const AtomSet& b_, std::size_t bound) : a(a_), b(b_), allowed(b_.size(), true) {
        if (a.size() > bound || b.size() > bound)
            throw SizeGuard("structure exceeds the node bound of " + std::to_string(bound));
        // named nodes first, then breadth first from them
        std::vector<bool> seen(a.size(), false);
        std::deque<int> queue;
        for (std::size_t x = 0; x < a.size(); ++x)
            if (!a.is_blank(static_cast<int>(x))) {
                seen[x] = true;
                queue.push_back(static_cast<int>(x));
            }
        auto drain = [&] {
            while (!queue.empty()) {
                int x = queue.front();
                queue.pop_front();
                order.push_back(x);
                for (auto& [y, r] : a.neighbours(x))
                    if (!seen[y]) {
                        seen[y] = true;
                        queue.push_back(y);
                    }
            }
        };
        drain();
        for (std::size_t x = 0; x < a.size(); ++x)
            if (!seen[x]) {
                seen[x] = true;
                queue.push_back(static_cast<int>(x));
                drain();
            }
    }

    bool fits(int x, int y) const {
        if (!allowed[y] || (injective && used[y])) return false;
        if (!a.is_blank(x) && b.individual(y) != a.individual(x)) return false;
        if (!a.label(x).is_subset_of(b.label(y))) return false;
        for (auto& [w, roles] : a.neighbours(x)) {
            int hw = w == x ? y : h[w];
            if (hw < 0) continue;
            if (!roles.is_subset_of(b.roles_between(y, hw))) return false;
        }
        return true;
    }

    // f returns false to stop
    bool run(std::size_t k, const std::function<bool(const std::vector<int>&)>& f) {
        if (k == order.size()) return f(h);
        int x = order[k];
        if (!a.is_blank(x)) {
            auto y = b.node_of_individual(a.individual(x));
            if (!y || !fits(x, *y)) return true;
            return assign(k, x, *y, f);
        }
        for (std::size_t y = 0; y < b.size(); ++y)
            if (fits(x, static_cast<int>(y)) && !assign(k, x, static_cast<int>(y), f)) return false;
        return true;
    }

    bool assign(std::size_t k, int x, int y, const std::function<bool(const std::vector<int>&)>& f) {
        h[x] = y;
        bool was = used[y];
        used[y] = true;
        bool go = run(k + 1, f);
        used[y] = was;
        h[x] = -1;
        return go;
    }

    bool start(const std::function<bool(const std::vector<int>&)>& f) {
        h.assign(a.size(), -1);
        used.assign(b.size(), false);
        return run(0, f);
    }
};

Homomorphism tag(const AtomSet& a, const AtomSet& b, const std::vector<int>& map) {
    Homomorphism hm;
    hm.map = map;
    std::vector<int> hits(b.size(), 0);
    for (int y : map) ++hits[y];
    hm.injective = std::all_of(hits.begin(), hits.end(), [](int c) { return c <= 1; });
    hm.surjective = std::all_of(hits.begin(), hits.end(), [](int c) { return c >= 1; });
    hm.strong = true;
    for (std::size_t x = 0; x < a.size() && hm.strong; ++x) {
        if (!b.label(map[x]).is_subset_of(a.label(static_cast<int>(x)))) hm.strong = false;
        for (std::size_t y = 0; y < a.size() && hm.strong; ++y)
            if (!b.roles_between(map[x], map[y]).is_subset_of(a.roles_between(static_cast<int>(x), static_cast<int>(y))))
                hm.strong = false;
    }
    return hm;
}

std::optional<std::vector<int>> avoiding(const AtomSet& a, int v, std::size_t bound) {
    Search s(a, a, bound);
    s.allowed[v] = false;
    std::optional<std::vector<int>> found;
    s.start([&](const std::vector<int>& h) {
        found = h;
        return false;
    });
    return found;
}

}  // namespace

std::vector<Homomorphism> enumerate_homomorphisms(const AtomSet& a, const AtomSet& b, std::size_t bound) {
    Search s(a, b, bound);
    std::vector<Homomorphism> out;
    s.start([&](const std::vector<int>& h) {
        out.push_back(tag(a, b, h));
        return true;
    });
    return out;
}

std::vector<Homomorphism> enumerate_endomorphisms(const AtomSet& a, std::size_t bound) {
    return enumerate_homomorphisms(a, a, bound);
}

std::optional<Homomorphism> find_homomorphism(const AtomSet& a, const AtomSet& b, std::size_t bound) {
    Search s(a, b, bound);
    std::optional<Homomorphism> out;
    s.start([&](const std::vector<int>& h) {
        out = tag(a, b, h);
        return false;
    });
    return out;
}

bool is_core(const AtomSet& a, std::size_t bound) {
    for (std::size_t v = 0; v < a.size(); ++v)
        if (a.is_blank(static_cast<int>(v)) && avoiding(a, static_cast<int>(v), bound)) return false;
    return true;
}

AtomSet core_of(const AtomSet& a, std::size_t bound) {
    AtomSet cur = a;
    for (bool shrunk = true; shrunk;) {
        shrunk = false;
        for (std::size_t v = 0; v < cur.size(); ++v) {
            if (!cur.is_blank(static_cast<int>(v))) continue;
            if (auto h = avoiding(cur, static_cast<int>(v), bound)) {
                std::vector<bool> keep(cur.size(), false);
                for (int y : *h) keep[y] = true;
                cur = cur.restrict_to(keep);
                shrunk = true;
                break;
            }
        }
    }
    return cur;
}

bool is_isomorphic(const AtomSet& a, const AtomSet& b, std::size_t bound) {
    if (a.size() != b.size() || a.num_atoms() != b.num_atoms()) return false;
    Search s(a, b, bound);
    s.injective = true;
    bool found = false;
    s.start([&](const std::vector<int>& h) {
        found = tag(a, b, h).isomorphism();
        return !found;
    });
    return found;
}

CoreChaseResult run_core_chase(const TBox& tbox, const AtomSet& start, int max_rounds, std::size_t bound) {
    CoreChaseResult r;
    r.atoms = start;
    for (int round = 1; round <= max_rounds; ++round) {
        ChaseState st;
        AtomSet next = fire_axioms(tbox, r.atoms, st);
        r.rounds = round;
        if (st.clash) {
            r.clash = true;
            return r;
        }
        if (next == r.atoms) return r;
        if (next.size() > bound) throw NotTerminated("core chase exceeded the node bound");
        r.atoms = core_of(next, bound);
        r.history.push_back(r.atoms);
    }
    throw NotTerminated("core chase did not terminate within " + std::to_string(max_rounds) + " rounds");
}

}  // namespace shapeval
