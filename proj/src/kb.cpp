#include "shapeval/kb.hpp"

#include <algorithm>
#include <boost/functional/hash.hpp>
#include <stdexcept>

namespace shapeval {

Role invert_role(Role r) { return Role{r.name, !r.inverted}; }

Bits invert_roles(const Bits& roles) {
    Bits out(roles.size());
    for (auto i = roles.find_first(); i != Bits::npos; i = roles.find_next(i)) out.set(i ^ 1U);
    return out;
}

int Vocabulary::Table::intern(std::string_view n) {
    std::string key(n);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    int id = static_cast<int>(names.size());
    names.push_back(key);
    ids.emplace(std::move(key), id);
    return id;
}

std::optional<int> Vocabulary::Table::find(std::string_view n) const {
    auto it = ids.find(std::string(n));
    if (it == ids.end()) return std::nullopt;
    return it->second;
}

std::string Vocabulary::role_name(Role r) const {
    return (r.inverted ? "^" : "") + roles_.names.at(r.name);
}

std::string Vocabulary::concept_label(int id) const {
    if (id == kTop) return "top";
    if (id == kBottom) return "bot";
    return concepts_.names.at(id);
}

int Vocabulary::fresh_shape(std::string_view hint) {
    for (;;) {
        std::string n = "~" + std::string(hint) + "." + std::to_string(++fresh_counter_);
        if (!shapes_.find(n)) return shapes_.intern(n);
    }
}

int Vocabulary::fresh_binary_shape(std::string_view hint) {
    for (;;) {
        std::string n = "~" + std::string(hint) + "." + std::to_string(++fresh_counter_);
        if (!binary_.find(n)) return binary_.intern(n);
    }
}

bool TBox::has_at_most() const {
    return std::any_of(axioms.begin(), axioms.end(),
                       [](const Axiom& a) { return std::holds_alternative<AtMostOne>(a); });
}

Bits TBox::concepts(std::size_t n) const {
    Bits out(n);
    auto put = [&](int c) {
        if (c >= 0) out.set(c);
    };
    for (const auto& ax : axioms) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, ConjInclusion>) {
                    for (int c : a.lhs) put(c);
                    put(a.rhs);
                } else if constexpr (!std::is_same_v<T, RoleInclusion>) {
                    put(a.a);
                    put(a.b);
                }
            },
            ax);
    }
    return out;
}

void ABox::add_role(Role r, int a, int b) {
    if (r.inverted)
        role_atoms.emplace(r.name, b, a);
    else
        role_atoms.emplace(r.name, a, b);
}

bool ABox::has_role(Role r, int a, int b) const {
    return r.inverted ? role_atoms.count({r.name, b, a}) > 0 : role_atoms.count({r.name, a, b}) > 0;
}

std::set<int> ABox::individuals() const {
    std::set<int> out;
    for (const auto& [c, a] : concept_atoms) out.insert(a);
    for (const auto& [r, a, b] : role_atoms) {
        out.insert(a);
        out.insert(b);
    }
    return out;
}

TwoType invert_two_type(const TwoType& t) { return TwoType{t.c2, invert_roles(t.roles), t.c1}; }

std::size_t TwoTypeHash::operator()(const TwoType& t) const {
    std::size_t h = 0;
    boost::hash_combine(h, t.c1);
    boost::hash_combine(h, t.roles);
    boost::hash_combine(h, t.c2);
    return h;
}

std::string format_concepts(const Bits& c, const Vocabulary& v) {
    std::vector<std::string> names;
    for (auto i = c.find_first(); i != Bits::npos; i = c.find_next(i)) names.push_back(v.concept_name(static_cast<int>(i)));
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
    return out + "}";
}

std::string format_roles(const Bits& r, const Vocabulary& v) {
    std::vector<std::string> names;
    for (auto i = r.find_first(); i != Bits::npos; i = r.find_next(i))
        names.push_back(v.role_name(Role::from_index(static_cast<int>(i))));
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
    return out + "}";
}

std::string format_two_type(const TwoType& t, const Vocabulary& v) {
    return "(" + format_concepts(t.c1, v) + "," + format_roles(t.roles, v) + "," + format_concepts(t.c2, v) + ")";
}

std::string format_one_half_type(const OneHalfType& u, const Vocabulary& v) {
    return "(" + format_roles(u.roles, v) + "," + format_concepts(u.concepts, v) + ")";
}

int Interpretation::add_node(Node n) {
    int id = static_cast<int>(nodes_.size());
    if (!n.anonymous() && n.root >= 0) individual_node_[n.root] = id;
    nodes_.push_back(std::move(n));
    labels_.emplace_back(n_concepts_);
    adj_.emplace_back();
    return id;
}

void Interpretation::add_edge(Role r, int x, int y) {
    auto& fwd = adj_.at(x)[y];
    if (fwd.size() != role_slots_) fwd.resize(role_slots_);
    fwd.set(r.index());
    auto& bwd = adj_.at(y)[x];
    if (bwd.size() != role_slots_) bwd.resize(role_slots_);
    bwd.set(invert_role(r).index());
}

void Interpretation::add_roles(const Bits& roles, int x, int y) {
    for (auto i = roles.find_first(); i != Bits::npos; i = roles.find_next(i))
        add_edge(Role::from_index(static_cast<int>(i)), x, y);
}

bool Interpretation::has_edge(Role r, int x, int y) const {
    const auto& m = adj_.at(x);
    auto it = m.find(y);
    return it != m.end() && it->second.test(r.index());
}

Bits Interpretation::roles_between(int x, int y) const {
    const auto& m = adj_.at(x);
    auto it = m.find(y);
    return it == m.end() ? Bits(role_slots_) : it->second;
}

std::optional<int> Interpretation::node_of_individual(int ind) const {
    auto it = individual_node_.find(ind);
    if (it == individual_node_.end()) return std::nullopt;
    return it->second;
}

std::string Interpretation::node_name(int i, const Vocabulary& v) const {
    const Node& n = nodes_.at(i);
    if (n.root < 0) return "_:n" + std::to_string(i);
    if (!n.anonymous()) return v.individual_name(n.root);
    std::string out = "_:" + v.individual_name(n.root);
    for (int k : n.path) out += "." + std::to_string(k);
    return out;
}

std::vector<std::string> Interpretation::dump(const Vocabulary& v) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Bits& l = labels_[i];
        for (auto c = l.find_first(); c != Bits::npos; c = l.find_next(c))
            out.push_back(v.concept_name(static_cast<int>(c)) + "(" + node_name(static_cast<int>(i), v) + ")");
        for (const auto& [y, roles] : adj_[i])
            for (auto r = roles.find_first(); r != Bits::npos; r = roles.find_next(r)) {
                Role role = Role::from_index(static_cast<int>(r));
                if (role.inverted) continue;
                out.push_back(v.role_base_name(role.name) + "(" + node_name(static_cast<int>(i), v) + "," +
                              node_name(y, v) + ")");
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Interpretation interpretation_of(const ABox& abox, const Vocabulary& v) {
    Interpretation I(v.num_concepts(), v.role_slots());
    for (std::size_t a = 0; a < v.num_individuals(); ++a) I.add_node(Node{static_cast<int>(a), {}, {}});
    for (const auto& [c, a] : abox.concept_atoms) I.add_concept(*I.node_of_individual(a), c);
    for (const auto& [r, a, b] : abox.role_atoms)
        I.add_edge(Role{r, false}, *I.node_of_individual(a), *I.node_of_individual(b));
    return I;
}

}  // namespace shapeval
