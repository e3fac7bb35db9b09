#pragma once

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace shapeval {

using Bits = boost::dynamic_bitset<>;

// Reserved concept tokens; never interned as names.
inline constexpr int kTop = -1;
inline constexpr int kBottom = -2;

struct Role {
    int name = 0;
    bool inverted = false;

    int index() const { return 2 * name + (inverted ? 1 : 0); }
    static Role from_index(int i) { return Role{i / 2, (i % 2) == 1}; }
    friend auto operator<=>(const Role&, const Role&) = default;
};

Role invert_role(Role r);

// Swaps every p / p^- slot pair.
Bits invert_roles(const Bits& roles);

class Vocabulary {
public:
    int concept_id(std::string_view name) { return concepts_.intern(name); }
    int role_id(std::string_view name) { return roles_.intern(name); }
    int individual_id(std::string_view name) { return individuals_.intern(name); }
    int shape_id(std::string_view name) { return shapes_.intern(name); }
    int binary_shape_id(std::string_view name) { return binary_.intern(name); }

    std::optional<int> find_concept(std::string_view n) const { return concepts_.find(n); }
    std::optional<int> find_role(std::string_view n) const { return roles_.find(n); }
    std::optional<int> find_individual(std::string_view n) const { return individuals_.find(n); }
    std::optional<int> find_shape(std::string_view n) const { return shapes_.find(n); }
    std::optional<int> find_binary_shape(std::string_view n) const { return binary_.find(n); }

    const std::string& concept_name(int id) const { return concepts_.names.at(id); }
    const std::string& role_base_name(int id) const { return roles_.names.at(id); }
    const std::string& individual_name(int id) const { return individuals_.names.at(id); }
    const std::string& shape_name(int id) const { return shapes_.names.at(id); }
    const std::string& binary_shape_name(int id) const { return binary_.names.at(id); }
    std::string role_name(Role r) const;
    std::string concept_label(int id) const;  // handles kTop / kBottom

    std::size_t num_concepts() const { return concepts_.names.size(); }
    std::size_t num_roles() const { return roles_.names.size(); }
    std::size_t role_slots() const { return 2 * roles_.names.size(); }
    std::size_t num_individuals() const { return individuals_.names.size(); }
    std::size_t num_shapes() const { return shapes_.names.size(); }
    std::size_t num_binary_shapes() const { return binary_.names.size(); }

    Bits empty_concepts() const { return Bits(num_concepts()); }
    Bits empty_roles() const { return Bits(role_slots()); }

    // Generated names live under '~' which the surface syntax reserves.
    int fresh_shape(std::string_view hint);
    int fresh_binary_shape(std::string_view hint);
    static bool is_generated(std::string_view name) { return !name.empty() && name[0] == '~'; }

private:
    struct Table {
        std::vector<std::string> names;
        std::unordered_map<std::string, int> ids;
        int intern(std::string_view n);
        std::optional<int> find(std::string_view n) const;
    };
    Table concepts_, roles_, individuals_, shapes_, binary_;
    int fresh_counter_ = 0;
};

struct ConjInclusion {
    std::vector<int> lhs;  // sorted concept ids, kTop allowed
    int rhs = kTop;        // concept, kTop or kBottom
};
struct AtMostOne {
    int a = kTop;
    Role r;
    int b = kTop;
};
struct ValueRestriction {
    int a = kTop;
    Role r;
    int b = kTop;
};
struct ExistsInclusion {
    int a = kTop;
    Role r;
    int b = kTop;
};
struct RoleInclusion {
    Role sub;
    Role sup;
};

using Axiom = std::variant<ConjInclusion, AtMostOne, ValueRestriction, ExistsInclusion, RoleInclusion>;

struct TBox {
    std::vector<Axiom> axioms;
    bool has_at_most() const;
    Bits concepts(std::size_t n_concepts) const;  // concept names occurring in axioms
};

struct ABox {
    std::set<std::pair<int, int>> concept_atoms;       // (concept, individual)
    std::set<std::tuple<int, int, int>> role_atoms;    // (base role, from, to)

    void add_concept(int c, int a) { concept_atoms.emplace(c, a); }
    void add_role(Role r, int a, int b);
    bool has_role(Role r, int a, int b) const;
    std::set<int> individuals() const;
};

struct TwoType {
    Bits c1, roles, c2;
    friend bool operator==(const TwoType&, const TwoType&) = default;
    friend bool operator<(const TwoType& x, const TwoType& y) {
        return std::tie(x.c1, x.roles, x.c2) < std::tie(y.c1, y.roles, y.c2);
    }
};

struct OneHalfType {
    Bits roles, concepts;
    friend bool operator==(const OneHalfType&, const OneHalfType&) = default;
    friend bool operator<(const OneHalfType& x, const OneHalfType& y) {
        return std::tie(x.roles, x.concepts) < std::tie(y.roles, y.concepts);
    }
    bool subsumed_by(const OneHalfType& o) const {
        return roles.is_subset_of(o.roles) && concepts.is_subset_of(o.concepts);
    }
};

TwoType invert_two_type(const TwoType& t);

struct TwoTypeHash {
    std::size_t operator()(const TwoType& t) const;
};

std::string format_concepts(const Bits& c, const Vocabulary& v);
std::string format_roles(const Bits& r, const Vocabulary& v);
std::string format_two_type(const TwoType& t, const Vocabulary& v);
std::string format_one_half_type(const OneHalfType& u, const Vocabulary& v);

struct Node {
    int root = -1;                // individual id
    std::vector<TwoType> word;    // empty for named individuals
    std::vector<int> path;        // child positions, used for naming
    bool anonymous() const { return !word.empty(); }
    friend bool operator==(const Node& x, const Node& y) { return x.root == y.root && x.word == y.word; }
};

// Finite labeled graph; role pairs are stored once per direction with inverse slots filled.
class Interpretation {
public:
    Interpretation() = default;
    Interpretation(std::size_t n_concepts, std::size_t role_slots)
        : n_concepts_(n_concepts), role_slots_(role_slots) {}

    int add_node(Node n);
    void add_concept(int node, int c) { labels_.at(node).set(c); }
    void set_label(int node, const Bits& c) { labels_.at(node) = c; }
    void add_edge(Role r, int x, int y);
    void add_roles(const Bits& roles, int x, int y);

    std::size_t size() const { return nodes_.size(); }
    const Node& node(int i) const { return nodes_.at(i); }
    const Bits& label(int i) const { return labels_.at(i); }
    bool has_concept(int node, int c) const { return c == kTop || (c >= 0 && labels_.at(node).test(c)); }
    bool has_edge(Role r, int x, int y) const;
    Bits roles_between(int x, int y) const;
    const std::map<int, Bits>& neighbours(int x) const { return adj_.at(x); }
    std::optional<int> node_of_individual(int ind) const;

    std::size_t num_concepts() const { return n_concepts_; }
    std::size_t role_slots() const { return role_slots_; }

    std::string node_name(int i, const Vocabulary& v) const;
    // Atoms in .abox style, sorted.
    std::vector<std::string> dump(const Vocabulary& v) const;

    bool complete = true;

private:
    std::size_t n_concepts_ = 0, role_slots_ = 0;
    std::vector<Node> nodes_;
    std::vector<Bits> labels_;
    std::vector<std::map<int, Bits>> adj_;
    std::map<int, int> individual_node_;
};

// Canonical interpretation of an ABox, optionally over every individual of the vocabulary.
Interpretation interpretation_of(const ABox& abox, const Vocabulary& v);

}  // namespace shapeval
