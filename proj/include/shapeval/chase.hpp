#pragma once

#include "shapeval/kb.hpp"

#include <stdexcept>

namespace shapeval {

// Atoms over individuals and blank nodes.
class AtomSet {
public:
    AtomSet() = default;
    AtomSet(std::size_t n_concepts, std::size_t role_slots) : n_concepts_(n_concepts), role_slots_(role_slots) {}

    int add_named(int individual);
    int add_blank();
    void add_concept(int x, int c) { labels_.at(x).set(c); }
    void add_roles(const Bits& roles, int x, int y);
    void add_role(Role r, int x, int y);

    std::size_t size() const { return labels_.size(); }
    bool is_blank(int x) const { return individual_.at(x) < 0; }
    int individual(int x) const { return individual_.at(x); }
    std::optional<int> node_of_individual(int ind) const;
    const Bits& label(int x) const { return labels_.at(x); }
    Bits roles_between(int x, int y) const;
    const std::map<int, Bits>& neighbours(int x) const { return adj_.at(x); }
    std::size_t num_atoms() const;
    std::size_t n_concepts() const { return n_concepts_; }
    std::size_t role_slots() const { return role_slots_; }

    // Induced substructure; keep[x] selects nodes. Order of kept nodes is preserved.
    AtomSet restrict_to(const std::vector<bool>& keep) const;
    // Substitutes y by z everywhere and drops y.
    AtomSet merge(int y, int z) const;

    // .abox-style atoms; blank nodes named _:bN in node order.
    std::vector<std::string> dump(const Vocabulary& v) const;
    friend bool operator==(const AtomSet&, const AtomSet&) = default;

private:
    std::size_t n_concepts_ = 0, role_slots_ = 0;
    std::vector<int> individual_;
    std::vector<Bits> labels_;
    std::vector<std::map<int, Bits>> adj_;
};

AtomSet atoms_of(const ABox& abox, const Vocabulary& v);
AtomSet atoms_of(const ABox& abox, std::size_t n_concepts, std::size_t role_slots);
// Anonymous nodes become blank nodes.
AtomSet atoms_of(const Interpretation& interp);
Interpretation interpretation_of(const AtomSet& atoms);

class SizeGuard : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ChaseVariant {
    Restricted,  // fire only unsatisfied matches
    Oblivious    // fire every trigger once
};

struct ChaseState {
    ChaseVariant variant = ChaseVariant::Restricted;
    std::set<std::pair<std::size_t, int>> fired;  // (axiom index, node), oblivious only
    bool clash = false;
};

// One parallel step followed by the ≤1 substitutions.
AtomSet fire_axioms(const TBox& tbox, const AtomSet& atoms, ChaseState& state);
inline AtomSet fire_axioms(const TBox& tbox, const AtomSet& atoms) {
    ChaseState st;
    return fire_axioms(tbox, atoms, st);
}

struct ChaseResult {
    AtomSet atoms;
    bool terminated = false;
    bool clash = false;
    int rounds = 0;
    std::vector<AtomSet> history;  // state after each round
};

ChaseResult run_chase(const TBox& tbox, const AtomSet& start, ChaseVariant variant, int max_rounds,
                      std::size_t max_nodes = 64);

struct Homomorphism {
    std::vector<int> map;
    bool injective = false;
    bool surjective = false;
    bool strong = false;
    bool embedding() const { return injective && strong; }
    bool isomorphism() const { return embedding() && surjective; }
};

inline constexpr std::size_t kDefaultNodeBound = 12;

// All homomorphisms from a to b fixing individuals.
std::vector<Homomorphism> enumerate_homomorphisms(const AtomSet& a, const AtomSet& b,
                                                  std::size_t bound = kDefaultNodeBound);
std::vector<Homomorphism> enumerate_endomorphisms(const AtomSet& a, std::size_t bound = kDefaultNodeBound);
std::optional<Homomorphism> find_homomorphism(const AtomSet& a, const AtomSet& b, std::size_t bound = kDefaultNodeBound);
bool is_core(const AtomSet& a, std::size_t bound = kDefaultNodeBound);
AtomSet core_of(const AtomSet& a, std::size_t bound = kDefaultNodeBound);
bool is_isomorphic(const AtomSet& a, const AtomSet& b, std::size_t bound = kDefaultNodeBound);

class NotTerminated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CoreChaseResult {
    AtomSet atoms;
    int rounds = 0;
    bool clash = false;
    std::vector<AtomSet> history;
};

// Throws NotTerminated after max_rounds.
CoreChaseResult run_core_chase(const TBox& tbox, const AtomSet& start, int max_rounds,
                               std::size_t bound = kDefaultNodeBound);

}  // namespace shapeval
