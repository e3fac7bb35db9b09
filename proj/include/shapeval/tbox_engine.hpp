#pragma once

#include "shapeval/kb.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace shapeval {

// M ⊑ head, head a concept or kBottom.
struct ConjFact {
    Bits lhs;
    int head = kBottom;
};

// M ⊑ ∃(⊓roles).⊓concepts
struct ExistsFact {
    Bits lhs, roles, concepts;
};

struct Closure {
    Bits concepts;
    bool bottom = false;
};

struct RoleRenaming {
    std::vector<Role> representative;  // indexed by base role name
    Role apply(Role r) const {
        Role rep = representative.at(r.name);
        return r.inverted ? invert_role(rep) : rep;
    }
    bool identity() const;
};

std::pair<TBox, RoleRenaming> collapse_role_cycles(const TBox& tbox, std::size_t num_roles);
ABox rename_roles(const ABox& abox, const RoleRenaming& ren);

struct Restriction {
    int a = kTop;
    Role r;
    int b = kTop;
};

class SaturatedTBox {
public:
    const TBox& source() const { return source_; }
    std::size_t num_concepts() const { return n_concepts_; }
    std::size_t role_slots() const { return role_slots_; }
    const Bits& signature() const { return signature_; }

    const std::vector<ConjFact>& entailed_conj() const { return conj_; }
    const std::vector<ExistsFact>& entailed_exists() const { return exists_; }

    const Bits& super_roles(Role r) const { return super_.at(r.index()); }
    Bits role_closure(const Bits& roles) const;

    Closure closure(const Bits& m) const;
    // Maximal entailed (R,N) for the closure of m; sorted antichain.
    const std::vector<OneHalfType>& maximal_existentials(const Bits& m) const;

    const std::vector<Restriction>& value_restrictions() const { return forall_; }
    const std::vector<Restriction>& at_most_ones() const { return at_most_; }
    const std::vector<Restriction>& existentials() const { return exists_axioms_; }

    Bits empty_concepts() const { return Bits(n_concepts_); }
    Bits empty_roles() const { return Bits(role_slots_); }

private:
    friend SaturatedTBox saturate(const TBox& tbox, std::size_t n_concepts, std::size_t role_slots);

    TBox source_;
    std::size_t n_concepts_ = 0, role_slots_ = 0;
    Bits signature_;
    std::vector<ConjFact> conj_;
    std::vector<ExistsFact> exists_;
    std::vector<Bits> super_;
    std::vector<Restriction> forall_, at_most_, exists_axioms_;

    struct Cache {
        std::mutex mu;
        std::map<Bits, Closure> closures;
        std::map<Bits, std::vector<OneHalfType>> existentials;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

SaturatedTBox saturate(const TBox& tbox, std::size_t n_concepts, std::size_t role_slots);
inline SaturatedTBox saturate(const TBox& tbox, const Vocabulary& v) {
    return saturate(tbox, v.num_concepts(), v.role_slots());
}

bool entails_conj(const SaturatedTBox& sat, const Bits& m, int b);
std::vector<OneHalfType> implied_existentials(const SaturatedTBox& sat, const Bits& m);
bool is_locally_consistent(const SaturatedTBox& sat, const TwoType& t);
bool is_consistent(const SaturatedTBox& sat, const ABox& abox, std::size_t num_individuals);

// Membership that treats kTop as always present and kBottom as never present.
inline bool holds(const Bits& set, int c) { return c == kTop || (c >= 0 && set.test(c)); }

}  // namespace shapeval
