#pragma once

#include "shapeval/tbox_engine.hpp"

namespace shapeval {

struct CompletedABox {
    ABox base;
    std::vector<Bits> types;                    // per individual id
    std::map<std::pair<int, int>, Bits> roles;  // both orientations present
    bool inconsistent = false;
    std::size_t role_slots = 0;

    Bits roles_between(int a, int b) const;
    ABox atoms() const;  // A_T as plain atoms
    std::size_t num_individuals() const { return types.size(); }
};

CompletedABox complete_abox(const SaturatedTBox& sat, const ABox& abox, std::size_t num_individuals);

std::vector<OneHalfType> succ_config(const SaturatedTBox& sat, const std::vector<TwoType>& f);
std::vector<TwoType> children(const SaturatedTBox& sat, const TwoType& t);
std::vector<TwoType> root_frontier(const SaturatedTBox& sat, const CompletedABox& completed, int a);

// can_n; Interpretation::complete tells whether can_n = can.
Interpretation build_can(const SaturatedTBox& sat, const CompletedABox& completed, int depth);
// can_0, the canonical interpretation of A_T.
Interpretation completed_interpretation(const CompletedABox& completed, std::size_t role_slots);

// Test hook: inverts the covering filter of succ_config (R4). Process-wide.
void set_fault_flip_r4(bool on);
bool fault_flip_r4();

bool is_model(const Interpretation& interp, const SaturatedTBox& sat, const ABox& abox);

}  // namespace shapeval
