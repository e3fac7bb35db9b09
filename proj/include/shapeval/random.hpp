#pragma once

#include "shapeval/model_builder.hpp"
#include "shapeval/shapes.hpp"

#include <random>

namespace shapeval {

using Rng = std::mt19937_64;

struct KbParams {
    int concepts = 5;
    int roles = 3;
    int individuals = 6;
    int axioms = 6;
    int concept_atoms = 6;
    int role_atoms = 5;
    bool at_most = true;          // F2 axioms allowed
    bool require_at_most = false; // at least one F2 axiom
    bool inverses = true;
    bool role_inclusions = true;
    bool bottom = false;
};

struct RandomKb {
    Vocabulary v;
    TBox t;
    ABox a;
};

RandomKb random_kb(Rng& rng, const KbParams& p);

// Consistent KBs whose can is complete at `depth` and has at most `node_bound` nodes.
struct FiniteKb {
    RandomKb kb;
    int draws = 0;
};
std::optional<FiniteKb> random_finite_kb(Rng& rng, const KbParams& p, int depth, std::size_t node_bound,
                                         int attempts = 200);

struct ConstraintParams {
    int shapes = 6;
    int constraints = 12;
    int strata = 2;
    bool negation = true;
    bool individuals = true;
};

// Stratified by construction: each shape gets a level and negation only looks strictly down.
NormalizedShapes random_normal_shapes(Rng& rng, Vocabulary& v, const ConstraintParams& p);

struct GraphParams {
    int shapes = 4;
    int constraints = 6;
    int depth = 3;
    bool eq = true;
};

// Surface-grammar shapes graph (regex paths, guarded eq/disj, disjunction) with all-pairs targets.
ShapesGraph random_shapes_graph(Rng& rng, Vocabulary& v, const GraphParams& p);

// A finite-can KB plus stratified normal-form constraints; sizes drawn uniformly up to the maxima.
struct CaseParams {
    int max_concepts = 5;
    int max_roles = 3;
    int max_individuals = 6;
    int max_axioms = 6;
    int max_constraints = 12;
    int max_shapes = 6;
    int strata = 2;
    bool at_most = true;
    bool require_at_most = false;
    int depth = 8;
    std::size_t node_bound = 40;
};

struct RandomCase {
    Vocabulary v;
    TBox t;
    ABox a;
    NormalizedShapes shapes;
};

std::optional<RandomCase> random_case(Rng& rng, const CaseParams& p);

// ABox over the vocabulary's existing symbols.
ABox random_abox(Rng& rng, const Vocabulary& v, int concept_atoms, int role_atoms);

// Every (shape, individual) pair for the heads of sg.
std::vector<Target> all_targets(const ShapesGraph& sg, const Vocabulary& v);

}  // namespace shapeval
