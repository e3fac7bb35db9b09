#pragma once

#include "shapeval/shapes.hpp"

namespace shapeval {

struct ShapeAssignment {
    std::vector<Bits> unary;                 // shape id -> nodes
    std::vector<std::vector<Bits>> binary;   // binary id -> row per node

    ShapeAssignment() = default;
    ShapeAssignment(std::size_t n_shapes, std::size_t n_binary, std::size_t n_nodes);

    bool has(int shape, int node) const {
        return shape >= 0 && static_cast<std::size_t>(shape) < unary.size() && unary[shape].test(node);
    }
    bool has_pair(int b, int x, int y) const {
        return b >= 0 && static_cast<std::size_t>(b) < binary.size() && binary[b][x].test(y);
    }
    std::size_t count() const;
    friend bool operator==(const ShapeAssignment&, const ShapeAssignment&) = default;
};

// Sizes large enough for every id referenced by the graph and the vocabulary.
ShapeAssignment empty_assignment(const Interpretation& interp, const ShapesGraph& sg, const Vocabulary* v = nullptr);

// Extension of a body under a fixed assignment.
Bits evaluate(const Interpretation& interp, const ShapeExpr& e, const ShapeAssignment& s);
std::vector<Bits> evaluate_path(const Interpretation& interp, const Path& p, const ShapeAssignment& s);

ShapeAssignment immediate_consequence(const Interpretation& interp, const std::vector<Constraint>& cs,
                                      const ShapeAssignment& s);

// Unary and binary atoms, least fixpoint per stratum.
ShapeAssignment perfect_assignment(const Interpretation& interp, const ShapesGraph& sg, const Stratification& strat);
inline ShapeAssignment perfect_assignment_b(const Interpretation& interp, const ShapesGraph& sg,
                                            const Stratification& strat) {
    return perfect_assignment(interp, sg, strat);
}

struct TargetVerdict {
    Target target;
    bool valid = false;
    bool known_shape = true;  // false when the target shape has no constraint
};

struct ValidationResult {
    std::vector<TargetVerdict> targets;
    bool valid = true;
    std::size_t strata = 0;
    std::size_t atoms = 0;
};

// Throws NotStratified.
ValidationResult validate(const Interpretation& interp, const ShapesGraph& sg);
ValidationResult validate(const Interpretation& interp, const ShapesGraph& sg, const Stratification& strat);

}  // namespace shapeval
