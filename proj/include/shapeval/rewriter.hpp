#pragma once

#include "shapeval/model_builder.hpp"
#include "shapeval/shapes.hpp"

#include <memory>
#include <optional>

namespace shapeval {

// ⊤ | c | ∃(⊓R).s | ∃(⊓R).⊓N
struct BasicExpr {
    enum class Kind { Top, Individual, ExistsShape, ExistsConcepts };
    Kind kind = Kind::Top;
    int id = -1;  // individual or shape
    Bits roles, concepts;

    static BasicExpr top() { return {}; }
    static BasicExpr individual(int c) { return {Kind::Individual, c, {}, {}}; }
    static BasicExpr exists_shape(Bits roles, int s) { return {Kind::ExistsShape, s, std::move(roles), {}}; }
    static BasicExpr exists_concepts(Bits roles, Bits concepts) {
        return {Kind::ExistsConcepts, -1, std::move(roles), std::move(concepts)};
    }
    friend bool operator==(const BasicExpr& x, const BasicExpr& y) {
        return x.kind == y.kind && x.id == y.id && x.roles == y.roles && x.concepts == y.concepts;
    }
    friend bool operator<(const BasicExpr& x, const BasicExpr& y) {
        return std::tie(x.kind, x.id, x.roles, x.concepts) < std::tie(y.kind, y.id, y.roles, y.concepts);
    }
};

using ExprSet = std::set<BasicExpr>;

struct Quadruple {
    TwoType t;
    ExprSet p, q;
    Bits h, h_neg;  // shape literals s and ¬s
};

std::string format_basic(const BasicExpr& e, const Vocabulary& v);
std::string format_quadruple(const Quadruple& q, const Vocabulary& v);

// s ⇐ ⋀pos_concepts ∧ ⋀¬neg_concepts ∧ ⋀pos ∧ ⋀¬neg
struct EmittedConstraint {
    int head = -1;
    Bits pos_concepts, neg_concepts;
    ExprSet pos, neg;

    friend bool operator<(const EmittedConstraint& x, const EmittedConstraint& y) {
        return std::tie(x.head, x.pos_concepts, x.neg_concepts, x.pos, x.neg) <
               std::tie(y.head, y.pos_concepts, y.neg_concepts, y.pos, y.neg);
    }
    friend bool operator==(const EmittedConstraint& x, const EmittedConstraint& y) { return !(x < y) && !(y < x); }
    std::set<std::string> conjuncts(const Vocabulary& v) const;
    std::string pretty(const Vocabulary& v) const;
};

struct RewriteOptions {
    // Seed every locally consistent 2-type and every admissible Q instead of the reachable ones.
    bool eager = false;
    // Abort once a single stage holds this many quadruples; 0 means no limit.
    std::size_t max_quadruples = 0;
};

class RewriteBudgetExceeded : public std::runtime_error {
public:
    explicit RewriteBudgetExceeded(std::size_t n)
        : std::runtime_error("rewriting exceeded " + std::to_string(n) + " quadruples") {}
};

struct RewriteStats {
    std::vector<std::size_t> quadruples;  // |K_i|
    std::size_t emitted = 0;
};

class RewriteEngine;

// K_0 = psat, K_i = sat(comp(K_{i-1})) over a fixed TBox and constraint set.
class Rewriting {
public:
    Rewriting(const SaturatedTBox& sat, std::vector<NormalConstraint> constraints, std::size_t num_shapes,
              RewriteOptions opts = {});
    ~Rewriting();
    Rewriting(Rewriting&&) noexcept;

    const Bits& signature() const;  // NC^T
    const Stratification& stratification() const { return strat_; }

    std::vector<Quadruple> psat(const std::vector<NormalConstraint>& c0);
    std::vector<Quadruple> completion(const std::vector<Quadruple>& k, int stratum);
    std::vector<Quadruple> sat(const std::vector<NormalConstraint>& ci, const std::vector<Quadruple>& k);
    std::vector<EmittedConstraint> emit(const std::vector<Quadruple>& k, const std::vector<NormalConstraint>& ci) const;

    const std::vector<NormalConstraint>& stratum(int i) const { return by_stratum_.at(i); }
    std::size_t num_strata() const { return by_stratum_.size(); }

    // Runs every stratum and returns the union of emitted constraints.
    std::vector<EmittedConstraint> run(RewriteStats* stats = nullptr);
    const std::vector<std::vector<Quadruple>>& strata_results() const { return k_; }

private:
    Bits undefined_shapes() const;

    std::unique_ptr<RewriteEngine> engine_;
    std::size_t num_shapes_ = 0;
    std::vector<NormalConstraint> constraints_;
    Stratification strat_;
    std::vector<std::vector<NormalConstraint>> by_stratum_;
    std::vector<std::vector<Quadruple>> k_;
};

// C_T as an evaluable graph: C, the emitted constraints, and aux shapes for negated parts.
ShapesGraph emitted_graph(Vocabulary& v, const std::vector<NormalConstraint>& c,
                          const std::vector<EmittedConstraint>& emitted, std::vector<Target> targets);

struct RewriteResult {
    NormalizedShapes normalized;
    std::vector<EmittedConstraint> emitted;
    ShapesGraph graph;  // C_T
    RewriteStats stats;
};

RewriteResult rewrite(const SaturatedTBox& sat, Vocabulary& v, const NormalizedShapes& shapes, RewriteOptions opts = {});

class PureRewriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Horn-ALCHI: C_T⁺ ∪ T_s over the plain ABox.
ShapesGraph pure_rewrite_alchi(const SaturatedTBox& sat, Vocabulary& v, const ShapesGraph& c_t);
// Horn-SHIQ through binary shapes.
ShapesGraph pure_rewrite_shaclb(const SaturatedTBox& sat, Vocabulary& v, const ShapesGraph& c_t);
// T_s alone, for inspection.
ShapesGraph shaclb_tbox_constraints(const SaturatedTBox& sat, Vocabulary& v);
ShapesGraph alchi_tbox_constraints(const SaturatedTBox& sat, Vocabulary& v);

int concept_shape(Vocabulary& v, int a);  // s_A
int role_shape(Vocabulary& v, Role r);          // b_r

}  // namespace shapeval
