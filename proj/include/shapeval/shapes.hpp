#pragma once

#include "shapeval/kb.hpp"

#include <memory>
#include <stdexcept>

namespace shapeval {

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

struct Regex {
    enum class Kind { Role, Alt, Seq, Star };
    Kind kind = Kind::Role;
    Role role;
    RegexPtr a, b;
};

RegexPtr regex_role(Role r);
RegexPtr regex_alt(RegexPtr a, RegexPtr b);
RegexPtr regex_seq(RegexPtr a, RegexPtr b);
RegexPtr regex_star(RegexPtr a);
bool same_regex(const Regex& x, const Regex& y);

struct Nfa {
    struct Edge {
        int from = 0;
        std::optional<Role> label;  // nullopt is ε
        int to = 0;
    };
    int num_states = 0;
    int initial = 0;
    int final_state = 0;
    std::vector<Edge> edges;

    std::set<Role> alphabet() const;
};

// Thompson construction: one initial state without incoming edges, one final state.
Nfa regex_to_nfa(const Regex& e);
bool nfa_accepts(const Nfa& m, const std::vector<Role>& word);

// SHACL^b path algebra.
struct Path;
using PathPtr = std::shared_ptr<const Path>;

struct Path {
    enum class Kind { Test, Binary, Role, Union, Inter, Concat, Star, Inverse, Diff };
    Kind kind = Kind::Role;
    int id = -1;  // shape for Test, binary shape for Binary
    Role role;
    PathPtr a, b;
};

PathPtr path_test(int shape);
PathPtr path_binary(int b);
PathPtr path_role(Role r);
PathPtr path_union(PathPtr a, PathPtr b);
PathPtr path_inter(PathPtr a, PathPtr b);
PathPtr path_concat(PathPtr a, PathPtr b);
PathPtr path_star(PathPtr a);
PathPtr path_inverse(PathPtr a);
PathPtr path_diff(PathPtr a, PathPtr b);

struct ShapeExpr;
using ShapeExprPtr = std::shared_ptr<const ShapeExpr>;

struct ShapeExpr {
    enum class Kind {
        Individual,
        Shape,
        NegShape,
        Concept,
        Or,
        And,
        ExistsRoles,
        ExistsPath,
        PathEq,
        PathDisj,
        ExistsBinary
    };
    Kind kind = Kind::Concept;
    // Individual, shape, concept (kTop allowed); for PathEq/PathDisj the guard individual or -1.
    int id = -1;
    std::vector<Role> roles;  // sorted, ExistsRoles
    RegexPtr e1, e2;
    PathPtr path;
    ShapeExprPtr lhs, rhs;
};

ShapeExprPtr sx_individual(int c);
ShapeExprPtr sx_shape(int s);
ShapeExprPtr sx_not(int s);
ShapeExprPtr sx_concept(int a);
ShapeExprPtr sx_top();
ShapeExprPtr sx_or(ShapeExprPtr a, ShapeExprPtr b);
ShapeExprPtr sx_and(ShapeExprPtr a, ShapeExprPtr b);
ShapeExprPtr sx_and(const std::vector<ShapeExprPtr>& parts);
ShapeExprPtr sx_exists(std::vector<Role> roles, ShapeExprPtr e);
ShapeExprPtr sx_exists_path(RegexPtr e, ShapeExprPtr body);
ShapeExprPtr sx_eq(int guard, RegexPtr e1, RegexPtr e2);
ShapeExprPtr sx_disj(int guard, RegexPtr e1, RegexPtr e2);
ShapeExprPtr sx_exists_binary(PathPtr p, ShapeExprPtr body);
bool same_expr(const ShapeExpr& x, const ShapeExpr& y);

struct Constraint {
    int head = -1;
    ShapeExprPtr body;
};

struct BinaryConstraint {
    int head = -1;
    PathPtr body;
};

struct Target {
    int shape = -1;
    int individual = -1;
    friend auto operator<=>(const Target&, const Target&) = default;
};

struct ShapesGraph {
    std::vector<Constraint> constraints;
    std::vector<BinaryConstraint> binary;
    std::vector<Target> targets;

    bool has_negation() const;
    std::set<int> defined_shapes() const;
};

struct NormalConstraint {
    enum class Form { Individual, Shape, Concept, And, Exists, Neg };
    int head = -1;
    Form form = Form::Concept;
    int a = -1;  // individual, shape, concept (kTop allowed), or first conjunct
    int b = -1;  // second conjunct
    std::vector<Role> roles;
    friend bool operator==(const NormalConstraint&, const NormalConstraint&) = default;
};

NormalConstraint nc_individual(int head, int c);
NormalConstraint nc_shape(int head, int s);
NormalConstraint nc_concept(int head, int a);
NormalConstraint nc_and(int head, int s1, int s2);
NormalConstraint nc_exists(int head, std::vector<Role> roles, int s);
NormalConstraint nc_not(int head, int s);

Constraint to_constraint(const NormalConstraint& n);
ShapesGraph to_shapes_graph(const std::vector<NormalConstraint>& cs, std::vector<Target> targets);

class NormalizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NormalizedShapes {
    std::vector<NormalConstraint> constraints;
    std::vector<Target> targets;
    ShapesGraph graph() const { return to_shapes_graph(constraints, targets); }
};

NormalizedShapes normalize(Vocabulary& vocab, const ShapesGraph& sg);
bool is_normal(const ShapesGraph& sg);
// Reads a graph whose bodies are already NC1–NC6.
NormalizedShapes as_normal(const ShapesGraph& sg);

// Dependency nodes: unary shape s is s, binary shape b is offset + b.
struct DepNode {
    bool binary = false;
    int id = -1;
    friend auto operator<=>(const DepNode&, const DepNode&) = default;
};

struct Stratification {
    std::vector<std::vector<int>> unary;   // constraint indices per stratum
    std::vector<std::vector<int>> binary;  // binary constraint indices per stratum
    std::map<int, int> shape_level;
    std::map<int, int> binary_level;
    std::size_t size() const { return unary.size(); }
};

class NotStratified : public std::runtime_error {
public:
    NotStratified(std::vector<DepNode> cycle, const std::string& what)
        : std::runtime_error(what), cycle_(std::move(cycle)) {}
    const std::vector<DepNode>& cycle() const { return cycle_; }

private:
    std::vector<DepNode> cycle_;
};

enum class StratificationMode {
    Coarse,  // fewest strata: negation is the only reason to move up
    Fine     // one stratum per strongly connected component
};

Stratification compute_stratification(const ShapesGraph& sg, StratificationMode mode = StratificationMode::Coarse);

std::string format_regex(const Regex& e, const Vocabulary& v);
std::string format_path(const Path& p, const Vocabulary& v);
std::string format_expr(const ShapeExpr& e, const Vocabulary& v);
std::string format_constraint(const Constraint& c, const Vocabulary& v);
std::string format_binary_constraint(const BinaryConstraint& c, const Vocabulary& v);
std::string format_normal(const NormalConstraint& c, const Vocabulary& v);
std::string format_shapes(const ShapesGraph& sg, const Vocabulary& v);
std::string format_dep_cycle(const std::vector<DepNode>& cycle, const Vocabulary& v);

ShapesGraph rename_roles(const ShapesGraph& sg, const struct RoleRenaming& ren);

}  // namespace shapeval
