#include "shapeval/shapes.hpp"

#include "shapeval/tbox_engine.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include <algorithm>
#include <deque>
#include <functional>

namespace shapeval {

RegexPtr regex_role(Role r) {
    auto e = std::make_shared<Regex>();
    e->kind = Regex::Kind::Role;
    e->role = r;
    return e;
}

static RegexPtr regex_node(Regex::Kind k, RegexPtr a, RegexPtr b) {
    auto e = std::make_shared<Regex>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

RegexPtr regex_alt(RegexPtr a, RegexPtr b) { return regex_node(Regex::Kind::Alt, std::move(a), std::move(b)); }
RegexPtr regex_seq(RegexPtr a, RegexPtr b) { return regex_node(Regex::Kind::Seq, std::move(a), std::move(b)); }
RegexPtr regex_star(RegexPtr a) { return regex_node(Regex::Kind::Star, std::move(a), nullptr); }

bool same_regex(const Regex& x, const Regex& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Regex::Kind::Role: return x.role == y.role;
        case Regex::Kind::Star: return same_regex(*x.a, *y.a);
        default: return same_regex(*x.a, *y.a) && same_regex(*x.b, *y.b);
    }
}

std::set<Role> Nfa::alphabet() const {
    std::set<Role> out;
    for (auto& e : edges)
        if (e.label) out.insert(*e.label);
    return out;
}

namespace {

struct Fragment {
    int in, out;
};

Fragment thompson(const Regex& e, Nfa& m) {
    auto state = [&] { return m.num_states++; };
    switch (e.kind) {
        case Regex::Kind::Role: {
            int s = state(), t = state();
            m.edges.push_back({s, e.role, t});
            return {s, t};
        }
        case Regex::Kind::Seq: {
            Fragment a = thompson(*e.a, m);
            Fragment b = thompson(*e.b, m);
            m.edges.push_back({a.out, std::nullopt, b.in});
            return {a.in, b.out};
        }
        case Regex::Kind::Alt: {
            int s = state();
            Fragment a = thompson(*e.a, m);
            Fragment b = thompson(*e.b, m);
            int t = state();
            m.edges.push_back({s, std::nullopt, a.in});
            m.edges.push_back({s, std::nullopt, b.in});
            m.edges.push_back({a.out, std::nullopt, t});
            m.edges.push_back({b.out, std::nullopt, t});
            return {s, t};
        }
        case Regex::Kind::Star: {
            int s = state();
            Fragment a = thompson(*e.a, m);
            int t = state();
            m.edges.push_back({s, std::nullopt, a.in});
            m.edges.push_back({s, std::nullopt, t});
            m.edges.push_back({a.out, std::nullopt, a.in});
            m.edges.push_back({a.out, std::nullopt, t});
            return {s, t};
        }
    }
    return {0, 0};
}

}  // namespace

Nfa regex_to_nfa(const Regex& e) {
    Nfa m;
    Fragment f = thompson(e, m);
    m.initial = f.in;
    m.final_state = f.out;
    return m;
}

bool nfa_accepts(const Nfa& m, const std::vector<Role>& word) {
    auto eclose = [&](std::set<int> s) {
        std::vector<int> stack(s.begin(), s.end());
        while (!stack.empty()) {
            int q = stack.back();
            stack.pop_back();
            for (auto& e : m.edges)
                if (e.from == q && !e.label && s.insert(e.to).second) stack.push_back(e.to);
        }
        return s;
    };
    std::set<int> cur = eclose({m.initial});
    for (Role r : word) {
        std::set<int> next;
        for (auto& e : m.edges)
            if (e.label == r && cur.count(e.from)) next.insert(e.to);
        cur = eclose(std::move(next));
    }
    return cur.count(m.final_state) > 0;
}

static PathPtr path_node(Path::Kind k, PathPtr a = nullptr, PathPtr b = nullptr) {
    auto p = std::make_shared<Path>();
    p->kind = k;
    p->a = std::move(a);
    p->b = std::move(b);
    return p;
}

PathPtr path_test(int shape) {
    auto p = std::make_shared<Path>();
    p->kind = Path::Kind::Test;
    p->id = shape;
    return p;
}
PathPtr path_binary(int b) {
    auto p = std::make_shared<Path>();
    p->kind = Path::Kind::Binary;
    p->id = b;
    return p;
}
PathPtr path_role(Role r) {
    auto p = std::make_shared<Path>();
    p->kind = Path::Kind::Role;
    p->role = r;
    return p;
}
PathPtr path_union(PathPtr a, PathPtr b) { return path_node(Path::Kind::Union, std::move(a), std::move(b)); }
PathPtr path_inter(PathPtr a, PathPtr b) { return path_node(Path::Kind::Inter, std::move(a), std::move(b)); }
PathPtr path_concat(PathPtr a, PathPtr b) { return path_node(Path::Kind::Concat, std::move(a), std::move(b)); }
PathPtr path_star(PathPtr a) { return path_node(Path::Kind::Star, std::move(a)); }
PathPtr path_inverse(PathPtr a) { return path_node(Path::Kind::Inverse, std::move(a)); }
PathPtr path_diff(PathPtr a, PathPtr b) { return path_node(Path::Kind::Diff, std::move(a), std::move(b)); }

static bool same_path(const Path& x, const Path& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Path::Kind::Test:
        case Path::Kind::Binary: return x.id == y.id;
        case Path::Kind::Role: return x.role == y.role;
        case Path::Kind::Star:
        case Path::Kind::Inverse: return same_path(*x.a, *y.a);
        default: return same_path(*x.a, *y.a) && same_path(*x.b, *y.b);
    }
}

static std::shared_ptr<ShapeExpr> sx(ShapeExpr::Kind k, int id = -1) {
    auto e = std::make_shared<ShapeExpr>();
    e->kind = k;
    e->id = id;
    return e;
}

ShapeExprPtr sx_individual(int c) { return sx(ShapeExpr::Kind::Individual, c); }
ShapeExprPtr sx_shape(int s) { return sx(ShapeExpr::Kind::Shape, s); }
ShapeExprPtr sx_not(int s) { return sx(ShapeExpr::Kind::NegShape, s); }
ShapeExprPtr sx_concept(int a) { return sx(ShapeExpr::Kind::Concept, a); }
ShapeExprPtr sx_top() { return sx(ShapeExpr::Kind::Concept, kTop); }

ShapeExprPtr sx_or(ShapeExprPtr a, ShapeExprPtr b) {
    auto e = sx(ShapeExpr::Kind::Or);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
ShapeExprPtr sx_and(ShapeExprPtr a, ShapeExprPtr b) {
    auto e = sx(ShapeExpr::Kind::And);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
ShapeExprPtr sx_and(const std::vector<ShapeExprPtr>& parts) {
    if (parts.empty()) return sx_top();
    ShapeExprPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = sx_and(acc, parts[i]);
    return acc;
}
ShapeExprPtr sx_exists(std::vector<Role> roles, ShapeExprPtr body) {
    std::sort(roles.begin(), roles.end());
    roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
    auto e = sx(ShapeExpr::Kind::ExistsRoles);
    e->roles = std::move(roles);
    e->lhs = std::move(body);
    return e;
}
ShapeExprPtr sx_exists_path(RegexPtr r, ShapeExprPtr body) {
    auto e = sx(ShapeExpr::Kind::ExistsPath);
    e->e1 = std::move(r);
    e->lhs = std::move(body);
    return e;
}
ShapeExprPtr sx_eq(int guard, RegexPtr e1, RegexPtr e2) {
    auto e = sx(ShapeExpr::Kind::PathEq, guard);
    e->e1 = std::move(e1);
    e->e2 = std::move(e2);
    return e;
}
ShapeExprPtr sx_disj(int guard, RegexPtr e1, RegexPtr e2) {
    auto e = sx(ShapeExpr::Kind::PathDisj, guard);
    e->e1 = std::move(e1);
    e->e2 = std::move(e2);
    return e;
}
ShapeExprPtr sx_exists_binary(PathPtr p, ShapeExprPtr body) {
    auto e = sx(ShapeExpr::Kind::ExistsBinary);
    e->path = std::move(p);
    e->lhs = std::move(body);
    return e;
}

bool same_expr(const ShapeExpr& x, const ShapeExpr& y) {
    if (x.kind != y.kind || x.id != y.id) return false;
    using K = ShapeExpr::Kind;
    switch (x.kind) {
        case K::Individual:
        case K::Shape:
        case K::NegShape:
        case K::Concept: return true;
        case K::Or:
        case K::And: return same_expr(*x.lhs, *y.lhs) && same_expr(*x.rhs, *y.rhs);
        case K::ExistsRoles: return x.roles == y.roles && same_expr(*x.lhs, *y.lhs);
        case K::ExistsPath: return same_regex(*x.e1, *y.e1) && same_expr(*x.lhs, *y.lhs);
        case K::PathEq:
        case K::PathDisj: return same_regex(*x.e1, *y.e1) && same_regex(*x.e2, *y.e2);
        case K::ExistsBinary: return same_path(*x.path, *y.path) && same_expr(*x.lhs, *y.lhs);
    }
    return false;
}

namespace {

void visit_expr(const ShapeExpr& e, bool negated, const std::function<void(DepNode, bool)>& f);

void visit_path(const Path& p, bool negated, const std::function<void(DepNode, bool)>& f) {
    switch (p.kind) {
        case Path::Kind::Test: f({false, p.id}, negated); break;
        case Path::Kind::Binary: f({true, p.id}, negated); break;
        case Path::Kind::Role: break;
        case Path::Kind::Star:
        case Path::Kind::Inverse: visit_path(*p.a, negated, f); break;
        case Path::Kind::Diff:
            visit_path(*p.a, negated, f);
            visit_path(*p.b, true, f);
            break;
        default:
            visit_path(*p.a, negated, f);
            visit_path(*p.b, negated, f);
    }
}

void visit_expr(const ShapeExpr& e, bool negated, const std::function<void(DepNode, bool)>& f) {
    using K = ShapeExpr::Kind;
    switch (e.kind) {
        case K::Shape: f({false, e.id}, negated); break;
        case K::NegShape: f({false, e.id}, true); break;
        case K::Or:
        case K::And:
            visit_expr(*e.lhs, negated, f);
            visit_expr(*e.rhs, negated, f);
            break;
        case K::ExistsRoles:
        case K::ExistsPath: visit_expr(*e.lhs, negated, f); break;
        case K::ExistsBinary:
            visit_path(*e.path, negated, f);
            visit_expr(*e.lhs, negated, f);
            break;
        default: break;
    }
}

}  // namespace

bool ShapesGraph::has_negation() const {
    bool neg = false;
    auto f = [&](DepNode, bool n) { neg = neg || n; };
    for (auto& c : constraints) visit_expr(*c.body, false, f);
    for (auto& c : binary) visit_path(*c.body, false, f);
    return neg;
}

std::set<int> ShapesGraph::defined_shapes() const {
    std::set<int> out;
    for (auto& c : constraints) out.insert(c.head);
    return out;
}

NormalConstraint nc_individual(int head, int c) { return {head, NormalConstraint::Form::Individual, c, -1, {}}; }
NormalConstraint nc_shape(int head, int s) { return {head, NormalConstraint::Form::Shape, s, -1, {}}; }
NormalConstraint nc_concept(int head, int a) { return {head, NormalConstraint::Form::Concept, a, -1, {}}; }
NormalConstraint nc_and(int head, int s1, int s2) { return {head, NormalConstraint::Form::And, s1, s2, {}}; }
NormalConstraint nc_exists(int head, std::vector<Role> roles, int s) {
    std::sort(roles.begin(), roles.end());
    roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
    return {head, NormalConstraint::Form::Exists, s, -1, std::move(roles)};
}
NormalConstraint nc_not(int head, int s) { return {head, NormalConstraint::Form::Neg, s, -1, {}}; }

Constraint to_constraint(const NormalConstraint& n) {
    using F = NormalConstraint::Form;
    switch (n.form) {
        case F::Individual: return {n.head, sx_individual(n.a)};
        case F::Shape: return {n.head, sx_shape(n.a)};
        case F::Concept: return {n.head, sx_concept(n.a)};
        case F::And: return {n.head, sx_and(sx_shape(n.a), sx_shape(n.b))};
        case F::Exists: return {n.head, sx_exists(n.roles, sx_shape(n.a))};
        case F::Neg: return {n.head, sx_not(n.a)};
    }
    return {};
}

ShapesGraph to_shapes_graph(const std::vector<NormalConstraint>& cs, std::vector<Target> targets) {
    ShapesGraph g;
    for (auto& c : cs) g.constraints.push_back(to_constraint(c));
    g.targets = std::move(targets);
    return g;
}

static std::optional<NormalConstraint> as_normal(const Constraint& c) {
    using K = ShapeExpr::Kind;
    const ShapeExpr& b = *c.body;
    switch (b.kind) {
        case K::Individual: return nc_individual(c.head, b.id);
        case K::Shape: return nc_shape(c.head, b.id);
        case K::Concept: return nc_concept(c.head, b.id);
        case K::NegShape: return nc_not(c.head, b.id);
        case K::And:
            if (b.lhs->kind == K::Shape && b.rhs->kind == K::Shape) return nc_and(c.head, b.lhs->id, b.rhs->id);
            return std::nullopt;
        case K::ExistsRoles:
            if (b.lhs->kind == K::Shape && !b.roles.empty()) return nc_exists(c.head, b.roles, b.lhs->id);
            return std::nullopt;
        default: return std::nullopt;
    }
}

bool is_normal(const ShapesGraph& sg) {
    if (!sg.binary.empty()) return false;
    return std::all_of(sg.constraints.begin(), sg.constraints.end(),
                       [](const Constraint& c) { return as_normal(c).has_value(); });
}

NormalizedShapes as_normal(const ShapesGraph& sg) {
    NormalizedShapes out;
    for (auto& c : sg.constraints) {
        auto n = as_normal(c);
        if (!n) throw NormalizationError("constraint is not in normal form");
        out.constraints.push_back(*n);
    }
    out.targets = sg.targets;
    return out;
}

namespace {

class Normalizer {
public:
    explicit Normalizer(Vocabulary& v) : v_(v) {}

    void emit(int head, const ShapeExpr& e) {
        using K = ShapeExpr::Kind;
        switch (e.kind) {
            case K::Individual: add(nc_individual(head, e.id)); break;
            case K::Shape: add(nc_shape(head, e.id)); break;
            case K::NegShape: add(nc_not(head, e.id)); break;
            case K::Concept: add(nc_concept(head, e.id)); break;
            case K::Or:
                emit(head, *e.lhs);
                emit(head, *e.rhs);
                break;
            case K::And: add(nc_and(head, atom(*e.lhs), atom(*e.rhs))); break;
            case K::ExistsRoles:
                if (e.roles.empty()) {
                    add(nc_shape(head, atom(*e.lhs)));
                } else {
                    add(nc_exists(head, e.roles, atom(*e.lhs)));
                }
                break;
            case K::ExistsPath: exists_path(head, *e.e1, atom(*e.lhs)); break;
            case K::PathEq:
            case K::PathDisj: compare(head, e); break;
            case K::ExistsBinary: throw NormalizationError("binary path expressions have no normal form");
        }
    }

    std::vector<NormalConstraint> out;

private:
    void add(NormalConstraint c) {
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }

    int atom(const ShapeExpr& e) {
        if (e.kind == ShapeExpr::Kind::Shape) return e.id;
        int s = v_.fresh_shape("x");
        emit(s, e);
        return s;
    }

    std::vector<int> state_shapes(const Nfa& m, std::string_view hint) {
        std::vector<int> s(m.num_states);
        for (int q = 0; q < m.num_states; ++q) s[q] = v_.fresh_shape(hint);
        return s;
    }

    // Backward over the automaton: s_q holds where a word from q to the final state leads into the body.
    void exists_path(int head, const Regex& e, int body) {
        Nfa m = regex_to_nfa(e);
        auto s = state_shapes(m, "q");
        add(nc_shape(head, s[m.initial]));
        for (auto& ed : m.edges) {
            if (ed.label)
                add(nc_exists(s[ed.from], {*ed.label}, s[ed.to]));
            else
                add(nc_shape(s[ed.from], s[ed.to]));
        }
        add(nc_shape(s[m.final_state], body));
    }

    // Forward from the guard over both automata, errors propagated back to the guard.
    void compare(int head, const ShapeExpr& e) {
        if (e.id < 0)
            throw NormalizationError(e.kind == ShapeExpr::Kind::PathEq ? "unguarded eq(...) is not supported; write @c & eq(...)"
                                                                     : "unguarded disj(...) is not supported; write @c & disj(...)");
        Nfa m1 = regex_to_nfa(*e.e1), m2 = regex_to_nfa(*e.e2);
        auto s1 = state_shapes(m1, "f");
        auto s2 = state_shapes(m2, "g");
        auto forward = [&](const Nfa& m, const std::vector<int>& s) {
            add(nc_individual(s[m.initial], e.id));
            for (auto& ed : m.edges) {
                if (ed.label)
                    add(nc_exists(s[ed.to], {invert_role(*ed.label)}, s[ed.from]));
                else
                    add(nc_shape(s[ed.to], s[ed.from]));
            }
        };
        forward(m1, s1);
        forward(m2, s2);
        int f1 = s1[m1.final_state], f2 = s2[m2.final_state];
        int error = v_.fresh_shape("error");
        if (e.kind == ShapeExpr::Kind::PathEq) {
            int pos = v_.fresh_shape("pos"), neg = v_.fresh_shape("neg");
            add(nc_shape(pos, f1));
            add(nc_shape(pos, f2));
            add(nc_not(neg, f1));
            add(nc_not(neg, f2));
            add(nc_and(error, pos, neg));
        } else {
            add(nc_and(error, f1, f2));
        }
        std::set<Role> sigma = m1.alphabet();
        for (Role r : m2.alphabet()) sigma.insert(r);
        for (Role r : sigma) add(nc_exists(error, {r}, error));
        int noerror = v_.fresh_shape("noerror");
        add(nc_not(noerror, error));
        add(nc_and(head, s1[m1.initial], noerror));
    }

    Vocabulary& v_;
};

}  // namespace

NormalizedShapes normalize(Vocabulary& vocab, const ShapesGraph& sg) {
    if (!sg.binary.empty()) throw NormalizationError("binary shape constraints have no normal form");
    Normalizer n(vocab);
    for (auto& c : sg.constraints) n.emit(c.head, *c.body);
    return {std::move(n.out), sg.targets};
}

Stratification compute_stratification(const ShapesGraph& sg, StratificationMode mode) {
    int n_unary = 0, n_binary = 0;
    auto grow = [&](DepNode d, bool) {
        if (d.binary)
            n_binary = std::max(n_binary, d.id + 1);
        else
            n_unary = std::max(n_unary, d.id + 1);
    };
    for (auto& c : sg.constraints) {
        grow({false, c.head}, false);
        visit_expr(*c.body, false, grow);
    }
    for (auto& c : sg.binary) {
        grow({true, c.head}, false);
        visit_path(*c.body, false, grow);
    }
    auto vid = [&](DepNode d) { return d.binary ? n_unary + d.id : d.id; };
    auto node_of = [&](int v) { return v < n_unary ? DepNode{false, v} : DepNode{true, v - n_unary}; };
    const int n = n_unary + n_binary;

    // head -> dependency, marked when under negation
    std::vector<std::map<int, bool>> edges(n);
    auto add_edges = [&](int head) {
        return [&, head](DepNode d, bool marked) {
            auto [it, fresh] = edges[head].emplace(vid(d), marked);
            if (!fresh) it->second = it->second || marked;
        };
    };
    for (auto& c : sg.constraints) visit_expr(*c.body, false, add_edges(vid({false, c.head})));
    for (auto& c : sg.binary) visit_path(*c.body, false, add_edges(vid({true, c.head})));

    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    Graph g(n);
    for (int v = 0; v < n; ++v)
        for (auto& [w, m] : edges[v]) boost::add_edge(v, w, g);
    std::vector<int> comp(n);
    int n_comp = n ? static_cast<int>(boost::strong_components(g, comp.data())) : 0;

    for (int v = 0; v < n; ++v) {
        for (auto& [w, marked] : edges[v]) {
            if (!marked || comp[v] != comp[w]) continue;
            // path w ->* v inside the component closes the cycle
            std::vector<int> prev(n, -1);
            std::deque<int> queue{w};
            prev[w] = w;
            while (!queue.empty() && prev[v] < 0) {
                int x = queue.front();
                queue.pop_front();
                for (auto& [y, m] : edges[x])
                    if (comp[y] == comp[v] && prev[y] < 0) {
                        prev[y] = x;
                        queue.push_back(y);
                    }
            }
            std::vector<DepNode> cycle{node_of(v)};
            std::vector<int> back;
            for (int x = v; x != w; x = prev[x]) back.push_back(x);
            back.push_back(w);
            std::reverse(back.begin(), back.end());
            for (int x : back) cycle.push_back(node_of(x));
            throw NotStratified(cycle, "shapes graph is not stratified: a cycle passes through negation");
        }
    }

    // longest path over the condensation
    std::vector<std::vector<std::pair<int, bool>>> cedges(n_comp);
    for (int v = 0; v < n; ++v)
        for (auto& [w, marked] : edges[v])
            if (comp[v] != comp[w]) cedges[comp[v]].emplace_back(comp[w], marked);
    std::vector<int> level(n_comp, -1);
    std::function<int(int)> depth = [&](int c) {
        if (level[c] >= 0) return level[c];
        int l = 0;
        for (auto& [d, marked] : cedges[c]) {
            int step = (mode == StratificationMode::Fine || marked) ? 1 : 0;
            l = std::max(l, depth(d) + step);
        }
        return level[c] = l;
    };

    std::set<int> used;
    for (auto& c : sg.constraints) used.insert(depth(comp[vid({false, c.head})]));
    for (auto& c : sg.binary) used.insert(depth(comp[vid({true, c.head})]));
    std::map<int, int> compact;
    for (int l : used) compact.emplace(l, static_cast<int>(compact.size()));

    Stratification st;
    st.unary.resize(compact.size());
    st.binary.resize(compact.size());
    for (std::size_t i = 0; i < sg.constraints.size(); ++i) {
        int head = sg.constraints[i].head;
        int l = compact.at(depth(comp[vid({false, head})]));
        st.unary[l].push_back(static_cast<int>(i));
        st.shape_level[head] = l;
    }
    for (std::size_t i = 0; i < sg.binary.size(); ++i) {
        int head = sg.binary[i].head;
        int l = compact.at(depth(comp[vid({true, head})]));
        st.binary[l].push_back(static_cast<int>(i));
        st.binary_level[head] = l;
    }
    return st;
}

std::string format_regex(const Regex& e, const Vocabulary& v) {
    switch (e.kind) {
        case Regex::Kind::Role: return v.role_name(e.role);
        case Regex::Kind::Alt: return "(" + format_regex(*e.a, v) + "|" + format_regex(*e.b, v) + ")";
        case Regex::Kind::Seq: return "(" + format_regex(*e.a, v) + "/" + format_regex(*e.b, v) + ")";
        case Regex::Kind::Star: return "(" + format_regex(*e.a, v) + ")*";
    }
    return {};
}

std::string format_path(const Path& p, const Vocabulary& v) {
    auto bin = [&](const char* op) { return "(" + format_path(*p.a, v) + op + format_path(*p.b, v) + ")"; };
    switch (p.kind) {
        case Path::Kind::Test: return "$" + v.shape_name(p.id) + "?";
        case Path::Kind::Binary: return "%" + v.binary_shape_name(p.id);
        case Path::Kind::Role: return v.role_name(p.role);
        case Path::Kind::Union: return bin("|");
        case Path::Kind::Inter: return bin("&");
        case Path::Kind::Concat: return bin("/");
        case Path::Kind::Diff: return bin("\\");
        case Path::Kind::Star: return "(" + format_path(*p.a, v) + ")*";
        case Path::Kind::Inverse: return "inv(" + format_path(*p.a, v) + ")";
    }
    return {};
}

namespace {

// prec: 0 disjunction, 1 conjunction, 2 unary operand
std::string fmt(const ShapeExpr& e, const Vocabulary& v, int prec) {
    using K = ShapeExpr::Kind;
    auto paren = [&](std::string s, int mine) { return mine < prec ? "(" + s + ")" : s; };
    switch (e.kind) {
        case K::Individual: return "@" + v.individual_name(e.id);
        case K::Shape: return "$" + v.shape_name(e.id);
        case K::NegShape: return "!$" + v.shape_name(e.id);
        case K::Concept: return v.concept_label(e.id);
        case K::Or: return paren(fmt(*e.lhs, v, 0) + " | " + fmt(*e.rhs, v, 1), 0);
        case K::And: return paren(fmt(*e.lhs, v, 1) + " & " + fmt(*e.rhs, v, 2), 1);
        case K::ExistsRoles: {
            std::string r;
            for (std::size_t i = 0; i < e.roles.size(); ++i) r += (i ? "," : "") + v.role_name(e.roles[i]);
            return "some [" + r + "]." + fmt(*e.lhs, v, 2);
        }
        case K::ExistsPath: return "some <" + format_regex(*e.e1, v) + ">." + fmt(*e.lhs, v, 2);
        case K::ExistsBinary: return "some {" + format_path(*e.path, v) + "}." + fmt(*e.lhs, v, 2);
        case K::PathEq:
        case K::PathDisj: {
            std::string body = std::string(e.kind == K::PathEq ? "eq" : "disj") + "(<" + format_regex(*e.e1, v) + ">,<" +
                               format_regex(*e.e2, v) + ">)";
            if (e.id < 0) return body;
            return paren("@" + v.individual_name(e.id) + " & " + body, 1);
        }
    }
    return {};
}

}  // namespace

std::string format_expr(const ShapeExpr& e, const Vocabulary& v) { return fmt(e, v, 0); }

std::string format_constraint(const Constraint& c, const Vocabulary& v) {
    return "$" + v.shape_name(c.head) + " <- " + format_expr(*c.body, v);
}

std::string format_binary_constraint(const BinaryConstraint& c, const Vocabulary& v) {
    return "%" + v.binary_shape_name(c.head) + " <- " + format_path(*c.body, v);
}

std::string format_normal(const NormalConstraint& c, const Vocabulary& v) { return format_constraint(to_constraint(c), v); }

std::string format_shapes(const ShapesGraph& sg, const Vocabulary& v) {
    std::string out;
    for (auto& c : sg.constraints) out += format_constraint(c, v) + "\n";
    for (auto& c : sg.binary) out += format_binary_constraint(c, v) + "\n";
    return out;
}

std::string format_dep_cycle(const std::vector<DepNode>& cycle, const Vocabulary& v) {
    std::string out;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i) out += " -> ";
        out += cycle[i].binary ? "%" + v.binary_shape_name(cycle[i].id) : "$" + v.shape_name(cycle[i].id);
    }
    return out;
}

namespace {

RegexPtr rename(const RegexPtr& e, const RoleRenaming& ren) {
    switch (e->kind) {
        case Regex::Kind::Role: return regex_role(ren.apply(e->role));
        case Regex::Kind::Star: return regex_star(rename(e->a, ren));
        default: return regex_node(e->kind, rename(e->a, ren), rename(e->b, ren));
    }
}

PathPtr rename(const PathPtr& p, const RoleRenaming& ren) {
    switch (p->kind) {
        case Path::Kind::Test:
        case Path::Kind::Binary: return p;
        case Path::Kind::Role: return path_role(ren.apply(p->role));
        case Path::Kind::Star:
        case Path::Kind::Inverse: return path_node(p->kind, rename(p->a, ren));
        default: return path_node(p->kind, rename(p->a, ren), rename(p->b, ren));
    }
}

ShapeExprPtr rename(const ShapeExprPtr& e, const RoleRenaming& ren) {
    using K = ShapeExpr::Kind;
    switch (e->kind) {
        case K::Or: return sx_or(rename(e->lhs, ren), rename(e->rhs, ren));
        case K::And: return sx_and(rename(e->lhs, ren), rename(e->rhs, ren));
        case K::ExistsRoles: {
            std::vector<Role> roles;
            for (Role r : e->roles) roles.push_back(ren.apply(r));
            return sx_exists(roles, rename(e->lhs, ren));
        }
        case K::ExistsPath: return sx_exists_path(rename(e->e1, ren), rename(e->lhs, ren));
        case K::PathEq: return sx_eq(e->id, rename(e->e1, ren), rename(e->e2, ren));
        case K::PathDisj: return sx_disj(e->id, rename(e->e1, ren), rename(e->e2, ren));
        case K::ExistsBinary: return sx_exists_binary(rename(e->path, ren), rename(e->lhs, ren));
        default: return e;
    }
}

}  // namespace

ShapesGraph rename_roles(const ShapesGraph& sg, const RoleRenaming& ren) {
    if (ren.identity()) return sg;
    ShapesGraph out;
    for (auto& c : sg.constraints) out.constraints.push_back({c.head, rename(c.body, ren)});
    for (auto& c : sg.binary) out.binary.push_back({c.head, rename(c.body, ren)});
    out.targets = sg.targets;
    return out;
}

}  // namespace shapeval
