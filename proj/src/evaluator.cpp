#include "shapeval/evaluator.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace shapeval {

ShapeAssignment::ShapeAssignment(std::size_t n_shapes, std::size_t n_binary, std::size_t n_nodes)
    : unary(n_shapes, Bits(n_nodes)), binary(n_binary, std::vector<Bits>(n_nodes, Bits(n_nodes))) {}

std::size_t ShapeAssignment::count() const {
    std::size_t n = 0;
    for (auto& b : unary) n += b.count();
    for (auto& rows : binary)
        for (auto& r : rows) n += r.count();
    return n;
}

namespace {

void max_ids(const Path& p, int& ns, int& nb);

void max_ids(const ShapeExpr& e, int& ns, int& nb) {
    using K = ShapeExpr::Kind;
    switch (e.kind) {
        case K::Shape:
        case K::NegShape: ns = std::max(ns, e.id + 1); break;
        case K::Or:
        case K::And:
            max_ids(*e.lhs, ns, nb);
            max_ids(*e.rhs, ns, nb);
            break;
        case K::ExistsRoles:
        case K::ExistsPath: max_ids(*e.lhs, ns, nb); break;
        case K::ExistsBinary:
            max_ids(*e.path, ns, nb);
            max_ids(*e.lhs, ns, nb);
            break;
        default: break;
    }
}

void max_ids(const Path& p, int& ns, int& nb) {
    switch (p.kind) {
        case Path::Kind::Test: ns = std::max(ns, p.id + 1); break;
        case Path::Kind::Binary: nb = std::max(nb, p.id + 1); break;
        case Path::Kind::Role: break;
        case Path::Kind::Star:
        case Path::Kind::Inverse: max_ids(*p.a, ns, nb); break;
        default:
            max_ids(*p.a, ns, nb);
            max_ids(*p.b, ns, nb);
    }
}

Bits nodes_with_role_from(const Interpretation& in, Role r, int y) {
    // x with r(x,y), i.e. r^- from y
    Bits out(in.size());
    Role back = invert_role(r);
    for (auto& [x, roles] : in.neighbours(y))
        if (static_cast<std::size_t>(back.index()) < roles.size() && roles.test(back.index())) out.set(x);
    return out;
}

bool has_slot(const Bits& roles, Role r) {
    return static_cast<std::size_t>(r.index()) < roles.size() && roles.test(r.index());
}

// Nodes with an E-word into target: backward product reachability.
Bits exists_path(const Interpretation& in, const Nfa& m, const Bits& target) {
    const std::size_t n = in.size();
    std::vector<Bits> reached(m.num_states, Bits(n));
    std::vector<std::vector<const Nfa::Edge*>> into(m.num_states);
    for (auto& e : m.edges) into[e.to].push_back(&e);
    std::deque<std::pair<int, int>> queue;
    for (auto y = target.find_first(); y != Bits::npos; y = target.find_next(y)) {
        reached[m.final_state].set(y);
        queue.emplace_back(static_cast<int>(y), m.final_state);
    }
    auto push = [&](int x, int q) {
        if (!reached[q].test(x)) {
            reached[q].set(x);
            queue.emplace_back(x, q);
        }
    };
    while (!queue.empty()) {
        auto [y, q2] = queue.front();
        queue.pop_front();
        for (const Nfa::Edge* e : into[q2]) {
            if (!e->label) {
                push(y, e->from);
                continue;
            }
            Bits xs = nodes_with_role_from(in, *e->label, y);
            for (auto x = xs.find_first(); x != Bits::npos; x = xs.find_next(x)) push(static_cast<int>(x), e->from);
        }
    }
    return reached[m.initial];
}

// End points of E-words starting at c.
Bits path_ends(const Interpretation& in, const Nfa& m, int c) {
    const std::size_t n = in.size();
    std::vector<Bits> reached(m.num_states, Bits(n));
    std::vector<std::vector<const Nfa::Edge*>> from(m.num_states);
    for (auto& e : m.edges) from[e.from].push_back(&e);
    std::deque<std::pair<int, int>> queue{{c, m.initial}};
    reached[m.initial].set(c);
    while (!queue.empty()) {
        auto [x, q] = queue.front();
        queue.pop_front();
        for (const Nfa::Edge* e : from[q]) {
            auto push = [&](int y) {
                if (!reached[e->to].test(y)) {
                    reached[e->to].set(y);
                    queue.emplace_back(y, e->to);
                }
            };
            if (!e->label) {
                push(x);
                continue;
            }
            for (auto& [y, roles] : in.neighbours(x))
                if (has_slot(roles, *e->label)) push(y);
        }
    }
    return reached[m.final_state];
}

std::vector<Bits> compose(const std::vector<Bits>& a, const std::vector<Bits>& b) {
    std::vector<Bits> out(a.size(), Bits(a.size()));
    for (std::size_t x = 0; x < a.size(); ++x)
        for (auto y = a[x].find_first(); y != Bits::npos; y = a[x].find_next(y)) out[x] |= b[y];
    return out;
}

}  // namespace

ShapeAssignment empty_assignment(const Interpretation& interp, const ShapesGraph& sg, const Vocabulary* v) {
    int ns = v ? static_cast<int>(v->num_shapes()) : 0;
    int nb = v ? static_cast<int>(v->num_binary_shapes()) : 0;
    for (auto& c : sg.constraints) {
        ns = std::max(ns, c.head + 1);
        max_ids(*c.body, ns, nb);
    }
    for (auto& c : sg.binary) {
        nb = std::max(nb, c.head + 1);
        max_ids(*c.body, ns, nb);
    }
    for (auto& t : sg.targets) ns = std::max(ns, t.shape + 1);
    return ShapeAssignment(ns, nb, interp.size());
}

Bits evaluate(const Interpretation& in, const ShapeExpr& e, const ShapeAssignment& s) {
    using K = ShapeExpr::Kind;
    const std::size_t n = in.size();
    Bits out(n);
    switch (e.kind) {
        case K::Individual:
            if (auto x = in.node_of_individual(e.id)) out.set(*x);
            break;
        case K::Shape:
            if (static_cast<std::size_t>(e.id) < s.unary.size()) out = s.unary[e.id];
            break;
        case K::NegShape:
            if (static_cast<std::size_t>(e.id) < s.unary.size()) out = s.unary[e.id];
            out.flip();
            break;
        case K::Concept:
            for (std::size_t x = 0; x < n; ++x)
                if (in.has_concept(static_cast<int>(x), e.id)) out.set(x);
            break;
        case K::Or: out = evaluate(in, *e.lhs, s) | evaluate(in, *e.rhs, s); break;
        case K::And: out = evaluate(in, *e.lhs, s) & evaluate(in, *e.rhs, s); break;
        case K::ExistsRoles: {
            Bits body = evaluate(in, *e.lhs, s);
            for (std::size_t x = 0; x < n; ++x)
                for (auto& [y, roles] : in.neighbours(static_cast<int>(x))) {
                    if (!body.test(y)) continue;
                    if (std::all_of(e.roles.begin(), e.roles.end(), [&](Role r) { return has_slot(roles, r); })) {
                        out.set(x);
                        break;
                    }
                }
            break;
        }
        case K::ExistsPath: out = exists_path(in, regex_to_nfa(*e.e1), evaluate(in, *e.lhs, s)); break;
        case K::PathEq:
        case K::PathDisj: {
            Nfa m1 = regex_to_nfa(*e.e1), m2 = regex_to_nfa(*e.e2);
            auto check = [&](int x) {
                Bits a = path_ends(in, m1, x), b = path_ends(in, m2, x);
                return e.kind == K::PathEq ? a == b : !a.intersects(b);
            };
            if (e.id >= 0) {
                if (auto x = in.node_of_individual(e.id); x && check(*x)) out.set(*x);
            } else {
                for (std::size_t x = 0; x < n; ++x)
                    if (check(static_cast<int>(x))) out.set(x);
            }
            break;
        }
        case K::ExistsBinary: {
            auto rel = evaluate_path(in, *e.path, s);
            Bits body = evaluate(in, *e.lhs, s);
            for (std::size_t x = 0; x < n; ++x)
                if (rel[x].intersects(body)) out.set(x);
            break;
        }
    }
    return out;
}

std::vector<Bits> evaluate_path(const Interpretation& in, const Path& p, const ShapeAssignment& s) {
    const std::size_t n = in.size();
    std::vector<Bits> out(n, Bits(n));
    switch (p.kind) {
        case Path::Kind::Test:
            for (std::size_t x = 0; x < n; ++x)
                if (s.has(p.id, static_cast<int>(x))) out[x].set(x);
            break;
        case Path::Kind::Binary:
            if (static_cast<std::size_t>(p.id) < s.binary.size()) out = s.binary[p.id];
            break;
        case Path::Kind::Role:
            for (std::size_t x = 0; x < n; ++x)
                for (auto& [y, roles] : in.neighbours(static_cast<int>(x)))
                    if (has_slot(roles, p.role)) out[x].set(y);
            break;
        case Path::Kind::Union:
        case Path::Kind::Inter:
        case Path::Kind::Diff: {
            auto a = evaluate_path(in, *p.a, s), b = evaluate_path(in, *p.b, s);
            for (std::size_t x = 0; x < n; ++x) {
                if (p.kind == Path::Kind::Union) out[x] = a[x] | b[x];
                if (p.kind == Path::Kind::Inter) out[x] = a[x] & b[x];
                if (p.kind == Path::Kind::Diff) out[x] = a[x] - b[x];
            }
            break;
        }
        case Path::Kind::Concat: out = compose(evaluate_path(in, *p.a, s), evaluate_path(in, *p.b, s)); break;
        case Path::Kind::Inverse: {
            auto a = evaluate_path(in, *p.a, s);
            for (std::size_t x = 0; x < n; ++x)
                for (auto y = a[x].find_first(); y != Bits::npos; y = a[x].find_next(y)) out[y].set(x);
            break;
        }
        case Path::Kind::Star: {
            out = evaluate_path(in, *p.a, s);
            for (std::size_t x = 0; x < n; ++x) out[x].set(x);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t x = 0; x < n; ++x)
                    if (out[x].test(k)) out[x] |= out[k];
            break;
        }
    }
    return out;
}

ShapeAssignment immediate_consequence(const Interpretation& in, const std::vector<Constraint>& cs,
                                      const ShapeAssignment& s) {
    ShapeAssignment next = s;
    for (auto& c : cs) {
        if (static_cast<std::size_t>(c.head) >= next.unary.size()) next.unary.resize(c.head + 1, Bits(in.size()));
        next.unary[c.head] |= evaluate(in, *c.body, s);
    }
    return next;
}

ShapeAssignment perfect_assignment(const Interpretation& in, const ShapesGraph& sg, const Stratification& strat) {
    ShapeAssignment s = empty_assignment(in, sg);
    for (std::size_t i = 0; i < strat.size(); ++i) {
        for (bool changed = true; changed;) {
            changed = false;
            for (int k : strat.unary[i]) {
                auto& c = sg.constraints[k];
                Bits ext = evaluate(in, *c.body, s);
                if (!ext.is_subset_of(s.unary[c.head])) {
                    s.unary[c.head] |= ext;
                    changed = true;
                }
            }
            for (int k : strat.binary[i]) {
                auto& c = sg.binary[k];
                auto rel = evaluate_path(in, *c.body, s);
                for (std::size_t x = 0; x < rel.size(); ++x)
                    if (!rel[x].is_subset_of(s.binary[c.head][x])) {
                        s.binary[c.head][x] |= rel[x];
                        changed = true;
                    }
            }
        }
    }
    return s;
}

ValidationResult validate(const Interpretation& in, const ShapesGraph& sg) {
    return validate(in, sg, compute_stratification(sg));
}

ValidationResult validate(const Interpretation& in, const ShapesGraph& sg, const Stratification& strat) {
    ShapeAssignment pa = perfect_assignment(in, sg, strat);
    std::set<int> defined = sg.defined_shapes();
    ValidationResult r;
    r.strata = strat.size();
    r.atoms = pa.count();
    for (auto& t : sg.targets) {
        TargetVerdict v{t, false, defined.count(t.shape) > 0};
        if (auto x = in.node_of_individual(t.individual)) v.valid = pa.has(t.shape, *x);
        r.valid = r.valid && v.valid;
        r.targets.push_back(v);
    }
    return r;
}

}  // namespace shapeval
