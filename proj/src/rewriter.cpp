#include "shapeval/rewriter.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include <boost/function_output_iterator.hpp>
#include <stdexcept>

namespace shapeval {

namespace {

std::string roles_label(const Bits& roles, const Vocabulary& v) {
    std::vector<std::string> parts;
    for (auto i = roles.find_first(); i != Bits::npos; i = roles.find_next(i))
        parts.push_back(v.role_name(Role::from_index(static_cast<int>(i))));
    if (parts.size() == 1) return parts.front();
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "⊓" : "") + parts[i];
    return s + ")";
}

std::string concepts_label(const Bits& c, const Vocabulary& v) {
    std::vector<std::string> parts;
    for (auto i = c.find_first(); i != Bits::npos; i = c.find_next(i)) parts.push_back(v.concept_name(static_cast<int>(i)));
    if (parts.empty()) return "⊤";
    if (parts.size() == 1) return parts.front();
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "⊓" : "") + parts[i];
    return s + ")";
}

Bits role_bits(const std::vector<Role>& roles, std::size_t slots) {
    Bits b(slots);
    for (Role r : roles) b.set(r.index());
    return b;
}

std::set<int> heads_of(const std::vector<NormalConstraint>& cs) {
    std::set<int> out;
    for (auto& c : cs) out.insert(c.head);
    return out;
}

}  // namespace

std::string format_basic(const BasicExpr& e, const Vocabulary& v) {
    switch (e.kind) {
        case BasicExpr::Kind::Top: return "⊤";
        case BasicExpr::Kind::Individual: return v.individual_name(e.id);
        case BasicExpr::Kind::ExistsShape: return "∃" + roles_label(e.roles, v) + "." + v.shape_name(e.id);
        case BasicExpr::Kind::ExistsConcepts: return "∃" + roles_label(e.roles, v) + "." + concepts_label(e.concepts, v);
    }
    return "?";
}

std::string format_quadruple(const Quadruple& q, const Vocabulary& v) {
    auto set = [&](const ExprSet& s) {
        std::string out = "{";
        bool first = true;
        for (auto& e : s) {
            out += (first ? "" : ",") + format_basic(e, v);
            first = false;
        }
        return out + "}";
    };
    std::string h = "{";
    bool first = true;
    for (auto i = q.h.find_first(); i != Bits::npos; i = q.h.find_next(i)) {
        h += (first ? "" : ",") + v.shape_name(static_cast<int>(i));
        first = false;
    }
    for (auto i = q.h_neg.find_first(); i != Bits::npos; i = q.h_neg.find_next(i)) {
        h += (first ? "¬" : ",¬") + v.shape_name(static_cast<int>(i));
        first = false;
    }
    h += "}";
    return "(" + format_two_type(q.t, v) + "," + set(q.p) + "," + set(q.q) + "," + h + ")";
}

std::set<std::string> EmittedConstraint::conjuncts(const Vocabulary& v) const {
    std::set<std::string> out;
    for (auto i = pos_concepts.find_first(); i != Bits::npos; i = pos_concepts.find_next(i))
        out.insert(v.concept_name(static_cast<int>(i)));
    for (auto i = neg_concepts.find_first(); i != Bits::npos; i = neg_concepts.find_next(i))
        out.insert("¬" + v.concept_name(static_cast<int>(i)));
    for (auto& e : pos) out.insert(format_basic(e, v));
    for (auto& e : neg) out.insert("¬" + format_basic(e, v));
    return out;
}

std::string EmittedConstraint::pretty(const Vocabulary& v) const {
    std::vector<std::string> parts;
    for (auto i = pos_concepts.find_first(); i != Bits::npos; i = pos_concepts.find_next(i))
        parts.push_back(v.concept_name(static_cast<int>(i)));
    for (auto i = neg_concepts.find_first(); i != Bits::npos; i = neg_concepts.find_next(i))
        parts.push_back("¬" + v.concept_name(static_cast<int>(i)));
    for (auto& e : pos) parts.push_back(format_basic(e, v));
    for (auto& e : neg) parts.push_back("¬" + format_basic(e, v));
    std::string s = v.shape_name(head) + " ⇐ ";
    if (parts.empty()) return s + "⊤";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ∧ " : "") + parts[i];
    return s;
}

// Types and basic expressions are interned once; keys are (type id, P bits, Q bits).
class RewriteEngine {
public:
    RewriteEngine(const SaturatedTBox& sat, Bits nct, std::size_t n_shapes, const RewriteOptions& opts)
        : sat_(sat), nct_(std::move(nct)), n_shapes_(n_shapes), eager_(opts.eager), budget_(opts.max_quadruples) {}

    const Bits& signature() const { return nct_; }

    // Fixes the type space and the expression alphabet.
    void prepare(const std::vector<NormalConstraint>& all) {
        intern(BasicExpr::top());
        for (auto& c : all) {
            if (c.form == NormalConstraint::Form::Individual) intern(BasicExpr::individual(c.a));
            if (c.form == NormalConstraint::Form::Exists)
                intern(BasicExpr::exists_shape(role_bits(c.roles, sat_.role_slots()), c.a));
        }
        for (auto& t : individual_types()) add_type(t);
        for (auto& t : anonymous_types()) add_type(t);
        for (auto& ti : types_) {
            for (auto& u : sat_.maximal_existentials(ti.t.c1)) intern(BasicExpr::exists_concepts(u.roles, u.concepts));
            for (auto& u : ti.succ) intern(BasicExpr::exists_concepts(u.roles, u.concepts));
        }
        width_ = exprs_.size();
        concept_mask_ = Bits(width_);
        shape_exprs_.clear();
        for (std::size_t i = 0; i < width_; ++i) {
            if (exprs_[i].kind == BasicExpr::Kind::ExistsConcepts) concept_mask_.set(i);
            if (exprs_[i].kind == BasicExpr::Kind::ExistsShape) shape_exprs_.push_back(static_cast<int>(i));
            if (exprs_[i].kind == BasicExpr::Kind::Individual) individual_mask_.push_back(static_cast<int>(i));
        }
        for (std::size_t id = 0; id < types_.size(); ++id) {
            auto& ti = types_[id];
            ti.q_full = bits_of(ti.succ);
            ti.base = bits_of(sat_.maximal_existentials(ti.t.c1));
            ti.p_child = ti.base - ti.q_full;
        }
        // child edges: parent type, expression of the child in the parent's Q, child type
        for (std::size_t id = 0; id < types_.size(); ++id) {
            auto& ti = types_[id];
            for (auto& u : ti.succ) {
                TwoType ct{u.concepts, invert_roles(u.roles), ti.t.c1};
                auto it = type_id_.find(ct);
                if (it == type_id_.end()) continue;
                int e = expr_id_.at(BasicExpr::exists_concepts(u.roles, u.concepts));
                ti.children.push_back({e, it->second});
                types_[it->second].parents.push_back({e, static_cast<int>(id)});
            }
        }
    }

    void reset() {
        nodes_.clear();
        index_.clear();
        bucket_.clear();
        by_type_.assign(types_.size(), {});
        work_.clear();
        queued_.clear();
    }

    void seed(const Bits& undefined) {
        for (std::size_t id = 0; id < types_.size(); ++id) {
            auto& ti = types_[id];
            if (!ti.individual && !eager_) {
                add_seed(static_cast<int>(id), ti.q_full, undefined);
                continue;
            }
            std::vector<int> ids;
            for (auto i = ti.q_full.find_first(); i != Bits::npos; i = ti.q_full.find_next(i)) ids.push_back(static_cast<int>(i));
            if (ids.size() > 20) throw std::runtime_error("rewriting: too many successor configurations");
            for (std::size_t mask = 0; mask < (std::size_t{1} << ids.size()); ++mask) {
                Bits q(width_);
                for (std::size_t i = 0; i < ids.size(); ++i)
                    if (mask >> i & 1) q.set(ids[i]);
                add_seed(static_cast<int>(id), q, undefined);
            }
        }
    }

    void load(const std::vector<Quadruple>& k) {
        for (auto& q : k) add(Key{type_id_.at(q.t), bits_of(q.p), bits_of(q.q)}, q.h, q.h_neg);
    }

    void close(const std::vector<NormalConstraint>& cs) {
        compile(cs);
        for (std::size_t i = 0; i < nodes_.size(); ++i) enqueue(static_cast<int>(i));
        while (!work_.empty()) {
            int k = work_.front();
            work_.pop_front();
            queued_[k] = false;
            process(k);
        }
    }

    std::vector<Quadruple> dump() const {
        std::vector<Quadruple> out;
        out.reserve(nodes_.size());
        for (auto& n : nodes_) out.push_back(Quadruple{types_[n.k.t].t, set_of(n.k.p), set_of(n.k.q), n.e.h, n.e.hn});
        return out;
    }

private:
    struct Key {
        int t;
        Bits p, q;
        friend bool operator==(const Key& x, const Key& y) { return x.t == y.t && x.p == y.p && x.q == y.q; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = std::hash<int>{}(k.t);
            auto mix = [&h](Bits::block_type b) { h ^= std::hash<Bits::block_type>{}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
            boost::to_block_range(k.p, boost::make_function_output_iterator(mix));
            boost::to_block_range(k.q, boost::make_function_output_iterator(mix));
            return h;
        }
    };
    struct BucketHash {
        std::size_t operator()(const std::pair<int, Bits>& b) const { return KeyHash{}(Key{b.first, b.second, {}}); }
    };
    struct Entry {
        Bits h, hn;
    };
    struct Node {
        Key k;
        Entry e;
    };
    struct TypeInfo {
        TwoType t;
        bool individual = false;
        std::vector<OneHalfType> succ;
        Bits q_full, base, p_child;
        std::vector<std::pair<int, int>> children, parents;  // (expr, type)
    };
    struct Rule {
        NormalConstraint::Form form;
        int head, a, b;
        int expr = -1;  // Individual / Exists
        Bits roles;
    };

    const SaturatedTBox& sat_;
    Bits nct_;
    std::size_t n_shapes_;
    bool eager_;
    std::size_t budget_;

    std::vector<BasicExpr> exprs_;
    std::map<BasicExpr, int> expr_id_;
    std::size_t width_ = 0;
    Bits concept_mask_;
    std::vector<int> shape_exprs_, individual_mask_;
    std::vector<TypeInfo> types_;
    std::map<TwoType, int> type_id_;

    std::vector<Rule> rules_, exists_rules_;

    std::vector<Node> nodes_;
    std::unordered_map<Key, int, KeyHash> index_;
    std::unordered_map<std::pair<int, Bits>, std::vector<int>, BucketHash> bucket_;
    std::vector<std::vector<int>> by_type_;
    std::deque<int> work_;
    std::vector<bool> queued_;

    int intern(const BasicExpr& e) {
        auto [it, fresh] = expr_id_.emplace(e, static_cast<int>(exprs_.size()));
        if (fresh) exprs_.push_back(e);
        return it->second;
    }

    Bits bits_of(const std::vector<OneHalfType>& us) const {
        Bits b(width_);
        for (auto& u : us) b.set(expr_id_.at(BasicExpr::exists_concepts(u.roles, u.concepts)));
        return b;
    }
    Bits bits_of(const ExprSet& s) const {
        Bits b(width_);
        for (auto& e : s) b.set(expr_id_.at(e));
        return b;
    }
    ExprSet set_of(const Bits& b) const {
        ExprSet out;
        for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.insert(exprs_[i]);
        return out;
    }

    void add_type(const TwoType& t) {
        if (type_id_.count(t)) return;
        TypeInfo ti;
        ti.t = t;
        ti.individual = t.roles.none();
        ti.succ = succ_config(sat_, {t});
        type_id_.emplace(t, static_cast<int>(types_.size()));
        types_.push_back(std::move(ti));
    }

    std::vector<Bits> closed_subsets() const {
        std::vector<int> ids;
        for (auto i = nct_.find_first(); i != Bits::npos; i = nct_.find_next(i)) ids.push_back(static_cast<int>(i));
        if (ids.size() > 22) throw std::runtime_error("rewriting: concept signature too large");
        std::vector<Bits> out;
        for (std::size_t mask = 0; mask < (std::size_t{1} << ids.size()); ++mask) {
            Bits m = sat_.empty_concepts();
            for (std::size_t i = 0; i < ids.size(); ++i)
                if (mask >> i & 1) m.set(ids[i]);
            Closure c = sat_.closure(m);
            if (c.bottom || (c.concepts & nct_) != m) continue;
            out.push_back(m);
        }
        return out;
    }

    std::vector<TwoType> individual_types() const {
        std::vector<TwoType> out;
        for (auto& m : closed_subsets()) out.push_back(TwoType{m, sat_.empty_roles(), sat_.empty_concepts()});
        return out;
    }

    std::vector<TwoType> anonymous_types() const {
        std::set<TwoType> types;
        if (eager_) {
            auto sets = closed_subsets();
            const std::size_t slots = sat_.role_slots();
            if (slots > 16) throw std::runtime_error("rewriting: role signature too large for eager mode");
            std::set<Bits> role_sets;
            for (std::size_t mask = 1; mask < (std::size_t{1} << slots); ++mask) role_sets.insert(sat_.role_closure(Bits(slots, mask)));
            for (auto& c1 : sets)
                for (auto& r : role_sets)
                    for (auto& c2 : sets) {
                        TwoType t{c1, r, c2};
                        if (is_locally_consistent(sat_, t)) types.insert(t);
                    }
            return {types.begin(), types.end()};
        }
        std::deque<TwoType> queue;
        std::set<TwoType> tails;
        for (auto& t : individual_types())
            for (auto& u : succ_config(sat_, {t})) {
                TwoType k{t.c1, u.roles, u.concepts};
                if (tails.insert(k).second) queue.push_back(k);
            }
        while (!queue.empty()) {
            TwoType k = queue.front();
            queue.pop_front();
            types.insert(invert_two_type(k));
            for (auto& c : children(sat_, k))
                if (tails.insert(c).second) queue.push_back(c);
        }
        return {types.begin(), types.end()};
    }

    void compile(const std::vector<NormalConstraint>& cs) {
        rules_.clear();
        exists_rules_.clear();
        for (auto& c : cs) {
            Rule r{c.form, c.head, c.a, c.b, -1, {}};
            if (c.form == NormalConstraint::Form::Individual) r.expr = expr_id_.at(BasicExpr::individual(c.a));
            if (c.form == NormalConstraint::Form::Exists) {
                r.roles = role_bits(c.roles, sat_.role_slots());
                r.expr = expr_id_.at(BasicExpr::exists_shape(r.roles, c.a));
                exists_rules_.push_back(r);
            }
            rules_.push_back(std::move(r));
        }
    }

    void add_seed(int t, const Bits& q, const Bits& undefined) {
        Bits p = types_[t].base - q;
        p.set(expr_id_.at(BasicExpr::top()));
        add(Key{t, std::move(p), q}, Bits(n_shapes_), undefined);
    }

    void enqueue(int k) {
        if (!queued_[k]) {
            queued_[k] = true;
            work_.push_back(k);
        }
    }

    void add(Key key, const Bits& h, const Bits& hn) {
        auto it = index_.find(key);
        if (it == index_.end()) {
            int id = static_cast<int>(nodes_.size());
            if (budget_ && nodes_.size() >= budget_) throw RewriteBudgetExceeded(budget_);
            bucket_[{key.t, key.q & concept_mask_}].push_back(id);
            by_type_[key.t].push_back(id);
            index_.emplace(key, id);
            nodes_.push_back(Node{std::move(key), Entry{h, hn}});
            queued_.push_back(false);
            enqueue(id);
            return;
        }
        Entry& e = nodes_[it->second].e;
        if (!h.is_subset_of(e.h) || !hn.is_subset_of(e.hn)) {
            e.h |= h;
            e.hn |= hn;
            enqueue(it->second);
        }
    }

    void process(int id) {
        const Key k = nodes_[id].k;
        const TypeInfo& ti = types_[k.t];
        using F = NormalConstraint::Form;

        // rules 3 (concepts and already assumed expressions), 4, 5, 7
        {
            Entry& e = nodes_[id].e;
            for (bool again = true; again;) {
                again = false;
                for (auto& r : rules_) {
                    if (e.h.test(r.head)) continue;
                    bool fire = false;
                    switch (r.form) {
                        case F::Concept: fire = holds(ti.t.c1, r.a); break;
                        case F::Shape: fire = e.h.test(r.a); break;
                        case F::And: fire = e.h.test(r.a) && e.h.test(r.b); break;
                        case F::Neg: fire = e.hn.test(r.a); break;
                        case F::Individual:
                        case F::Exists: fire = k.p.test(r.expr); break;
                    }
                    if (fire) {
                        e.h.set(r.head);
                        again = true;
                    }
                }
            }
        }
        const Bits h = nodes_[id].e.h, hn = nodes_[id].e.hn;

        // rule 3 with a new assumption
        for (auto& r : rules_) {
            if (r.expr < 0 || k.p.test(r.expr) || k.q.test(r.expr)) continue;
            if (r.form == F::Exists && !ti.individual && !r.roles.is_subset_of(ti.t.roles)) continue;
            Key nk = k;
            nk.p.set(r.expr);
            Bits nh = h;
            nh.set(r.head);
            add(std::move(nk), nh, hn);
        }

        // rule 2
        {
            const std::vector<int> peers = bucket_.at({k.t, k.q & concept_mask_});
            Key scratch{k.t, k.p, k.q};
            for (int o : peers) {
                if (o == id) continue;
                const Key& ok = nodes_[o].k;
                const Entry& oe = nodes_[o].e;
                bool o_in_k = ok.p.is_subset_of(k.p) && ok.q.is_subset_of(k.q);
                bool k_in_o = k.p.is_subset_of(ok.p) && k.q.is_subset_of(ok.q);
                if (o_in_k && oe.h.is_subset_of(h) && oe.hn.is_subset_of(hn)) continue;
                if (k_in_o && h.is_subset_of(oe.h) && hn.is_subset_of(oe.hn)) continue;
                scratch.p = k.p;
                scratch.p |= ok.p;
                scratch.q = k.q;
                scratch.q |= ok.q;
                auto hit = index_.find(scratch);
                if (hit != index_.end()) {
                    const Entry& me = nodes_[hit->second].e;
                    if (h.is_subset_of(me.h) && oe.h.is_subset_of(me.h) && hn.is_subset_of(me.hn) && oe.hn.is_subset_of(me.hn))
                        continue;
                }
                add(scratch, h | oe.h, hn | oe.hn);
            }
        }

        if (exists_rules_.empty()) return;
        // rule 6/6' with k as parent
        bool grew = false;
        for (auto& [ex, ct] : ti.children) {
            if (!k.q.test(ex)) continue;
            for (int ck : by_type_[ct])
                for (auto& r : exists_rules_)
                    if (fires(r, nodes_[id].e, nodes_[ck].k, nodes_[ck].e)) {
                        nodes_[id].e.h.set(r.head);
                        grew = true;
                    }
        }
        if (grew) enqueue(id);
        // k as child
        if (!ti.individual) {
            for (auto& [ex, pt] : ti.parents) {
                for (int pk : by_type_[pt]) {
                    if (!nodes_[pk].k.q.test(ex)) continue;
                    bool up = false;
                    for (auto& r : exists_rules_)
                        if (fires(r, nodes_[pk].e, nodes_[id].k, nodes_[id].e)) {
                            nodes_[pk].e.h.set(r.head);
                            up = true;
                        }
                    if (up) enqueue(pk);
                }
            }
        }
    }

    bool fires(const Rule& r, const Entry& pe, const Key& ck, const Entry& ce) const {
        if (pe.h.test(r.head) || !ce.h.test(r.a)) return false;
        const TypeInfo& ct = types_[ck.t];
        if (!r.roles.is_subset_of(invert_roles(ct.t.roles))) return false;
        if ((ck.p & concept_mask_) != ct.p_child || (ck.q & concept_mask_) != ct.q_full) return false;
        for (int i : individual_mask_)
            if (ck.p.test(i)) return false;
        for (int i : shape_exprs_) {
            const BasicExpr& x = exprs_[i];
            if (ck.p.test(i) && !pe.h.test(x.id)) return false;
            if (ck.q.test(i) && x.roles.is_subset_of(ct.t.roles) && !pe.hn.test(x.id)) return false;
        }
        return true;
    }
};

Rewriting::Rewriting(const SaturatedTBox& sat, std::vector<NormalConstraint> constraints, std::size_t num_shapes,
                     RewriteOptions opts)
    : constraints_(std::move(constraints)) {
    for (auto& c : constraints_) {
        num_shapes = std::max<std::size_t>(num_shapes, c.head + 1);
        if (c.form == NormalConstraint::Form::Shape || c.form == NormalConstraint::Form::Neg ||
            c.form == NormalConstraint::Form::Exists || c.form == NormalConstraint::Form::And)
            num_shapes = std::max<std::size_t>(num_shapes, c.a + 1);
        if (c.form == NormalConstraint::Form::And) num_shapes = std::max<std::size_t>(num_shapes, c.b + 1);
    }
    Bits nct = sat.signature();
    for (auto& c : constraints_)
        if (c.form == NormalConstraint::Form::Concept && c.a >= 0) nct.set(c.a);
    engine_ = std::make_unique<RewriteEngine>(sat, std::move(nct), num_shapes, opts);
    engine_->prepare(constraints_);

    strat_ = compute_stratification(to_shapes_graph(constraints_, {}));
    // every head's constraints share a stratum; group by head level
    std::size_t n = 0;
    for (auto& c : constraints_) n = std::max<std::size_t>(n, strat_.shape_level.at(c.head) + 1);
    by_stratum_.assign(n, {});
    for (auto& c : constraints_) by_stratum_[strat_.shape_level.at(c.head)].push_back(c);
    // drop empty strata
    by_stratum_.erase(std::remove_if(by_stratum_.begin(), by_stratum_.end(), [](auto& s) { return s.empty(); }),
                      by_stratum_.end());
    num_shapes_ = num_shapes;
}

Rewriting::~Rewriting() = default;
Rewriting::Rewriting(Rewriting&&) noexcept = default;

const Bits& Rewriting::signature() const { return engine_->signature(); }

Bits Rewriting::undefined_shapes() const {
    Bits out(num_shapes_);
    std::set<int> heads = heads_of(constraints_);
    auto mark = [&](int s) {
        if (!heads.count(s)) out.set(s);
    };
    using F = NormalConstraint::Form;
    for (auto& c : constraints_) {
        if (c.form == F::Shape || c.form == F::Neg || c.form == F::Exists || c.form == F::And) mark(c.a);
        if (c.form == F::And) mark(c.b);
    }
    return out;
}

std::vector<Quadruple> Rewriting::psat(const std::vector<NormalConstraint>& c0) {
    engine_->reset();
    engine_->seed(undefined_shapes());
    engine_->close(c0);
    return engine_->dump();
}

std::vector<Quadruple> Rewriting::completion(const std::vector<Quadruple>& k, int stratum) {
    const auto& lower = by_stratum_.at(stratum);
    std::set<int> heads = heads_of(lower);
    std::vector<Quadruple> out;
    out.reserve(k.size());
    for (auto q : k) {
        for (int s : heads)
            if (!q.h.test(s)) q.h_neg.set(s);
        for (auto& c : lower) {
            if (q.h.test(c.head)) continue;
            if (c.form == NormalConstraint::Form::Individual) q.q.insert(BasicExpr::individual(c.a));
            if (c.form == NormalConstraint::Form::Exists)
                q.q.insert(BasicExpr::exists_shape(role_bits(c.roles, q.t.roles.size()), c.a));
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<Quadruple> Rewriting::sat(const std::vector<NormalConstraint>& ci, const std::vector<Quadruple>& k) {
    engine_->reset();
    engine_->load(k);
    engine_->close(ci);
    return engine_->dump();
}

std::vector<EmittedConstraint> Rewriting::emit(const std::vector<Quadruple>& k,
                                               const std::vector<NormalConstraint>& ci) const {
    std::set<int> heads = heads_of(ci);
    const Bits& nct = signature();
    std::set<EmittedConstraint> all;
    for (auto& q : k) {
        bool clash = std::any_of(q.p.begin(), q.p.end(), [&](const BasicExpr& x) { return q.q.count(x) > 0; });
        if (clash) continue;
        for (int s : heads) {
            if (!q.h.test(s)) continue;
            EmittedConstraint e;
            e.head = s;
            e.pos_concepts = q.t.c1 & nct;
            e.neg_concepts = nct - q.t.c1;
            e.pos = q.p;
            e.pos.erase(BasicExpr::top());
            e.neg = q.q;
            all.insert(std::move(e));
        }
    }
    return {all.begin(), all.end()};
}

std::vector<EmittedConstraint> Rewriting::run(RewriteStats* stats) {
    k_.clear();
    std::vector<EmittedConstraint> out;
    for (std::size_t i = 0; i < by_stratum_.size(); ++i) {
        if (i == 0)
            k_.push_back(psat(by_stratum_[0]));
        else
            k_.push_back(sat(by_stratum_[i], completion(k_.back(), static_cast<int>(i) - 1)));
        auto e = emit(k_.back(), by_stratum_[i]);
        out.insert(out.end(), e.begin(), e.end());
        if (stats) stats->quadruples.push_back(k_.back().size());
    }
    if (stats) stats->emitted = out.size();
    return out;
}

namespace {

class AuxShapes {
public:
    explicit AuxShapes(Vocabulary& v) : v_(v) {}

    ShapeExprPtr positive(const BasicExpr& x) {
        switch (x.kind) {
            case BasicExpr::Kind::Top: return sx_top();
            case BasicExpr::Kind::Individual: return sx_individual(x.id);
            case BasicExpr::Kind::ExistsShape: return sx_exists(roles(x.roles), sx_shape(x.id));
            case BasicExpr::Kind::ExistsConcepts: {
                std::vector<ShapeExprPtr> parts;
                for (auto i = x.concepts.find_first(); i != Bits::npos; i = x.concepts.find_next(i))
                    parts.push_back(sx_concept(static_cast<int>(i)));
                return sx_exists(roles(x.roles), sx_and(parts));
            }
        }
        return sx_top();
    }

    ShapeExprPtr negated(const BasicExpr& x) {
        auto it = basic_.find(x);
        if (it != basic_.end()) return sx_not(it->second);
        int s = v_.fresh_shape("n");
        basic_.emplace(x, s);
        defs_.push_back({s, positive(x)});
        return sx_not(s);
    }

    ShapeExprPtr negated_concept(int a) {
        auto it = concept_.find(a);
        if (it != concept_.end()) return sx_not(it->second);
        int s = v_.shape_id("~" + v_.concept_name(a));
        concept_.emplace(a, s);
        defs_.push_back({s, sx_concept(a)});
        return sx_not(s);
    }

    const std::vector<Constraint>& definitions() const { return defs_; }

private:
    static std::vector<Role> roles(const Bits& b) {
        std::vector<Role> out;
        for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(Role::from_index(static_cast<int>(i)));
        return out;
    }

    Vocabulary& v_;
    std::map<BasicExpr, int> basic_;
    std::map<int, int> concept_;
    std::vector<Constraint> defs_;
};

}  // namespace

ShapesGraph emitted_graph(Vocabulary& v, const std::vector<NormalConstraint>& c,
                          const std::vector<EmittedConstraint>& emitted, std::vector<Target> targets) {
    ShapesGraph out = to_shapes_graph(c, std::move(targets));
    AuxShapes aux(v);
    std::vector<Constraint> bodies;
    for (auto& e : emitted) {
        std::vector<ShapeExprPtr> parts;
        for (auto i = e.pos_concepts.find_first(); i != Bits::npos; i = e.pos_concepts.find_next(i))
            parts.push_back(sx_concept(static_cast<int>(i)));
        for (auto i = e.neg_concepts.find_first(); i != Bits::npos; i = e.neg_concepts.find_next(i))
            parts.push_back(aux.negated_concept(static_cast<int>(i)));
        for (auto& x : e.pos) parts.push_back(aux.positive(x));
        for (auto& x : e.neg) parts.push_back(aux.negated(x));
        bodies.push_back({e.head, sx_and(parts)});
    }
    out.constraints.insert(out.constraints.end(), aux.definitions().begin(), aux.definitions().end());
    out.constraints.insert(out.constraints.end(), bodies.begin(), bodies.end());
    return out;
}

RewriteResult rewrite(const SaturatedTBox& sat, Vocabulary& v, const NormalizedShapes& shapes, RewriteOptions opts) {
    RewriteResult out;
    out.normalized = shapes;
    Rewriting r(sat, shapes.constraints, v.num_shapes(), opts);
    out.emitted = r.run(&out.stats);
    out.graph = emitted_graph(v, shapes.constraints, out.emitted, shapes.targets);
    return out;
}

// ---- pure rewritings ----

int concept_shape(Vocabulary& v, int a) { return v.shape_id("~s_" + v.concept_name(a)); }

int role_shape(Vocabulary& v, Role r) {
    return v.binary_shape_id((r.inverted ? "~bi_" : "~b_") + v.role_base_name(r.name));
}

namespace {

ShapeExprPtr concept_or_top(Vocabulary& v, int a) { return a == kTop ? sx_top() : sx_shape(concept_shape(v, a)); }

ShapeExprPtr conj_shapes(Vocabulary& v, const Bits& m) {
    std::vector<ShapeExprPtr> parts;
    for (auto i = m.find_first(); i != Bits::npos; i = m.find_next(i))
        parts.push_back(sx_shape(concept_shape(v, static_cast<int>(i))));
    return sx_and(parts);
}

void concept_atoms(const ShapeExpr& e, std::set<int>& out) {
    using K = ShapeExpr::Kind;
    switch (e.kind) {
        case K::Concept:
            if (e.id >= 0) out.insert(e.id);
            break;
        case K::Or:
        case K::And:
            concept_atoms(*e.lhs, out);
            concept_atoms(*e.rhs, out);
            break;
        case K::ExistsRoles:
        case K::ExistsPath:
        case K::ExistsBinary: concept_atoms(*e.lhs, out); break;
        default: break;
    }
}

std::set<int> all_concepts(const SaturatedTBox& sat, const ShapesGraph& sg) {
    std::set<int> out;
    const Bits& sig = sat.signature();
    for (auto i = sig.find_first(); i != Bits::npos; i = sig.find_next(i)) out.insert(static_cast<int>(i));
    for (auto& c : sg.constraints) concept_atoms(*c.body, out);
    return out;
}

// Common part of T_s: s_A ⇐ A and the entailed conjunctions.
void concept_closure(const SaturatedTBox& sat, Vocabulary& v, const std::set<int>& concepts, ShapesGraph& out) {
    for (int a : concepts) out.constraints.push_back({concept_shape(v, a), sx_concept(a)});
    for (auto& f : sat.entailed_conj()) {
        if (f.head < 0) continue;
        out.constraints.push_back({concept_shape(v, f.head), conj_shapes(v, f.lhs)});
    }
}

}  // namespace

ShapesGraph alchi_tbox_constraints(const SaturatedTBox& sat, Vocabulary& v) {
    if (sat.source().has_at_most()) throw PureRewriteError("pure ALCHI rewriting does not support at-most restrictions");
    ShapesGraph out;
    concept_closure(sat, v, all_concepts(sat, {}), out);
    const std::size_t slots = sat.role_slots();
    for (auto& f : sat.value_restrictions()) {
        if (f.b < 0) continue;
        for (std::size_t i = 0; i < slots; ++i) {
            Role s = Role::from_index(static_cast<int>(i));
            if (!sat.super_roles(s).test(f.r.index())) continue;
            out.constraints.push_back({concept_shape(v, f.b), sx_exists({invert_role(s)}, concept_or_top(v, f.a))});
        }
    }
    return out;
}

namespace {

class AlchiLift {
public:
    AlchiLift(const SaturatedTBox& sat, Vocabulary& v, ShapesGraph& out) : sat_(sat), v_(v), out_(out) {}

    ShapeExprPtr lift(const ShapeExprPtr& e) {
        using K = ShapeExpr::Kind;
        switch (e->kind) {
            case K::Concept: return e->id == kTop ? e : sx_shape(concept_shape(v_, e->id));
            case K::Individual:
            case K::Shape:
            case K::NegShape: return e;
            case K::Or: return sx_or(lift(e->lhs), lift(e->rhs));
            case K::And: return sx_and(lift(e->lhs), lift(e->rhs));
            case K::ExistsRoles: {
                auto body = lift(e->lhs);
                auto choices = role_choices(e->roles);
                if (choices.size() == 1) return sx_exists(*choices.begin(), body);
                int x = v_.fresh_shape("r");
                for (auto& g : choices) out_.constraints.push_back({x, sx_exists(g, body)});
                return sx_shape(x);
            }
            default: throw PureRewriteError("pure ALCHI rewriting expects constraints in normal form");
        }
    }

private:
    // every way to pick a sub-role of each role in R
    std::set<std::vector<Role>> role_choices(const std::vector<Role>& roles) {
        std::vector<std::vector<Role>> subs;
        const std::size_t slots = sat_.role_slots();
        for (Role r : roles) {
            std::vector<Role> s;
            for (std::size_t i = 0; i < slots; ++i) {
                Role q = Role::from_index(static_cast<int>(i));
                if (sat_.super_roles(q).test(r.index())) s.push_back(q);
            }
            if (s.empty()) s.push_back(r);
            subs.push_back(std::move(s));
        }
        std::set<std::vector<Role>> out;
        std::vector<Role> pick;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == subs.size()) {
                auto g = pick;
                std::sort(g.begin(), g.end());
                g.erase(std::unique(g.begin(), g.end()), g.end());
                out.insert(g);
                return;
            }
            for (Role q : subs[i]) {
                pick.push_back(q);
                go(i + 1);
                pick.pop_back();
            }
        };
        go(0);
        return out;
    }

    const SaturatedTBox& sat_;
    Vocabulary& v_;
    ShapesGraph& out_;
};

}  // namespace

ShapesGraph pure_rewrite_alchi(const SaturatedTBox& sat, Vocabulary& v, const ShapesGraph& c_t) {
    ShapesGraph out = alchi_tbox_constraints(sat, v);
    std::set<int> extra = all_concepts(sat, c_t);
    for (int a : extra)
        if (!sat.signature().test(a)) out.constraints.push_back({concept_shape(v, a), sx_concept(a)});
    AlchiLift lift(sat, v, out);
    for (auto& c : c_t.constraints) out.constraints.push_back({c.head, lift.lift(c.body)});
    out.binary = c_t.binary;
    out.targets = c_t.targets;
    return out;
}

ShapesGraph shaclb_tbox_constraints(const SaturatedTBox& sat, Vocabulary& v) {
    ShapesGraph out;
    concept_closure(sat, v, all_concepts(sat, {}), out);
    const std::size_t slots = sat.role_slots();
    auto b = [&](Role r) { return path_binary(role_shape(v, r)); };
    for (std::size_t i = 0; i < slots; ++i) {
        Role r = Role::from_index(static_cast<int>(i));
        out.binary.push_back({role_shape(v, r), path_role(r)});
        out.binary.push_back({role_shape(v, r), path_inverse(b(invert_role(r)))});
        const Bits& sup = sat.super_roles(r);
        for (auto j = sup.find_first(); j != Bits::npos; j = sup.find_next(j)) {
            Role q = Role::from_index(static_cast<int>(j));
            if (q != r) out.binary.push_back({role_shape(v, q), b(r)});
        }
    }
    for (auto& f : sat.value_restrictions()) {
        if (f.b < 0) continue;
        out.constraints.push_back({concept_shape(v, f.b), sx_exists_binary(b(invert_role(f.r)), concept_or_top(v, f.a))});
    }
    for (auto& f : sat.entailed_exists()) {
        for (auto& al : sat.at_most_ones()) {
            if (!f.roles.test(al.r.index()) || al.b == kBottom || !holds(f.concepts, al.b)) continue;
            int hat = v.fresh_shape("hat");
            Bits m = f.lhs;
            if (al.a >= 0) m.set(al.a);
            out.constraints.push_back({hat, conj_shapes(v, m)});
            PathPtr edge = path_concat(path_test(hat), b(al.r));
            if (al.b >= 0) edge = path_concat(edge, path_test(concept_shape(v, al.b)));
            for (auto i = f.roles.find_first(); i != Bits::npos; i = f.roles.find_next(i))
                out.binary.push_back({role_shape(v, Role::from_index(static_cast<int>(i))), edge});
            for (auto j = f.concepts.find_first(); j != Bits::npos; j = f.concepts.find_next(j))
                out.constraints.push_back(
                    {concept_shape(v, static_cast<int>(j)),
                     sx_and(concept_or_top(v, al.b), sx_exists_binary(path_inverse(b(al.r)), sx_shape(hat)))});
        }
    }
    return out;
}

namespace {

ShapeExprPtr lift_b(Vocabulary& v, const ShapeExprPtr& e) {
    using K = ShapeExpr::Kind;
    switch (e->kind) {
        case K::Concept: return e->id == kTop ? e : sx_shape(concept_shape(v, e->id));
        case K::Individual:
        case K::Shape:
        case K::NegShape: return e;
        case K::Or: return sx_or(lift_b(v, e->lhs), lift_b(v, e->rhs));
        case K::And: return sx_and(lift_b(v, e->lhs), lift_b(v, e->rhs));
        case K::ExistsRoles: {
            PathPtr p;
            for (Role r : e->roles) {
                PathPtr q = path_binary(role_shape(v, r));
                p = p ? path_inter(p, q) : q;
            }
            return sx_exists_binary(p, lift_b(v, e->lhs));
        }
        default: throw PureRewriteError("pure SHACL^b rewriting expects constraints in normal form");
    }
}

}  // namespace

ShapesGraph pure_rewrite_shaclb(const SaturatedTBox& sat, Vocabulary& v, const ShapesGraph& c_t) {
    ShapesGraph out = shaclb_tbox_constraints(sat, v);
    for (int a : all_concepts(sat, c_t))
        if (!sat.signature().test(a)) out.constraints.push_back({concept_shape(v, a), sx_concept(a)});
    for (auto& c : c_t.constraints) out.constraints.push_back({c.head, lift_b(v, c.body)});
    out.binary.insert(out.binary.end(), c_t.binary.begin(), c_t.binary.end());
    out.targets = c_t.targets;
    return out;
}

}  // namespace shapeval
