#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shapeval/evaluator.hpp"
#include "shapeval/pipeline.hpp"
#include "shapeval/random.hpp"
#include "test_util.hpp"

using namespace shapeval;
using namespace shapeval::testing;

namespace {

const char* kPosTBox = "A <= some p.B\nB <= some q.C\n";
const char* kPosShapes =
    "$s <- some [p].$s\n$s <- some [q].$s\n$s <- $sp & $spp\n$sp <- some [^p].$sp\n$sp <- some [^q].$sp\n"
    "$sp <- A\n$spp <- C\n";
const char* kStratShapes = "$sC <- C\n$sp <- some [p].$sC\n$spp <- some [p].!$sC\n$s <- $sp & $spp\n";

struct Rewritten {
    Vocabulary v;
    TBox t;
    ABox a;
    NormalizedShapes ns;
    SaturatedTBox sat;
    RewriteResult r;

    Rewritten(std::string_view tbox, std::string_view abox, std::string_view shapes, std::string_view targets,
              bool eager = false) {
        t = parse_tbox(tbox, v);
        a = parse_abox(abox, v);
        ShapesGraph sg = parse_shapes(shapes, v);
        sg.targets = parse_targets(targets, v);
        ns = normalize(v, sg);
        sat = saturate(t, v);
        r = rewrite(sat, v, ns, RewriteOptions{eager, 0});
    }
    bool emitted(std::string_view head, std::set<std::string> conjuncts) const {
        return std::any_of(r.emitted.begin(), r.emitted.end(), [&](const EmittedConstraint& e) {
            return v.shape_name(e.head) == head && e.conjuncts(v) == conjuncts;
        });
    }
    // C_T over the completed ABox alone.
    ValidationResult over_abox() {
        auto comp = complete_abox(sat, a, v.num_individuals());
        return validate(completed_interpretation(comp, v.role_slots()), r.graph);
    }
};

Report run_text(std::string_view tbox, std::string_view abox, std::string_view shapes, std::string_view targets,
                Mode m) {
    Problem p;
    p.t = parse_tbox(tbox, p.v);
    p.a = parse_abox(abox, p.v);
    p.shapes = parse_shapes(shapes, p.v);
    p.shapes.targets = parse_targets(targets, p.v);
    RunOptions o;
    o.mode = m;
    return run(p, o);
}

}  // namespace

TEST_CASE("positive example emission") {
    Rewritten k(kPosTBox, "A(a)\np(a,b)\n", kPosShapes, "$s(@a)\n");
    CHECK(k.emitted("s", {"A", "¬B", "¬C", "¬∃p.B"}));
    CHECK(k.r.stats.quadruples.size() == 1);
    auto res = k.over_abox();
    REQUIRE(res.targets.size() == 1);
    CHECK(res.targets[0].valid);
    // the original constraints alone do not see the anonymous witnesses
    CHECK_FALSE(validate(interpretation_of(k.a, k.v), k.ns.graph()).valid);
}

TEST_CASE("stratified example emission") {
    Rewritten k("A <= some p.B\n", "A(a)\np(a,b)\nC(b)\n", kStratShapes, "$s(@a)\n");
    CHECK(k.emitted("s", {"A", "¬B", "¬C", "∃p.sC", "¬∃p.B"}));
    CHECK(k.r.stats.quadruples.size() == 2);
    auto res = k.over_abox();
    REQUIRE(res.targets.size() == 1);
    CHECK(res.targets[0].valid);
}

TEST_CASE("emitted bodies are order independent") {
    Rewritten k("A <= some p.B\n", "A(a)\np(a,b)\nC(b)\n", "$s <- $sp & $spp\n$spp <- some [p].!$sC\n$sp <- some [p].$sC\n$sC <- C\n",
                "$s(@a)\n");
    CHECK(k.emitted("s", {"¬B", "∃p.sC", "A", "¬∃p.B", "¬C"}));
}

TEST_CASE("quadruple stages") {
    Vocabulary v;
    TBox t = parse_tbox("A <= some p.B\n", v);
    ABox a = parse_abox("A(a)\np(a,b)\nC(b)\n", v);
    ShapesGraph sg = parse_shapes(kStratShapes, v);
    auto ns = normalize(v, sg);
    auto sat = saturate(t, v);
    Rewriting rw(sat, ns.constraints, v.num_shapes());
    REQUIRE(rw.num_strata() == 2);
    auto k0 = rw.psat(rw.stratum(0));
    CHECK_FALSE(k0.empty());
    for (auto& q : k0) {
        CHECK(is_locally_consistent(sat, q.t));
        CHECK((q.h & q.h_neg).none());
    }
    auto comp = rw.completion(k0, 0);
    REQUIRE(comp.size() == k0.size());
    std::set<int> lower;
    for (auto& c : rw.stratum(0)) lower.insert(c.head);
    for (auto& q : comp)
        for (int s : lower) CHECK(q.h.test(s) != q.h_neg.test(s));
    auto k1 = rw.sat(rw.stratum(1), comp);
    CHECK(k1.size() >= comp.size());
    auto emitted = rw.emit(k1, rw.stratum(1));
    CHECK_FALSE(emitted.empty());
    for (auto& e : emitted) CHECK((e.pos_concepts & e.neg_concepts).none());
    auto all = rw.run();
    REQUIRE(rw.strata_results().size() == 2);
    CHECK(rw.strata_results()[1].size() == k1.size());
}

TEST_CASE("eager and lazy seeding agree") {
    Rewritten lazy(kPosTBox, "A(a)\np(a,b)\n", kPosShapes, "$s(@a)\n", false);
    Rewritten eager(kPosTBox, "A(a)\np(a,b)\n", kPosShapes, "$s(@a)\n", true);
    CHECK(lazy.over_abox().valid == eager.over_abox().valid);
    CHECK(eager.r.stats.quadruples[0] >= lazy.r.stats.quadruples[0]);

    Rng rng(41);
    int seen = 0;
    CaseParams p;
    p.max_constraints = 6;
    p.max_concepts = 3;
    while (seen < 15) {
        auto c = random_case(rng, p);
        if (!c) continue;
        Report reports[2];
        bool skipped = false;
        for (int e = 0; e < 2; ++e) {
            Problem pr{c->v, c->t, c->a, c->shapes.graph()};
            RunOptions o;
            o.mode = Mode::Rewrite;
            o.eager = e == 1;
            o.max_quadruples = 20000;
            try {
                reports[e] = run(pr, o);
            } catch (const RewriteBudgetExceeded&) {
                skipped = true;
            }
        }
        if (skipped) continue;
        ++seen;
        REQUIRE(reports[0].targets.size() == reports[1].targets.size());
        for (std::size_t i = 0; i < reports[0].targets.size(); ++i)
            CHECK(reports[0].targets[i].valid == reports[1].targets[i].valid);
    }
}

TEST_CASE("empty constraints rewrite to nothing") {
    Vocabulary v;
    auto sat = saturate(parse_tbox(kPosTBox, v), v);
    auto r = rewrite(sat, v, NormalizedShapes{});
    CHECK(r.emitted.empty());
    CHECK(r.graph.constraints.empty());
}

TEST_CASE("budget") {
    Vocabulary v;
    auto sat = saturate(parse_tbox(kPosTBox, v), v);
    auto ns = normalize(v, parse_shapes(kPosShapes, v));
    CHECK_THROWS_AS(rewrite(sat, v, ns, RewriteOptions{false, 10}), RewriteBudgetExceeded);
}

TEST_CASE("tbox constraints of the pure routes") {
    Vocabulary v;
    auto sat = saturate(parse_tbox("A <= B\nr <= s\nA <= only r.B\n", v), v);
    auto lines = [&](const ShapesGraph& g) {
        std::vector<std::string> out;
        std::string text = format_shapes(g, v);
        for (std::size_t i = 0, j; i < text.size(); i = j + 1) {
            j = text.find('\n', i);
            out.push_back(text.substr(i, j - i));
        }
        return out;
    };
    auto has = [](const std::vector<std::string>& xs, const std::string& x) {
        return std::find(xs.begin(), xs.end(), x) != xs.end();
    };
    auto alchi = lines(alchi_tbox_constraints(sat, v));
    CHECK(has(alchi, "$~s_A <- A"));
    CHECK(has(alchi, "$~s_B <- B"));
    CHECK(has(alchi, "$~s_B <- $~s_A"));
    CHECK(has(alchi, "$~s_B <- some [^r].$~s_A"));

    auto b = lines(shaclb_tbox_constraints(sat, v));
    CHECK(has(b, "$~s_B <- $~s_A"));
    CHECK(has(b, "%~b_r <- r"));
    CHECK(has(b, "%~bi_r <- ^r"));
    CHECK(has(b, "%~b_s <- %~b_r"));
    CHECK(has(b, "%~b_r <- inv(%~bi_r)"));
    CHECK(has(b, "$~s_B <- some {%~bi_r}.$~s_A"));
    CHECK(concept_shape(v, v.concept_id("A")) == v.shape_id("~s_A"));
}

TEST_CASE("pure routes on the examples") {
    for (Mode m : {Mode::Direct, Mode::Rewrite, Mode::PureAlchi, Mode::PureShaclb}) {
        CAPTURE(mode_name(m));
        CHECK(run_text(kPosTBox, "A(a)\np(a,b)\n", kPosShapes, "$s(@a)\n", m).exit_code == kExitValid);
        CHECK(run_text("A <= some p.B\n", "A(a)\np(a,b)\nC(b)\n", kStratShapes, "$s(@a)\n", m).exit_code == kExitValid);
    }
}

TEST_CASE("at-most restrictions need binary shapes") {
    const char* tbox = "A <= some s.B\ns <= r\nA <= max1 r.B\nB <= C\n";
    const char* abox = "A(a)\nr(a,b)\nB(b)\n";
    const char* shapes = "$t <- C\n$u <- some [s].$t\n";
    CHECK(run_text(tbox, abox, shapes, "$u(@a)\n", Mode::Direct).exit_code == kExitValid);
    CHECK(run_text(tbox, abox, shapes, "$u(@a)\n", Mode::Rewrite).exit_code == kExitValid);
    CHECK(run_text(tbox, abox, shapes, "$u(@a)\n", Mode::PureShaclb).exit_code == kExitValid);

    Vocabulary v;
    auto sat = saturate(parse_tbox(tbox, v), v);
    CHECK_THROWS_AS(pure_rewrite_alchi(sat, v, ShapesGraph{}), PureRewriteError);
}

TEST_CASE("rewriting agrees with validation over can") {
    Rng rng(77);
    int seen = 0;
    while (seen < 40) {
        auto c = random_case(rng, CaseParams{});
        if (!c) continue;
        std::optional<Report> direct;
        bool skipped = false;
        for (Mode m : {Mode::Direct, Mode::Rewrite, Mode::PureShaclb}) {
            Problem pr{c->v, c->t, c->a, c->shapes.graph()};
            RunOptions o;
            o.mode = m;
            o.max_quadruples = 20000;
            Report r;
            try {
                r = run(pr, o);
            } catch (const RewriteBudgetExceeded&) {
                skipped = true;
                break;
            }
            if (!direct) {
                direct = r;
                continue;
            }
            CHECK(r.exit_code == direct->exit_code);
            REQUIRE(r.targets.size() == direct->targets.size());
            for (std::size_t i = 0; i < r.targets.size(); ++i) CHECK(r.targets[i].valid == direct->targets[i].valid);
        }
        if (!skipped) ++seen;
    }
}
