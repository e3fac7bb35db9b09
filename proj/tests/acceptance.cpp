#include "shapeval/chase.hpp"
#include "shapeval/pipeline.hpp"
#include "shapeval/random.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace shapeval;
using namespace shapeval::testing;

namespace {

const char* kSuccTBox =
    "B0 <= some r0.A0\nB0 <= some r1.A1\nB1 <= max1 r1.A1\nA0 <= A1\nr0 <= r1\nB1 <= some r2.top\nB0 <= only r2.A2\n";
const char* kPetTBox = "PetOwner <= some hasPet.top\nhasWingedPet <= hasPet\nPetOwner <= some hasWingedPet.top\n";
const char* kPetABox = "PetOwner(linda)\nhasWingedPet(linda,blu)\nBird(blu)\n";
const char* kPosShapes =
    "$s <- some [p].$s\n$s <- some [q].$s\n$s <- $sp & $spp\n$sp <- some [^p].$sp\n$sp <- some [^q].$sp\n"
    "$sp <- A\n$spp <- C\n";
const char* kStratShapes = "$sC <- C\n$sp <- some [p].$sC\n$spp <- some [p].!$sC\n$s <- $sp & $spp\n";

struct Failure {
    std::string why;
};

void require(bool ok, const std::string& why) {
    if (!ok) throw Failure{why};
}

Report run_text(std::string_view tbox, std::string_view abox, std::string_view shapes, std::string_view targets,
                Mode m) {
    Problem p;
    p.t = parse_tbox(tbox, p.v);
    p.a = parse_abox(abox, p.v);
    p.shapes = parse_shapes(shapes, p.v);
    if (!targets.empty()) p.shapes.targets = parse_targets(targets, p.v);
    RunOptions o;
    o.mode = m;
    return run(p, o);
}

std::set<std::string> conjuncts_for(Vocabulary& v, const TBox& t, const ShapesGraph& sg, std::string_view head,
                                    const std::set<std::string>& want) {
    auto r = rewrite(saturate(t, v), v, normalize(v, sg));
    for (auto& e : r.emitted)
        if (v.shape_name(e.head) == head && e.conjuncts(v) == want) return want;
    return {};
}

void criterion1() {
    Kb k(kSuccTBox, "");
    auto sat = k.sat();
    TwoType t{k.cs({"B0", "B1"}), k.rs({"r1"}), k.cs({"A2"})};
    auto succ = succ_config(sat, {t, t});
    std::vector<OneHalfType> expect{{k.rs({"r0", "r1"}), k.cs({"A0", "A1"})}, {k.rs({"r2"}), k.cs({"A2"})}};
    std::sort(expect.begin(), expect.end());
    std::sort(succ.begin(), succ.end());
    require(succ == expect, "successor configuration of F differs");
    TwoType t2{k.cs({"B0", "B1"}), k.rs({"r1", "r2"}), k.cs({"A2"})};
    std::vector<OneHalfType> expect2{{k.rs({"r0", "r1"}), k.cs({"A0", "A1"})}};
    require(succ_config(sat, {t2}) == expect2, "successor configuration of F' differs");
}

void criterion2() {
    Kb k(kSuccTBox, "B0(a)\nr0(a,b)\nr2(a,b)\nA0(b)\n");
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    auto got = sorted(completed_interpretation(comp, sat.role_slots()).dump(k.v));
    require(got == sorted({"B0(a)", "r0(a,b)", "r1(a,b)", "r2(a,b)", "A0(b)", "A1(b)", "A2(b)"}), "A_T differs");
}

void criterion3() {
    Kb k(kPetTBox, kPetABox);
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    Interpretation can = build_can(sat, comp, 8);
    require(can.size() == 2 && can.complete, "pet can should have 2 nodes");
    auto atoms = can.dump(k.v);
    require(std::count(atoms.begin(), atoms.end(), "hasPet(linda,blu)") == 1, "hasPet(linda,blu) missing");
    ShapesGraph sg = parse_shapes("$bird <- Bird\n$x <- some [hasPet].!$bird\n", k.v);
    sg.targets = parse_targets("$x(@linda)\n", k.v);
    require(!validate(can, sg).valid, "target should be a violation over can");
    auto ob = run_chase(k.t, atoms_of(k.a, k.v), ChaseVariant::Oblivious, 10);
    require(validate(interpretation_of(ob.atoms), sg).valid, "target should be valid over the oblivious chase");

    Kb chain("A <= some r.A\n", "A(a)\n");
    auto cs = chain.sat();
    auto cc = complete_abox(cs, chain.a, chain.v.num_individuals());
    for (int n = 0; n <= 8; ++n) {
        Interpretation I = build_can(cs, cc, n);
        require(!I.complete && I.size() == static_cast<std::size_t>(n + 1), "chain approximation " + std::to_string(n));
    }
}

std::string criterion4() {
    Rng rng(4);
    int done = 0, infinite = 0;
    while (done < 50) {
        auto fk = random_finite_kb(rng, KbParams{}, 8, 10);
        if (!fk) continue;
        auto& kb = fk->kb;
        auto sat = saturate(kb.t, kb.v);
        auto comp = complete_abox(sat, kb.a, kb.v.num_individuals());
        AtomSet can = atoms_of(build_can(sat, comp, 8));
        for (auto& h : enumerate_endomorphisms(can))
            require(h.isomorphism(), "non-injective endomorphism of can in case " + std::to_string(done));
        // inverse roles can make the oblivious chase infinite even when can is finite
        auto ob = run_chase(kb.t, atoms_of(kb.a, kb.v), ChaseVariant::Oblivious, 16, 512);
        if (ob.terminated)
            require(is_isomorphic(core_of(ob.atoms), can), "core of the oblivious chase is not can");
        else
            ++infinite;
        auto cc = run_core_chase(kb.t, atoms_of(kb.a, kb.v), 10);
        require(is_isomorphic(cc.atoms, can), "core chase is not can");
        ++done;
    }
    return infinite ? " (" + std::to_string(infinite) + " without a finite oblivious fixpoint)" : "";
}

void criterion5() {
    {
        Vocabulary v;
        TBox t = parse_tbox("A <= some p.B\nB <= some q.C\n", v);
        ShapesGraph sg = parse_shapes(kPosShapes, v);
        require(!conjuncts_for(v, t, sg, "s", {"A", "¬B", "¬C", "¬∃p.B"}).empty(), "positive emission missing");
    }
    {
        Vocabulary v;
        TBox t = parse_tbox("A <= some p.B\n", v);
        ShapesGraph sg = parse_shapes(kStratShapes, v);
        require(!conjuncts_for(v, t, sg, "s", {"A", "¬B", "¬C", "∃p.sC", "¬∃p.B"}).empty(), "stratified emission missing");
    }
    for (Mode m : {Mode::Direct, Mode::Rewrite}) {
        require(run_text("A <= some p.B\nB <= some q.C\n", "A(a)\np(a,b)\n", kPosShapes, "$s(@a)\n", m).exit_code == 0,
                "positive example not valid in " + mode_name(m));
        require(run_text("A <= some p.B\n", "A(a)\np(a,b)\nC(b)\n", kStratShapes, "$s(@a)\n", m).exit_code == 0,
                "stratified example not valid in " + mode_name(m));
    }
}

// Runs `cases` random cases through the reference and the other route; budget overruns are redrawn.
std::string compare(std::uint64_t seed, int cases, const CaseParams& p, Mode other, int* skipped) {
    Rng rng(seed);
    int done = 0;
    *skipped = 0;
    while (done < cases) {
        auto c = random_case(rng, p);
        if (!c) continue;
        Report r[2];
        try {
            for (int i = 0; i < 2; ++i) {
                Problem pr{c->v, c->t, c->a, c->shapes.graph()};
                RunOptions o;
                o.mode = i == 0 ? Mode::Direct : other;
                o.max_quadruples = 40000;
                r[i] = run(pr, o);
            }
        } catch (const RewriteBudgetExceeded&) {
            ++*skipped;
            continue;
        }
        if (r[0].exit_code != r[1].exit_code) return "exit codes differ in case " + std::to_string(done);
        for (std::size_t i = 0; i < r[0].targets.size(); ++i)
            if (r[0].targets[i].valid != r[1].targets[i].valid) return "verdicts differ in case " + std::to_string(done);
        ++done;
    }
    return {};
}

std::string skips_note(int skipped) { return skipped ? " (" + std::to_string(skipped) + " redrawn over budget)" : ""; }

std::string criterion6() {
    int skipped = 0;
    auto err = compare(6, 200, CaseParams{}, Mode::Rewrite, &skipped);
    require(err.empty(), err);
    return skips_note(skipped);
}

std::string criterion7() {
    CaseParams a;
    a.at_most = false;
    int s1 = 0, s2 = 0;
    auto err = compare(71, 100, a, Mode::PureAlchi, &s1);
    require(err.empty(), "Horn-ALCHI: " + err);
    CaseParams b;
    b.require_at_most = true;
    err = compare(72, 100, b, Mode::PureShaclb, &s2);
    require(err.empty(), "SHACL^b: " + err);
    return skips_note(s1 + s2);
}

void criterion8() {
    Rng rng(8);
    for (int n = 0; n < 200; ++n) {
        Vocabulary v;
        for (int i = 0; i < 3; ++i) v.concept_id("A" + std::to_string(i));
        for (int i = 0; i < 2; ++i) v.role_id("r" + std::to_string(i));
        for (int i = 0; i < 4; ++i) v.individual_id("a" + std::to_string(i));
        ABox a = random_abox(rng, v, 5, 6);
        ShapesGraph sg = random_shapes_graph(rng, v, GraphParams{});
        Interpretation I = interpretation_of(a, v);
        auto before = validate(I, sg);
        auto after = validate(I, normalize(v, sg).graph());
        require(before.targets.size() == after.targets.size(), "target count changed");
        for (std::size_t i = 0; i < before.targets.size(); ++i)
            require(before.targets[i].valid == after.targets[i].valid, "verdict changed in pair " + std::to_string(n));
    }
    Vocabulary v;
    auto sg = parse_shapes("$s <- eq(<r>,<t>)\n", v);
    try {
        normalize(v, sg);
    } catch (const NormalizationError& e) {
        require(std::string(e.what()).find("@c & eq") != std::string::npos, "diagnostic does not suggest a guard");
        return;
    }
    require(false, "unguarded eq accepted");
}

void criterion9() {
    Vocabulary v;
    auto sg = parse_shapes(kStratShapes, v);
    auto st = compute_stratification(sg);
    int sc = v.shape_id("sC"), sp = v.shape_id("sp"), spp = v.shape_id("spp"), s = v.shape_id("s");
    require(st.shape_level.at(sc) < st.shape_level.at(spp) && st.shape_level.at(sp) < st.shape_level.at(spp) &&
                st.shape_level.at(sc) < st.shape_level.at(s) && st.shape_level.at(sp) < st.shape_level.at(s),
            "strata order");

    Vocabulary w;
    bool rejected = false;
    try {
        compute_stratification(parse_shapes("$s <- !$s\n", w));
    } catch (const NotStratified&) {
        rejected = true;
    }
    require(rejected, "{s <- !s} accepted");

    Vocabulary x;
    ABox a = parse_abox("A(a)\nr(a,b)\nr(b,c)\nA(c)\nB(b)\n", x);
    auto g = parse_shapes("$p <- A\n$p <- some [r].$p\n$q <- !$p\n$q <- B & some [r].$q\n$u <- !$q & some [^r].$u\n$u <- @a\n"
                          "$v <- $p & some [r].$q\n$w <- $u | $v\n",
                          x);
    auto coarse = compute_stratification(g, StratificationMode::Coarse);
    auto fine = compute_stratification(g, StratificationMode::Fine);
    require(coarse.size() == 3 || fine.size() == 3, "expected a 3-stratum case");
    require(coarse.shape_level != fine.shape_level, "the two stratifications coincide");
    Interpretation I = interpretation_of(a, x);
    require(perfect_assignment(I, g, coarse) == perfect_assignment(I, g, fine), "perfect assignments differ");
}

void criterion10() {
    auto r = run_text("A & B <= bot\n", "A(a)\nB(a)\n", "$s <- A\n", "$s(@a)\n", Mode::Direct);
    require(r.exit_code == kExitInconsistent && !r.consistent, "exit code " + std::to_string(r.exit_code));
}

}  // namespace

int main() {
    std::vector<std::pair<const char*, std::function<std::string()>>> criteria{
        {"succ golden", [] { criterion1(); return std::string(); }},
        {"A_T golden", [] { criterion2(); return std::string(); }},
        {"pet owner and chain approximations", [] { criterion3(); return std::string(); }},
        {"50 finite can are cores", criterion4},
        {"rewriting emissions", [] { criterion5(); return std::string(); }},
        {"200 random cases direct = rewrite", criterion6},
        {"pure routes", criterion7},
        {"normalization equivalence", [] { criterion8(); return std::string(); }},
        {"stratification", [] { criterion9(); return std::string(); }},
        {"inconsistent KB exit code", [] { criterion10(); return std::string(); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        std::string verdict, note;
        try {
            note = criteria[i].second();
            verdict = "PASS";
        } catch (const Failure& f) {
            verdict = "FAIL";
            note = ": " + f.why;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            note = std::string(": ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (verdict == "FAIL") ++failed;
        std::printf("%s criterion %zu %s%s [%.2fs]\n", verdict.c_str(), i + 1, criteria[i].first, note.c_str(), secs);
    }
    return failed ? 1 : 0;
}
