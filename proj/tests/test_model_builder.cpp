#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shapeval/random.hpp"
#include "test_util.hpp"

using namespace shapeval;
using namespace shapeval::testing;

namespace {

const char* kSuccTBox =
    "B0 <= some r0.A0\nB0 <= some r1.A1\nB1 <= max1 r1.A1\nA0 <= A1\nr0 <= r1\nB1 <= some r2.top\nB0 <= only r2.A2\n";
const char* kPetTBox = "PetOwner <= some hasPet.top\nhasWingedPet <= hasPet\nPetOwner <= some hasWingedPet.top\n";
const char* kPetABox = "PetOwner(linda)\nhasWingedPet(linda,blu)\nBird(blu)\n";

std::vector<std::string> completed_atoms(Kb& k) {
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    REQUIRE_FALSE(comp.inconsistent);
    return sorted(completed_interpretation(comp, sat.role_slots()).dump(k.v));
}

}  // namespace

TEST_CASE("abox completion golden") {
    Kb k(kSuccTBox, "B0(a)\nr0(a,b)\nr2(a,b)\nA0(b)\n");
    CHECK(completed_atoms(k) ==
          sorted({"B0(a)", "r0(a,b)", "r1(a,b)", "r2(a,b)", "A0(b)", "A1(b)", "A2(b)"}));

    Kb empty("", "A(a)\np(a,b)\n");
    CHECK(completed_atoms(empty) == sorted({"A(a)", "p(a,b)"}));

    Kb strat("A <= some p.B\n", "A(a)\np(a,b)\nC(b)\n");
    CHECK(completed_atoms(strat) == sorted({"A(a)", "p(a,b)", "C(b)"}));
}

TEST_CASE("completion merges successors through at-most") {
    Kb k("A <= some s.B\ns <= r\nA <= max1 r.B\nB <= C\n", "A(a)\nr(a,b)\nB(b)\n");
    CHECK(completed_atoms(k) == sorted({"A(a)", "r(a,b)", "s(a,b)", "B(b)", "C(b)"}));
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    CHECK(build_can(sat, comp, 4).size() == 2);
}

TEST_CASE("children") {
    Kb chain("A <= some r.A\n", "");
    auto sat = chain.sat();
    TwoType t{chain.cs({"A"}), chain.rs({"r"}), chain.cs({"A"})};
    auto kids = children(sat, t);
    REQUIRE(kids.size() == 1);
    CHECK(kids[0] == t);

    Kb pos("A <= some p.B\nB <= some q.C\n", "");
    auto ps = pos.sat();
    TwoType tp{pos.cs({"A"}), pos.rs({"p"}), pos.cs({"B"})};
    auto pk = children(ps, tp);
    REQUIRE(pk.size() == 1);
    CHECK(pk[0] == TwoType{pos.cs({"B"}), pos.rs({"q"}), pos.cs({"C"})});

    Kb empty("", "A(x)\nr(x,x)\n");
    CHECK(children(empty.sat(), TwoType{empty.cs({"A"}), empty.rs({"r"}), empty.cs({"A"})}).empty());
}

TEST_CASE("root frontier") {
    Kb k(kSuccTBox, "B0(a)\nB1(a)\nr1(a,b)\nr1(a,c)\nA2(b)\nA2(c)\nX(d)\n");
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    auto f = root_frontier(sat, comp, k.i("a"));
    std::sort(f.begin(), f.end());
    std::vector<TwoType> expect{{k.cs({"B0", "B1"}), k.rs({}), k.cs({})}, {k.cs({"B0", "B1"}), k.rs({"r1"}), k.cs({"A2"})}};
    std::sort(expect.begin(), expect.end());
    CHECK(f == expect);

    Kb lone("", "r(x,y)\n");
    lone.v.individual_id("z");
    auto ls = lone.sat();
    auto lc = complete_abox(ls, lone.a, lone.v.num_individuals());
    auto lf = root_frontier(ls, lc, lone.i("z"));
    REQUIRE(lf.size() == 1);
    CHECK(lf[0] == TwoType{ls.empty_concepts(), ls.empty_roles(), ls.empty_concepts()});
}

TEST_CASE("root frontier of the pet owner") {
    Kb k(kPetTBox, kPetABox);
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    auto f = root_frontier(sat, comp, k.i("linda"));
    // oracle: the completed atoms between linda and blu
    auto atoms = completed_atoms(k);
    CHECK(std::count(atoms.begin(), atoms.end(), "hasPet(linda,blu)") == 1);
    TwoType expect{k.cs({"PetOwner"}), k.rs({"hasWingedPet", "hasPet"}), k.cs({"Bird"})};
    CHECK(std::find(f.begin(), f.end(), expect) != f.end());
}

TEST_CASE("chain approximations") {
    Kb k("A <= some r.A\n", "A(a)\n");
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    for (int n = 0; n <= 6; ++n) {
        Interpretation I = build_can(sat, comp, n);
        CHECK(I.size() == static_cast<std::size_t>(n + 1));
        CHECK_FALSE(I.complete);
        std::vector<std::string> expect{"A(a)"};
        std::string prev = "a", word = "_:a";
        for (int d = 1; d <= n; ++d) {
            word += ".1";
            expect.push_back("A(" + word + ")");
            expect.push_back("r(" + prev + "," + word + ")");
            prev = word;
        }
        CHECK(sorted(I.dump(k.v)) == sorted(expect));
        CHECK_FALSE(is_model(I, sat, k.a));
    }
    Interpretation can0 = build_can(sat, comp, 0);
    CHECK(sorted(can0.dump(k.v)) == sorted(completed_interpretation(comp, sat.role_slots()).dump(k.v)));
}

TEST_CASE("pet owner austere model") {
    Kb k(kPetTBox, kPetABox);
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    Interpretation can = build_can(sat, comp, 1);
    CHECK(can.complete);
    CHECK(can.size() == 2);
    CHECK(sorted(can.dump(k.v)) ==
          sorted({"PetOwner(linda)", "Bird(blu)", "hasWingedPet(linda,blu)", "hasPet(linda,blu)"}));
    CHECK(is_model(can, sat, k.a));
    CHECK(sorted(build_can(sat, comp, 32).dump(k.v)) == sorted(can.dump(k.v)));
}

TEST_CASE("approximations are monotone") {
    Kb k("A <= some r.B\nB <= some s.A\nB <= C\nA <= only r.D\n", "A(a)\nB(b)\nr(a,b)\n");
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    Interpretation big = build_can(sat, comp, 6);
    auto all = big.dump(k.v);
    for (int n = 0; n < 6; ++n) {
        auto small = build_can(sat, comp, n).dump(k.v);
        CHECK(std::includes(all.begin(), all.end(), small.begin(), small.end()));
    }
}

TEST_CASE("finite canonical models are models") {
    Rng rng(101);
    int checked = 0;
    for (int n = 0; n < 100; ++n) {
        auto fk = random_finite_kb(rng, KbParams{}, 8, 60);
        if (!fk) continue;
        auto& kb = fk->kb;
        auto sat = saturate(kb.t, kb.v);
        auto comp = complete_abox(sat, kb.a, kb.v.num_individuals());
        Interpretation can = build_can(sat, comp, 8);
        REQUIRE(can.complete);
        CHECK(is_model(can, sat, kb.a));
        ++checked;
    }
    CHECK(checked > 80);
}

TEST_CASE("the R4 fault breaks the model property") {
    Kb k("A <= some r.B\n", "A(a)\n");
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    set_fault_flip_r4(true);
    Interpretation bad = build_can(sat, comp, 4);
    set_fault_flip_r4(false);
    CHECK_FALSE(is_model(bad, sat, k.a));
    CHECK(is_model(build_can(sat, comp, 4), sat, k.a));
}
