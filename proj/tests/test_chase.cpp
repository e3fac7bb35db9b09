#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shapeval/chase.hpp"
#include "shapeval/random.hpp"
#include "test_util.hpp"

using namespace shapeval;
using namespace shapeval::testing;

namespace {

const char* kPetTBox = "PetOwner <= some hasPet.top\nhasWingedPet <= hasPet\nPetOwner <= some hasWingedPet.top\n";
const char* kPetABox = "PetOwner(linda)\nhasWingedPet(linda,blu)\nBird(blu)\n";

AtomSet austere(Kb& k, int depth = 16) {
    auto sat = k.sat();
    auto comp = complete_abox(sat, k.a, k.v.num_individuals());
    return atoms_of(build_can(sat, comp, depth));
}

// Plain brute force: every map of blank nodes into the domain, individuals fixed.
bool brute_hom(const AtomSet& a, const AtomSet& b) {
    std::vector<int> blanks;
    for (std::size_t x = 0; x < a.size(); ++x)
        if (a.is_blank(static_cast<int>(x))) blanks.push_back(static_cast<int>(x));
    std::vector<int> map(a.size(), -1);
    for (std::size_t x = 0; x < a.size(); ++x)
        if (!a.is_blank(static_cast<int>(x))) {
            auto y = b.node_of_individual(a.individual(static_cast<int>(x)));
            if (!y) return false;
            map[x] = *y;
        }
    std::size_t combos = 1;
    for (std::size_t i = 0; i < blanks.size(); ++i) combos *= b.size();
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t c = code;
        for (int x : blanks) {
            map[x] = static_cast<int>(c % b.size());
            c /= b.size();
        }
        bool ok = true;
        for (std::size_t x = 0; x < a.size() && ok; ++x) {
            if (!a.label(static_cast<int>(x)).is_subset_of(b.label(map[x]))) ok = false;
            for (auto& [y, roles] : a.neighbours(static_cast<int>(x)))
                if (!roles.is_subset_of(b.roles_between(map[x], map[y]))) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("one oblivious step") {
    Kb k("A <= some r.A\n", "A(a)\n");
    AtomSet start = atoms_of(k.a, k.v);
    AtomSet next = fire_axioms(k.t, start);
    CHECK(next.size() == 2);
    CHECK(sorted(next.dump(k.v)) == sorted({"A(a)", "A(_:b1)", "r(a,_:b1)"}));

    Kb done("A <= some r.B\n", "A(a)\nr(a,b)\nB(b)\n");
    AtomSet s = atoms_of(done.a, done.v);
    ChaseState st;
    CHECK(fire_axioms(done.t, s, st) == s);
}

TEST_CASE("oblivious chase of the pet owner") {
    Kb k(kPetTBox, kPetABox);
    auto res = run_chase(k.t, atoms_of(k.a, k.v), ChaseVariant::Oblivious, 10);
    CHECK(res.terminated);
    CHECK(res.atoms.size() == 4);
    auto atoms = res.atoms.dump(k.v);
    int has_pet = 0, winged = 0;
    for (auto& a : atoms) {
        has_pet += a.rfind("hasPet(linda,", 0) == 0;
        winged += a.rfind("hasWingedPet(linda,", 0) == 0;
    }
    CHECK(has_pet == 3);
    CHECK(winged == 2);
}

TEST_CASE("core of the oblivious pet model is the austere model") {
    Kb k(kPetTBox, kPetABox);
    AtomSet x = run_chase(k.t, atoms_of(k.a, k.v), ChaseVariant::Oblivious, 10).atoms;
    AtomSet can = austere(k);
    AtomSet core = core_of(x);
    CHECK(core.size() == 2);
    CHECK(is_isomorphic(core, can));
    CHECK(is_isomorphic(core_of(can), can));
    CHECK(is_isomorphic(x, x));
    CHECK_FALSE(is_isomorphic(x, can));

    auto endo_can = enumerate_endomorphisms(can);
    REQUIRE(endo_can.size() == 1);
    CHECK(endo_can[0].isomorphism());

    auto endo_x = enumerate_endomorphisms(x);
    int blu = *x.node_of_individual(k.i("blu"));
    bool collapse = std::any_of(endo_x.begin(), endo_x.end(), [&](const Homomorphism& h) {
        int onto_blu = 0;
        for (std::size_t n = 0; n < x.size(); ++n)
            if (x.is_blank(static_cast<int>(n)) && h.map[n] == blu) ++onto_blu;
        return onto_blu == 2;
    });
    CHECK(collapse);

    AtomSet single(0, 0);
    single.add_blank();
    auto e = enumerate_endomorphisms(single);
    REQUIRE(e.size() == 1);
    CHECK(e[0].isomorphism());
}

TEST_CASE("one atom apart is not isomorphic") {
    Kb k("", "A(a)\nr(a,b)\n");
    AtomSet x = atoms_of(k.a, k.v);
    AtomSet y = x;
    y.add_concept(*y.node_of_individual(k.i("b")), k.c("A"));
    CHECK_FALSE(is_isomorphic(x, y));
}

TEST_CASE("core chase") {
    Kb chain("A <= some r.A\n", "A(a)\n");
    CHECK_THROWS_AS(run_core_chase(chain.t, atoms_of(chain.a, chain.v), 5), NotTerminated);

    Kb empty("", "A(a)\nr(a,b)\n");
    auto res = run_core_chase(empty.t, atoms_of(empty.a, empty.v), 5);
    CHECK(res.rounds <= 1);
    CHECK(res.atoms == atoms_of(empty.a, empty.v));

    Kb pets(kPetTBox, kPetABox);
    auto pc = run_core_chase(pets.t, atoms_of(pets.a, pets.v), 10);
    CHECK(is_isomorphic(pc.atoms, austere(pets)));
}

TEST_CASE("cores are homomorphic retracts") {
    Rng rng(3);
    for (int n = 0; n < 60; ++n) {
        std::size_t nodes = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        AtomSet x(2, 2);
        x.add_named(0);
        for (std::size_t i = 1; i < nodes; ++i) x.add_blank();
        for (std::size_t i = 0; i < nodes; ++i)
            if (std::bernoulli_distribution(0.4)(rng)) x.add_concept(static_cast<int>(i), 0);
        for (int e = 0; e < 6; ++e) {
            int a = std::uniform_int_distribution<int>(0, static_cast<int>(nodes) - 1)(rng);
            int b = std::uniform_int_distribution<int>(0, static_cast<int>(nodes) - 1)(rng);
            x.add_role(Role{0, false}, a, b);
        }
        AtomSet c = core_of(x);
        CHECK(is_core(c));
        CHECK(c.size() <= x.size());
        CHECK(brute_hom(x, c));
        CHECK(brute_hom(c, x));
        // a core admits no proper retraction, checked independently of enumerate_endomorphisms
        for (std::size_t drop = 0; drop < c.size(); ++drop) {
            if (!c.is_blank(static_cast<int>(drop))) continue;
            std::vector<bool> keep(c.size(), true);
            keep[drop] = false;
            CHECK_FALSE(brute_hom(c, c.restrict_to(keep)));
        }
    }
}

TEST_CASE("random finite canonical models are cores") {
    Rng rng(17);
    KbParams p;
    int seen = 0;
    for (int n = 0; n < 30; ++n) {
        auto fk = random_finite_kb(rng, p, 8, 10);
        if (!fk) continue;
        auto& kb = fk->kb;
        auto sat = saturate(kb.t, kb.v);
        auto comp = complete_abox(sat, kb.a, kb.v.num_individuals());
        AtomSet can = atoms_of(build_can(sat, comp, 8));
        for (auto& h : enumerate_endomorphisms(can, 10)) CHECK(h.isomorphism());
        auto ob = run_chase(kb.t, atoms_of(kb.a, kb.v), ChaseVariant::Oblivious, 8, 64);
        if (ob.terminated && ob.atoms.size() <= 10) CHECK(is_isomorphic(core_of(ob.atoms, 10), can, 10));
        ++seen;
    }
    CHECK(seen > 20);
}
