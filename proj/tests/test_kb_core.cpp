#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace shapeval;
using namespace shapeval::testing;

TEST_CASE("role inversion is an involution") {
    Role p{3, false};
    CHECK(invert_role(p) == Role{3, true});
    CHECK(invert_role(Role{3, true}) == p);
    CHECK(invert_role(invert_role(p)) == p);
    CHECK(Role::from_index(p.index()) == p);
    CHECK(Role::from_index(invert_role(p).index()) == invert_role(p));
}

TEST_CASE("two-type inversion") {
    Kb k("", "A(x)\nB(x)\nB0(x)\nB1(x)\nA2(x)\np(x,x)\nr1(x,x)\n");
    TwoType t{k.cs({"A"}), k.rs({"p"}), k.cs({"B"})};
    TwoType inv = invert_two_type(t);
    CHECK(inv.c1 == k.cs({"B"}));
    CHECK(inv.roles == k.rs({"^p"}));
    CHECK(inv.c2 == k.cs({"A"}));
    CHECK(format_two_type(inv, k.v) == "({B},{^p},{A})");

    TwoType empty{k.cs({}), k.rs({}), k.cs({})};
    CHECK(invert_two_type(empty) == empty);

    TwoType u{k.cs({"B0", "B1"}), k.rs({"r1"}), k.cs({"A2"})};
    CHECK(invert_two_type(invert_two_type(u)) == u);
}

TEST_CASE("abox stores base direction and answers inverse lookups") {
    Kb k("", "^p(a,b)\nq(b,c)");
    int a = k.i("a"), b = k.i("b");
    CHECK(k.a.has_role(k.r("p"), b, a));
    CHECK(k.a.has_role(invert_role(k.r("p")), a, b));
    CHECK_FALSE(k.a.has_role(k.r("p"), a, b));
    CHECK(k.a.role_atoms.count({k.r("p").name, b, a}) == 1);
}

TEST_CASE("interpretation inverse edges") {
    Kb k("", "p(a,b)\nA(a)");
    Interpretation in = interpretation_of(k.a, k.v);
    int a = *in.node_of_individual(k.i("a")), b = *in.node_of_individual(k.i("b"));
    CHECK(in.has_edge(k.r("p"), a, b));
    CHECK(in.has_edge(invert_role(k.r("p")), b, a));
    CHECK_FALSE(in.has_edge(k.r("p"), b, a));
    CHECK(in.has_concept(a, k.c("A")));
    CHECK(in.has_concept(b, kTop));
    CHECK(in.dump(k.v) == std::vector<std::string>{"A(a)", "p(a,b)"});
}

TEST_CASE("type equality is set based") {
    Kb k("", "");
    OneHalfType x{k.rs({"r0", "r1"}), k.cs({"A0", "A1"})};
    OneHalfType y{k.rs({"r1", "r0"}), k.cs({"A1", "A0"})};
    CHECK(x == y);
    CHECK(format_one_half_type(x, k.v) == format_one_half_type(y, k.v));
}
