#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shapeval/random.hpp"
#include "test_util.hpp"

using namespace shapeval;
using namespace shapeval::testing;

namespace {

template <class F>
ParseError parse_error(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error");
    throw;
}

}  // namespace

TEST_CASE("tbox round trip") {
    const char* text =
        "A <= some ^r.B\nr <= ^s\nA & B <= bot\ntop <= A\nA <= max1 r.B\nA <= only r.B\nB <= some r.top\n";
    Vocabulary v;
    TBox t = parse_tbox(text, v);
    CHECK(t.axioms.size() == 7);
    CHECK(t.has_at_most());
    CHECK(format_tbox(t, v) == text);
    Vocabulary w;
    CHECK(format_tbox(parse_tbox(format_tbox(t, v), w), w) == text);
}

TEST_CASE("tbox normal form is enforced") {
    Vocabulary v;
    auto e = parse_error([&] { parse_tbox("A <= some r.(B & C)\n", v); });
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("normal form") != std::string::npos);
    CHECK_THROWS_AS(parse_tbox("A <= B & C\n", v), ParseError);
    CHECK_THROWS_AS(parse_tbox("A & B <= some r.C\n", v), ParseError);
    CHECK_THROWS_AS(parse_tbox("A <= some r.bot\n", v), ParseError);
}

TEST_CASE("errors carry positions") {
    Vocabulary v;
    auto e = parse_error([&] { parse_tbox("A <= B\nA &&\n", v, "t.tbox"); });
    CHECK(e.line() == 2);
    CHECK(e.column() == 4);
    CHECK(std::string(e.what()).starts_with("t.tbox:2:4:"));

    auto a = parse_error([&] { parse_abox("A(a)\nr(a b)\n", v); });
    CHECK(a.line() == 2);
    CHECK(a.column() == 5);

    auto s = parse_error([&] { parse_shapes("$~x <- A\n", v); });
    CHECK(std::string(s.what()).find("reserved") != std::string::npos);
    CHECK_NOTHROW(parse_shapes("$~x <- A\n", v, "<shacl>", true));
}

TEST_CASE("abox and targets round trip") {
    Vocabulary v;
    ABox a = parse_abox("A(a)\nr(a,b)\nB(b)\n", v);
    CHECK(sorted({format_abox(a, v)}) == sorted({"A(a)\nB(b)\nr(a,b)\n"}));
    auto ts = parse_targets("$s(@a)\n$t(@b)\n", v);
    CHECK(format_targets(ts, v) == "$s(@a)\n$t(@b)\n");
}

TEST_CASE("shapes round trip") {
    Vocabulary v;
    auto sg = parse_shapes(
        "$s <- some <r/(t|^r)*>.!$t | @c & eq(<r>,<t>)\n$t <- disj(<r>,<t>) & A\n"
        "%b <- r & (t / inv(%b)) | $s? \\ t*\n$u <- some {%b}.$s\n",
        v);
    CHECK(sg.constraints.size() == 3);
    CHECK(sg.binary.size() == 1);
    std::string once = format_shapes(sg, v);
    Vocabulary w;
    auto again = parse_shapes(once, w);
    CHECK(format_shapes(again, w) == once);
    for (std::size_t i = 0; i < sg.constraints.size(); ++i) CHECK(same_expr(*sg.constraints[i].body, *again.constraints[i].body));
}

TEST_CASE("random round trips") {
    Rng rng(5);
    for (int n = 0; n < 100; ++n) {
        KbParams p;
        p.bottom = true;
        auto kb = random_kb(rng, p);
        std::string t = format_tbox(kb.t, kb.v);
        Vocabulary w = kb.v;
        CHECK(format_tbox(parse_tbox(t, w), w) == t);

        Vocabulary x = kb.v;
        auto sg = random_shapes_graph(rng, x, GraphParams{});
        std::string s = format_shapes(sg, x);
        Vocabulary y = x;
        CHECK(format_shapes(parse_shapes(s, y), y) == s);

        auto ns = random_normal_shapes(rng, x, ConstraintParams{});
        std::string gs = format_shapes(ns.graph(), x);
        Vocabulary z = x;
        CHECK(format_shapes(parse_shapes(gs, z, "<shacl>", true), z) == gs);
    }
}
