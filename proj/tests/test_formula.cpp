#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bnf/classes.hpp"
#include "bnf/error.hpp"
#include "bnf/formula.hpp"
#include "bnf/pi_oracle.hpp"

using namespace bnf;

TEST_CASE("rank classification follows the infinitary counting")
{
    auto lt = f_atom("<", {1, 2});
    CHECK(classify(lt).kind == RankKind::DeltaAtomic);
    CHECK(classify(f_not(lt)).level == 0);
    CHECK(classify(f_and({lt, f_eq(1, 2)})).kind == RankKind::DeltaAtomic);

    auto pi1 = f_forall({1, 2}, f_bigand({lt, f_eq(1, 2)}));
    CHECK(classify(pi1) == RankClass{RankKind::Pi, 1});
    CHECK(classify(f_not(pi1)) == RankClass{RankKind::Sigma, 1});
    CHECK(classify(f_bigor({pi1, pi1})) == RankClass{RankKind::Sigma, 2});
    CHECK(classify(f_forall({3}, f_exists({4}, lt))) == RankClass{RankKind::Pi, 2});
    // a finitary conjunction does not raise the level, an infinitary one does
    CHECK(classify(f_and({lt})) == RankClass{RankKind::DeltaAtomic, 0});
    CHECK(classify(f_bigand({lt})) == RankClass{RankKind::Pi, 1});
    CHECK(classify(f_implies(pi1, pi1)) == RankClass{RankKind::Pi, 2});
    CHECK(within_pi(f_forall({1}, f_exists({2}, lt)), 2));
    CHECK_FALSE(within_pi(f_exists({1}, f_forall({2}, lt)), 1));
}

TEST_CASE("free variables")
{
    auto f = f_forall({2}, f_and({f_atom("<", {1, 2}), f_eq(2, 3)}));
    CHECK(f->free == std::vector<Var>{1, 3});
    CHECK(f_exists({1, 3}, f)->closed());
    CHECK_THROWS_AS(f_pred({1, 2, 0}, {1}), DomainError);
}

TEST_CASE("evaluation on finite structures")
{
    Structure lo1 = linear_order(1), lo2 = linear_order(2);
    auto some_lt = f_exists({1, 2}, f_atom("<", {1, 2}));
    auto all_eq = f_forall({1, 2}, f_eq(1, 2));
    StructureModel m1(lo1), m2(lo2);
    Evaluator e1(m1), e2(m2);
    CHECK(e2.eval(some_lt));
    CHECK_FALSE(e1.eval(some_lt));
    CHECK(e1.eval(all_eq));
    CHECK_FALSE(e2.eval(all_eq));
    std::vector<Var> vars{1};
    CHECK(e2.eval(f_exists({2}, f_atom("<", {1, 2})), vars, Tuple{0}));
    CHECK_FALSE(e2.eval(f_exists({2}, f_atom("<", {1, 2})), vars, Tuple{1}));
    CHECK_THROWS_AS(e2.eval(f_atom("<", {1, 2})), DomainError);
    CHECK_THROWS_AS(e2.eval(f_exists({1}, f_atom("R", {1, 1}))), DomainError);
    CHECK_THROWS_AS(e2.eval(f_exists({1}, f_pred({0, 1, 0}, {1}))), DomainError);
}

TEST_CASE("memoized and plain evaluation agree")
{
    auto phi = f_forall({1}, f_exists({2}, f_or({f_atom("E", {1, 2}), f_not(f_exists({3}, f_atom("E", {2, 3})))})));
    for (const auto& s : enumerate_class(ClassSpec::parse("equiv:4"))) {
        StructureModel m(s);
        Evaluator a(m, true), b(m, false);
        CHECK(a.eval(phi) == b.eval(phi));
    }
}

TEST_CASE("text round trip")
{
    const std::string text =
        "(forall (x1 x2) (bigand (implies (atom < x1 x2) (not (= x1 x2))) (bigor (bftype 1 2 3 x1 x2) true)))";
    auto f = parse_formula(text);
    CHECK(to_text(f) == text);
    auto g = parse_formula("(forall (x y) (or (atom < x y) (= x y) (atom < y x)))");
    CHECK(g->closed());
    CHECK(to_text(parse_formula(to_text(g))) == to_text(g));
    CHECK_THROWS_AS(parse_formula("(forall (x) (atom < x x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("(frob x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("(= x1 x2) extra"), ParseError);
}

TEST_CASE("theory text round trip")
{
    Theory t;
    t.name = "demo";
    t.constants = {1};
    t.add(f_forall({2}, f_atom("<", {1, 2})), "below-all");
    t.add(f_exists({2}, f_eq(2, 2)), "");
    CHECK_THROWS_AS(t.add(f_atom("<", {3, 3}), "bad"), DomainError);
    Theory u = parse_theory(theory_to_text(t));
    CHECK(u.name == "demo");
    CHECK(u.constants == t.constants);
    REQUIRE(u.sentences.size() == 2);
    CHECK(u.sentences[0].schema == "below-all");
    CHECK(theory_to_text(u) == theory_to_text(t));
    CHECK_THROWS_AS(parse_theory("theory x\n(atom < x1 x2)\n"), ParseError);
}

TEST_CASE("Pi-type oracle on small linear orders")
{
    Structure lo1 = linear_order(1), lo2 = linear_order(2);
    std::vector<Structure> frag{lo1, lo2};
    Tuple none;
    CHECK(pi_type_inclusion_oracle(lo2, none, lo1, none, 1, frag));
    CHECK_FALSE(pi_type_inclusion_oracle(lo1, none, lo2, none, 1, frag));
    CHECK(pi_type_inclusion_oracle(lo2, Tuple{0, 1}, lo2, Tuple{0, 1}, 2, frag));
    CHECK_FALSE(pi_type_inclusion_oracle(lo2, Tuple{0}, lo2, Tuple{1}, 1, frag));
    CHECK_FALSE(pi_type_inclusion_oracle(lo2, Tuple{0, 0}, lo2, Tuple{0, 1}, 1, frag));
    CHECK_THROWS_AS(pi_type_inclusion_oracle(lo2, none, lo1, none, 0, frag), DomainError);

    PiOracle o(frag);
    auto chi = o.characteristic(2, lo2, Tuple{}, 0);
    CHECK(within_pi(chi, 2));
    CHECK(chi->closed());
}
