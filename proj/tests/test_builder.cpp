#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bnf/builder.hpp"
#include "bnf/error.hpp"

using namespace bnf;

namespace {

Theory one_sentence(const std::string& text)
{
    Theory t;
    t.add(parse_formula(text), "");
    return t;
}

Theory dense_order()
{
    Theory t = class_axioms(ClassKind::LinearOrders);
    t.add(parse_formula("(forall (x1 x2) (implies (atom < x1 x2) (exists (x3) (and (atom < x1 x3) (atom < x3 x2)))))"),
          "dense");
    return t;
}

} // namespace

TEST_CASE("normal form")
{
    auto lo = normalize(class_axioms(ClassKind::LinearOrders));
    REQUIRE(lo.size() == 3);
    CHECK(lo[1].universal.size() == 3);
    for (const auto& n : lo)
        CHECK(within_pi(n.body, 0));

    // a biconditional splits in two; universals are pulled out of disjunctions
    auto iff = normalize(one_sentence("(forall (x1) (iff (atom P x1) (forall (x2) (atom R x1 x2))))"));
    REQUIRE(iff.size() == 2);
    CHECK(iff[0].universal.size() == 2);
    CHECK(iff[1].universal.size() == 1);
    CHECK(classify(iff[1].body).kind != RankKind::Pi);

    auto nomax = normalize(no_max_order_axioms());
    CHECK(nomax.back().universal.size() == 1);
    CHECK(classify(nomax.back().body).str() == "Sigma1");

    CHECK_THROWS_AS(normalize(one_sentence("(exists (x1) (forall (x2) (atom < x1 x2)))")), DomainError);
    CHECK(normalize(one_sentence("true")).empty());
    CHECK(to_text(negation_normal_form(parse_formula("(not (and (atom P x1) (not (= x1 x2))))"))) ==
          to_text(parse_formula("(or (not (atom P x1)) (= x1 x2))")));
}

TEST_CASE("linear order axioms over finite orders")
{
    Theory lo = class_axioms(ClassKind::LinearOrders);
    auto orders = enumerate_class(ClassSpec::parse("linord:4"));
    DiagramChain c = henkin_build(lo, orders, BuildBudget{}, 2);
    CHECK(c.status == BuildStatus::AllHandled);
    CHECK(c.stages.size() == 1);
    ChainAudit a = check_chain(c, lo);
    CHECK(a.ok());
    CHECK(a.unhandled.empty());
    CHECK(a.requirements > 0);
}

TEST_CASE("no greatest element")
{
    Theory t = no_max_order_axioms();
    auto orders = enumerate_class(ClassSpec::parse("linord:64"));
    BuildBudget b;
    b.max_stages = 50;
    DiagramChain c = henkin_build(t, orders, b);
    CHECK(dump_chain(c) == dump_chain(henkin_build(t, orders, b)));
    CHECK(c.status == BuildStatus::StageBudget);
    REQUIRE(c.stages.size() == 51);
    for (size_t s = 1; s < c.stages.size(); ++s)
        CHECK(c.stages[s].structure.size() > c.stages[s - 1].structure.size());
    // every element that was there one stage before the end has a successor
    const Structure& fin = c.final_structure();
    const int lt = fin.signature().find("<");
    for (int x = 0; x < c.stages[c.stages.size() - 2].structure.size(); ++x) {
        bool succ = false;
        for (int y = 0; y < fin.size(); ++y)
            succ = succ || fin.holds(lt, Tuple{x, y});
        CHECK(succ);
    }
    ChainAudit a = check_chain(c, t);
    CHECK(a.ok());
    CHECK(a.unhandled.size() == 1); // the last element

    BuildBudget one;
    one.max_stages = 1;
    DiagramChain short_chain = henkin_build(t, orders, one);
    CHECK(short_chain.status == BuildStatus::StageBudget);
    CHECK_FALSE(check_chain(short_chain, t).unhandled.empty());

    BuildBudget small;
    small.max_domain = 5;
    CHECK(henkin_build(t, orders, small).status == BuildStatus::DomainBudget);
}

TEST_CASE("density over discrete orders exhausts the list")
{
    Theory t = dense_order();
    auto orders = enumerate_class(ClassSpec::parse("linord:5"));
    DiagramChain c = henkin_build(t, orders, BuildBudget{}, 1);
    CHECK(c.status == BuildStatus::Exhausted);
    REQUIRE(c.pending);
    CHECK(normalize(t)[static_cast<size_t>(c.pending->axiom)].source == 3);
    CHECK(c.pending->tuple == Tuple{0, 1});
}

TEST_CASE("chain files")
{
    Theory t = no_max_order_axioms();
    auto orders = enumerate_class(ClassSpec::parse("linord:8"));
    BuildBudget b;
    b.max_stages = 4;
    DiagramChain c = henkin_build(t, orders, b);
    const std::string text = dump_chain(c);
    CHECK(dump_chain(parse_chain(text)) == text);
    CHECK_THROWS_AS(parse_chain("chain v2\n"), ParseError);
    CHECK_THROWS_AS(parse_chain("chain v1\nstatus odd\n"), ParseError);
    CHECK_THROWS_AS(parse_chain("chain v1\nstage 0 witness 0\nsize 1\n"), ParseError);
    CHECK_THROWS_AS(parse_chain("chain v1\n"), ParseError);

    // shrink one table in the middle: the next stage no longer extends it
    DiagramChain edited = c;
    Structure& mid = edited.stages[2].structure;
    mid.set(0, Tuple{0, 1}, false);
    ChainAudit a = check_chain(edited, t);
    CHECK_FALSE(a.ok());
    bool reported = false;
    for (const auto& v : a.violations)
        reported = reported || v.find("does not extend") != std::string::npos;
    CHECK(reported);
}

TEST_CASE("prescribed quantifier-free type")
{
    auto ctx = std::make_shared<BfContext>(assemble(ClassSpec::parse("linord:3"), 0, 2));
    const Signature& sig = ctx->signature();
    for (int id = 0; id < ctx->bfs().count(0, 2); ++id) {
        TypeRef s{0, 2, id};
        TypedBuild r = build_with_type(*ctx, s, BuildBudget{});
        CHECK(r.chain.status == BuildStatus::AllHandled);
        CHECK(r.structure.signature() == sig);
        CHECK(atomic_diagram(r.structure, r.tuple) == atomic_diagram(ctx->rep_structure(s), ctx->rep_tuple(s)));
    }
}

TEST_CASE("prescribed types at level two")
{
    auto ctx = std::make_shared<BfContext>(assemble(ClassSpec::parse("linord:3"), 2, 3));
    for (int k = 0; k <= 1; ++k)
        for (int id = 0; id < ctx->bfs().count(2, k); ++id) {
            TypeRef s{2, k, id};
            TypedBuild r = build_with_type(*ctx, s, BuildBudget{}, 1);
            CHECK(r.chain.status == BuildStatus::AllHandled);
            CHECK(ctx->engine().compare(ctx->rep_structure(s), ctx->rep_tuple(s), r.structure, r.tuple, 2) ==
                  Comparison::Equiv);
            // what the extended tables claim holds of the output
            const Structure& ext = r.chain.final_structure();
            TableModel m(ext);
            for (const TypeRef& p : mentioned_predicates(t_alpha_sigma(*ctx, s, 1)))
                for_each_tuple(ext.size(), p.arity, [&](const Tuple& t) {
                    if (m.predicate(p, t))
                        CHECK(ctx->below(p, r.structure, t));
                });
            ChainAudit a = check_chain(r.chain, t_alpha_sigma(*ctx, s, 1));
            CHECK(a.ok());
            CHECK(a.unhandled.empty());
        }
}

TEST_CASE("prescribed types need room")
{
    auto ctx = std::make_shared<BfContext>(assemble(ClassSpec::parse("linord:3"), 1, 3));
    TypeRef three{};
    for (int id = 0; id < ctx->bfs().count(1, 0); ++id)
        if (ctx->rep_structure({1, 0, id}).size() == 3)
            three = {1, 0, id};
    BuildBudget tiny;
    tiny.max_domain = 2;
    TypedBuild r = build_with_type(*ctx, three, tiny, 0);
    CHECK(r.chain.status == BuildStatus::DomainBudget);
    CHECK_FALSE(r.chain.stages.empty());
}
