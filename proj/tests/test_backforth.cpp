#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "bnf/catalog.hpp"
#include "bnf/error.hpp"
#include "bnf/scott.hpp"
#include "support/oracles.hpp"

using namespace bnf;

TEST_CASE("leq on small linear orders")
{
    BfEngine e;
    Structure lo1 = linear_order(1), lo2 = linear_order(2);
    Tuple none;
    Tuple t01{0, 1};
    CHECK(e.leq(lo2, t01, lo2, t01, 0));
    CHECK(e.leq(lo2, t01, lo2, t01, 3));
    CHECK(e.leq(lo2, none, lo1, none, 1));
    CHECK_FALSE(e.leq(lo1, none, lo2, none, 1));
    CHECK(e.compare(lo1, none, lo2, none, 1) == Comparison::GeqOnly);
    Tuple a{0}, b{1};
    CHECK(e.compare(lo2, a, lo2, b, 1) == Comparison::Incomparable);
    CHECK(e.compare(lo2, a, lo2, b, 0) == Comparison::Equiv);
}

TEST_CASE("leq rejects mismatched inputs")
{
    BfEngine e;
    Structure lo2 = linear_order(2);
    Tuple a{0}, b{0, 1};
    CHECK_THROWS_AS(e.leq(lo2, a, lo2, b, 1), DomainError);
    Structure eq = equivalence_structure({2});
    CHECK_THROWS_AS(e.leq(lo2, a, eq, a, 1), DomainError);
    Tuple bad{5};
    CHECK_THROWS_AS(e.leq(lo2, bad, lo2, bad, 1), DomainError);
}

TEST_CASE("level 0 agrees with atomic diagrams")
{
    BfEngine e;
    for (const auto& a : enumerate_class(ClassSpec::parse("equiv:3")))
        for (const auto& b : enumerate_class(ClassSpec::parse("equiv:3")))
            for_each_tuple(a.size(), 2, [&](const Tuple& ta) {
                for_each_tuple(b.size(), 2, [&](const Tuple& tb) {
                    bool same = atomic_diagram(a, ta).bits == atomic_diagram(b, tb).bits;
                    CHECK(e.leq(a, ta, b, tb, 0) == same);
                });
            });
}

TEST_CASE("injective extensions agree with unrestricted extensions")
{
    BfEngine e;
    auto members = enumerate_class(ClassSpec::parse("linord:3"));
    auto eq = enumerate_class(ClassSpec::parse("equiv:2"));
    members.insert(members.end(), eq.begin(), eq.end());
    for (const auto& a : members)
        for (const auto& b : members) {
            if (!(a.signature() == b.signature()))
                continue;
            for (int k = 0; k <= 1; ++k)
                for_each_tuple(a.size(), k, [&](const Tuple& ta) {
                    for_each_tuple(b.size(), k, [&](const Tuple& tb) {
                        for (int n = 1; n <= 2; ++n)
                            CHECK(e.leq(a, ta, b, tb, n) == oracle::unrestricted_leq(a, ta, b, tb, n, 3));
                    });
                });
        }
}

TEST_CASE("class counts")
{
    TypeCatalog lo(ClassSpec::parse("linord:3"));
    CHECK(lo.count_classes(1, 0) == 3);
    CHECK(lo.count_classes(0, 0) == 1);
    TypeCatalog eq(ClassSpec::parse("equiv:2"));
    CHECK(eq.count_classes(0, 2) == 3);
    CHECK(eq.count_classes(0, 0) == 1);
    CHECK_THROWS_AS(types_at_level(lo, 1, 2, 1), DomainError);
}

TEST_CASE("quotient order is a partial order and representatives are least")
{
    TypeCatalog lo(ClassSpec::parse("linord:3"));
    for (int n = 0; n <= 2; ++n)
        for (int k = 0; k <= 2; ++k) {
            const BfLevel& lvl = lo.level(n, k);
            for (int i = 0; i < lvl.size(); ++i) {
                CHECK(lvl.leq(i, i));
                for (int j = 0; j < lvl.size(); ++j) {
                    if (i != j)
                        CHECK_FALSE((lvl.leq(i, j) && lvl.leq(j, i)));
                    for (int m = 0; m < lvl.size(); ++m)
                        if (lvl.leq(i, j) && lvl.leq(j, m))
                            CHECK(lvl.leq(i, m));
                }
            }
            // the first pair in enumeration order carrying each id is its representative
            std::vector<int> first(static_cast<size_t>(lvl.size()), -1);
            for (size_t p = 0; p < lvl.assignment.size(); ++p)
                if (first[static_cast<size_t>(lvl.assignment[p])] < 0)
                    first[static_cast<size_t>(lvl.assignment[p])] = static_cast<int>(p);
            for (int i = 1; i < lvl.size(); ++i)
                CHECK(first[static_cast<size_t>(i - 1)] < first[static_cast<size_t>(i)]);
        }
}

TEST_CASE("projection, permutation and ext sets")
{
    TypeCatalog lo(ClassSpec::parse("linord:3"));
    Tuple t01{0, 1};
    TypeRef sigma = lo.ref_of(2, 1, t01);
    CHECK(lo.project(sigma, 2) == sigma);
    TypeRef s0 = lo.project(sigma, 0);
    CHECK(atomic_diagram(lo.members()[static_cast<size_t>(lo.type(s0).rep_struct)], lo.type(s0).rep_tuple).bits ==
          atomic_diagram(linear_order(2), t01).bits);
    CHECK(lo.project(lo.project(sigma, 1), 0) == s0);
    CHECK_THROWS_AS(lo.project(s0, 1), DomainError);

    int id[] = {1, 2}, swap[] = {2, 1}, head[] = {1};
    CHECK(lo.permute(sigma, id) == sigma);
    Tuple t10{1, 0};
    CHECK(lo.permute(s0, swap) == lo.ref_of(0, 1, t10));
    CHECK(lo.permute(sigma, head) == lo.ref_of(2, 1, Tuple{0}));
    int bad[] = {3};
    CHECK_THROWS_AS(lo.permute(sigma, bad), DomainError);

    // composition: permute(permute(s, i), k) = permute(s, i o k)
    TypeRef s3 = lo.ref_of(1, 2, Tuple{0, 1, 2});
    std::vector<std::vector<int>> maps{{3, 1}, {2, 2, 1}, {1}, {2, 3, 1}};
    for (const auto& i : maps)
        for (const auto& k : maps) {
            if (std::any_of(k.begin(), k.end(), [&](int x) { return x > static_cast<int>(i.size()); }))
                continue;
            std::vector<int> comp;
            for (int x : k)
                comp.push_back(i[static_cast<size_t>(x - 1)]);
            CHECK(lo.permute(lo.permute(s3, i), k) == lo.permute(s3, comp));
        }

    TypeRef one = lo.ref_of(1, 0, Tuple{});
    TypeRef two = lo.ref_of(1, 1, Tuple{});
    auto e1 = lo.ext_set(one, 0), e2 = lo.ext_set(two, 0);
    CHECK(std::includes(e2.begin(), e2.end(), e1.begin(), e1.end()));
    CHECK(e2.size() > e1.size());
    for (const TypeRef& t : e1) {
        const BfType& bt = lo.type(t);
        for (size_t i = 1; i < bt.rep_tuple.size(); ++i)
            CHECK(bt.rep_tuple[i] == bt.rep_tuple[0]);
    }
    CHECK_THROWS_AS(lo.ext_set(one, 1), DomainError);
    CHECK(lo.ext_characterization_check(one, two, 1));
    CHECK(lo.ext_characterization_check(two, one, 1));
}

TEST_CASE("ext sets are downward closed")
{
    TypeCatalog eq(ClassSpec::parse("equiv:3"));
    const BfLevel& top = eq.level(2, 1);
    for (const BfType& s : top.types)
        for (int g = 0; g < 2; ++g) {
            auto ext = eq.ext_set(s.ref, g);
            for (const TypeRef& t : ext) {
                const BfLevel& lvl = eq.level(g, t.arity);
                for (int i = 0; i < lvl.size(); ++i)
                    if (lvl.leq(i, t.id))
                        CHECK(std::binary_search(ext.begin(), ext.end(), TypeRef{g, t.arity, i}));
            }
        }
}

TEST_CASE("rho and Scott rank")
{
    BfEngine e;
    Structure lo2 = linear_order(2);
    CHECK(rho(e, lo2, Tuple{0}) == 1);
    CHECK(rho(e, equivalence_structure({1}), Tuple{0}) == 0);
    CHECK(scott_rank(e, lo2).sr == 2);
    CHECK(scott_rank(e, linear_order(1)).sr == 1);
    for (int n = 1; n <= 4; ++n) {
        Structure lo = linear_order(n);
        for (int x = 0; x < n; ++x)
            CHECK(rho(e, lo, Tuple{x}) == oracle::orbit_rho(lo, Tuple{x}));
    }
}

TEST_CASE("default tuple bound matches a longer bound")
{
    BfEngine e;
    for (const auto& a : enumerate_class(ClassSpec::parse("graph:3")))
        CHECK(scott_rank(e, a).sr == scott_rank(e, a, a.size() + 1).sr);
}

TEST_CASE("node budget aborts")
{
    BfEngine e;
    e.set_node_budget(3);
    Structure lo4 = linear_order(4), lo3 = linear_order(3);
    CHECK_THROWS_AS(e.leq(lo4, Tuple{}, lo3, Tuple{}, 4), BudgetError);
}
