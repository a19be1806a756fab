#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bnf/bfstruct.hpp"
#include "bnf/error.hpp"
#include "support/mutations.hpp"

using namespace bnf;

TEST_CASE("assembled linear orders")
{
    BfStructure b = assemble(ClassSpec::parse("linord:3"), 1, 1);
    CHECK(b.count(0, 0) == 1);
    CHECK(b.count(1, 0) == 3);
    CHECK(b.max_arity(1) == 1);
    CHECK(b.max_arity(0) == 4);
    CHECK(b.diag.size() == static_cast<size_t>(b.count(0, 0) + b.count(0, 1) + b.count(0, 2) + b.count(0, 3) +
                                               b.count(0, 4)));
    // projections of every level-1 type of arity 0 land on the single empty 0-type
    for (int i = 0; i < 3; ++i)
        CHECK(b.proj.at({TypeRef{1, 0, i}, 0}) == TypeRef{0, 0, 0});

    BfStructure zero = assemble(ClassSpec::parse("equiv:2"), 0, 2);
    CHECK(zero.ext.empty());
    CHECK(zero.proj.empty());
    CHECK_FALSE(zero.diag.empty());
}

TEST_CASE("stored orders satisfy the ext characterization")
{
    BfStructure b = assemble(ClassSpec::parse("equiv:3"), 2, 1);
    for (const auto& [key, reps] : b.types) {
        const int level = key.first;
        if (level == 0)
            continue;
        for (int i = 0; i < static_cast<int>(reps.size()); ++i)
            for (int j = 0; j < static_cast<int>(reps.size()); ++j) {
                TypeRef s{level, key.second, i}, t{level, key.second, j};
                bool contained = true;
                for (int beta = 0; beta < level; ++beta) {
                    auto es = b.ext_at(s, beta), et = b.ext_at(t, beta);
                    contained = contained && std::includes(es.begin(), es.end(), et.begin(), et.end());
                }
                CHECK(b.leq_holds(s, t) == contained);
            }
    }
}

TEST_CASE("serialization round trip and determinism")
{
    BfStructure a = assemble(ClassSpec::parse("linord:3"), 1, 1);
    BfStructure b = assemble(ClassSpec::parse("linord:3"), 1, 1);
    const std::string text = serialize(a);
    CHECK(text == serialize(b));
    BfStructure back = deserialize(text);
    CHECK(back == a);
    CHECK(serialize(back) == text);
}

TEST_CASE("deserialization errors")
{
    CHECK_THROWS_AS(deserialize("bfstruct v2\n"), ParseError);
    CHECK_THROWS_AS(deserialize("bfstruct v1\nlevels 0\naritybound 0\nclass linord:1\n"
                                "type 0 0 0 rep 0 -\nleq 0 0 0 1\n"),
                    ParseError);
    CHECK_THROWS_AS(deserialize("bfstruct v1\ntype 0 0 1 rep 0 -\n"), ParseError);
    CHECK_THROWS_AS(deserialize("bfstruct v1\ntype 0 1 0 rep 0 -\n"), ParseError);
    CHECK_THROWS_AS(deserialize("bfstruct v1\nfrob\n"), ParseError);
    try {
        deserialize("bfstruct v1\nlevels 1\naritybound 0\nclass linord:1\ntype 0 0 0 rep 0 -\n"
                    "type 1 0 0 rep 0 -\next 0 0.1.5 1.0.0\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
    }
}

TEST_CASE("verify accepts assembled structures")
{
    for (const char* spec : {"linord:3", "equiv:3", "graph:3"}) {
        TypeCatalog cat(ClassSpec::parse(spec));
        for (int n = 0; n <= 2; ++n) {
            VerificationReport r = verify(assemble(cat, n, 1), cat, n);
            CHECK_MESSAGE(r.pass, spec, " n=", n, ": ", r.witness);
        }
    }
}

TEST_CASE("verify rejects single mutations with a witness")
{
    TypeCatalog cat(ClassSpec::parse("linord:3"));
    BfStructure good = assemble(cat, 2, 1);

    auto dropped = mutate::drop_ext_edge(good, 1);
    REQUIRE(dropped);
    VerificationReport r1 = verify(*dropped, cat, 2);
    CHECK_FALSE(r1.pass);
    CHECK(r1.level == 1);
    CHECK_FALSE(r1.witness.empty());

    auto merged = mutate::merge_types(good, 1, 0, 0, 1);
    REQUIRE(merged);
    VerificationReport r2 = verify(*merged, cat, 2);
    CHECK_FALSE(r2.pass);
    CHECK(r2.level == 1);

    auto corrupted = mutate::corrupt_projection(good);
    REQUIRE(corrupted);
    VerificationReport r3 = verify(*corrupted, cat, 2);
    CHECK_FALSE(r3.pass);
    CHECK(r3.witness.find("projection") != std::string::npos);

    VerificationReport wrong_levels = verify(good, cat, 1);
    CHECK_FALSE(wrong_levels.pass);
}

TEST_CASE("index maps")
{
    auto maps = index_maps(2);
    CHECK(maps.size() == 1 + 2 + 4);
    CHECK(format_iota({}) == "-");
    CHECK(parse_iota("2,1") == std::vector<int>{2, 1});
    CHECK_THROWS_AS(parse_iota("0"), ParseError);
}
