#include "bnf/scott.hpp"

#include <set>

#include "bnf/catalog.hpp"
#include "bnf/error.hpp"

namespace bnf {

namespace {

int rho_with(BfEngine& engine, StructId id, const Structure& a, TupleView tuple,
             const std::vector<std::vector<int>>& autos)
{
    std::set<Tuple> orbit;
    for (const auto& f : autos) {
        Tuple image;
        for (int x : tuple)
            image.push_back(f[static_cast<size_t>(x)]);
        orbit.insert(image);
    }
    // For n >= 2|A| the game already forces a partial isomorphism onto all of A.
    const int limit = 2 * a.size() + 2;
    for (int n = 0; n <= limit; ++n) {
        bool pinned = true;
        for_each_tuple(a.size(), static_cast<int>(tuple.size()), [&](const Tuple& b) {
            if (pinned && !orbit.count(b) && engine.leq(id, tuple, id, b, n))
                pinned = false;
        });
        if (pinned)
            return n;
    }
    throw Error("rho did not stabilize; back-and-forth relation is inconsistent");
}

} // namespace

int rho(BfEngine& engine, const Structure& a, TupleView tuple)
{
    check_tuple(a, tuple);
    return rho_with(engine, engine.intern(a), a, tuple, automorphisms(a));
}

ScottRankReport scott_rank(BfEngine& engine, const Structure& a, int length_bound)
{
    if (length_bound < 0)
        length_bound = a.size();
    if (length_bound < 1)
        throw DomainError("tuple length bound must be >= 1");
    const StructId id = engine.intern(a);
    const auto autos = automorphisms(a);
    ScottRankReport report;
    report.sr = -1;
    for (int len = 0; len <= length_bound; ++len) {
        for_each_tuple(a.size(), len, [&](const Tuple& t) {
            int r = rho_with(engine, id, a, t, autos);
            report.per_tuple.push_back({t, r});
            if (r + 1 > report.sr) {
                report.sr = r + 1;
                report.max_tuple = t;
            }
        });
    }
    return report;
}

} // namespace bnf
