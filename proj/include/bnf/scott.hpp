#pragma once

#include <vector>

#include "bnf/engine.hpp"

namespace bnf {

struct TupleRank {
    Tuple tuple;
    int rho = 0;
};

struct ScottRankReport {
    int sr = 0;
    Tuple max_tuple;               // first tuple (in enumeration order) reaching sr
    std::vector<TupleRank> per_tuple; // by length, then lexicographic
};

// Least n such that every same-length tuple of A that is >=_n a lies in the
// automorphism orbit of a.
int rho(BfEngine& engine, const Structure& a, TupleView tuple);

// SR(A) = max(rho(a) + 1) over tuples of length <= length_bound (default |A|).
ScottRankReport scott_rank(BfEngine& engine, const Structure& a, int length_bound = -1);

} // namespace bnf
