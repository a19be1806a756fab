#pragma once

// Single-point corruptions of an assembled bf-structure, used to check that
// verification rejects them.

#include <optional>

#include "bnf/bfstruct.hpp"

namespace mutate {

using bnf::BfStructure;
using bnf::TypeRef;

// Removes the first ext edge (in canonical order) of the first type at `level`.
inline std::optional<BfStructure> drop_ext_edge(BfStructure b, int level)
{
    for (auto& [sigma, taus] : b.ext)
        if (sigma.level == level && !taus.empty()) {
            taus.erase(taus.begin());
            return b;
        }
    return std::nullopt;
}

// Merges type `drop` into type `keep` (same level and arity) and renumbers.
inline std::optional<BfStructure> merge_types(const BfStructure& b, int level, int arity, int keep, int drop)
{
    if (b.count(level, arity) <= std::max(keep, drop) || keep == drop)
        return std::nullopt;
    auto rename = [&](const TypeRef& t) {
        if (t.level != level || t.arity != arity)
            return t;
        int id = t.id == drop ? keep : t.id;
        return TypeRef{level, arity, id > drop ? id - 1 : id};
    };
    BfStructure out = b;
    auto& reps = out.types[{level, arity}];
    reps.erase(reps.begin() + drop);
    out.leq.clear();
    for (const auto& [x, y] : b.leq)
        out.leq.insert({rename(x), rename(y)});
    out.proj.clear();
    for (const auto& [key, to] : b.proj)
        out.proj[{rename(key.first), key.second}] = rename(to);
    out.perm.clear();
    for (const auto& [key, to] : b.perm)
        out.perm[{rename(key.first), key.second}] = rename(to);
    out.ext.clear();
    for (const auto& [sigma, taus] : b.ext)
        for (const TypeRef& t : taus)
            out.ext[rename(sigma)].insert(rename(t));
    out.diag.clear();
    for (const auto& [t, d] : b.diag)
        out.diag.emplace(rename(t), d);
    return out;
}

// Points the first projection whose target level has an alternative at a
// different type of that level and arity.
inline std::optional<BfStructure> corrupt_projection(BfStructure b)
{
    for (auto& [key, to] : b.proj)
        if (b.count(to.level, to.arity) > 1) {
            to.id = to.id == 0 ? 1 : 0;
            return b;
        }
    return std::nullopt;
}

} // namespace mutate
