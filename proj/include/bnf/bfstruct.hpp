#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bnf/catalog.hpp"

namespace bnf {

struct TypeRep {
    int structure = 0;
    Tuple tuple;

    bool operator==(const TypeRep&) const = default;
};

// The n-back-and-forth structure of a class fragment, materialized up to an
// arity bound. Level beta carries types of arity up to
// arity_bound + (levels - beta) * extension_bound, so that every ext target of
// a stored type is stored as well.
struct BfStructure {
    int levels = 0;
    int arity_bound = 0;
    std::string class_spec;

    std::map<std::pair<int, int>, std::vector<TypeRep>> types; // (level, arity) -> types by id
    std::set<std::pair<TypeRef, TypeRef>> leq;                  // a <= b at their common level
    std::map<std::pair<TypeRef, int>, TypeRef> proj;            // (sigma, beta) -> (sigma)_beta, beta < level
    std::map<std::pair<TypeRef, std::vector<int>>, TypeRef> perm; // pi_iota on arities <= arity_bound
    std::map<TypeRef, std::set<TypeRef>> ext;                   // sigma -> union of ext_beta(sigma), beta < level
    std::map<TypeRef, std::string> diag;                        // level-0 type -> diagram string

    bool contains(const TypeRef& t) const;
    int count(int level, int arity) const;
    int max_arity(int level) const;
    std::vector<TypeRef> all_types() const;
    std::vector<TypeRef> ext_at(const TypeRef& sigma, int beta) const;
    bool leq_holds(const TypeRef& a, const TypeRef& b) const { return leq.count({a, b}) > 0; }

    bool operator==(const BfStructure&) const = default;
};

BfStructure assemble(TypeCatalog& catalog, int levels, int arity_bound);
BfStructure assemble(const ClassSpec& spec, int levels, int arity_bound);

std::string serialize(const BfStructure& b);
BfStructure deserialize(const std::string& text);
BfStructure load_bfstruct(const std::string& path);
void save_bfstruct(const BfStructure& b, const std::string& path);

// Every index map iota in {1..l}^j with j <= l, in the stored order.
std::vector<std::vector<int>> index_maps(int l);
std::string format_iota(const std::vector<int>& iota);
std::vector<int> parse_iota(const std::string& text);

struct VerificationReport {
    bool pass = false;
    int level = -1;          // failing level, -1 when passing or failing before any level
    std::string witness;     // first failure in canonical order
    std::map<TypeRef, TypeRef> correspondence; // candidate -> reference
};

// Level-by-level verification of a candidate against the class fragment.
VerificationReport verify(const BfStructure& candidate, TypeCatalog& catalog, int levels);
VerificationReport verify(const BfStructure& candidate, const ClassSpec& spec, int levels);

} // namespace bnf
