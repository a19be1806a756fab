#pragma once

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "bnf/classes.hpp"
#include "bnf/engine.hpp"

namespace bnf {

// Address of a bf-type: its level, arity and dense id within that level/arity.
struct TypeRef {
    int level = 0;
    int arity = 0;
    int id = 0;

    auto operator<=>(const TypeRef&) const = default;
    std::string str() const;               // "level.arity.id"
    static TypeRef parse(const std::string& text);
};

struct BfType {
    TypeRef ref;
    int rep_struct = 0; // index into the class enumeration
    Tuple rep_tuple;    // enumeration-least member
};

// The quotient BF_{n,k} ordered by <=_n.
struct BfLevel {
    int level = 0;
    int arity = 0;
    std::vector<BfType> types;
    // Type of every (structure, tuple) pair, in enumeration order of the pairs.
    std::vector<int> assignment;
    // leq_matrix[i][j] iff types[i] <=_n types[j]. Left empty at level 0,
    // where the order is equality.
    std::vector<std::vector<std::uint8_t>> leq_matrix;

    bool leq(int i, int j) const;
    int size() const { return static_cast<int>(types.size()); }
};

// Lazily computed bf-types of an enumerated class fragment, together with the
// basic operations on them. Levels are cached; the catalog is safe to share.
class TypeCatalog {
public:
    explicit TypeCatalog(const ClassSpec& spec);
    TypeCatalog(ClassSpec spec, std::vector<Structure> members);

    const ClassSpec& spec() const { return spec_; }
    const std::vector<Structure>& members() const { return members_; }
    const Signature& signature() const;
    // Largest structure in the fragment; bounds the length of useful extensions.
    int extension_bound() const { return extension_bound_; }
    BfEngine& engine() { return *engine_; }
    StructId member_id(int index) const { return ids_[static_cast<size_t>(index)]; }

    // Abort with BudgetError when one level would hold more pairs than this.
    void set_pair_budget(size_t budget) { pair_budget_ = budget; }

    const BfLevel& level(int n, int k);
    const BfType& type(const TypeRef& t);

    int type_of(int n, int struct_index, TupleView tuple);
    TypeRef ref_of(int n, int struct_index, TupleView tuple);

    // (sigma)_beta.
    TypeRef project(const TypeRef& sigma, int beta);
    // pi_iota(sigma); iota holds 1-based positions into sigma's tuple.
    TypeRef permute(const TypeRef& sigma, std::span<const int> iota);
    // The <=_gamma-downward closure of the gamma-types of all extensions of
    // sigma's representative by tuples of length 0..extension_bound().
    std::vector<TypeRef> ext_set(const TypeRef& sigma, int gamma);
    // sigma <=_gamma tau compared with the ext-set containment for every beta < gamma.
    bool ext_characterization_check(const TypeRef& sigma, const TypeRef& tau, int gamma);
    // sigma <=_gamma tau on representatives, for types of level >= gamma.
    bool leq_at(const TypeRef& sigma, const TypeRef& tau, int gamma);

    int count_classes(int n, int k) { return level(n, k).size(); }

private:
    size_t pair_index(int struct_index, TupleView tuple) const;
    std::unique_ptr<BfLevel> build_level(int n, int k);

    ClassSpec spec_;
    std::vector<Structure> members_;
    std::vector<StructId> ids_;
    int extension_bound_ = 0;
    size_t pair_budget_ = 20'000'000;
    std::unique_ptr<BfEngine> engine_;
    std::recursive_mutex mutex_;
    std::map<std::pair<int, int>, std::unique_ptr<BfLevel>> levels_;
};

// BF_{n,k} of a class; tuple_bound must be at least k.
const BfLevel& types_at_level(TypeCatalog& catalog, int n, int k, int tuple_bound);

// Calls f(tuple) for every tuple of the given length over {0..size-1}, in
// lexicographic order.
template <typename F>
void for_each_tuple(int size, int length, F&& f)
{
    Tuple t(static_cast<size_t>(length), 0);
    while (true) {
        f(static_cast<const Tuple&>(t));
        int i = length - 1;
        while (i >= 0 && ++t[static_cast<size_t>(i)] == size)
            t[static_cast<size_t>(i--)] = 0;
        if (i < 0)
            return;
    }
}

} // namespace bnf
