#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bnf/bfstruct.hpp"
#include "bnf/formula.hpp"

namespace bnf {

// A bf-structure together with the class members its representatives point
// into, for semantic questions about the extended predicates.
class BfContext {
public:
    // Enumerates the class named in the structure's header.
    explicit BfContext(BfStructure b);
    BfContext(BfStructure b, std::vector<Structure> members);

    const BfStructure& bfs() const { return b_; }
    const Signature& signature() const { return members_.front().signature(); }
    const std::vector<Structure>& members() const { return members_; }
    BfEngine& engine() { return engine_; }
    // Longest extension the ext sets account for: the largest member size.
    int extension_bound() const { return extension_bound_; }

    const Structure& rep_structure(const TypeRef& t) const;
    const Tuple& rep_tuple(const TypeRef& t) const;
    // sigma <=_level(sigma) (a, tuple)
    bool below(const TypeRef& sigma, const Structure& a, TupleView tuple);
    // The level-n type of (a, tuple) among the stored types, if a matches one.
    std::optional<TypeRef> type_of(int level, const Structure& a, TupleView tuple);

private:
    void check(const TypeRef& t) const;

    BfStructure b_;
    std::vector<Structure> members_;
    BfEngine engine_;
    int extension_bound_ = 0;
};

// A structure expanded by the extended predicates: phi_sigma(a) holds iff
// sigma <= (A, a) at sigma's level. Tables are filled on demand.
class ExtendedStructure : public Model {
public:
    ExtendedStructure(Structure base, std::shared_ptr<BfContext> context);

    int size() const override { return base_.size(); }
    const Signature& signature() const override { return base_.signature(); }
    bool atom(int symbol, TupleView args) const override { return base_.holds(symbol, args); }
    bool predicate(const TypeRef& type, TupleView args) const override;

    const Structure& base() const { return base_; }
    const std::shared_ptr<BfContext>& context() const { return context_; }
    // All tuples in the table of phi_type.
    std::vector<Tuple> table(const TypeRef& type) const;

private:
    Structure base_;
    std::shared_ptr<BfContext> context_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<TypeRef, Tuple>, bool> cache_;
};

ExtendedStructure expand(const Structure& a, std::shared_ptr<BfContext> context);

// The level-0 diagram formula, or the conjunction of forall-not
// clauses over the complements of the ext sets (extensions up to the
// extension bound). With expand_depth > 0 the
// inner predicates are replaced by their own definitions, that many levels deep.
FormulaPtr phi_def(BfContext& ctx, const TypeRef& sigma, int expand_depth = 0);
// phi_sigma conjoined with existential witnesses for the ext sets.
FormulaPtr psi_def(BfContext& ctx, const TypeRef& sigma);
// The disjunction of top-level predicates projecting to sigma.
FormulaPtr psi_projection(BfContext& ctx, const TypeRef& sigma);

// Axioms (totality and uniqueness, definitions, psi implications) over types of arity <= max_arity (default: the stored arity bound).
Theory t_alpha(BfContext& ctx, int max_arity = -1);
// T_alpha plus constants x1..xk, phi_sigma of them and the ext witnesses.
Theory t_alpha_sigma(BfContext& ctx, const TypeRef& sigma, int max_arity = -1);

// The diagram of a stored type over the extended signature: its base diagram
// and every extended atom on index maps of its variables.
struct ExtendedDiagram {
    TypeRef type;
    AtomicDiagram base;
    struct Fact {
        TypeRef predicate;
        std::vector<int> iota; // 1-based positions
        bool value = false;
        auto operator<=>(const Fact&) const = default;
    };
    std::vector<Fact> facts;

    FormulaPtr formula(const Signature& signature) const; // conjunction of literals in x1..xk
};

ExtendedDiagram extended_diagram(BfContext& ctx, const TypeRef& tau);

// Bits of the canonical finitary Sigma_1 sentences over the extended
// signature (predicates of level below the top and arity within the bound).
// Sentences are "exists x1..xv (and literals)" of size v + #literals, listed
// by size, then variable count, then literal index sets in lexicographic order.
struct Sigma1Theory {
    std::string bits;
    std::vector<FormulaPtr> sentences;
};

std::vector<FormulaPtr> sigma1_sentences(BfContext& ctx, int size_bound);
Sigma1Theory sigma1_theory(const ExtendedStructure& m, int size_bound);

// Pi_2 axioms of the builtin classes.
Theory class_axioms(ClassKind kind);
// Linear order axioms plus "no greatest element".
Theory no_max_order_axioms();

} // namespace bnf
