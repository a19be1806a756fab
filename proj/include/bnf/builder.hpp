#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bnf/extlang.hpp"

namespace bnf {

// forall u (body), with the body existential: in negation normal form and
// free of universal quantifiers. Free variables other than u are the theory's
// constants.
struct NormalSentence {
    std::vector<Var> universal;
    FormulaPtr body;
    int source = 0; // index of the theory sentence it came from
};

// Splits a Pi_2 theory into normal sentences: negation normal form, conjunctions
// split, universal quantifiers pulled out of disjunctions. Throws DomainError
// on input outside Pi_2 (an existential over a universal).
std::vector<NormalSentence> normalize(const Theory& t);

FormulaPtr negation_normal_form(const FormulaPtr& f);

// A model over a structure whose signature may contain extended predicates,
// stored as symbols named "bf:L.K.ID". Nullary ones are unary tables that are
// constant over the domain.
class TableModel : public Model {
public:
    explicit TableModel(const Structure& s) : s_(s) {}
    int size() const override { return s_.size(); }
    const Signature& signature() const override { return s_.signature(); }
    bool atom(int symbol, TupleView args) const override { return s_.holds(symbol, args); }
    bool predicate(const TypeRef& type, TupleView args) const override;

private:
    const Structure& s_;
    mutable std::unordered_map<long long, int> index_;
};

std::string predicate_symbol(const TypeRef& t);

struct BuildBudget {
    int max_stages = 50;
    int max_domain = 64;
    int enumerator_bound = 1 << 20; // items of the finite-structure list searched per stage
};

struct Requirement {
    int axiom = 0; // index into the normal sentences
    Tuple tuple;   // values of its universal variables

    auto operator<=>(const Requirement&) const = default;
};

enum class BuildStatus {
    AllHandled,      // no unmet requirement over the final structure
    StageBudget,     // stopped after max_stages with requirements left
    Exhausted,       // no listed structure extends the current stage and meets the requirement
    DomainBudget,    // the only extensions meeting it exceed max_domain
};

std::string status_name(BuildStatus s);

struct ChainStage {
    Structure structure;
    std::optional<Requirement> handled; // empty for the seed
    int witness = 0;                    // index into the finite-structure list
};

struct DiagramChain {
    std::vector<ChainStage> stages;
    Tuple constants; // interpretation of the theory's constants, fixed by the seed
    BuildStatus status = BuildStatus::AllHandled;
    std::optional<Requirement> pending; // the requirement that stopped the run, if any

    const Structure& final_structure() const { return stages.back().structure; }
};

// Stage by stage, meets the least unmet requirement (by largest element, then
// axiom, then tuple) with the first listed structure that extends the current
// one as an initial segment and satisfies it.
DiagramChain henkin_build(const Theory& t, const std::vector<Structure>& finite, const BuildBudget& budget,
                          int seed_index = 0, const Tuple& constants = {});

std::string dump_chain(const DiagramChain& c);
DiagramChain parse_chain(const std::string& text);

struct ChainAudit {
    std::vector<std::string> violations; // monotonicity or persistence failures
    std::vector<Requirement> unhandled;  // requirements false in the final structure
    size_t requirements = 0;             // requirements examined over the final structure
    bool ok() const { return violations.empty(); }
};

ChainAudit check_chain(const DiagramChain& c, const Theory& t);

struct TypedBuild {
    Structure structure; // base-signature reduct
    Tuple tuple;
    DiagramChain chain;
};

// The finite structures standing in for the diagrams of top-level types
// extending sigma: each is the substructure of a representative on the entries
// of its tuple, in order of first appearance, with tables for the given
// extended predicates read off the ambient structure. The first sigma.arity
// entries sit at the same positions in every one of them; those are returned
// in *constants.
std::vector<Structure> typed_diagrams(BfContext& ctx, const TypeRef& sigma, const std::vector<TypeRef>& predicates,
                                      Tuple* constants = nullptr);

// Extended predicates a theory mentions, sorted.
std::vector<TypeRef> mentioned_predicates(const Theory& t);

// Builds a structure with a tuple whose type should be sigma, through the
// typed theory over the extended signature.
TypedBuild build_with_type(BfContext& ctx, const TypeRef& sigma, const BuildBudget& budget, int max_arity = -1);

} // namespace bnf
