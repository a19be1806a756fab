#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bnf/catalog.hpp"
#include "bnf/structure.hpp"

namespace bnf {

// Variables are small integers; x<i> in the text format.
using Var = int;

enum class Op { True, False, Atom, Eq, Pred, Not, And, Or, Implies, Iff, BigAnd, BigOr, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    Op op = Op::True;
    std::string symbol;           // Atom
    TypeRef type;                 // Pred
    std::vector<Var> vars;        // arguments, or the bound variables of a quantifier
    std::vector<FormulaPtr> kids;
    std::vector<Var> free;        // sorted free variables

    bool closed() const { return free.empty(); }
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(std::string symbol, std::vector<Var> args);
FormulaPtr f_eq(Var a, Var b);
FormulaPtr f_pred(const TypeRef& type, std::vector<Var> args);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(std::vector<FormulaPtr> kids);
FormulaPtr f_or(std::vector<FormulaPtr> kids);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
// Infinitary connectives, materialized over an explicit finite sequence.
FormulaPtr f_bigand(std::vector<FormulaPtr> kids);
FormulaPtr f_bigor(std::vector<FormulaPtr> kids);
FormulaPtr f_forall(std::vector<Var> vars, FormulaPtr body);
FormulaPtr f_exists(std::vector<Var> vars, FormulaPtr body);

// x1..xk as variable list.
std::vector<Var> var_range(int first, int count);

enum class RankKind { DeltaAtomic, Sigma, Pi };

struct RankClass {
    RankKind kind = RankKind::DeltaAtomic;
    int level = 0;

    bool operator==(const RankClass&) const = default;
    std::string str() const; // "atomic", "Sigma2", "Pi1", ...
};

// Infinitary conjunctions count as universal quantifiers and infinitary
// disjunctions as existential ones; finitary connectives do not raise the level.
RankClass classify(const FormulaPtr& f);
// True when f is equivalent, by its rank, to a Pi_n formula.
bool within_pi(const FormulaPtr& f, int n);

std::string to_text(const FormulaPtr& f);
FormulaPtr parse_formula(const std::string& text);

// Anything formulas can be evaluated in.
class Model {
public:
    virtual ~Model() = default;
    virtual int size() const = 0;
    virtual const Signature& signature() const = 0;
    virtual bool atom(int symbol, TupleView args) const = 0;
    virtual bool predicate(const TypeRef& type, TupleView args) const;
};

class StructureModel : public Model {
public:
    explicit StructureModel(const Structure& s) : s_(s) {}
    int size() const override { return s_.size(); }
    const Signature& signature() const override { return s_.signature(); }
    bool atom(int symbol, TupleView args) const override { return s_.holds(symbol, args); }

private:
    const Structure& s_;
};

// Classical satisfaction over a finite model. Quantifier nodes are memoized
// on the values of their free variables, so shared subformulas are evaluated
// once per assignment.
class Evaluator {
public:
    explicit Evaluator(const Model& model, bool memoize = true) : model_(model), memoize_(memoize) {}

    // env[v] is the value of variable v; -1 means unbound.
    bool eval(const FormulaPtr& f, const std::vector<int>& env);
    bool eval(const FormulaPtr& f, const std::vector<Var>& vars, TupleView values);
    bool eval(const FormulaPtr& f) { return eval(f, std::vector<int>{}); }

private:
    bool start(const FormulaPtr& f, std::vector<int>& env);
    bool run(const Formula& f, std::vector<int>& env);
    bool quantified(const Formula& f, std::vector<int>& env, size_t pos);
    int symbol_index(const Formula& f);

    const Model& model_;
    bool memoize_;
    std::unordered_map<const Formula*, int> symbols_;
    std::unordered_map<std::string, bool> memo_;
    std::unordered_set<const Formula*> pinned_;
    std::vector<FormulaPtr> pins_;
};

struct Sentence {
    FormulaPtr formula;
    std::string schema;
};

// A theory; the constants are variables read as constant symbols, so sentences
// may have exactly those free.
struct Theory {
    std::string name;
    std::vector<Var> constants;
    std::vector<Sentence> sentences;

    void add(FormulaPtr f, std::string schema);
};

std::string theory_to_text(const Theory& t);
Theory parse_theory(const std::string& text);
Theory load_theory(const std::string& path);
void save_theory(const Theory& t, const std::string& path);

} // namespace bnf
