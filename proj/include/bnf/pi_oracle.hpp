#pragma once

#include <deque>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "bnf/formula.hpp"

namespace bnf {

// Decides Pi_n-type inclusion over a finite universe of structures by building
// characteristic formulas syntactically and evaluating them.
//
// The level-n formula of an injective tuple c of C forbids, for every gamma < n,
// each canonical gamma-formula that no fresh extension of c satisfies:
//
//   F_n(C,c)(x) = bigand_{gamma<n} bigand_{G not realized} forall y (fresh(y) -> not G(x y))
//
// Level 0 is the atomic diagram over the visible symbols. Tuples with repeated
// entries are handled through their equality pattern plus the count of visible
// signature symbols, which their raw length determines. Canonical formulas with
// identical truth sets over the universe are kept once.
class PiOracle {
public:
    explicit PiOracle(std::vector<Structure> universe);

    // Every canonical Pi_n formula true of ta in a is true of tb in b. Both
    // structures must belong to the universe.
    bool included(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n);

    // The characteristic Pi_n formula of an injective tuple, free in x1..xk.
    FormulaPtr characteristic(int n, const Structure& c, TupleView injective, int visible);

    int universe_size() const { return static_cast<int>(universe_.size()); }

private:
    struct Pair {
        int structure;
        Tuple tuple;
    };

    int index_of(const Structure& s) const;
    const std::vector<Pair>& pairs(int arity);
    const std::vector<FormulaPtr>& canon(int level, int arity, int visible);
    FormulaPtr build(int level, int structure, const Tuple& tuple, int visible);
    FormulaPtr fresh_exists(const FormulaPtr& g, int arity, int m);
    FormulaPtr fresh_forall_not(const FormulaPtr& g, int arity, int m);
    std::vector<int> visible_options(int arity, int visible, int m) const;
    bool holds(int structure, const FormulaPtr& f, TupleView tuple);

    std::deque<Structure> universe_;
    std::deque<StructureModel> models_;
    std::vector<std::unique_ptr<Evaluator>> evaluators_;
    int symbols_ = 0;
    int extension_bound_ = 0;
    std::map<int, std::vector<Pair>> pairs_;
    std::map<std::tuple<int, int, int>, std::vector<FormulaPtr>> canon_;
    std::map<std::tuple<const Formula*, int, int>, FormulaPtr> exists_nodes_;
    std::map<std::tuple<const Formula*, int, int>, FormulaPtr> forall_nodes_;
};

// Convenience form: the universe is the given fragment plus a and b.
bool pi_type_inclusion_oracle(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n,
                              const std::vector<Structure>& fragment);

} // namespace bnf
