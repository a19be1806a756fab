#include "bnf/pi_oracle.hpp"

#include <algorithm>
#include <set>

#include "bnf/error.hpp"

namespace bnf {

namespace {

bool injective(const Tuple& t)
{
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j])
                return false;
    return true;
}

// Pairwise distinctness of the variables first..first+m-1 from each other and
// from x1..x(first-1).
FormulaPtr fresh_guard(int first, int m)
{
    std::vector<FormulaPtr> parts;
    for (int y = first; y < first + m; ++y)
        for (int x = 1; x < y; ++x)
            parts.push_back(f_not(f_eq(x, y)));
    return f_and(std::move(parts));
}

} // namespace

PiOracle::PiOracle(std::vector<Structure> universe)
{
    if (universe.empty())
        throw DomainError("oracle universe is empty");
    const Signature sig = universe.front().signature();
    std::set<std::string> seen;
    for (auto& s : universe) {
        if (!(s.signature() == sig))
            throw DomainError("oracle universe must share one signature");
        if (!seen.insert(s.encoding() + "#" + std::to_string(s.size())).second)
            continue;
        universe_.push_back(std::move(s));
    }
    for (const auto& s : universe_) {
        models_.emplace_back(s);
        evaluators_.push_back(std::make_unique<Evaluator>(models_.back()));
        extension_bound_ = std::max(extension_bound_, s.size());
    }
    symbols_ = universe_.front().signature().size();
}

int PiOracle::index_of(const Structure& s) const
{
    for (size_t i = 0; i < universe_.size(); ++i)
        if (universe_[i].size() == s.size() && universe_[i].signature() == s.signature() &&
            universe_[i].encoding() == s.encoding())
            return static_cast<int>(i);
    throw DomainError("structure is not part of the oracle universe");
}

const std::vector<PiOracle::Pair>& PiOracle::pairs(int arity)
{
    auto it = pairs_.find(arity);
    if (it != pairs_.end())
        return it->second;
    std::vector<Pair> out;
    for (int si = 0; si < static_cast<int>(universe_.size()); ++si)
        if (arity <= universe_[static_cast<size_t>(si)].size())
            for_each_tuple(universe_[static_cast<size_t>(si)].size(), arity, [&](const Tuple& t) {
                if (injective(t))
                    out.push_back({si, t});
            });
    return pairs_.emplace(arity, std::move(out)).first->second;
}

std::vector<int> PiOracle::visible_options(int arity, int visible, int m) const
{
    // m fresh elements plus r re-mentions of the current entries
    std::vector<int> out;
    for (int r = m == 0 ? 1 : 0; r <= arity; ++r) {
        int v = std::min(visible + m + r, symbols_);
        if (std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
    }
    return out;
}

bool PiOracle::holds(int structure, const FormulaPtr& f, TupleView tuple)
{
    std::vector<int> env(tuple.size() + 1, -1);
    for (size_t i = 0; i < tuple.size(); ++i)
        env[i + 1] = tuple[i];
    return evaluators_[static_cast<size_t>(structure)]->eval(f, env);
}

FormulaPtr PiOracle::fresh_exists(const FormulaPtr& g, int arity, int m)
{
    auto key = std::make_tuple(g.get(), arity, m);
    auto it = exists_nodes_.find(key);
    if (it != exists_nodes_.end())
        return it->second;
    FormulaPtr f = m == 0 ? g : f_exists(var_range(arity + 1, m), f_and({fresh_guard(arity + 1, m), g}));
    return exists_nodes_.emplace(key, f).first->second;
}

FormulaPtr PiOracle::fresh_forall_not(const FormulaPtr& g, int arity, int m)
{
    auto key = std::make_tuple(g.get(), arity, m);
    auto it = forall_nodes_.find(key);
    if (it != forall_nodes_.end())
        return it->second;
    FormulaPtr f = m == 0 ? f_not(g) : f_forall(var_range(arity + 1, m), f_implies(fresh_guard(arity + 1, m), f_not(g)));
    return forall_nodes_.emplace(key, f).first->second;
}

FormulaPtr PiOracle::build(int level, int structure, const Tuple& tuple, int visible)
{
    const Structure& c = universe_[static_cast<size_t>(structure)];
    const int k = static_cast<int>(tuple.size());
    std::vector<FormulaPtr> parts;
    if (level == 0) {
        for (int j = 1; j <= k; ++j)
            for (int i = 1; i < j; ++i)
                parts.push_back(f_not(f_eq(i, j)));
        for (int s = 0; s < visible; ++s) {
            const Symbol& sym = c.signature()[s];
            for_each_tuple(k, sym.arity, [&](const Tuple& idx) {
                Tuple args;
                std::vector<Var> vars;
                for (int i : idx) {
                    args.push_back(tuple[static_cast<size_t>(i)]);
                    vars.push_back(i + 1);
                }
                FormulaPtr a = f_atom(sym.name, vars);
                parts.push_back(c.holds(s, args) ? a : f_not(a));
            });
        }
        return f_and(std::move(parts));
    }
    for (int gamma = 0; gamma < level; ++gamma)
        for (int m = 0; m <= extension_bound_; ++m)
            for (int v : visible_options(k, visible, m))
                for (const FormulaPtr& g : canon(gamma, k + m, v))
                    if (!holds(structure, fresh_exists(g, k, m), tuple))
                        parts.push_back(fresh_forall_not(g, k, m));
    return f_bigand(std::move(parts));
}

const std::vector<FormulaPtr>& PiOracle::canon(int level, int arity, int visible)
{
    auto key = std::make_tuple(level, arity, visible);
    auto it = canon_.find(key);
    if (it != canon_.end())
        return it->second;
    const auto& ps = pairs(arity);
    std::vector<FormulaPtr> out;
    std::set<std::vector<bool>> truth_sets;
    for (const Pair& p : ps) {
        FormulaPtr f = build(level, p.structure, p.tuple, visible);
        std::vector<bool> truth;
        truth.reserve(ps.size());
        for (const Pair& q : ps)
            truth.push_back(holds(q.structure, f, q.tuple));
        if (truth_sets.insert(std::move(truth)).second)
            out.push_back(f);
    }
    return canon_.emplace(key, std::move(out)).first->second;
}

FormulaPtr PiOracle::characteristic(int n, const Structure& c, TupleView injective_tuple, int visible)
{
    Tuple t(injective_tuple.begin(), injective_tuple.end());
    if (!injective(t))
        throw DomainError("characteristic formulas are built for injective tuples");
    return build(n, index_of(c), t, std::min(visible, symbols_));
}

bool PiOracle::included(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n)
{
    if (n < 1)
        throw DomainError("the Pi-type oracle needs level >= 1; compare atomic diagrams at level 0");
    if (ta.size() != tb.size())
        throw DomainError("tuple length mismatch");
    const int ia = index_of(a), ib = index_of(b);
    check_tuple(a, ta);
    check_tuple(b, tb);
    // Equality atoms between entries are Pi_n formulas of their own.
    Tuple ra, rb;
    for (size_t i = 0; i < ta.size(); ++i) {
        for (size_t j = 0; j < i; ++j)
            if ((ta[i] == ta[j]) != (tb[i] == tb[j]))
                return false;
        if (std::find(ra.begin(), ra.end(), ta[i]) == ra.end()) {
            ra.push_back(ta[i]);
            rb.push_back(tb[i]);
        }
    }
    const int visible = std::min(static_cast<int>(ta.size()), symbols_);
    for (const FormulaPtr& f : canon(n, static_cast<int>(ra.size()), visible))
        if (holds(ia, f, ra) && !holds(ib, f, rb))
            return false;
    return true;
}

bool pi_type_inclusion_oracle(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n,
                              const std::vector<Structure>& fragment)
{
    std::vector<Structure> universe = fragment;
    universe.push_back(a);
    universe.push_back(b);
    PiOracle oracle(std::move(universe));
    return oracle.included(a, ta, b, tb, n);
}

} // namespace bnf
