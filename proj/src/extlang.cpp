#include "bnf/extlang.hpp"

#include <algorithm>
#include <functional>

#include "bnf/error.hpp"

namespace bnf {

// ---- context ----

BfContext::BfContext(BfStructure b) : BfContext(b, enumerate_class(ClassSpec::parse(b.class_spec))) {}

BfContext::BfContext(BfStructure b, std::vector<Structure> members) : b_(std::move(b)), members_(std::move(members))
{
    if (members_.empty())
        throw DomainError("bf-structure class has no members");
    for (const auto& m : members_) {
        engine_.intern(m);
        extension_bound_ = std::max(extension_bound_, m.size());
    }
}

void BfContext::check(const TypeRef& t) const
{
    if (!b_.contains(t))
        throw DomainError("type " + t.str() + " is not in the bf-structure");
}

const Structure& BfContext::rep_structure(const TypeRef& t) const
{
    check(t);
    int idx = b_.types.at({t.level, t.arity})[static_cast<size_t>(t.id)].structure;
    if (idx < 0 || idx >= static_cast<int>(members_.size()))
        throw DomainError("representative of " + t.str() + " points outside the class");
    return members_[static_cast<size_t>(idx)];
}

const Tuple& BfContext::rep_tuple(const TypeRef& t) const
{
    check(t);
    return b_.types.at({t.level, t.arity})[static_cast<size_t>(t.id)].tuple;
}

bool BfContext::below(const TypeRef& sigma, const Structure& a, TupleView tuple)
{
    return engine_.leq(rep_structure(sigma), rep_tuple(sigma), a, tuple, sigma.level);
}

std::optional<TypeRef> BfContext::type_of(int level, const Structure& a, TupleView tuple)
{
    const int k = static_cast<int>(tuple.size());
    for (int i = 0; i < b_.count(level, k); ++i) {
        TypeRef t{level, k, i};
        if (engine_.compare(rep_structure(t), rep_tuple(t), a, tuple, level) == Comparison::Equiv)
            return t;
    }
    return std::nullopt;
}

// ---- expansion ----

ExtendedStructure::ExtendedStructure(Structure base, std::shared_ptr<BfContext> context)
    : base_(std::move(base)), context_(std::move(context))
{
    if (!(base_.signature() == context_->signature()))
        throw DomainError("structure signature differs from the bf-structure's base signature");
}

bool ExtendedStructure::predicate(const TypeRef& type, TupleView args) const
{
    if (!context_->bfs().contains(type))
        throw DomainError("unknown extended predicate " + type.str());
    if (static_cast<int>(args.size()) != type.arity)
        throw DomainError("extended predicate " + type.str() + " applied with wrong arity");
    std::pair<TypeRef, Tuple> key{type, Tuple(args.begin(), args.end())};
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
    }
    bool v = context_->below(type, base_, args);
    std::lock_guard lock(mutex_);
    cache_.emplace(std::move(key), v);
    return v;
}

std::vector<Tuple> ExtendedStructure::table(const TypeRef& type) const
{
    std::vector<Tuple> out;
    for_each_tuple(size(), type.arity, [&](const Tuple& t) {
        if (predicate(type, t))
            out.push_back(t);
    });
    return out;
}

ExtendedStructure expand(const Structure& a, std::shared_ptr<BfContext> context)
{
    return ExtendedStructure(a, std::move(context));
}

// ---- defining formulas ----

namespace {

// Literal conjunction of a diagram in x1..xk.
FormulaPtr diagram_formula(const AtomicDiagram& d, const Signature& sig)
{
    const int k = d.arity;
    std::vector<FormulaPtr> parts;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            FormulaPtr e = f_eq(i + 1, j + 1);
            parts.push_back(d.bits[static_cast<size_t>(i * k + j)] ? e : f_not(e));
        }
    size_t pos = static_cast<size_t>(k * k);
    for (int s = 0; s < d.visible_symbols; ++s)
        for_each_tuple(k, sig[s].arity, [&](const Tuple& idx) {
            std::vector<Var> vars;
            for (int i : idx)
                vars.push_back(i + 1);
            FormulaPtr a = f_atom(sig[s].name, vars);
            parts.push_back(d.bits[pos++] ? a : f_not(a));
        });
    return f_and(std::move(parts));
}

// Stored types of a level with arity in [from, to].
std::vector<TypeRef> stored(const BfStructure& b, int level, int from, int to)
{
    std::vector<TypeRef> out;
    for (int k = from; k <= to; ++k)
        for (int i = 0; i < b.count(level, k); ++i)
            out.push_back({level, k, i});
    return out;
}

FormulaPtr apply(BfContext& ctx, const TypeRef& t, int depth)
{
    if (depth > 0)
        return phi_def(ctx, t, depth - 1);
    return f_pred(t, var_range(1, t.arity));
}

} // namespace

FormulaPtr phi_def(BfContext& ctx, const TypeRef& sigma, int expand_depth)
{
    const BfStructure& b = ctx.bfs();
    if (!b.contains(sigma))
        throw DomainError("type " + sigma.str() + " is not in the bf-structure");
    const int k = sigma.arity;
    if (sigma.level == 0)
        return diagram_formula(atomic_diagram(ctx.rep_structure(sigma), ctx.rep_tuple(sigma)), ctx.signature());
    std::vector<FormulaPtr> parts;
    for (int gamma = 0; gamma < sigma.level; ++gamma) {
        auto ext = b.ext_at(sigma, gamma);
        for (const TypeRef& tau : stored(b, gamma, k, std::min(k + ctx.extension_bound(), b.max_arity(gamma)))) {
            if (std::binary_search(ext.begin(), ext.end(), tau))
                continue;
            FormulaPtr inner = f_not(apply(ctx, tau, expand_depth));
            const int m = tau.arity - k;
            parts.push_back(m == 0 ? inner : f_forall(var_range(k + 1, m), inner));
        }
    }
    return f_bigand(std::move(parts));
}

FormulaPtr psi_def(BfContext& ctx, const TypeRef& sigma)
{
    const BfStructure& b = ctx.bfs();
    if (!b.contains(sigma))
        throw DomainError("type " + sigma.str() + " is not in the bf-structure");
    if (sigma.level >= b.levels)
        throw DomainError("psi is defined for types below the top level");
    const int k = sigma.arity;
    FormulaPtr phi = f_pred(sigma, var_range(1, k));
    if (sigma.level == 0)
        return phi;
    std::vector<FormulaPtr> witnesses;
    for (int gamma = 0; gamma < sigma.level; ++gamma)
        for (const TypeRef& tau : b.ext_at(sigma, gamma)) {
            FormulaPtr p = f_pred(tau, var_range(1, tau.arity));
            const int m = tau.arity - k;
            witnesses.push_back(m == 0 ? p : f_exists(var_range(k + 1, m), p));
        }
    return f_and({phi, f_bigand(std::move(witnesses))});
}

FormulaPtr psi_projection(BfContext& ctx, const TypeRef& sigma)
{
    const BfStructure& b = ctx.bfs();
    if (!b.contains(sigma))
        throw DomainError("type " + sigma.str() + " is not in the bf-structure");
    if (sigma.level >= b.levels)
        throw DomainError("psi is defined for types below the top level");
    if (b.count(b.levels, sigma.arity) == 0)
        throw DomainError("no top-level types of arity " + std::to_string(sigma.arity) + " are stored");
    std::vector<FormulaPtr> parts;
    for (const TypeRef& top : stored(b, b.levels, sigma.arity, sigma.arity))
        if (b.proj.at({top, sigma.level}) == sigma)
            parts.push_back(f_pred(top, var_range(1, sigma.arity)));
    return f_bigor(std::move(parts));
}

// ---- theories ----

namespace {

FormulaPtr close(const std::vector<Var>& vars, FormulaPtr f)
{
    return vars.empty() ? f : f_forall(vars, std::move(f));
}

} // namespace

Theory t_alpha(BfContext& ctx, int max_arity)
{
    const BfStructure& b = ctx.bfs();
    if (max_arity < 0)
        max_arity = b.arity_bound;
    if (max_arity > b.arity_bound)
        throw DomainError("axioms need top-level types of every instantiated arity; arity " +
                          std::to_string(max_arity) + " exceeds the stored bound");
    Theory t;
    t.name = "bf-axioms-" + std::to_string(b.levels);
    for (int k = 0; k <= max_arity; ++k) {
        const auto xs = var_range(1, k);
        // every tuple has a top-level type, and lower types are unique
        std::vector<FormulaPtr> tops;
        for (const TypeRef& s : stored(b, b.levels, k, k))
            tops.push_back(f_pred(s, xs));
        t.add(close(xs, f_bigor(std::move(tops))), "totality");
        for (int beta = 0; beta < b.levels; ++beta) {
            auto level = stored(b, beta, k, k);
            std::vector<FormulaPtr> psis;
            for (const TypeRef& s : level)
                psis.push_back(psi_projection(ctx, s));
            for (size_t i = 0; i < level.size(); ++i)
                for (size_t j = i + 1; j < level.size(); ++j)
                    t.add(close(xs, f_not(f_and({psis[i], psis[j]}))), "uniqueness");
        }
        // the recursive definition of phi
        for (int beta = 0; beta <= b.levels; ++beta)
            for (const TypeRef& s : stored(b, beta, k, k))
                t.add(close(xs, f_iff(f_pred(s, xs), phi_def(ctx, s))), "definition");
        // what psi implies
        for (int beta = 1; beta < b.levels; ++beta)
            for (const TypeRef& s : stored(b, beta, k, k))
                t.add(close(xs, f_implies(psi_projection(ctx, s), psi_def(ctx, s))), "implication");
    }
    return t;
}

Theory t_alpha_sigma(BfContext& ctx, const TypeRef& sigma, int max_arity)
{
    const BfStructure& b = ctx.bfs();
    if (!b.contains(sigma))
        throw DomainError("type " + sigma.str() + " is not in the bf-structure");
    Theory t = t_alpha(ctx, max_arity);
    t.name += "," + sigma.str();
    const int k = sigma.arity;
    t.constants = var_range(1, k);
    t.add(f_pred(sigma, var_range(1, k)), "constants have the type");
    for (int gamma = 0; gamma < sigma.level; ++gamma)
        for (const TypeRef& tau : b.ext_at(sigma, gamma)) {
            FormulaPtr p = f_pred(tau, var_range(1, tau.arity));
            const int m = tau.arity - k;
            t.add(m == 0 ? p : f_exists(var_range(k + 1, m), p), "ext witness");
        }
    return t;
}

// ---- extended diagrams ----

ExtendedDiagram extended_diagram(BfContext& ctx, const TypeRef& tau)
{
    const BfStructure& b = ctx.bfs();
    if (!b.contains(tau))
        throw DomainError("type " + tau.str() + " is not in the bf-structure");
    if (tau.arity > b.arity_bound)
        throw DomainError("extended diagrams need index maps, which are stored up to arity " +
                          std::to_string(b.arity_bound));
    ExtendedDiagram d;
    d.type = tau;
    d.base = atomic_diagram(ctx.rep_structure(tau), ctx.rep_tuple(tau));
    for (const auto& iota : index_maps(tau.arity)) {
        const TypeRef image = b.perm.at({tau, iota});
        for (int beta = 0; beta <= tau.level; ++beta) {
            const TypeRef target = beta == tau.level ? image : b.proj.at({image, beta});
            for (const TypeRef& rho : stored(b, beta, image.arity, image.arity))
                d.facts.push_back({rho, iota, b.leq_holds(rho, target)});
        }
    }
    return d;
}

FormulaPtr ExtendedDiagram::formula(const Signature& signature) const
{
    std::vector<FormulaPtr> parts{diagram_formula(base, signature)};
    for (const Fact& f : facts) {
        std::vector<Var> vars(f.iota.begin(), f.iota.end());
        FormulaPtr p = f_pred(f.predicate, vars);
        parts.push_back(f.value ? p : f_not(p));
    }
    return f_and(std::move(parts));
}

// ---- Sigma_1 theory ----

namespace {

// Atomic formulas in x1..xv, each followed by its negation in the literal list.
std::vector<FormulaPtr> literals(BfContext& ctx, int v)
{
    const BfStructure& b = ctx.bfs();
    const Signature& sig = ctx.signature();
    std::vector<FormulaPtr> atoms;
    for (int i = 1; i <= v; ++i)
        for (int j = i + 1; j <= v; ++j)
            atoms.push_back(f_eq(i, j));
    auto vars_of = [](const Tuple& t) {
        std::vector<Var> out;
        for (int i : t)
            out.push_back(i + 1);
        return out;
    };
    for (int s = 0; s < sig.size(); ++s)
        for_each_tuple(v, sig[s].arity, [&](const Tuple& t) { atoms.push_back(f_atom(sig[s].name, vars_of(t))); });
    for (int level = 0; level < b.levels; ++level)
        for (int k = 0; k <= b.arity_bound; ++k)
            for (const TypeRef& t : stored(b, level, k, k))
                for_each_tuple(v, k, [&](const Tuple& tuple) { atoms.push_back(f_pred(t, vars_of(tuple))); });
    std::vector<FormulaPtr> out;
    for (const auto& a : atoms) {
        out.push_back(a);
        out.push_back(f_not(a));
    }
    return out;
}

} // namespace

std::vector<FormulaPtr> sigma1_sentences(BfContext& ctx, int size_bound)
{
    std::vector<FormulaPtr> out;
    std::map<int, std::vector<FormulaPtr>> lits;
    for (int size = 1; size <= size_bound; ++size)
        for (int v = 1; v <= size; ++v) {
            auto it = lits.find(v);
            if (it == lits.end())
                it = lits.emplace(v, literals(ctx, v)).first;
            const auto& pool = it->second;
            const int count = size - v;
            if (count > static_cast<int>(pool.size()))
                continue;
            std::vector<int> pick(static_cast<size_t>(count));
            std::function<void(int, int)> rec = [&](int pos, int from) {
                if (pos == count) {
                    std::vector<FormulaPtr> kids;
                    for (int i : pick)
                        kids.push_back(pool[static_cast<size_t>(i)]);
                    out.push_back(f_exists(var_range(1, v), f_and(std::move(kids))));
                    return;
                }
                for (int i = from; i < static_cast<int>(pool.size()); ++i) {
                    pick[static_cast<size_t>(pos)] = i;
                    rec(pos + 1, i + 1);
                }
            };
            rec(0, 0);
        }
    return out;
}

Sigma1Theory sigma1_theory(const ExtendedStructure& m, int size_bound)
{
    Sigma1Theory t;
    t.sentences = sigma1_sentences(*m.context(), size_bound);
    Evaluator ev(m);
    for (const auto& s : t.sentences)
        t.bits.push_back(ev.eval(s) ? '1' : '0');
    return t;
}

// ---- class axioms ----

namespace {

FormulaPtr lt(Var a, Var b) { return f_atom("<", {a, b}); }

void order_axioms(Theory& t)
{
    t.add(f_forall({1}, f_not(lt(1, 1))), "irreflexive");
    t.add(f_forall({1, 2, 3}, f_implies(f_and({lt(1, 2), lt(2, 3)}), lt(1, 3))), "transitive");
    t.add(f_forall({1, 2}, f_or({lt(1, 2), f_eq(1, 2), lt(2, 1)})), "total");
}

} // namespace

Theory class_axioms(ClassKind kind)
{
    Theory t;
    switch (kind) {
    case ClassKind::LinearOrders:
        t.name = "linord";
        order_axioms(t);
        break;
    case ClassKind::EquivalenceStructures: {
        t.name = "equiv";
        auto e = [](Var a, Var b) { return f_atom("E", {a, b}); };
        t.add(f_forall({1}, e(1, 1)), "reflexive");
        t.add(f_forall({1, 2}, f_implies(e(1, 2), e(2, 1))), "symmetric");
        t.add(f_forall({1, 2, 3}, f_implies(f_and({e(1, 2), e(2, 3)}), e(1, 3))), "transitive");
        break;
    }
    case ClassKind::Graphs: {
        t.name = "graph";
        auto r = [](Var a, Var b) { return f_atom("R", {a, b}); };
        t.add(f_forall({1}, f_not(r(1, 1))), "irreflexive");
        t.add(f_forall({1, 2}, f_implies(r(1, 2), r(2, 1))), "symmetric");
        break;
    }
    case ClassKind::Files:
        throw DomainError("file-backed classes have no builtin axioms");
    }
    return t;
}

Theory no_max_order_axioms()
{
    Theory t;
    t.name = "linord-nomax";
    order_axioms(t);
    t.add(f_forall({1}, f_exists({2}, lt(1, 2))), "no greatest element");
    return t;
}

} // namespace bnf
