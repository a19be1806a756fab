#include "bnf/builder.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bnf/error.hpp"

namespace bnf {

// ---- normal form ----

FormulaPtr negation_normal_form(const FormulaPtr& f)
{
    struct Nnf {
        FormulaPtr operator()(const FormulaPtr& f, bool pos)
        {
            const auto& k = f->kids;
            auto all = [&](bool p) {
                std::vector<FormulaPtr> out;
                for (const auto& c : k)
                    out.push_back((*this)(c, p));
                return out;
            };
            switch (f->op) {
            case Op::True: return pos ? f : f_false();
            case Op::False: return pos ? f : f_true();
            case Op::Atom:
            case Op::Eq:
            case Op::Pred: return pos ? f : f_not(f);
            case Op::Not: return (*this)(k[0], !pos);
            case Op::And: return pos ? f_and(all(true)) : f_or(all(false));
            case Op::Or: return pos ? f_or(all(true)) : f_and(all(false));
            case Op::BigAnd: return pos ? f_bigand(all(true)) : f_bigor(all(false));
            case Op::BigOr: return pos ? f_bigor(all(true)) : f_bigand(all(false));
            case Op::Implies:
                if (pos)
                    return f_or({(*this)(k[0], false), (*this)(k[1], true)});
                return f_and({(*this)(k[0], true), (*this)(k[1], false)});
            case Op::Iff:
                // kept as a conjunction of two clauses so it splits into two sentences
                if (pos)
                    return f_and({f_or({(*this)(k[0], false), (*this)(k[1], true)}),
                                  f_or({(*this)(k[0], true), (*this)(k[1], false)})});
                return f_and({f_or({(*this)(k[0], true), (*this)(k[1], true)}),
                              f_or({(*this)(k[0], false), (*this)(k[1], false)})});
            case Op::Forall:
                return pos ? f_forall(f->vars, (*this)(k[0], true)) : f_exists(f->vars, (*this)(k[0], false));
            case Op::Exists:
                return pos ? f_exists(f->vars, (*this)(k[0], true)) : f_forall(f->vars, (*this)(k[0], false));
            }
            return f;
        }
    };
    return Nnf{}(f, true);
}

namespace {

class ForallCache {
public:
    bool operator()(const FormulaPtr& f)
    {
        auto it = memo_.find(f.get());
        if (it != memo_.end())
            return it->second;
        bool v = f->op == Op::Forall;
        for (const auto& k : f->kids)
            v = v || (*this)(k);
        memo_.emplace(f.get(), v);
        return v;
    }

private:
    std::unordered_map<const Formula*, bool> memo_;
};

int max_var(const FormulaPtr& f)
{
    int m = 0;
    for (Var v : f->vars)
        m = std::max(m, v);
    for (const auto& k : f->kids)
        m = std::max(m, max_var(k));
    return m;
}

// Replaces free occurrences of variables.
FormulaPtr substitute(const FormulaPtr& f, const std::map<Var, Var>& s)
{
    if (s.empty())
        return f;
    auto sub = [&](Var v) {
        auto it = s.find(v);
        return it == s.end() ? v : it->second;
    };
    auto kids = [&](const std::map<Var, Var>& m) {
        std::vector<FormulaPtr> out;
        for (const auto& k : f->kids)
            out.push_back(substitute(k, m));
        return out;
    };
    std::vector<Var> args;
    switch (f->op) {
    case Op::True:
    case Op::False: return f;
    case Op::Atom:
    case Op::Eq:
    case Op::Pred:
        for (Var v : f->vars)
            args.push_back(sub(v));
        if (f->op == Op::Atom)
            return f_atom(f->symbol, args);
        if (f->op == Op::Eq)
            return f_eq(args[0], args[1]);
        return f_pred(f->type, args);
    case Op::Not: return f_not(kids(s)[0]);
    case Op::And: return f_and(kids(s));
    case Op::Or: return f_or(kids(s));
    case Op::BigAnd: return f_bigand(kids(s));
    case Op::BigOr: return f_bigor(kids(s));
    case Op::Implies: {
        auto k = kids(s);
        return f_implies(k[0], k[1]);
    }
    case Op::Iff: {
        auto k = kids(s);
        return f_iff(k[0], k[1]);
    }
    case Op::Forall:
    case Op::Exists: {
        std::map<Var, Var> inner = s;
        for (Var v : f->vars)
            inner.erase(v);
        auto k = kids(inner);
        return f->op == Op::Forall ? f_forall(f->vars, k[0]) : f_exists(f->vars, k[0]);
    }
    }
    return f;
}

struct Part {
    std::vector<Var> universal;
    FormulaPtr body;
};

class Normalizer {
public:
    explicit Normalizer(int first_fresh) : fresh_(first_fresh) {}
    // Formulas passed to run() must outlive the normalizer (the cache keys on addresses).

    // f in negation normal form; returns a conjunction of parts.
    std::vector<Part> run(const FormulaPtr& f)
    {
        if (!has_forall_(f))
            return f->op == Op::True ? std::vector<Part>{} : std::vector<Part>{{{}, f}};
        switch (f->op) {
        case Op::And:
        case Op::BigAnd: {
            std::vector<Part> out;
            for (const auto& k : f->kids)
                for (auto& p : run(k))
                    out.push_back(std::move(p));
            return out;
        }
        case Op::Forall: {
            std::vector<Part> out;
            for (auto& p : run(f->kids[0])) {
                std::vector<Var> u;
                for (Var v : f->vars)
                    if (std::find(p.universal.begin(), p.universal.end(), v) == p.universal.end())
                        u.push_back(v);
                u.insert(u.end(), p.universal.begin(), p.universal.end());
                out.push_back({std::move(u), p.body});
            }
            return out;
        }
        case Op::Or:
        case Op::BigOr: {
            std::vector<Part> acc{{{}, f_false()}};
            for (const auto& k : f->kids) {
                auto parts = run(k);
                if (parts.empty())
                    return {}; // a true disjunct
                std::vector<Part> next;
                for (const auto& a : acc)
                    for (const auto& p : parts) {
                        Part q = apart(p);
                        std::vector<Var> u = a.universal;
                        u.insert(u.end(), q.universal.begin(), q.universal.end());
                        FormulaPtr body = a.body->op == Op::False ? q.body : f_or({a.body, q.body});
                        next.push_back({std::move(u), body});
                    }
                acc = std::move(next);
            }
            return acc;
        }
        case Op::Exists: throw DomainError("not Pi_2: an existential quantifier over a universal one");
        default: throw DomainError("not Pi_2: unexpected connective under negation normal form");
        }
    }

private:
    // Renames the universal variables of a part to fresh ones.
    Part apart(const Part& p)
    {
        std::map<Var, Var> s;
        Part q;
        for (Var v : p.universal) {
            s[v] = fresh_;
            q.universal.push_back(fresh_++);
        }
        q.body = substitute(p.body, s);
        return q;
    }

    int fresh_;
    ForallCache has_forall_;
};

} // namespace

std::vector<NormalSentence> normalize(const Theory& t)
{
    int top = 0;
    for (Var c : t.constants)
        top = std::max(top, c);
    for (const auto& s : t.sentences)
        top = std::max(top, max_var(s.formula));
    Normalizer norm(top + 1);
    std::vector<FormulaPtr> nnf;
    std::vector<NormalSentence> out;
    for (size_t i = 0; i < t.sentences.size(); ++i) {
        int own = 0;
        for (Var c : t.constants)
            own = std::max(own, c);
        own = std::max(own, max_var(t.sentences[i].formula));
        nnf.push_back(negation_normal_form(t.sentences[i].formula));
        for (auto& p : norm.run(nnf.back())) {
            NormalSentence n;
            n.source = static_cast<int>(i);
            std::vector<Var> used;
            for (Var v : p.universal)
                if (std::binary_search(p.body->free.begin(), p.body->free.end(), v))
                    used.push_back(v);
            for (Var v : p.body->free)
                if (std::find(used.begin(), used.end(), v) == used.end() &&
                    std::find(t.constants.begin(), t.constants.end(), v) == t.constants.end())
                    throw DomainError("sentence " + std::to_string(i) + " has a free variable x" + std::to_string(v));
            // renumber the universals just above the sentence's own variables,
            // keeping evaluation environments small
            int next = own + 1;
            std::map<Var, Var> s;
            for (Var v : used) {
                s[v] = next;
                n.universal.push_back(next++);
            }
            n.body = substitute(p.body, s);
            out.push_back(std::move(n));
        }
    }
    return out;
}

// ---- extended tables ----

std::string predicate_symbol(const TypeRef& t) { return "bf:" + t.str(); }

bool TableModel::predicate(const TypeRef& type, TupleView args) const
{
    const long long key = (static_cast<long long>(type.level) << 48) ^ (static_cast<long long>(type.arity) << 32) ^
                          static_cast<long long>(type.id);
    auto it = index_.find(key);
    if (it == index_.end())
        it = index_.emplace(key, s_.signature().find(predicate_symbol(type))).first;
    const int s = it->second;
    if (s < 0)
        throw DomainError("no table for extended predicate " + type.str());
    if (type.arity == 0)
        return s_.holds(s, Tuple{0}); // sentences are stored as constant unary tables
    return s_.holds(s, args);
}

// ---- Henkin construction ----

std::string status_name(BuildStatus s)
{
    switch (s) {
    case BuildStatus::AllHandled: return "all-handled";
    case BuildStatus::StageBudget: return "stage-budget";
    case BuildStatus::Exhausted: return "enumerator-exhausted";
    case BuildStatus::DomainBudget: return "domain-budget";
    }
    return "?";
}

namespace {

BuildStatus parse_status(const std::string& s)
{
    for (auto b : {BuildStatus::AllHandled, BuildStatus::StageBudget, BuildStatus::Exhausted, BuildStatus::DomainBudget})
        if (status_name(b) == s)
            return b;
    throw ParseError("unknown build status '" + s + "'");
}

// w restricted to the first s.size() elements equals s.
bool extends(const Structure& s, const Structure& w)
{
    if (w.size() < s.size() || !(w.signature() == s.signature()))
        return false;
    const Signature& sig = s.signature();
    for (int k = 0; k < sig.size(); ++k) {
        bool same = true;
        for_each_tuple(s.size(), sig[k].arity, [&](const Tuple& t) {
            if (same && s.holds(k, t) != w.holds(k, t))
                same = false;
        });
        if (!same)
            return false;
    }
    return true;
}

int tuple_max(const Tuple& t)
{
    int m = -1;
    for (int x : t)
        m = std::max(m, x);
    return m;
}

// Requirements over {0..n-1} from `from` on (inclusive), in the canonical
// order: by largest element (none first), then axiom, then tuple. f returns
// true to stop. Requirements over a domain keep their relative order when the
// domain grows, since new ones contain a new, larger element.
template <typename F>
void for_each_requirement(const std::vector<NormalSentence>& ns, int n, const std::optional<Requirement>& from, F&& f)
{
    const int m0 = from ? tuple_max(from->tuple) : -1;
    for (int m = m0; m < n; ++m)
        for (size_t i = 0; i < ns.size(); ++i) {
            if (from && m == m0 && static_cast<int>(i) < from->axiom)
                continue;
            const bool resume = from && m == m0 && static_cast<int>(i) == from->axiom;
            const int u = static_cast<int>(ns[i].universal.size());
            if ((u == 0) != (m < 0))
                continue;
            bool stop = false;
            for_each_tuple(m + 1, u, [&](const Tuple& t) {
                if (stop || (m >= 0 && tuple_max(t) != m) || (resume && t < from->tuple))
                    return;
                stop = f(Requirement{static_cast<int>(i), t});
            });
            if (stop)
                return;
        }
}

class Checker {
public:
    Checker(const std::vector<NormalSentence>& ns, const std::vector<Var>& constants, const Tuple& values)
        : ns_(ns), constants_(constants), values_(values)
    {
    }

    bool holds(Evaluator& ev, const Requirement& r) const
    {
        const NormalSentence& n = ns_.at(static_cast<size_t>(r.axiom));
        std::vector<Var> vars = constants_;
        vars.insert(vars.end(), n.universal.begin(), n.universal.end());
        Tuple vals = values_;
        vals.insert(vals.end(), r.tuple.begin(), r.tuple.end());
        return ev.eval(n.body, vars, vals);
    }

private:
    const std::vector<NormalSentence>& ns_;
    const std::vector<Var>& constants_;
    const Tuple& values_;
};

void check_constants(const Theory& t, const Tuple& constants, const Structure& seed)
{
    if (constants.size() != t.constants.size())
        throw DomainError("theory has " + std::to_string(t.constants.size()) + " constants but " +
                          std::to_string(constants.size()) + " values were given");
    check_tuple(seed, constants);
}

} // namespace

DiagramChain henkin_build(const Theory& t, const std::vector<Structure>& finite, const BuildBudget& budget,
                          int seed_index, const Tuple& constants)
{
    if (budget.max_stages < 1 || budget.max_domain < 1 || budget.enumerator_bound < 1)
        throw DomainError("build budgets must be positive");
    if (seed_index < 0 || seed_index >= static_cast<int>(finite.size()))
        throw DomainError("seed index " + std::to_string(seed_index) + " is outside the structure list");
    const auto ns = normalize(t);
    const Structure& seed = finite[static_cast<size_t>(seed_index)];
    check_constants(t, constants, seed);

    DiagramChain chain;
    chain.constants = constants;
    chain.stages.push_back({seed, std::nullopt, seed_index});
    if (seed.size() > budget.max_domain) {
        chain.status = BuildStatus::DomainBudget;
        return chain;
    }
    Checker check(ns, t.constants, constants);
    const size_t searched = std::min(finite.size(), static_cast<size_t>(budget.enumerator_bound));
    std::optional<Requirement> cursor; // every requirement before it is met, and stays met
    while (true) {
        const Structure& cur = chain.stages.back().structure;
        TableModel model(cur);
        Evaluator ev(model);
        std::optional<Requirement> unmet;
        for_each_requirement(ns, cur.size(), cursor, [&](const Requirement& r) {
            if (check.holds(ev, r))
                return false;
            unmet = r;
            return true;
        });
        if (!unmet) {
            chain.status = BuildStatus::AllHandled;
            return chain;
        }
        cursor = unmet;
        if (static_cast<int>(chain.stages.size()) > budget.max_stages) {
            chain.status = BuildStatus::StageBudget;
            chain.pending = unmet;
            return chain;
        }
        bool too_big = false;
        std::optional<int> found;
        for (size_t j = 0; j < searched && !found; ++j) {
            const Structure& w = finite[j];
            if (w.size() <= cur.size() || !extends(cur, w))
                continue;
            if (w.size() > budget.max_domain) {
                too_big = true;
                continue;
            }
            TableModel wm(w);
            Evaluator wev(wm);
            if (check.holds(wev, *unmet))
                found = static_cast<int>(j);
        }
        if (!found) {
            chain.status = too_big ? BuildStatus::DomainBudget : BuildStatus::Exhausted;
            chain.pending = unmet;
            return chain;
        }
        chain.stages.push_back({finite[static_cast<size_t>(*found)], unmet, *found});
    }
}

// ---- chain files ----

namespace {

std::string tuple_text(const Tuple& t) { return t.empty() ? "-" : format_tuple(t); }
Tuple tuple_of(const std::string& s) { return s == "-" ? Tuple{} : parse_tuple(s); }

} // namespace

std::string dump_chain(const DiagramChain& c)
{
    std::ostringstream out;
    out << "chain v1\n";
    out << "status " << status_name(c.status) << "\n";
    out << "constants " << tuple_text(c.constants) << "\n";
    if (c.pending)
        out << "pending " << c.pending->axiom << " " << tuple_text(c.pending->tuple) << "\n";
    for (size_t s = 0; s < c.stages.size(); ++s) {
        const ChainStage& st = c.stages[s];
        out << "stage " << s << " witness " << st.witness;
        if (st.handled)
            out << " handled " << st.handled->axiom << " " << tuple_text(st.handled->tuple);
        out << "\n" << serialize_structure(st.structure) << "end\n";
    }
    return out.str();
}

DiagramChain parse_chain(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next = [&] {
        ++lineno;
        return static_cast<bool>(std::getline(in, line));
    };
    if (!next() || line != "chain v1")
        throw ParseError("expected 'chain v1'", 1);
    DiagramChain c;
    while (next()) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        try {
            if (key == "status") {
                std::string v;
                ls >> v;
                c.status = parse_status(v);
            } else if (key == "constants") {
                std::string v;
                ls >> v;
                c.constants = tuple_of(v);
            } else if (key == "pending") {
                Requirement r;
                std::string v;
                if (!(ls >> r.axiom >> v))
                    throw ParseError("malformed pending line");
                r.tuple = tuple_of(v);
                c.pending = r;
            } else if (key == "stage") {
                size_t index = 0;
                std::string w, h;
                ChainStage st{Structure(Signature{}, 1), std::nullopt, 0};
                if (!(ls >> index >> w >> st.witness) || w != "witness" || index != c.stages.size())
                    throw ParseError("malformed stage header");
                if (ls >> h) {
                    Requirement r;
                    std::string v;
                    if (h != "handled" || !(ls >> r.axiom >> v))
                        throw ParseError("malformed stage header");
                    r.tuple = tuple_of(v);
                    st.handled = r;
                }
                const int start = lineno;
                std::string body;
                bool closed = false;
                while (next()) {
                    if (line == "end") {
                        closed = true;
                        break;
                    }
                    body += line + "\n";
                }
                if (!closed)
                    throw ParseError("stage without 'end'", start);
                try {
                    st.structure = parse_structure(body);
                } catch (const ParseError& e) {
                    throw ParseError(std::string("stage structure: ") + e.what(), start + e.line());
                }
                c.stages.push_back(std::move(st));
            } else {
                throw ParseError("unknown chain line '" + key + "'");
            }
        } catch (const ParseError& e) {
            if (e.line() > 0)
                throw;
            throw ParseError(e.what(), lineno);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (c.stages.empty())
        throw ParseError("chain has no stages", lineno);
    return c;
}

ChainAudit check_chain(const DiagramChain& c, const Theory& t)
{
    if (c.stages.empty())
        throw DomainError("chain has no stages");
    const auto ns = normalize(t);
    check_constants(t, c.constants, c.stages.front().structure);
    Checker check(ns, t.constants, c.constants);
    ChainAudit audit;
    std::vector<std::unique_ptr<TableModel>> models;
    std::vector<std::unique_ptr<Evaluator>> evs;
    for (const auto& st : c.stages) {
        models.push_back(std::make_unique<TableModel>(st.structure));
        evs.push_back(std::make_unique<Evaluator>(*models.back()));
    }
    for (size_t s = 1; s < c.stages.size(); ++s)
        if (!extends(c.stages[s - 1].structure, c.stages[s].structure))
            audit.violations.push_back("stage " + std::to_string(s) + " does not extend stage " +
                                       std::to_string(s - 1));
    for (size_t s = 1; s < c.stages.size(); ++s) {
        const auto& h = c.stages[s].handled;
        if (!h) {
            audit.violations.push_back("stage " + std::to_string(s) + " records no requirement");
            continue;
        }
        if (h->axiom < 0 || h->axiom >= static_cast<int>(ns.size()) ||
            h->tuple.size() != ns[static_cast<size_t>(h->axiom)].universal.size() ||
            tuple_max(h->tuple) >= c.stages[s - 1].structure.size()) {
            audit.violations.push_back("stage " + std::to_string(s) + " records a requirement outside the theory");
            continue;
        }
        for (size_t later = s; later < c.stages.size(); ++later)
            if (tuple_max(h->tuple) < c.stages[later].structure.size() && !check.holds(*evs[later], *h)) {
                audit.violations.push_back("requirement " + std::to_string(h->axiom) + " " + tuple_text(h->tuple) +
                                           " handled at stage " + std::to_string(s) + " fails at stage " +
                                           std::to_string(later));
                break;
            }
    }
    const Structure& fin = c.final_structure();
    for_each_requirement(ns, fin.size(), std::nullopt, [&](const Requirement& r) {
        ++audit.requirements;
        if (!check.holds(*evs.back(), r))
            audit.unhandled.push_back(r);
        return false;
    });
    return audit;
}

// ---- prescribed types ----

std::vector<TypeRef> mentioned_predicates(const Theory& t)
{
    std::set<TypeRef> seen;
    std::set<const Formula*> visited;
    std::vector<const Formula*> todo;
    for (const auto& s : t.sentences)
        todo.push_back(s.formula.get());
    while (!todo.empty()) {
        const Formula* f = todo.back();
        todo.pop_back();
        if (!visited.insert(f).second)
            continue;
        if (f->op == Op::Pred)
            seen.insert(f->type);
        for (const auto& k : f->kids)
            todo.push_back(k.get());
    }
    return {seen.begin(), seen.end()};
}

namespace {

// The prefix of tau that should equal sigma.
TypeRef prefix_type(const BfStructure& b, const TypeRef& tau, const TypeRef& sigma)
{
    std::vector<int> iota(static_cast<size_t>(sigma.arity));
    for (int i = 0; i < sigma.arity; ++i)
        iota[static_cast<size_t>(i)] = i + 1;
    TypeRef p = b.perm.at({tau, iota});
    return p.level == sigma.level ? p : b.proj.at({p, sigma.level});
}

// Extended tables of tuples of one member, by the tuple's type at each level.
class AmbientTypes {
public:
    AmbientTypes(BfContext& ctx, const Structure& a) : ctx_(ctx), a_(a) {}

    const TypeRef& type(int level, const Tuple& t)
    {
        auto key = std::make_pair(level, t);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        auto found = ctx_.type_of(level, a_, t);
        if (!found)
            throw DomainError("no stored level-" + std::to_string(level) + " type of arity " +
                              std::to_string(t.size()) + " matches a tuple of a class member");
        return cache_.emplace(std::move(key), *found).first->second;
    }

private:
    BfContext& ctx_;
    const Structure& a_;
    std::map<std::pair<int, Tuple>, TypeRef> cache_;
};

} // namespace

std::vector<Structure> typed_diagrams(BfContext& ctx, const TypeRef& sigma, const std::vector<TypeRef>& predicates,
                                      Tuple* constants)
{
    const BfStructure& b = ctx.bfs();
    if (!b.contains(sigma))
        throw DomainError("type " + sigma.str() + " is not in the bf-structure");
    if (sigma.arity > b.arity_bound)
        throw DomainError("type arity exceeds the stored arity bound");
    std::vector<Symbol> symbols = ctx.signature().symbols();
    const int base = static_cast<int>(symbols.size());
    for (const TypeRef& p : predicates) {
        if (!b.contains(p))
            throw DomainError("type " + p.str() + " is not in the bf-structure");
        symbols.push_back({predicate_symbol(p), std::max(p.arity, 1)});
    }
    const Signature sig(symbols);

    std::map<const Structure*, std::unique_ptr<AmbientTypes>> ambient;
    std::set<std::pair<const Structure*, Tuple>> seen;
    std::vector<Structure> out;
    bool have_constants = false;
    for (int arity = std::max(sigma.arity, 1); arity <= b.arity_bound; ++arity)
        for (int id = 0; id < b.count(b.levels, arity); ++id) {
            const TypeRef tau{b.levels, arity, id};
            if (prefix_type(b, tau, sigma) != sigma)
                continue;
            const Structure& a = ctx.rep_structure(tau);
            const Tuple& rep = ctx.rep_tuple(tau);
            Tuple elems;
            for (int x : rep)
                if (std::find(elems.begin(), elems.end(), x) == elems.end())
                    elems.push_back(x);
            if (!seen.insert({&a, elems}).second)
                continue;
            if (!have_constants) {
                Tuple c;
                for (int i = 0; i < sigma.arity; ++i)
                    c.push_back(static_cast<int>(std::find(elems.begin(), elems.end(), rep[static_cast<size_t>(i)]) -
                                                 elems.begin()));
                if (constants)
                    *constants = c;
                have_constants = true;
            }
            auto& types = ambient[&a];
            if (!types)
                types = std::make_unique<AmbientTypes>(ctx, a);
            const int n = static_cast<int>(elems.size());
            Structure m(sig, n);
            for (int s = 0; s < base; ++s)
                for_each_tuple(n, sig[s].arity, [&](const Tuple& t) {
                    Tuple mapped;
                    for (int i : t)
                        mapped.push_back(elems[static_cast<size_t>(i)]);
                    if (a.holds(s, mapped))
                        m.set(s, t);
                });
            for (size_t p = 0; p < predicates.size(); ++p) {
                const TypeRef& rho = predicates[p];
                if (rho.arity == 0) {
                    if (b.leq_holds(rho, types->type(rho.level, Tuple{})))
                        for (int x = 0; x < n; ++x)
                            m.set(base + static_cast<int>(p), Tuple{x});
                    continue;
                }
                for_each_tuple(n, rho.arity, [&](const Tuple& t) {
                    Tuple mapped;
                    for (int i : t)
                        mapped.push_back(elems[static_cast<size_t>(i)]);
                    if (b.leq_holds(rho, types->type(rho.level, mapped)))
                        m.set(base + static_cast<int>(p), t);
                });
            }
            out.push_back(std::move(m));
        }
    return out;
}

TypedBuild build_with_type(BfContext& ctx, const TypeRef& sigma, const BuildBudget& budget, int max_arity)
{
    Theory t = t_alpha_sigma(ctx, sigma, max_arity);
    Tuple constants;
    std::vector<Structure> finite = typed_diagrams(ctx, sigma, mentioned_predicates(t), &constants);
    if (finite.empty())
        throw DomainError("no stored type extends " + sigma.str());
    TypedBuild out{Structure(ctx.signature(), 1), constants, henkin_build(t, finite, budget, 0, constants)};
    out.structure = restrict(out.chain.final_structure(), ctx.signature().size());
    return out;
}

} // namespace bnf
