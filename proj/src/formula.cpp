#include "bnf/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "bnf/error.hpp"

namespace bnf {

namespace {

std::shared_ptr<Formula> node(Op op)
{
    auto f = std::make_shared<Formula>();
    f->op = op;
    return f;
}

void set_free(Formula& f)
{
    std::vector<Var> out;
    switch (f.op) {
    case Op::Atom:
    case Op::Eq:
    case Op::Pred:
        out = f.vars;
        break;
    case Op::Forall:
    case Op::Exists:
        for (Var v : f.kids[0]->free)
            if (std::find(f.vars.begin(), f.vars.end(), v) == f.vars.end())
                out.push_back(v);
        break;
    default:
        for (const auto& k : f.kids)
            out.insert(out.end(), k->free.begin(), k->free.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    f.free = std::move(out);
}

FormulaPtr finish(std::shared_ptr<Formula> f)
{
    for (const auto& k : f->kids)
        if (!k)
            throw DomainError("null subformula");
    set_free(*f);
    return f;
}

FormulaPtr many(Op op, std::vector<FormulaPtr> kids)
{
    auto f = node(op);
    f->kids = std::move(kids);
    return finish(f);
}

void check_vars(const std::vector<Var>& vars)
{
    for (Var v : vars)
        if (v < 0)
            throw DomainError("negative variable index");
}

} // namespace

FormulaPtr f_true()
{
    static const FormulaPtr t = finish(node(Op::True));
    return t;
}

FormulaPtr f_false()
{
    static const FormulaPtr f = finish(node(Op::False));
    return f;
}

FormulaPtr f_atom(std::string symbol, std::vector<Var> args)
{
    check_vars(args);
    auto f = node(Op::Atom);
    f->symbol = std::move(symbol);
    f->vars = std::move(args);
    return finish(f);
}

FormulaPtr f_eq(Var a, Var b)
{
    auto f = node(Op::Eq);
    f->vars = {a, b};
    check_vars(f->vars);
    return finish(f);
}

FormulaPtr f_pred(const TypeRef& type, std::vector<Var> args)
{
    if (static_cast<int>(args.size()) != type.arity)
        throw DomainError("predicate " + type.str() + " applied to " + std::to_string(args.size()) + " arguments");
    check_vars(args);
    auto f = node(Op::Pred);
    f->type = type;
    f->vars = std::move(args);
    return finish(f);
}

FormulaPtr f_not(FormulaPtr a) { return many(Op::Not, {std::move(a)}); }
FormulaPtr f_and(std::vector<FormulaPtr> kids) { return many(Op::And, std::move(kids)); }
FormulaPtr f_or(std::vector<FormulaPtr> kids) { return many(Op::Or, std::move(kids)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return many(Op::Implies, {std::move(a), std::move(b)}); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return many(Op::Iff, {std::move(a), std::move(b)}); }
FormulaPtr f_bigand(std::vector<FormulaPtr> kids) { return many(Op::BigAnd, std::move(kids)); }
FormulaPtr f_bigor(std::vector<FormulaPtr> kids) { return many(Op::BigOr, std::move(kids)); }

FormulaPtr f_forall(std::vector<Var> vars, FormulaPtr body)
{
    check_vars(vars);
    auto f = node(Op::Forall);
    f->vars = std::move(vars);
    f->kids = {std::move(body)};
    return finish(f);
}

FormulaPtr f_exists(std::vector<Var> vars, FormulaPtr body)
{
    check_vars(vars);
    auto f = node(Op::Exists);
    f->vars = std::move(vars);
    f->kids = {std::move(body)};
    return finish(f);
}

std::vector<Var> var_range(int first, int count)
{
    std::vector<Var> v;
    for (int i = 0; i < count; ++i)
        v.push_back(first + i);
    return v;
}

// ---- rank classification ----

std::string RankClass::str() const
{
    switch (kind) {
    case RankKind::DeltaAtomic: return "atomic";
    case RankKind::Sigma: return "Sigma" + std::to_string(level);
    case RankKind::Pi: return "Pi" + std::to_string(level);
    }
    return "?";
}

namespace {

// Least n with f in Sigma_n, least n with f in Pi_n.
std::pair<int, int> levels(const Formula& f)
{
    switch (f.op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Eq:
    case Op::Pred:
        return {0, 0};
    case Op::Not: {
        auto [s, p] = levels(*f.kids[0]);
        return {p, s};
    }
    case Op::And:
    case Op::Or: {
        int s = 0, p = 0;
        for (const auto& k : f.kids) {
            auto [ks, kp] = levels(*k);
            s = std::max(s, ks);
            p = std::max(p, kp);
        }
        return {s, p};
    }
    case Op::Implies: {
        auto [as, ap] = levels(*f.kids[0]);
        auto [bs, bp] = levels(*f.kids[1]);
        return {std::max(ap, bs), std::max(as, bp)};
    }
    case Op::Iff: {
        auto [as, ap] = levels(*f.kids[0]);
        auto [bs, bp] = levels(*f.kids[1]);
        int m = std::max({as, ap, bs, bp});
        return {m, m};
    }
    case Op::BigAnd:
    case Op::Forall: {
        int p = 1;
        for (const auto& k : f.kids)
            p = std::max(p, levels(*k).second);
        return {p + 1, p};
    }
    case Op::BigOr:
    case Op::Exists: {
        int s = 1;
        for (const auto& k : f.kids)
            s = std::max(s, levels(*k).first);
        return {s, s + 1};
    }
    }
    throw DomainError("malformed formula");
}

} // namespace

RankClass classify(const FormulaPtr& f)
{
    if (!f)
        throw DomainError("null formula");
    auto [s, p] = levels(*f);
    if (s == 0 && p == 0)
        return {RankKind::DeltaAtomic, 0};
    if (p <= s)
        return {RankKind::Pi, p};
    return {RankKind::Sigma, s};
}

bool within_pi(const FormulaPtr& f, int n) { return levels(*f).second <= n; }

// ---- text format ----

namespace {

std::string var_name(Var v) { return "x" + std::to_string(v); }

void print(const Formula& f, std::string& out)
{
    auto vars = [&](const std::vector<Var>& vs) {
        for (Var v : vs)
            out += " " + var_name(v);
    };
    auto kids = [&](const char* head) {
        out += "(";
        out += head;
        for (const auto& k : f.kids) {
            out += " ";
            print(*k, out);
        }
        out += ")";
    };
    switch (f.op) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom:
        out += "(atom " + f.symbol;
        vars(f.vars);
        out += ")";
        return;
    case Op::Eq:
        out += "(=";
        vars(f.vars);
        out += ")";
        return;
    case Op::Pred:
        out += "(bftype " + std::to_string(f.type.level) + " " + std::to_string(f.type.arity) + " " +
               std::to_string(f.type.id);
        vars(f.vars);
        out += ")";
        return;
    case Op::Not: kids("not"); return;
    case Op::And: kids("and"); return;
    case Op::Or: kids("or"); return;
    case Op::Implies: kids("implies"); return;
    case Op::Iff: kids("iff"); return;
    case Op::BigAnd: kids("bigand"); return;
    case Op::BigOr: kids("bigor"); return;
    case Op::Forall:
    case Op::Exists:
        out += f.op == Op::Forall ? "(forall (" : "(exists (";
        for (size_t i = 0; i < f.vars.size(); ++i)
            out += (i ? " " : "") + var_name(f.vars[i]);
        out += ") ";
        print(*f.kids[0], out);
        out += ")";
        return;
    }
}

class Reader {
public:
    explicit Reader(const std::string& text)
    {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty())
                tokens_.push_back(cur);
            cur.clear();
        };
        for (char c : text) {
            if (c == '(' || c == ')') {
                flush();
                tokens_.emplace_back(1, c);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else {
                cur.push_back(c);
            }
        }
        flush();
    }

    FormulaPtr formula()
    {
        std::string t = take();
        if (t == "true")
            return f_true();
        if (t == "false")
            return f_false();
        if (t != "(")
            throw ParseError("expected '(' but found '" + t + "'");
        std::string head = take();
        FormulaPtr out;
        if (head == "atom") {
            std::string sym = take();
            out = f_atom(sym, var_list());
        } else if (head == "=") {
            auto vs = var_list();
            if (vs.size() != 2)
                throw ParseError("equality takes two variables");
            out = f_eq(vs[0], vs[1]);
        } else if (head == "bftype") {
            TypeRef r{number(), number(), number()};
            out = f_pred(r, var_list());
        } else if (head == "forall" || head == "exists") {
            expect("(");
            auto vs = var_list();
            expect(")");
            FormulaPtr body = formula();
            out = head == "forall" ? f_forall(vs, body) : f_exists(vs, body);
        } else {
            std::vector<FormulaPtr> kids;
            while (peek() != ")")
                kids.push_back(formula());
            if (head == "not" && kids.size() == 1)
                out = f_not(kids[0]);
            else if (head == "and")
                out = f_and(kids);
            else if (head == "or")
                out = f_or(kids);
            else if (head == "bigand")
                out = f_bigand(kids);
            else if (head == "bigor")
                out = f_bigor(kids);
            else if (head == "implies" && kids.size() == 2)
                out = f_implies(kids[0], kids[1]);
            else if (head == "iff" && kids.size() == 2)
                out = f_iff(kids[0], kids[1]);
            else
                throw ParseError("unknown or malformed connective '" + head + "'");
        }
        expect(")");
        return out;
    }

    bool done() const { return pos_ == tokens_.size(); }

private:
    std::string take()
    {
        if (pos_ >= tokens_.size())
            throw ParseError("unexpected end of formula");
        return tokens_[pos_++];
    }
    const std::string& peek()
    {
        if (pos_ >= tokens_.size())
            throw ParseError("unexpected end of formula");
        return tokens_[pos_];
    }
    void expect(const char* t)
    {
        std::string got = take();
        if (got != t)
            throw ParseError(std::string("expected '") + t + "' but found '" + got + "'");
    }
    int number()
    {
        std::string t = take();
        try {
            size_t used = 0;
            int v = std::stoi(t, &used);
            if (used == t.size() && v >= 0)
                return v;
        } catch (const std::exception&) {
        }
        throw ParseError("expected a number but found '" + t + "'");
    }
    std::vector<Var> var_list()
    {
        std::vector<Var> out;
        while (peek() != ")")
            out.push_back(variable(take()));
        return out;
    }
    Var variable(const std::string& name)
    {
        if (name == "(")
            throw ParseError("expected a variable");
        if (name.size() > 1 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return std::stoi(name.substr(1));
        // other names get fresh high indices in order of appearance
        auto it = named_.find(name);
        if (it != named_.end())
            return it->second;
        Var v = 100000 + static_cast<Var>(named_.size());
        named_.emplace(name, v);
        return v;
    }

    std::vector<std::string> tokens_;
    size_t pos_ = 0;
    std::map<std::string, Var> named_;
};

} // namespace

std::string to_text(const FormulaPtr& f)
{
    std::string out;
    print(*f, out);
    return out;
}

FormulaPtr parse_formula(const std::string& text)
{
    Reader r(text);
    FormulaPtr f = r.formula();
    if (!r.done())
        throw ParseError("trailing input after formula");
    return f;
}

// ---- evaluation ----

bool Model::predicate(const TypeRef& type, TupleView) const
{
    throw DomainError("model has no extended predicate " + type.str());
}

int Evaluator::symbol_index(const Formula& f)
{
    auto it = symbols_.find(&f);
    if (it != symbols_.end())
        return it->second;
    int idx = model_.signature().find(f.symbol);
    if (idx < 0)
        throw DomainError("unknown relation symbol '" + f.symbol + "'");
    if (model_.signature()[idx].arity != static_cast<int>(f.vars.size()))
        throw DomainError("relation '" + f.symbol + "' applied with wrong arity");
    symbols_.emplace(&f, idx);
    return idx;
}

bool Evaluator::eval(const FormulaPtr& f, const std::vector<int>& env)
{
    std::vector<int> e = env;
    return start(f, e);
}

bool Evaluator::eval(const FormulaPtr& f, const std::vector<Var>& vars, TupleView values)
{
    if (vars.size() != values.size())
        throw DomainError("assignment length mismatch");
    Var top = f->free.empty() ? 0 : f->free.back();
    for (Var v : vars)
        top = std::max(top, v);
    std::vector<int> env(static_cast<size_t>(top) + 1, -1);
    for (size_t i = 0; i < vars.size(); ++i) {
        if (values[i] < 0 || values[i] >= model_.size())
            throw DomainError("assigned element out of range");
        env[static_cast<size_t>(vars[i])] = values[i];
    }
    return start(f, env);
}

bool Evaluator::start(const FormulaPtr& f, std::vector<int>& env)
{
    for (Var v : f->free)
        if (v >= static_cast<int>(env.size()) || env[static_cast<size_t>(v)] < 0)
            throw DomainError("unbound variable " + var_name(v));
    // Memo keys hold node addresses, so evaluated formulas stay alive.
    if (memoize_ && pinned_.insert(f.get()).second)
        pins_.push_back(f);
    return run(*f, env);
}

bool Evaluator::run(const Formula& f, std::vector<int>& env)
{
    auto value = [&](Var v) { return env[static_cast<size_t>(v)]; };
    switch (f.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Eq: return value(f.vars[0]) == value(f.vars[1]);
    case Op::Atom:
    case Op::Pred: {
        std::array<int, 16> small;
        Tuple large;
        int* out = small.data();
        if (f.vars.size() > small.size()) {
            large.resize(f.vars.size());
            out = large.data();
        }
        for (size_t i = 0; i < f.vars.size(); ++i)
            out[i] = value(f.vars[i]);
        TupleView args(out, f.vars.size());
        if (f.op == Op::Atom)
            return model_.atom(symbol_index(f), args);
        return model_.predicate(f.type, args);
    }
    case Op::Not: return !run(*f.kids[0], env);
    case Op::And:
    case Op::BigAnd:
        for (const auto& k : f.kids)
            if (!run(*k, env))
                return false;
        return true;
    case Op::Or:
    case Op::BigOr:
        for (const auto& k : f.kids)
            if (run(*k, env))
                return true;
        return false;
    case Op::Implies: return !run(*f.kids[0], env) || run(*f.kids[1], env);
    case Op::Iff: return run(*f.kids[0], env) == run(*f.kids[1], env);
    case Op::Forall:
    case Op::Exists: {
        std::string key;
        if (memoize_) {
            const Formula* p = &f;
            key.assign(reinterpret_cast<const char*>(&p), sizeof p);
            for (Var v : f.free) {
                int x = value(v);
                key.push_back(static_cast<char>(x & 0xff));
                key.push_back(static_cast<char>(x >> 8));
            }
            auto it = memo_.find(key);
            if (it != memo_.end())
                return it->second;
        }
        Var top = 0;
        for (Var v : f.vars)
            top = std::max(top, v);
        if (static_cast<size_t>(top) >= env.size())
            env.resize(static_cast<size_t>(top) + 1, -1);
        std::vector<int> saved;
        for (Var v : f.vars)
            saved.push_back(value(v));
        bool r = quantified(f, env, 0);
        for (size_t i = 0; i < f.vars.size(); ++i)
            env[static_cast<size_t>(f.vars[i])] = saved[i];
        if (memoize_)
            memo_.emplace(std::move(key), r);
        return r;
    }
    }
    throw DomainError("malformed formula");
}

bool Evaluator::quantified(const Formula& f, std::vector<int>& env, size_t pos)
{
    if (pos == f.vars.size())
        return run(*f.kids[0], env);
    const bool universal = f.op == Op::Forall;
    for (int x = 0; x < model_.size(); ++x) {
        env[static_cast<size_t>(f.vars[pos])] = x;
        if (quantified(f, env, pos + 1) != universal)
            return !universal;
    }
    return universal;
}

// ---- theories ----

void Theory::add(FormulaPtr f, std::string schema)
{
    for (Var v : f->free)
        if (std::find(constants.begin(), constants.end(), v) == constants.end())
            throw DomainError("sentence has free variable x" + std::to_string(v));
    sentences.push_back({std::move(f), std::move(schema)});
}

std::string theory_to_text(const Theory& t)
{
    std::string out = "theory " + (t.name.empty() ? std::string("unnamed") : t.name) + "\n";
    if (!t.constants.empty()) {
        out += "constants";
        for (Var v : t.constants)
            out += " " + var_name(v);
        out += "\n";
    }
    for (const auto& s : t.sentences) {
        if (!s.schema.empty())
            out += "# schema: " + s.schema + "\n";
        out += to_text(s.formula) + "\n";
    }
    return out;
}

Theory parse_theory(const std::string& text)
{
    Theory t;
    std::istringstream in(text);
    std::string line, schema;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos)
            continue;
        line = line.substr(start);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        if (line.rfind("# schema:", 0) == 0) {
            schema = line.substr(9);
            schema.erase(0, schema.find_first_not_of(' '));
            continue;
        }
        if (line[0] == '#')
            continue;
        try {
            if (line.rfind("theory ", 0) == 0) {
                t.name = line.substr(7);
            } else if (line.rfind("constants", 0) == 0) {
                FormulaPtr probe = parse_formula("(atom c " + line.substr(9) + ")");
                t.constants = probe->vars;
            } else {
                t.add(parse_formula(line), schema);
                schema.clear();
            }
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return t;
}

Theory load_theory(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read theory file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_theory(ss.str());
}

void save_theory(const Theory& t, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write theory file '" + path + "'");
    out << theory_to_text(t);
}

} // namespace bnf
