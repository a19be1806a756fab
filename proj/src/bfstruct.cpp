#include "bnf/bfstruct.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bnf/error.hpp"

namespace bnf {

bool BfStructure::contains(const TypeRef& t) const
{
    auto it = types.find({t.level, t.arity});
    return it != types.end() && t.id >= 0 && t.id < static_cast<int>(it->second.size());
}

int BfStructure::count(int level, int arity) const
{
    auto it = types.find({level, arity});
    return it == types.end() ? 0 : static_cast<int>(it->second.size());
}

int BfStructure::max_arity(int level) const
{
    int m = -1;
    for (const auto& [key, v] : types)
        if (key.first == level)
            m = std::max(m, key.second);
    return m;
}

std::vector<TypeRef> BfStructure::all_types() const
{
    std::vector<TypeRef> out;
    for (const auto& [key, v] : types)
        for (int i = 0; i < static_cast<int>(v.size()); ++i)
            out.push_back({key.first, key.second, i});
    return out;
}

std::vector<TypeRef> BfStructure::ext_at(const TypeRef& sigma, int beta) const
{
    std::vector<TypeRef> out;
    auto it = ext.find(sigma);
    if (it == ext.end())
        return out;
    for (const TypeRef& t : it->second)
        if (t.level == beta)
            out.push_back(t);
    return out;
}

std::vector<std::vector<int>> index_maps(int l)
{
    std::vector<std::vector<int>> out;
    for (int j = 0; j <= l; ++j)
        for_each_tuple(l, j, [&](const Tuple& t) {
            std::vector<int> iota;
            for (int x : t)
                iota.push_back(x + 1);
            out.push_back(iota);
        });
    return out;
}

std::string format_iota(const std::vector<int>& iota)
{
    if (iota.empty())
        return "-";
    std::string out;
    for (size_t i = 0; i < iota.size(); ++i)
        out += (i ? "," : "") + std::to_string(iota[i]);
    return out;
}

std::vector<int> parse_iota(const std::string& text)
{
    if (text == "-")
        return {};
    std::vector<int> out;
    for (int x : parse_tuple(text)) {
        if (x < 1)
            throw ParseError("index map entries are 1-based");
        out.push_back(x);
    }
    return out;
}

BfStructure assemble(TypeCatalog& catalog, int levels, int arity_bound)
{
    if (levels < 0 || arity_bound < 0)
        throw DomainError("levels and arity bound must be >= 0");
    BfStructure b;
    b.levels = levels;
    b.arity_bound = arity_bound;
    b.class_spec = catalog.spec().str();
    const int e = catalog.extension_bound();
    auto max_arity = [&](int beta) { return arity_bound + (levels - beta) * e; };

    for (int beta = 0; beta <= levels; ++beta)
        for (int k = 0; k <= max_arity(beta); ++k) {
            const BfLevel& lvl = catalog.level(beta, k);
            auto& reps = b.types[{beta, k}];
            for (const BfType& t : lvl.types)
                reps.push_back({t.rep_struct, t.rep_tuple});
            for (int i = 0; i < lvl.size(); ++i)
                for (int j = 0; j < lvl.size(); ++j)
                    if (lvl.leq(i, j))
                        b.leq.insert({{beta, k, i}, {beta, k, j}});
        }

    for (const TypeRef& sigma : b.all_types()) {
        for (int gamma = 0; gamma < sigma.level; ++gamma) {
            b.proj[{sigma, gamma}] = catalog.project(sigma, gamma);
            for (const TypeRef& t : catalog.ext_set(sigma, gamma))
                b.ext[sigma].insert(t);
        }
        if (sigma.arity <= arity_bound)
            for (const auto& iota : index_maps(sigma.arity))
                b.perm[{sigma, iota}] = catalog.permute(sigma, iota);
        if (sigma.level == 0) {
            const BfType& t = catalog.type(sigma);
            const Structure& s = catalog.members()[static_cast<size_t>(t.rep_struct)];
            b.diag[sigma] = diagram_string(atomic_diagram(s, t.rep_tuple), s.signature());
        }
    }
    return b;
}

BfStructure assemble(const ClassSpec& spec, int levels, int arity_bound)
{
    TypeCatalog catalog(spec);
    return assemble(catalog, levels, arity_bound);
}

// ---- text form ----

namespace {

std::string ref_text(const TypeRef& t) { return t.str(); }

std::string tuple_text(const Tuple& t) { return t.empty() ? "-" : format_tuple(t); }

} // namespace

std::string serialize(const BfStructure& b)
{
    std::ostringstream out;
    out << "bfstruct v1\n"
        << "levels " << b.levels << "\n"
        << "aritybound " << b.arity_bound << "\n"
        << "class " << b.class_spec << "\n";
    for (const auto& [key, reps] : b.types)
        for (size_t i = 0; i < reps.size(); ++i)
            out << "type " << key.first << " " << key.second << " " << i << " rep " << reps[i].structure << " "
                << tuple_text(reps[i].tuple) << "\n";
    for (const auto& [x, y] : b.leq)
        out << "leq " << x.level << " " << x.arity << " " << x.id << " " << y.id << "\n";
    for (const auto& [key, to] : b.proj)
        out << "proj " << ref_text(key.first) << " " << key.second << " " << ref_text(to) << "\n";
    for (const auto& [key, to] : b.perm)
        out << "perm " << ref_text(key.first) << " " << format_iota(key.second) << " " << ref_text(to) << "\n";
    for (const auto& [sigma, taus] : b.ext)
        for (const TypeRef& tau : taus)
            out << "ext " << tau.level << " " << ref_text(tau) << " " << ref_text(sigma) << "\n";
    for (const auto& [t, d] : b.diag)
        out << "diag " << ref_text(t) << " " << d << "\n";
    return out.str();
}

BfStructure deserialize(const std::string& text)
{
    BfStructure b;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    // type lines may come in any order; ids are checked for density afterwards
    std::map<std::pair<int, int>, std::map<int, TypeRep>> typed;
    struct Pending {
        int line;
        std::vector<TypeRef> refs;
    };
    std::vector<Pending> pending;

    auto need = [&](std::istringstream& ls, auto& value, const char* what) {
        if (!(ls >> value))
            throw ParseError(std::string("missing or malformed ") + what, lineno);
    };
    auto ref = [&](std::istringstream& ls) {
        std::string s;
        need(ls, s, "type reference");
        try {
            return TypeRef::parse(s);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (!header) {
            std::string v;
            ls >> v;
            if (kw != "bfstruct" || v != "v1")
                throw ParseError("expected header 'bfstruct v1'", lineno);
            header = true;
            continue;
        }
        if (kw == "levels") {
            need(ls, b.levels, "level count");
        } else if (kw == "aritybound") {
            need(ls, b.arity_bound, "arity bound");
        } else if (kw == "class") {
            need(ls, b.class_spec, "class spec");
        } else if (kw == "type") {
            int level, arity, id;
            std::string rep, tuple;
            TypeRep r;
            need(ls, level, "level");
            need(ls, arity, "arity");
            need(ls, id, "type id");
            need(ls, rep, "'rep'");
            need(ls, r.structure, "structure index");
            need(ls, tuple, "tuple");
            if (rep != "rep" || level < 0 || arity < 0 || id < 0)
                throw ParseError("malformed type line", lineno);
            if (tuple != "-") {
                try {
                    r.tuple = parse_tuple(tuple);
                } catch (const Error& e) {
                    throw ParseError(e.what(), lineno);
                }
            }
            if (static_cast<int>(r.tuple.size()) != arity)
                throw ParseError("representative tuple does not have the type's arity", lineno);
            if (!typed[{level, arity}].emplace(id, r).second)
                throw ParseError("duplicate type " + TypeRef{level, arity, id}.str(), lineno);
        } else if (kw == "leq") {
            int level, arity, a, c;
            need(ls, level, "level");
            need(ls, arity, "arity");
            need(ls, a, "type id");
            need(ls, c, "type id");
            TypeRef x{level, arity, a}, y{level, arity, c};
            b.leq.insert({x, y});
            pending.push_back({lineno, {x, y}});
        } else if (kw == "proj") {
            TypeRef from = ref(ls);
            int beta;
            need(ls, beta, "level");
            TypeRef to = ref(ls);
            if (beta >= from.level || to.level != beta || to.arity != from.arity)
                throw ParseError("projection target does not fit its source", lineno);
            b.proj[{from, beta}] = to;
            pending.push_back({lineno, {from, to}});
        } else if (kw == "perm") {
            TypeRef from = ref(ls);
            std::string iota_text;
            need(ls, iota_text, "index map");
            std::vector<int> iota;
            try {
                iota = parse_iota(iota_text);
            } catch (const Error& e) {
                throw ParseError(e.what(), lineno);
            }
            TypeRef to = ref(ls);
            for (int i : iota)
                if (i > from.arity)
                    throw ParseError("index map entry exceeds the source arity", lineno);
            if (to.level != from.level || to.arity != static_cast<int>(iota.size()))
                throw ParseError("permutation target does not fit its index map", lineno);
            b.perm[{from, iota}] = to;
            pending.push_back({lineno, {from, to}});
        } else if (kw == "ext") {
            int beta;
            need(ls, beta, "level");
            TypeRef tau = ref(ls), sigma = ref(ls);
            if (tau.level != beta || beta >= sigma.level || tau.arity < sigma.arity)
                throw ParseError("ext edge does not fit its types", lineno);
            b.ext[sigma].insert(tau);
            pending.push_back({lineno, {tau, sigma}});
        } else if (kw == "diag") {
            TypeRef t = ref(ls);
            std::string d;
            need(ls, d, "diagram");
            if (t.level != 0)
                throw ParseError("diagrams belong to level-0 types", lineno);
            b.diag[t] = d;
            pending.push_back({lineno, {t}});
        } else {
            throw ParseError("unknown line kind '" + kw + "'", lineno);
        }
    }
    if (!header)
        throw ParseError("empty bf-structure file");
    for (auto& [key, byid] : typed) {
        auto& reps = b.types[key];
        for (auto& [id, r] : byid) {
            if (id != static_cast<int>(reps.size()))
                throw ParseError("type ids of level " + std::to_string(key.first) + " arity " +
                                 std::to_string(key.second) + " are not dense");
            reps.push_back(std::move(r));
        }
    }
    for (const auto& p : pending)
        for (const TypeRef& t : p.refs)
            if (!b.contains(t))
                throw ParseError("reference to unknown type " + t.str(), p.line);
    return b;
}

BfStructure load_bfstruct(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read bf-structure file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

void save_bfstruct(const BfStructure& b, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write bf-structure file '" + path + "'");
    out << serialize(b);
}

} // namespace bnf
