#include "bnf/structure.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bnf/error.hpp"

namespace bnf {

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols))
{
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity < 1)
            throw DomainError("symbol '" + s.name + "' must have arity >= 1");
        if (s.name.empty())
            throw DomainError("empty symbol name");
        if (!seen.insert(s.name).second)
            throw DomainError("duplicate symbol '" + s.name + "'");
    }
}

int Signature::find(std::string_view name) const
{
    for (int i = 0; i < size(); ++i)
        if (symbols_[static_cast<size_t>(i)].name == name)
            return i;
    return -1;
}

Signature Signature::prefix(int k) const
{
    k = std::clamp(k, 0, size());
    return Signature(std::vector<Symbol>(symbols_.begin(), symbols_.begin() + k));
}

namespace {

size_t ipow(size_t base, int exp)
{
    size_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

} // namespace

Structure::Structure(Signature signature, int size) : signature_(std::move(signature)), size_(size)
{
    if (size < 1)
        throw DomainError("structures must have a nonempty domain");
    for (const auto& s : signature_.symbols()) {
        size_t cells = ipow(static_cast<size_t>(size), s.arity);
        if (cells > (size_t{1} << 26))
            throw DomainError("relation table too large for symbol '" + s.name + "'");
        tables_.emplace_back(cells, 0);
    }
}

size_t Structure::offset(TupleView args) const
{
    size_t off = 0;
    for (int x : args)
        off = off * static_cast<size_t>(size_) + static_cast<size_t>(x);
    return off;
}

bool Structure::holds(int symbol, TupleView args) const
{
    return tables_[static_cast<size_t>(symbol)][offset(args)] != 0;
}

void Structure::set(int symbol, TupleView args, bool value)
{
    if (symbol < 0 || symbol >= signature_.size())
        throw DomainError("unknown symbol index");
    if (static_cast<int>(args.size()) != signature_[symbol].arity)
        throw DomainError("arity mismatch for '" + signature_[symbol].name + "'");
    for (int x : args)
        if (x < 0 || x >= size_)
            throw DomainError("element " + std::to_string(x) + " out of range");
    tables_[static_cast<size_t>(symbol)][offset(args)] = value ? 1 : 0;
}

std::vector<Tuple> Structure::facts(int symbol) const
{
    std::vector<Tuple> out;
    const int arity = signature_[symbol].arity;
    const auto& t = tables_[static_cast<size_t>(symbol)];
    for (size_t off = 0; off < t.size(); ++off) {
        if (!t[off])
            continue;
        Tuple args(static_cast<size_t>(arity));
        size_t rest = off;
        for (int i = arity - 1; i >= 0; --i) {
            args[static_cast<size_t>(i)] = static_cast<int>(rest % static_cast<size_t>(size_));
            rest /= static_cast<size_t>(size_);
        }
        out.push_back(std::move(args));
    }
    return out;
}

std::string Structure::encoding() const
{
    std::string out;
    for (const auto& t : tables_)
        for (auto b : t)
            out.push_back(b ? '1' : '0');
    return out;
}

Structure Structure::induced(TupleView elements) const
{
    Structure out(signature_, static_cast<int>(elements.size()));
    for (int s = 0; s < signature_.size(); ++s) {
        const int arity = signature_[s].arity;
        Tuple local(static_cast<size_t>(arity), 0), global(static_cast<size_t>(arity));
        while (true) {
            for (int i = 0; i < arity; ++i)
                global[static_cast<size_t>(i)] = elements[static_cast<size_t>(local[static_cast<size_t>(i)])];
            if (holds(s, global))
                out.set(s, local);
            int i = arity - 1;
            while (i >= 0 && ++local[static_cast<size_t>(i)] == out.size())
                local[static_cast<size_t>(i--)] = 0;
            if (i < 0)
                break;
        }
    }
    return out;
}

void check_tuple(const Structure& a, TupleView t)
{
    for (int x : t)
        if (x < 0 || x >= a.size())
            throw DomainError("tuple entry " + std::to_string(x) + " outside domain of size " +
                              std::to_string(a.size()));
}

AtomicDiagram atomic_diagram(const Structure& a, TupleView tuple)
{
    check_tuple(a, tuple);
    AtomicDiagram d;
    const int k = static_cast<int>(tuple.size());
    d.arity = k;
    d.visible_symbols = std::min(k, a.signature().size());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            d.bits.push_back(tuple[static_cast<size_t>(i)] == tuple[static_cast<size_t>(j)] ? 1 : 0);
    Tuple args;
    for (int s = 0; s < d.visible_symbols; ++s) {
        const int arity = a.signature()[s].arity;
        std::vector<int> idx(static_cast<size_t>(arity), 0);
        args.assign(static_cast<size_t>(arity), 0);
        while (true) {
            for (int i = 0; i < arity; ++i)
                args[static_cast<size_t>(i)] = tuple[static_cast<size_t>(idx[static_cast<size_t>(i)])];
            d.bits.push_back(a.holds(s, args) ? 1 : 0);
            int i = arity - 1;
            while (i >= 0 && ++idx[static_cast<size_t>(i)] == k)
                idx[static_cast<size_t>(i--)] = 0;
            if (i < 0)
                break;
        }
    }
    return d;
}

std::string diagram_string(const AtomicDiagram& d, const Signature& signature)
{
    std::string out = std::to_string(d.arity) + "|";
    size_t pos = 0;
    const size_t k = static_cast<size_t>(d.arity);
    for (; pos < k * k; ++pos)
        out.push_back(d.bits[pos] ? '1' : '0');
    for (int s = 0; s < d.visible_symbols; ++s) {
        out += "|" + signature[s].name + ":";
        size_t cells = ipow(k, signature[s].arity);
        for (size_t c = 0; c < cells; ++c)
            out.push_back(d.bits[pos++] ? '1' : '0');
    }
    return out;
}

AtomicDiagram parse_diagram_string(std::string_view text, const Signature& signature)
{
    AtomicDiagram d;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == '|') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() < 2)
        throw ParseError("malformed diagram '" + std::string(text) + "'");
    try {
        d.arity = std::stoi(parts[0]);
    } catch (const std::exception&) {
        throw ParseError("malformed diagram arity in '" + std::string(text) + "'");
    }
    d.visible_symbols = std::min(d.arity, signature.size());
    const size_t k = static_cast<size_t>(d.arity);
    auto take_bits = [&](const std::string& bits, size_t expect) {
        if (bits.size() != expect)
            throw ParseError("wrong bit count in diagram '" + std::string(text) + "'");
        for (char c : bits) {
            if (c != '0' && c != '1')
                throw ParseError("bad bit in diagram '" + std::string(text) + "'");
            d.bits.push_back(c == '1');
        }
    };
    take_bits(parts[1], k * k);
    if (parts.size() != static_cast<size_t>(2 + d.visible_symbols))
        throw ParseError("wrong symbol count in diagram '" + std::string(text) + "'");
    for (int s = 0; s < d.visible_symbols; ++s) {
        const std::string& p = parts[static_cast<size_t>(2 + s)];
        auto colon = p.find(':');
        if (colon == std::string::npos || p.substr(0, colon) != signature[s].name)
            throw ParseError("diagram symbol mismatch in '" + std::string(text) + "'");
        take_bits(p.substr(colon + 1), ipow(k, signature[s].arity));
    }
    return d;
}

Structure restrict(const Structure& a, int k)
{
    if (k < 0 || k > a.signature().size())
        throw DomainError("restriction to " + std::to_string(k) + " symbols exceeds signature of " +
                          std::to_string(a.signature().size()));
    Structure out(a.signature().prefix(k), a.size());
    for (int s = 0; s < k; ++s)
        for (const auto& t : a.facts(s))
            out.set(s, t);
    return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

int parse_int(const std::string& tok, int line)
{
    try {
        size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size())
            throw ParseError("expected integer, got '" + tok + "'", line);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("expected integer, got '" + tok + "'", line);
    }
}

} // namespace

Structure parse_structure(std::string_view text)
{
    std::vector<Symbol> symbols;
    std::optional<int> size;
    struct Fact {
        std::string name;
        Tuple args;
        int line;
    };
    std::vector<Fact> facts;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        auto toks = split_ws(raw);
        if (toks.empty())
            continue;
        if (toks[0] == "signature") {
            if (toks.size() != 3)
                throw ParseError("expected 'signature <name> <arity>'", lineno);
            if (size || !facts.empty())
                throw ParseError("signature lines must precede size and rel lines", lineno);
            symbols.push_back({toks[1], parse_int(toks[2], lineno)});
            if (symbols.back().arity < 1)
                throw ParseError("arity must be >= 1", lineno);
        } else if (toks[0] == "size") {
            if (toks.size() != 2)
                throw ParseError("expected 'size <n>'", lineno);
            if (size)
                throw ParseError("duplicate size line", lineno);
            size = parse_int(toks[1], lineno);
            if (*size < 1)
                throw ParseError("size must be >= 1", lineno);
        } else if (toks[0] == "rel") {
            if (toks.size() < 2)
                throw ParseError("expected 'rel <name> <e1> ...'", lineno);
            Fact f{toks[1], {}, lineno};
            for (size_t i = 2; i < toks.size(); ++i)
                f.args.push_back(parse_int(toks[i], lineno));
            facts.push_back(std::move(f));
        } else {
            throw ParseError("unknown directive '" + toks[0] + "'", lineno);
        }
    }
    if (!size)
        throw ParseError("missing size line");

    Signature sig;
    try {
        sig = Signature(symbols);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    Structure a(sig, *size);
    for (const auto& f : facts) {
        int s = sig.find(f.name);
        if (s < 0)
            throw ParseError("unknown symbol '" + f.name + "'", f.line);
        if (static_cast<int>(f.args.size()) != sig[s].arity)
            throw ParseError("arity mismatch for '" + f.name + "'", f.line);
        for (int x : f.args)
            if (x < 0 || x >= *size)
                throw ParseError("element " + std::to_string(x) + " out of range", f.line);
        a.set(s, f.args);
    }
    return a;
}

std::string serialize_structure(const Structure& a)
{
    std::ostringstream out;
    for (const auto& s : a.signature().symbols())
        out << "signature " << s.name << " " << s.arity << "\n";
    out << "size " << a.size() << "\n";
    std::vector<std::string> lines;
    for (int s = 0; s < a.signature().size(); ++s) {
        for (const auto& t : a.facts(s)) {
            std::string l = "rel " + a.signature()[s].name;
            for (int x : t)
                l += " " + std::to_string(x);
            lines.push_back(std::move(l));
        }
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines)
        out << l << "\n";
    return out.str();
}

Structure load_structure(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_structure(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_structure(const Structure& a, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw DomainError("cannot write '" + path + "'");
    out << serialize_structure(a);
}

Tuple parse_tuple(std::string_view text)
{
    Tuple t;
    std::string cur;
    auto flush = [&] {
        if (cur.empty())
            throw ParseError("empty tuple entry in '" + std::string(text) + "'");
        t.push_back(parse_int(cur, 0));
        cur.clear();
    };
    if (text.empty())
        return t;
    for (char c : text) {
        if (c == ',')
            flush();
        else if (c != ' ')
            cur.push_back(c);
    }
    flush();
    return t;
}

std::string format_tuple(TupleView t)
{
    std::string out;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(t[i]);
    }
    return out;
}

namespace {

bool preserves(const Structure& a, const Structure& b, const std::vector<int>& map)
{
    for (int s = 0; s < a.signature().size(); ++s) {
        const int arity = a.signature()[s].arity;
        const auto& ta = a.table(s);
        Tuple args(static_cast<size_t>(arity));
        for (size_t off = 0; off < ta.size(); ++off) {
            size_t rest = off;
            for (int i = arity - 1; i >= 0; --i) {
                args[static_cast<size_t>(i)] = map[rest % static_cast<size_t>(a.size())];
                rest /= static_cast<size_t>(a.size());
            }
            if ((ta[off] != 0) != b.holds(s, args))
                return false;
        }
    }
    return true;
}

// Backtracking bijection search; partial maps are pruned on fully-mapped facts.
bool extend_map(const Structure& a, const Structure& b, std::vector<int>& map, std::vector<char>& used, int next)
{
    const int n = a.size();
    if (next == n)
        return preserves(a, b, map);
    if (map[static_cast<size_t>(next)] >= 0)
        return extend_map(a, b, map, used, next + 1);
    for (int y = 0; y < n; ++y) {
        if (used[static_cast<size_t>(y)])
            continue;
        map[static_cast<size_t>(next)] = y;
        used[static_cast<size_t>(y)] = 1;
        bool ok = true;
        // binary-and-smaller facts among already fixed elements
        for (int s = 0; s < a.signature().size() && ok; ++s) {
            if (a.signature()[s].arity != 2)
                continue;
            for (int x = 0; x <= next && ok; ++x) {
                int mx = map[static_cast<size_t>(x)];
                if (mx < 0)
                    continue;
                int p1[2] = {next, x}, q1[2] = {y, mx};
                int p2[2] = {x, next}, q2[2] = {mx, y};
                ok = a.holds(s, p1) == b.holds(s, q1) && a.holds(s, p2) == b.holds(s, q2);
            }
        }
        if (ok && extend_map(a, b, map, used, next + 1))
            return true;
        used[static_cast<size_t>(y)] = 0;
        map[static_cast<size_t>(next)] = -1;
    }
    return false;
}

} // namespace

std::optional<std::vector<int>> find_isomorphism(const Structure& a, TupleView ta, const Structure& b, TupleView tb)
{
    if (!(a.signature() == b.signature()))
        throw DomainError("signature mismatch");
    check_tuple(a, ta);
    check_tuple(b, tb);
    if (a.size() != b.size() || ta.size() != tb.size())
        return std::nullopt;
    std::vector<int> map(static_cast<size_t>(a.size()), -1);
    std::vector<char> used(static_cast<size_t>(b.size()), 0);
    for (size_t i = 0; i < ta.size(); ++i) {
        int& m = map[static_cast<size_t>(ta[i])];
        if (m >= 0 && m != tb[i])
            return std::nullopt;
        if (m < 0) {
            if (used[static_cast<size_t>(tb[i])])
                return std::nullopt;
            m = tb[i];
            used[static_cast<size_t>(tb[i])] = 1;
        }
    }
    if (extend_map(a, b, map, used, 0))
        return map;
    return std::nullopt;
}

bool isomorphic(const Structure& a, const Structure& b)
{
    return find_isomorphism(a, {}, b, {}).has_value();
}

bool isomorphic(const Structure& a, TupleView ta, const Structure& b, TupleView tb)
{
    return find_isomorphism(a, ta, b, tb).has_value();
}

std::vector<std::vector<int>> automorphisms(const Structure& a)
{
    std::vector<std::vector<int>> out;
    std::vector<int> perm(static_cast<size_t>(a.size()));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (preserves(a, a, perm))
            out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace bnf
