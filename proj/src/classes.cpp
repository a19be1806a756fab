#include "bnf/classes.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bnf/error.hpp"

namespace bnf {

namespace {

const char* kind_name(ClassKind k)
{
    switch (k) {
    case ClassKind::LinearOrders: return "linord";
    case ClassKind::EquivalenceStructures: return "equiv";
    case ClassKind::Graphs: return "graph";
    case ClassKind::Files: return "files";
    }
    return "?";
}

void partitions(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, p, cur, out);
        cur.pop_back();
    }
}

Structure graph_from_bits(int n, unsigned bits)
{
    Structure g(class_signature(ClassKind::Graphs), n);
    int e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++e)
            if (bits >> e & 1u) {
                int a[2] = {i, j}, b[2] = {j, i};
                g.set(0, a);
                g.set(0, b);
            }
    return g;
}

void sort_canonical(std::vector<Structure>& v)
{
    std::sort(v.begin(), v.end(), [](const Structure& a, const Structure& b) { return a.encoding() < b.encoding(); });
}

} // namespace

ClassSpec ClassSpec::from_kind(const std::string& kind, int max_size)
{
    if (kind.rfind("files:", 0) == 0)
        return parse(kind);
    return parse(kind + ":" + std::to_string(max_size));
}

ClassSpec ClassSpec::parse(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("class spec '" + text + "' must have the form <kind>:<arg>");
    std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
    ClassSpec spec;
    if (kind == "files") {
        spec.kind = ClassKind::Files;
        std::string cur;
        for (char c : arg + ",") {
            if (c == ',') {
                if (!cur.empty())
                    spec.files.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (spec.files.empty())
            throw ParseError("files class needs at least one path");
        spec.max_size = 0;
        return spec;
    }
    if (kind == "linord")
        spec.kind = ClassKind::LinearOrders;
    else if (kind == "equiv")
        spec.kind = ClassKind::EquivalenceStructures;
    else if (kind == "graph")
        spec.kind = ClassKind::Graphs;
    else
        throw ParseError("unknown class kind '" + kind + "'");
    try {
        spec.max_size = std::stoi(arg);
    } catch (const std::exception&) {
        throw ParseError("bad max size in class spec '" + text + "'");
    }
    if (spec.max_size < 1)
        throw DomainError("class max size must be >= 1");
    return spec;
}

std::string ClassSpec::str() const
{
    std::string out = std::string(kind_name(kind)) + ":";
    if (kind != ClassKind::Files)
        return out + std::to_string(max_size);
    for (size_t i = 0; i < files.size(); ++i)
        out += (i ? "," : "") + files[i];
    return out;
}

Signature class_signature(ClassKind kind)
{
    switch (kind) {
    case ClassKind::LinearOrders: return Signature({{"<", 2}});
    case ClassKind::EquivalenceStructures: return Signature({{"E", 2}});
    case ClassKind::Graphs: return Signature({{"R", 2}});
    case ClassKind::Files: break;
    }
    throw DomainError("file classes have no fixed signature");
}

Structure linear_order(int n)
{
    Structure a(class_signature(ClassKind::LinearOrders), n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int t[2] = {i, j};
            a.set(0, t);
        }
    return a;
}

Structure equivalence_structure(const std::vector<int>& block_sizes)
{
    int n = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
    Structure a(class_signature(ClassKind::EquivalenceStructures), n);
    int start = 0;
    for (int b : block_sizes) {
        for (int i = start; i < start + b; ++i)
            for (int j = start; j < start + b; ++j) {
                int t[2] = {i, j};
                a.set(0, t);
            }
        start += b;
    }
    return a;
}

std::vector<Structure> builtin_of_size(ClassKind kind, int n)
{
    std::vector<Structure> out;
    switch (kind) {
    case ClassKind::LinearOrders:
        out.push_back(linear_order(n));
        break;
    case ClassKind::EquivalenceStructures: {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        partitions(n, n, cur, parts);
        for (const auto& p : parts)
            out.push_back(equivalence_structure(p));
        break;
    }
    case ClassKind::Graphs: {
        const int edges = n * (n - 1) / 2;
        if (edges > 20)
            throw BudgetError("graph enumeration beyond 7 vertices is not supported");
        std::set<std::string> seen;
        std::vector<int> perm(static_cast<size_t>(n));
        for (unsigned bits = 0; bits < (1u << edges); ++bits) {
            Structure g = graph_from_bits(n, bits);
            // canonical form: least encoding over all relabellings
            std::iota(perm.begin(), perm.end(), 0);
            std::string best;
            Structure best_g = g;
            do {
                Structure h = g.induced(perm);
                std::string e = h.encoding();
                if (best.empty() || e < best) {
                    best = e;
                    best_g = h;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (seen.insert(best).second)
                out.push_back(best_g);
        }
        break;
    }
    case ClassKind::Files:
        throw DomainError("file classes have no builtin members");
    }
    sort_canonical(out);
    return out;
}

ClassStream::ClassStream(ClassSpec spec) : spec_(std::move(spec)) { restart(); }

void ClassStream::restart()
{
    size_ = 0;
    pos_ = 0;
    batch_.clear();
    if (spec_.kind == ClassKind::Files) {
        for (const auto& f : spec_.files)
            batch_.push_back(load_structure(f));
        for (const auto& s : batch_)
            if (!(s.signature() == batch_.front().signature()))
                throw DomainError("structures of a file class must share one signature");
    }
}

std::optional<Structure> ClassStream::next()
{
    while (pos_ >= batch_.size()) {
        if (spec_.kind == ClassKind::Files || size_ >= spec_.max_size)
            return std::nullopt;
        ++size_;
        batch_ = builtin_of_size(spec_.kind, size_);
        pos_ = 0;
    }
    return batch_[pos_++];
}

std::vector<Structure> enumerate_class(const ClassSpec& spec)
{
    ClassStream stream(spec);
    std::vector<Structure> out;
    while (auto s = stream.next())
        out.push_back(std::move(*s));
    return out;
}

} // namespace bnf
