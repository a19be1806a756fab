#include "bnf/catalog.hpp"

#include <algorithm>
#include <unordered_map>

#include "bnf/error.hpp"

namespace bnf {

std::string TypeRef::str() const
{
    return std::to_string(level) + "." + std::to_string(arity) + "." + std::to_string(id);
}

TypeRef TypeRef::parse(const std::string& text)
{
    TypeRef t;
    char d1 = 0, d2 = 0;
    size_t used = 0;
    try {
        t.level = std::stoi(text, &used);
        size_t p = used;
        d1 = text.at(p++);
        t.arity = std::stoi(text.substr(p), &used);
        p += used;
        d2 = text.at(p++);
        t.id = std::stoi(text.substr(p), &used);
        p += used;
        if (p != text.size())
            throw ParseError("");
    } catch (const std::exception&) {
        throw ParseError("malformed type reference '" + text + "'");
    }
    if (d1 != '.' || d2 != '.' || t.level < 0 || t.arity < 0 || t.id < 0)
        throw ParseError("malformed type reference '" + text + "'");
    return t;
}

bool BfLevel::leq(int i, int j) const
{
    if (leq_matrix.empty())
        return i == j;
    return leq_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0;
}

TypeCatalog::TypeCatalog(const ClassSpec& spec) : TypeCatalog(spec, enumerate_class(spec)) {}

TypeCatalog::TypeCatalog(ClassSpec spec, std::vector<Structure> members)
    : spec_(std::move(spec)), members_(std::move(members)), engine_(std::make_unique<BfEngine>())
{
    if (members_.empty())
        throw DomainError("class fragment is empty");
    for (const auto& m : members_) {
        if (!(m.signature() == members_.front().signature()))
            throw DomainError("class members must share one signature");
        extension_bound_ = std::max(extension_bound_, m.size());
        ids_.push_back(engine_->intern(m));
    }
}

const Signature& TypeCatalog::signature() const { return members_.front().signature(); }

size_t TypeCatalog::pair_index(int struct_index, TupleView tuple) const
{
    size_t offset = 0;
    const size_t k = tuple.size();
    for (int i = 0; i < struct_index; ++i) {
        size_t c = 1;
        for (size_t j = 0; j < k; ++j)
            c *= static_cast<size_t>(members_[static_cast<size_t>(i)].size());
        offset += c;
    }
    const size_t n = static_cast<size_t>(members_[static_cast<size_t>(struct_index)].size());
    size_t code = 0;
    for (int x : tuple)
        code = code * n + static_cast<size_t>(x);
    return offset + code;
}

const BfLevel& TypeCatalog::level(int n, int k)
{
    if (n < 0 || k < 0)
        throw DomainError("level and arity must be >= 0");
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, k);
    auto it = levels_.find(key);
    if (it != levels_.end())
        return *it->second;
    auto built = build_level(n, k);
    return *levels_.emplace(key, std::move(built)).first->second;
}

std::unique_ptr<BfLevel> TypeCatalog::build_level(int n, int k)
{
    auto lvl = std::make_unique<BfLevel>();
    lvl->level = n;
    lvl->arity = k;

    size_t total = 0;
    for (const auto& m : members_) {
        size_t c = 1;
        for (int j = 0; j < k; ++j)
            c *= static_cast<size_t>(m.size());
        total += c;
        if (total > pair_budget_)
            throw BudgetError("level " + std::to_string(n) + " arity " + std::to_string(k) + " exceeds the pair budget");
    }
    lvl->assignment.reserve(total);

    // Members of one class share their level-0 diagram, so candidates are
    // bucketed by diagram before running the game.
    std::unordered_map<std::string, std::vector<int>> buckets;
    for (int si = 0; si < static_cast<int>(members_.size()); ++si) {
        const Structure& s = members_[static_cast<size_t>(si)];
        for_each_tuple(s.size(), k, [&](const Tuple& t) {
            AtomicDiagram d = atomic_diagram(s, t);
            std::string key(d.bits.begin(), d.bits.end());
            auto& bucket = buckets[key];
            int found = -1;
            if (n == 0) {
                if (!bucket.empty())
                    found = bucket.front();
            } else {
                for (int cand : bucket) {
                    const BfType& rep = lvl->types[static_cast<size_t>(cand)];
                    StructId rid = ids_[static_cast<size_t>(rep.rep_struct)];
                    if (engine_->leq(rid, rep.rep_tuple, ids_[static_cast<size_t>(si)], t, n) &&
                        engine_->leq(ids_[static_cast<size_t>(si)], t, rid, rep.rep_tuple, n)) {
                        found = cand;
                        break;
                    }
                }
            }
            if (found < 0) {
                found = lvl->size();
                lvl->types.push_back({{n, k, found}, si, t});
                bucket.push_back(found);
            }
            lvl->assignment.push_back(found);
        });
    }

    if (n > 0) {
        const size_t m = lvl->types.size();
        lvl->leq_matrix.assign(m, std::vector<std::uint8_t>(m, 0));
        for (size_t i = 0; i < m; ++i) {
            const BfType& a = lvl->types[i];
            for (size_t j = 0; j < m; ++j) {
                const BfType& b = lvl->types[j];
                lvl->leq_matrix[i][j] =
                    i == j || engine_->leq(ids_[static_cast<size_t>(a.rep_struct)], a.rep_tuple,
                                           ids_[static_cast<size_t>(b.rep_struct)], b.rep_tuple, n);
            }
        }
    }
    return lvl;
}

const BfType& TypeCatalog::type(const TypeRef& t)
{
    const BfLevel& lvl = level(t.level, t.arity);
    if (t.id < 0 || t.id >= lvl.size())
        throw DomainError("unknown type " + t.str());
    return lvl.types[static_cast<size_t>(t.id)];
}

int TypeCatalog::type_of(int n, int struct_index, TupleView tuple)
{
    if (struct_index < 0 || struct_index >= static_cast<int>(members_.size()))
        throw DomainError("structure index out of range");
    check_tuple(members_[static_cast<size_t>(struct_index)], tuple);
    const BfLevel& lvl = level(n, static_cast<int>(tuple.size()));
    return lvl.assignment[pair_index(struct_index, tuple)];
}

TypeRef TypeCatalog::ref_of(int n, int struct_index, TupleView tuple)
{
    return {n, static_cast<int>(tuple.size()), type_of(n, struct_index, tuple)};
}

TypeRef TypeCatalog::project(const TypeRef& sigma, int beta)
{
    if (beta < 0 || beta > sigma.level)
        throw DomainError("cannot project " + sigma.str() + " to level " + std::to_string(beta));
    const BfType& t = type(sigma);
    return ref_of(beta, t.rep_struct, t.rep_tuple);
}

TypeRef TypeCatalog::permute(const TypeRef& sigma, std::span<const int> iota)
{
    const BfType& t = type(sigma);
    Tuple image;
    for (int i : iota) {
        if (i < 1 || i > sigma.arity)
            throw DomainError("index " + std::to_string(i) + " out of range for arity " + std::to_string(sigma.arity));
        image.push_back(t.rep_tuple[static_cast<size_t>(i - 1)]);
    }
    return ref_of(sigma.level, t.rep_struct, image);
}

std::vector<TypeRef> TypeCatalog::ext_set(const TypeRef& sigma, int gamma)
{
    if (gamma < 0 || gamma >= sigma.level)
        throw DomainError("ext_" + std::to_string(gamma) + " needs a type of level above it, got " + sigma.str());
    const BfType t = type(sigma);
    const Structure& s = members_[static_cast<size_t>(t.rep_struct)];
    std::vector<TypeRef> out;
    for (int m = 0; m <= extension_bound_; ++m) {
        const int arity = sigma.arity + m;
        const BfLevel& lvl = level(gamma, arity);
        std::vector<std::uint8_t> hit(static_cast<size_t>(lvl.size()), 0);
        Tuple ext = t.rep_tuple;
        ext.resize(static_cast<size_t>(arity));
        for_each_tuple(s.size(), m, [&](const Tuple& d) {
            std::copy(d.begin(), d.end(), ext.begin() + sigma.arity);
            hit[static_cast<size_t>(lvl.assignment[pair_index(t.rep_struct, ext)])] = 1;
        });
        std::vector<std::uint8_t> below = hit;
        if (!lvl.leq_matrix.empty())
            for (int j = 0; j < lvl.size(); ++j)
                if (hit[static_cast<size_t>(j)])
                    for (int i = 0; i < lvl.size(); ++i)
                        below[static_cast<size_t>(i)] |= lvl.leq(i, j);
        for (int i = 0; i < lvl.size(); ++i)
            if (below[static_cast<size_t>(i)])
                out.push_back({gamma, arity, i});
    }
    return out;
}

bool TypeCatalog::leq_at(const TypeRef& sigma, const TypeRef& tau, int gamma)
{
    if (sigma.arity != tau.arity)
        throw DomainError("types of different arity are incomparable");
    if (gamma > sigma.level || gamma > tau.level)
        throw DomainError("comparison level above type level");
    const BfType a = type(sigma);
    const BfType b = type(tau);
    return engine_->leq(ids_[static_cast<size_t>(a.rep_struct)], a.rep_tuple, ids_[static_cast<size_t>(b.rep_struct)],
                        b.rep_tuple, gamma);
}

bool TypeCatalog::ext_characterization_check(const TypeRef& sigma, const TypeRef& tau, int gamma)
{
    if (gamma < 1)
        throw DomainError("ext characterization needs level >= 1");
    bool lhs = leq_at(sigma, tau, gamma);
    bool rhs = true;
    for (int beta = 0; beta < gamma && rhs; ++beta) {
        auto es = ext_set(sigma, beta);
        auto et = ext_set(tau, beta);
        rhs = std::includes(es.begin(), es.end(), et.begin(), et.end());
    }
    return lhs == rhs;
}

const BfLevel& types_at_level(TypeCatalog& catalog, int n, int k, int tuple_bound)
{
    if (tuple_bound < k)
        throw DomainError("tuple bound must be at least the arity");
    return catalog.level(n, k);
}

} // namespace bnf
