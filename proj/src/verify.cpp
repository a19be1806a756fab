#include "bnf/bfstruct.hpp"

#include <algorithm>

#include "bnf/error.hpp"

namespace bnf {

namespace {

struct Failure {
    int level;
    std::string witness;
};

class Verifier {
public:
    Verifier(const BfStructure& cand, const BfStructure& ref) : cand_(cand), ref_(ref) {}

    VerificationReport run()
    {
        VerificationReport report;
        try {
            shape();
            for (int beta = 0; beta <= ref_.levels; ++beta)
                match_level(beta);
            structure_maps();
            report.pass = true;
            report.correspondence = map_;
        } catch (const Failure& f) {
            report.level = f.level;
            report.witness = f.witness;
        }
        return report;
    }

private:
    [[noreturn]] void fail(int level, const std::string& what) { throw Failure{level, what}; }

    void shape()
    {
        if (cand_.levels != ref_.levels)
            fail(-1, "candidate has " + std::to_string(cand_.levels) + " levels, expected " +
                         std::to_string(ref_.levels));
        if (cand_.arity_bound != ref_.arity_bound)
            fail(-1, "candidate arity bound " + std::to_string(cand_.arity_bound) + " differs from " +
                         std::to_string(ref_.arity_bound));
        for (const auto& [key, v] : cand_.types)
            if (!ref_.types.count(key))
                fail(key.first, "candidate has types of arity " + std::to_string(key.second) + " at level " +
                                    std::to_string(key.first) + " beyond the stored bound");
    }

    TypeRef mapped(const TypeRef& t, int level)
    {
        auto it = map_.find(t);
        if (it == map_.end())
            fail(level, "type " + t.str() + " is referenced before it was matched");
        return it->second;
    }

    void match_level(int beta)
    {
        for (int arity = 0; arity <= ref_.max_arity(beta); ++arity) {
            if (beta == 0) {
                auto diag_cand = [&](const TypeRef& t) {
                    auto it = cand_.diag.find(t);
                    if (it == cand_.diag.end())
                        fail(0, "type " + t.str() + " has no diagram");
                    return std::vector<std::string>{it->second};
                };
                auto diag_ref = [&](const TypeRef& t) { return std::vector<std::string>{ref_.diag.at(t)}; };
                match_with(0, arity, diag_cand, diag_ref, "diagram");
                continue;
            }
            // ext fingerprints, translated into reference ids
            auto fp_cand = [&](const TypeRef& t) {
                std::vector<std::string> key;
                for (int gamma = 0; gamma < beta; ++gamma) {
                    std::vector<TypeRef> images;
                    for (const TypeRef& x : cand_.ext_at(t, gamma))
                        images.push_back(mapped(x, beta));
                    std::sort(images.begin(), images.end());
                    std::string s;
                    for (const TypeRef& x : images)
                        s += x.str() + ";";
                    key.push_back(s);
                }
                return key;
            };
            auto fp_ref = [&](const TypeRef& t) {
                std::vector<std::string> key;
                for (int gamma = 0; gamma < beta; ++gamma) {
                    std::string s;
                    for (const TypeRef& x : ref_.ext_at(t, gamma))
                        s += x.str() + ";";
                    key.push_back(s);
                }
                return key;
            };
            match_with(beta, arity, fp_cand, fp_ref, "ext sets");
        }
    }

    template <typename A, typename B>
    void match_with(int beta, int arity, A&& a, B&& b, const char* what)
    {
        std::map<std::vector<std::string>, int> ref_keys;
        const int nref = ref_.count(beta, arity);
        for (int i = 0; i < nref; ++i)
            ref_keys.emplace(b(TypeRef{beta, arity, i}), i);
        std::vector<int> used(static_cast<size_t>(nref), -1);
        const int ncand = cand_.count(beta, arity);
        for (int i = 0; i < ncand; ++i) {
            TypeRef c{beta, arity, i};
            auto it = ref_keys.find(a(c));
            if (it == ref_keys.end())
                fail(beta, "type " + c.str() + " has no counterpart with the same " + what);
            int& prev = used[static_cast<size_t>(it->second)];
            if (prev >= 0)
                fail(beta, "types " + TypeRef{beta, arity, prev}.str() + " and " + c.str() + " have the same " + what);
            prev = i;
            map_[c] = {beta, arity, it->second};
        }
        for (int i = 0; i < nref; ++i)
            if (used[static_cast<size_t>(i)] < 0) {
                const TypeRep& r = ref_.types.at({beta, arity})[static_cast<size_t>(i)];
                fail(beta, "reference type " + TypeRef{beta, arity, i}.str() + " (structure " +
                               std::to_string(r.structure) + ", tuple " + (r.tuple.empty() ? "-" : format_tuple(r.tuple)) +
                               ") has no counterpart in the candidate");
            }
    }

    void structure_maps()
    {
        auto m = [&](const TypeRef& t) { return mapped(t, t.level); };
        // order
        for (const auto& [x, y] : cand_.leq)
            if (!ref_.leq.count({m(x), m(y)}))
                fail(x.level, "order " + x.str() + " <= " + y.str() + " does not hold in the class");
        if (cand_.leq.size() != ref_.leq.size()) {
            std::set<std::pair<TypeRef, TypeRef>> images;
            for (const auto& [x, y] : cand_.leq)
                images.insert({m(x), m(y)});
            for (const auto& p : ref_.leq)
                if (!images.count(p))
                    fail(p.first.level, "order " + p.first.str() + " <= " + p.second.str() +
                                            " is missing from the candidate");
        }
        std::map<TypeRef, std::vector<TypeRef>> below;
        for (const auto& [x, y] : cand_.leq)
            if (x != y)
                below[y].push_back(x);
        // projections
        for (const auto& [key, to] : cand_.proj) {
            auto it = ref_.proj.find({m(key.first), key.second});
            if (it == ref_.proj.end() || it->second != m(to))
                fail(key.first.level, "projection of " + key.first.str() + " to level " + std::to_string(key.second) +
                                          " is " + to.str() + ", which does not correspond");
        }
        if (cand_.proj.size() != ref_.proj.size())
            fail(-1, "candidate stores " + std::to_string(cand_.proj.size()) + " projections, expected " +
                         std::to_string(ref_.proj.size()));
        // permutations
        for (const auto& [key, to] : cand_.perm) {
            auto it = ref_.perm.find({m(key.first), key.second});
            if (it == ref_.perm.end() || it->second != m(to))
                fail(key.first.level, "permutation " + format_iota(key.second) + " of " + key.first.str() + " is " +
                                          to.str() + ", which does not correspond");
        }
        if (cand_.perm.size() != ref_.perm.size())
            fail(-1, "candidate stores " + std::to_string(cand_.perm.size()) + " permutations, expected " +
                         std::to_string(ref_.perm.size()));
        // ext relations, both ways, and downward closure under the stored order
        for (const TypeRef& sigma : cand_.all_types()) {
            std::set<TypeRef> images;
            auto it = cand_.ext.find(sigma);
            if (it != cand_.ext.end())
                for (const TypeRef& t : it->second)
                    images.insert(m(t));
            auto rt = ref_.ext.find(m(sigma));
            const std::set<TypeRef> expected = rt == ref_.ext.end() ? std::set<TypeRef>{} : rt->second;
            if (images != expected)
                fail(sigma.level, "ext relation of " + sigma.str() + " does not correspond");
            if (it != cand_.ext.end())
                for (const TypeRef& t : it->second) {
                    auto bt = below.find(t);
                    if (bt != below.end())
                        for (const TypeRef& x : bt->second)
                            if (!it->second.count(x))
                                fail(sigma.level, "ext of " + sigma.str() + " is not downward closed at " + t.str());
                }
        }
        // diagrams
        for (const auto& [t, d] : cand_.diag)
            if (ref_.diag.at(m(t)) != d)
                fail(0, "diagram of " + t.str() + " does not correspond");
    }

    const BfStructure& cand_;
    const BfStructure& ref_;
    std::map<TypeRef, TypeRef> map_;
};

} // namespace

VerificationReport verify(const BfStructure& candidate, TypeCatalog& catalog, int levels)
{
    if (candidate.levels != levels) {
        VerificationReport r;
        r.witness = "candidate has " + std::to_string(candidate.levels) + " levels, expected " + std::to_string(levels);
        return r;
    }
    BfStructure reference = assemble(catalog, levels, candidate.arity_bound);
    return Verifier(candidate, reference).run();
}

VerificationReport verify(const BfStructure& candidate, const ClassSpec& spec, int levels)
{
    TypeCatalog catalog(spec);
    return verify(candidate, catalog, levels);
}

} // namespace bnf
