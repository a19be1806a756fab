#include "bnf/engine.hpp"

#include <algorithm>
#include <set>

#include "bnf/error.hpp"

namespace bnf {

const char* comparison_name(Comparison c)
{
    switch (c) {
    case Comparison::LeqOnly: return "leq";
    case Comparison::GeqOnly: return "geq";
    case Comparison::Equiv: return "equiv";
    case Comparison::Incomparable: return "incomparable";
    }
    return "?";
}

namespace {

std::string structure_key(const Structure& s)
{
    std::string key;
    for (const auto& sym : s.signature().symbols())
        key += sym.name + "/" + std::to_string(sym.arity) + ";";
    key += "#" + std::to_string(s.size()) + "#" + s.encoding();
    return key;
}

} // namespace

StructId BfEngine::intern(const Structure& s)
{
    std::string key = structure_key(s);
    std::lock_guard lock(mutex_);
    auto it = ids_.find(key);
    if (it != ids_.end())
        return it->second;
    if (s.size() > 255)
        throw DomainError("back-and-forth engine supports structures of at most 255 elements");
    StructId id = static_cast<StructId>(structures_.size());
    structures_.push_back(s);
    ids_.emplace(std::move(key), id);
    return id;
}

const Structure& BfEngine::structure(StructId id) const
{
    std::lock_guard lock(mutex_);
    return structures_.at(static_cast<size_t>(id));
}

const Structure& BfEngine::at(StructId id) const
{
    std::lock_guard lock(mutex_);
    return structures_[static_cast<size_t>(id)];
}

int BfEngine::structure_count() const
{
    std::lock_guard lock(mutex_);
    return static_cast<int>(structures_.size());
}

bool BfEngine::leq(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n)
{
    return leq(intern(a), ta, intern(b), tb, n);
}

bool BfEngine::leq(StructId a, TupleView ta, StructId b, TupleView tb, int n)
{
    const Structure& sa = structure(a);
    const Structure& sb = structure(b);
    if (!(sa.signature() == sb.signature()))
        throw DomainError("signature mismatch");
    if (ta.size() != tb.size())
        throw DomainError("tuple length mismatch");
    if (n < 0)
        throw DomainError("level must be >= 0");
    check_tuple(sa, ta);
    check_tuple(sb, tb);

    // Equality atoms are part of every diagram, so differing equality patterns
    // fail at level 0 and therefore at every level.
    const size_t k = ta.size();
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j)
            if ((ta[i] == ta[j]) != (tb[i] == tb[j]))
                return false;

    Pairs pairs;
    std::set<int> seen;
    for (size_t i = 0; i < k; ++i)
        if (seen.insert(ta[i]).second)
            pairs.emplace_back(static_cast<std::uint8_t>(ta[i]), static_cast<std::uint8_t>(tb[i]));
    std::sort(pairs.begin(), pairs.end());
    int visible = std::min(static_cast<int>(k), sa.signature().size());
    return reduced_leq(a, b, pairs, visible, n);
}

Comparison BfEngine::compare(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n)
{
    return compare(intern(a), ta, intern(b), tb, n);
}

Comparison BfEngine::compare(StructId a, TupleView ta, StructId b, TupleView tb, int n)
{
    bool le = leq(a, ta, b, tb, n);
    bool ge = leq(b, tb, a, ta, n);
    if (le && ge)
        return Comparison::Equiv;
    if (le)
        return Comparison::LeqOnly;
    if (ge)
        return Comparison::GeqOnly;
    return Comparison::Incomparable;
}

bool BfEngine::base_leq(StructId left, StructId right, const Pairs& pairs, int visible) const
{
    const Structure& a = at(left);
    const Structure& b = at(right);
    const int k = static_cast<int>(pairs.size());
    Tuple xa, xb;
    for (int s = 0; s < visible; ++s) {
        const int arity = a.signature()[s].arity;
        std::vector<int> idx(static_cast<size_t>(arity), 0);
        xa.assign(static_cast<size_t>(arity), 0);
        xb.assign(static_cast<size_t>(arity), 0);
        if (k == 0)
            continue;
        while (true) {
            for (int i = 0; i < arity; ++i) {
                xa[static_cast<size_t>(i)] = pairs[static_cast<size_t>(idx[static_cast<size_t>(i)])].first;
                xb[static_cast<size_t>(i)] = pairs[static_cast<size_t>(idx[static_cast<size_t>(i)])].second;
            }
            if (a.holds(s, xa) != b.holds(s, xb))
                return false;
            int i = arity - 1;
            while (i >= 0 && ++idx[static_cast<size_t>(i)] == k)
                idx[static_cast<size_t>(i--)] = 0;
            if (i < 0)
                break;
        }
    }
    return true;
}

bool BfEngine::reduced_leq(StructId left, StructId right, const Pairs& pairs, int visible, int n)
{
    if (n == 0)
        return base_leq(left, right, pairs, visible);

    std::string key;
    key.reserve(8 + 2 * pairs.size());
    key.push_back(static_cast<char>(left & 0xff));
    key.push_back(static_cast<char>(left >> 8));
    key.push_back(static_cast<char>(right & 0xff));
    key.push_back(static_cast<char>(right >> 8));
    key.push_back(static_cast<char>(n));
    key.push_back(static_cast<char>(visible));
    for (auto [x, y] : pairs) {
        key.push_back(static_cast<char>(x));
        key.push_back(static_cast<char>(y));
    }
    {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        ++nodes_;
        if (budget_ && nodes_ > budget_)
            throw BudgetError("back-and-forth node budget of " + std::to_string(budget_) + " exceeded");
    }

    const Structure& b = at(right);
    const int symbols = b.signature().size();
    const int k = static_cast<int>(pairs.size());

    std::vector<int> free_right;
    for (int y = 0; y < b.size(); ++y) {
        bool used = false;
        for (auto p : pairs)
            used |= p.second == y;
        if (!used)
            free_right.push_back(y);
    }

    bool result = true;
    // gamma = n-1 first: it is the strongest requirement and fails soonest.
    for (int gamma = n - 1; gamma >= 0 && result; --gamma) {
        const unsigned subsets = 1u << free_right.size();
        for (unsigned mask = 0; mask < subsets && result; ++mask) {
            std::vector<int> spoiler;
            for (size_t i = 0; i < free_right.size(); ++i)
                if (mask >> i & 1u)
                    spoiler.push_back(free_right[i]);
            // Re-mentions r of the current tuple only affect the visible count.
            std::vector<int> options;
            const int r_min = spoiler.empty() ? 1 : 0;
            for (int r = r_min; r <= k; ++r) {
                int v = std::min(visible + static_cast<int>(spoiler.size()) + r, symbols);
                if (std::find(options.begin(), options.end(), v) == options.end())
                    options.push_back(v);
            }
            if (options.empty())
                continue; // empty tuple, empty move: nothing to answer
            if (!responder_wins(left, right, pairs, spoiler, options, gamma))
                result = false;
        }
    }

    std::lock_guard lock(mutex_);
    memo_.emplace(std::move(key), result);
    return result;
}

// True when for every visible-count option there is an injection of the spoiler's
// fresh elements into fresh elements of the left structure that answers it.
bool BfEngine::responder_wins(StructId left, StructId right, const Pairs& pairs, const std::vector<int>& spoiler,
                              const std::vector<int>& visible_options, int gamma)
{
    const Structure& a = at(left);
    std::vector<int> free_left;
    for (int x = 0; x < a.size(); ++x) {
        bool used = false;
        for (auto p : pairs)
            used |= p.first == x;
        if (!used)
            free_left.push_back(x);
    }
    const size_t m = spoiler.size();
    if (m > free_left.size())
        return false;

    for (int visible : visible_options) {
        bool answered = false;
        // enumerate ordered selections of m distinct free left elements
        std::vector<int> choice(m, 0);
        std::vector<char> used(free_left.size(), 0);
        Pairs next;
        auto search = [&](auto&& self, size_t pos) -> bool {
            if (pos == m) {
                next.clear();
                for (auto [x, y] : pairs)
                    next.emplace_back(y, x);
                for (size_t i = 0; i < m; ++i)
                    next.emplace_back(static_cast<std::uint8_t>(spoiler[i]),
                                      static_cast<std::uint8_t>(free_left[static_cast<size_t>(choice[i])]));
                std::sort(next.begin(), next.end());
                return reduced_leq(right, left, next, visible, gamma);
            }
            for (size_t c = 0; c < free_left.size(); ++c) {
                if (used[c])
                    continue;
                used[c] = 1;
                choice[pos] = static_cast<int>(c);
                bool ok = self(self, pos + 1);
                used[c] = 0;
                if (ok)
                    return true;
            }
            return false;
        };
        answered = search(search, 0);
        if (!answered)
            return false;
    }
    return true;
}

} // namespace bnf
