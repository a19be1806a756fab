#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bnf/structure.hpp"

namespace bnf {

enum class Comparison { LeqOnly, GeqOnly, Equiv, Incomparable };

const char* comparison_name(Comparison c);

using StructId = int;

// Decides the back-and-forth relations (A,a) <=_n (B,b) at finite levels.
//
// The recursion follows the game definition: for every gamma < n and every
// extension d of b there must be an extension c of a with
// (B, b d) <=_gamma (A, a c). Positions are kept in reduced form: tuples with
// matching equality patterns are deduplicated and the pair list is sorted, and
// the number of signature symbols the raw tuple length makes visible is carried
// alongside. Extensions only need to add fresh elements; re-mentions of the
// existing tuple are accounted for through the visible-symbol count.
//
// Results are memoized per engine. The memo is insert-only and guarded by a
// mutex, so one engine may be shared between threads.
class BfEngine {
public:
    StructId intern(const Structure& s);
    const Structure& structure(StructId id) const;
    int structure_count() const;

    bool leq(StructId a, TupleView ta, StructId b, TupleView tb, int n);
    bool leq(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n);

    Comparison compare(StructId a, TupleView ta, StructId b, TupleView tb, int n);
    Comparison compare(const Structure& a, TupleView ta, const Structure& b, TupleView tb, int n);

    // Abort with BudgetError once this many memo nodes have been expanded.
    void set_node_budget(std::uint64_t budget) { budget_ = budget; }
    std::uint64_t nodes_expanded() const { return nodes_; }

private:
    using Pairs = std::vector<std::pair<std::uint8_t, std::uint8_t>>;

    const Structure& at(StructId id) const;
    bool reduced_leq(StructId left, StructId right, const Pairs& pairs, int visible, int n);
    bool base_leq(StructId left, StructId right, const Pairs& pairs, int visible) const;
    bool responder_wins(StructId left, StructId right, const Pairs& pairs, const std::vector<int>& spoiler,
                        const std::vector<int>& visible_options, int gamma);

    mutable std::mutex mutex_;
    std::deque<Structure> structures_;
    std::map<std::string, StructId> ids_;
    std::unordered_map<std::string, bool> memo_;
    std::uint64_t budget_ = 0;
    std::uint64_t nodes_ = 0;
};

} // namespace bnf
