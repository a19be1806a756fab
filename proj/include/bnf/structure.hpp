#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnf {

using Tuple = std::vector<int>;
using TupleView = std::span<const int>;

struct Symbol {
    std::string name;
    int arity = 0;

    bool operator==(const Symbol&) const = default;
};

// Ordered relational signature. Declaration order defines the restriction
// to the first k symbols.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    int size() const { return static_cast<int>(symbols_.size()); }
    const Symbol& operator[](int i) const { return symbols_[static_cast<size_t>(i)]; }

    // Index of the named symbol or -1.
    int find(std::string_view name) const;

    // Signature of the first k symbols.
    Signature prefix(int k) const;

    bool operator==(const Signature&) const = default;

private:
    std::vector<Symbol> symbols_;
};

// A finite relational structure with domain {0, ..., size-1}. Tables are dense
// bitmaps indexed by the base-size encoding of the argument tuple.
class Structure {
public:
    Structure() = default;
    Structure(Signature signature, int size);

    const Signature& signature() const { return signature_; }
    int size() const { return size_; }

    bool holds(int symbol, TupleView args) const;
    void set(int symbol, TupleView args, bool value = true);

    // Raw dense table of one symbol, one byte per argument tuple.
    const std::vector<std::uint8_t>& table(int symbol) const { return tables_[static_cast<size_t>(symbol)]; }

    // Sorted list of tuples in the table of one symbol.
    std::vector<Tuple> facts(int symbol) const;

    // Concatenated table bits, used for canonical ordering.
    std::string encoding() const;

    // Substructure on the listed elements, relabelled 0..k-1 in list order.
    Structure induced(TupleView elements) const;

    bool operator==(const Structure&) const = default;

private:
    size_t offset(TupleView args) const;

    Signature signature_;
    int size_ = 0;
    std::vector<std::vector<std::uint8_t>> tables_;
};

// The complete atomic diagram of a k-tuple over the first k symbols,
// including every equality atom x_i = x_j.
struct AtomicDiagram {
    int arity = 0;
    int visible_symbols = 0;
    // k*k equality bits, then for every visible symbol all k^arity bits.
    std::vector<std::uint8_t> bits;

    bool operator==(const AtomicDiagram&) const = default;
    auto operator<=>(const AtomicDiagram&) const = default;
};

AtomicDiagram atomic_diagram(const Structure& a, TupleView tuple);

// Canonical text of a diagram: "<k>|<eq bits>|<name>:<bits>|..." with no spaces.
std::string diagram_string(const AtomicDiagram& d, const Signature& signature);
AtomicDiagram parse_diagram_string(std::string_view text, const Signature& signature);

Structure restrict(const Structure& a, int k);

Structure parse_structure(std::string_view text);
std::string serialize_structure(const Structure& a);
Structure load_structure(const std::string& path);
void save_structure(const Structure& a, const std::string& path);

// "0,1,2" -> {0,1,2}; empty string -> empty tuple.
Tuple parse_tuple(std::string_view text);
std::string format_tuple(TupleView t);

void check_tuple(const Structure& a, TupleView t);

// Exhaustive search for a bijection a->b carrying ta to tb and preserving all
// tables in both directions.
std::optional<std::vector<int>> find_isomorphism(const Structure& a, TupleView ta, const Structure& b, TupleView tb);
bool isomorphic(const Structure& a, const Structure& b);
bool isomorphic(const Structure& a, TupleView ta, const Structure& b, TupleView tb);

std::vector<std::vector<int>> automorphisms(const Structure& a);

} // namespace bnf
