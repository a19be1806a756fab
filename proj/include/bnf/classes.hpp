#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bnf/structure.hpp"

namespace bnf {

enum class ClassKind { LinearOrders, EquivalenceStructures, Graphs, Files };

// Description of an enumerable class of finite structures. Text form is
// "linord:<max>", "equiv:<max>", "graph:<max>" or "files:<path>,<path>,...".
struct ClassSpec {
    ClassKind kind = ClassKind::LinearOrders;
    int max_size = 1;
    std::vector<std::string> files;

    static ClassSpec parse(const std::string& text);
    // Builtin kind name plus a separate maximum size, as taken by the CLI.
    static ClassSpec from_kind(const std::string& kind, int max_size);
    std::string str() const;

    bool operator==(const ClassSpec&) const = default;
};

Signature class_signature(ClassKind kind);

// Lazy, restartable stream over a class in canonical order: by size, then by
// the lexicographic table encoding. Builtin families yield one structure per
// isomorphism type.
class ClassStream {
public:
    explicit ClassStream(ClassSpec spec);

    std::optional<Structure> next();
    void restart();

private:
    ClassSpec spec_;
    int size_ = 0;
    size_t pos_ = 0;
    std::vector<Structure> batch_;
};

std::vector<Structure> enumerate_class(const ClassSpec& spec);

// All structures of one builtin kind and exact size, canonical order.
std::vector<Structure> builtin_of_size(ClassKind kind, int n);

// Builtin constructors.
Structure linear_order(int n);
Structure equivalence_structure(const std::vector<int>& block_sizes);

} // namespace bnf
