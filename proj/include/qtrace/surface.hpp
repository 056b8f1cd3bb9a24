#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtrace {

// A side slot of a triangle: sides are numbered 0, 1, 2 in clockwise order.
struct SideSlot {
    int tri = -1;
    int side = -1;
    friend bool operator==(const SideSlot&, const SideSlot&) = default;
};

struct Triangle {
    std::string name;
    std::array<int, 3> edges{};  // edge index per side, clockwise
};

struct Triangulation {
    std::vector<std::string> edge_names;               // first-appearance order
    std::vector<Triangle> triangles;
    std::vector<std::vector<SideSlot>> occurrences;    // per edge: 1 or 2 slots

    int num_edges() const { return static_cast<int>(edge_names.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    bool is_boundary(int e) const { return occurrences.at(e).size() == 1; }
    bool is_self_folded(int e) const;
    int edge_index(std::string_view name) const;  // throws UnknownEdge
    int triangle_index(std::string_view name) const;
};

Triangulation parse_surface(std::string_view text);

// eps[e][f] = sum over triangles of c_ef(t) - c_fe(t).
using ExchangeMatrix = std::vector<std::vector<int>>;
ExchangeMatrix exchange_matrix(const Triangulation& T);

// Split edge copy.  Copy 2i is named after edge i and faces the first slot
// carrying the edge; copy 2i+1 carries a trailing prime and faces the second
// slot, or is the outer boundary arc when the edge is a boundary edge.  In
// the biangle B_i, copy 2i is the out side and copy 2i+1 the in side.
struct EdgeCopy {
    int edge = -1;
    std::string name;
    std::optional<SideSlot> facing;
    bool out_side() const;
};

struct SplitStructure {
    const Triangulation* T = nullptr;
    std::vector<EdgeCopy> copies;                 // size 2n
    std::vector<std::array<int, 3>> slot_copy;    // [tri][side] -> copy index

    int num_copies() const { return static_cast<int>(copies.size()); }
    int num_biangles() const { return T->num_edges(); }
    int copy_index(std::string_view name) const;  // throws UnknownEdge
    static int out_copy(int edge) { return 2 * edge; }
    static int in_copy(int edge) { return 2 * edge + 1; }
    // Is the copy an outer boundary arc of the surface?
    bool is_surface_boundary(int copy) const { return !copies.at(copy).facing.has_value(); }
};

SplitStructure split(const Triangulation& T);

}  // namespace qtrace
