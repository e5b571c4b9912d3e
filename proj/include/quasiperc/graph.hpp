#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "quasiperc/multigrid.hpp"

namespace quasiperc {

// Labeled adjacency (dual) graph of a patch. Each arc u -> v carries the
// shared-edge family m and the sign s of <barycenter(v) - barycenter(u),
// perp(e_m)>, so the direction of v as seen from u is s * perp(e_m).
// The reverse arc carries -s.

struct Arc {
    std::int32_t to = 0;
    std::int16_t family = -1;  // -1 on generic graphs
    std::int8_t sign = 0;
};

class AdjacencyGraph {
  public:
    enum class Kind { rhombus, generic };

    Kind kind = Kind::generic;
    std::vector<std::vector<Arc>> arcs;
    std::vector<std::uint8_t> interior;
    // Missing-neighbour slots facing the window exterior (not holes);
    // used by the infected boundary policy.
    std::vector<int> virtual_boundary;

    std::shared_ptr<const TilingPatch> patch;  // rhombus kind only

    // Generic-kind metadata.
    std::string builder;                        // "fortress-grid", "grid-hole", "explicit"
    int half_size = 0;
    std::vector<std::array<int, 2>> coords;     // grid coordinates where meaningful
    std::vector<std::string> labels;
    std::vector<std::vector<Vec2>> polygons;    // render geometry

    int size() const { return static_cast<int>(arcs.size()); }
    bool rhombus() const { return kind == Kind::rhombus; }
    Vec2 node_point(int node) const;
    int degree(int node) const { return static_cast<int>(arcs[static_cast<std::size_t>(node)].size()); }
};

AdjacencyGraph build_adjacency(std::shared_ptr<const TilingPatch> patch);
AdjacencyGraph build_adjacency(TilingPatch patch);

// Hand-built quadrilateral structures. Both are generic-kind graphs
// with synthetic labels; chain-based operations reject them.
AdjacencyGraph generate_fortress_grid(int half_size);
AdjacencyGraph grid_with_hole(int half_size);

// Ids of the five fortress nodes (centre square first).
std::vector<int> fortress_nodes(const AdjacencyGraph& graph);

struct Chain {
    int family = 0;
    int line = 0;                  // grid line index, constant along the chain
    std::vector<int> tiles;        // ordered so steps project positively on `normal`
    bool truncated_lo = false;     // segment end is a non-interior tile
    bool truncated_hi = false;
    Vec2 normal;                   // perp(e_family)
};

// Maximal chain segment through `tile` in edge direction `family`.
Chain chain_through(const AdjacencyGraph& graph, int tile, int family);

// Every tile appears in exactly two chains (one per family).
std::vector<Chain> all_chains(const AdjacencyGraph& graph);

struct CrossingViolation {
    int chain_a = 0;
    int chain_b = 0;
    std::string what;
};

struct CrossingReport {
    long pairs_sharing = 0;
    std::vector<CrossingViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks: distinct chains share at most one tile, a shared tile carries
// exactly the two chains' families, and same-family distinct chains are
// disjoint.
CrossingReport verify_chain_crossing(const AdjacencyGraph& graph);

// Tiles outside S sharing at least one vertex with S, sorted by id.
std::vector<int> vertex_neighbours(const AdjacencyGraph& graph, std::span<const int> s);

// BFS distances from `source` (-1 where unreachable).
std::vector<int> bfs_distances(const AdjacencyGraph& graph, int source);

// Node whose embedded point is nearest the origin.
int central_node(const AdjacencyGraph& graph);

} // namespace quasiperc
