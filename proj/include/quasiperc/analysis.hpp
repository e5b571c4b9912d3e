#pragma once

#include <optional>
#include <span>
#include <vector>

#include "quasiperc/dynamics.hpp"
#include "quasiperc/graph.hpp"

namespace quasiperc {

enum class Connectivity { edge, vertex };

// Maximal connected components of 1s.
std::vector<std::vector<int>> clusters(const Configuration& config, Connectivity connectivity);

enum class Verdict { yes, no, indeterminate };

struct ChainGon {
    std::vector<int> cycle;  // chordless, consecutive tiles edge-adjacent
    struct Segment {
        int family = 0;
        int start = 0;  // position in cycle
        int length = 0; // tiles covered by this run (>= 2)
    };
    std::vector<Segment> segments;
    int length() const { return static_cast<int>(cycle.size()); }
    bool convex = false;  // <= 2d segments and <= 2 runs per family
};

struct ClusterReport {
    std::vector<int> cluster;
    bool touches_boundary = false;
    Verdict chain_convex = Verdict::indeterminate;
    std::optional<Chain> witness;      // failing chain when chain_convex == no
    std::string witness_what;
    int boundary_segments = -1;        // -1 when not computed
    bool boundary_valid = false;       // exterior walk produced a chordless cycle == N*(S)
    std::string boundary_what;
    std::optional<ChainGon> enclosing_gon;
};

// Chain-convexity checker. A chain is inspected only when its window
// around S extends at least `margin` tiles past S u N*(S) on both ends;
// a truncated window downgrades the verdict to indeterminate instead of
// guessing.
ClusterReport check_chain_convex(const AdjacencyGraph& graph, std::span<const int> s,
                                 int margin = 2);

// Orders N*(S) cyclically around S and decomposes it into runs of
// constant shared-edge family. Requires S finite, vertex-connected and
// away from the patch boundary (otherwise the report is indeterminate).
ClusterReport boundary_decomposition(const AdjacencyGraph& graph, std::span<const int> s);

// True when every tile of R has at most rule.threshold - 1 allowed
// neighbours outside R. Throws errc::not_interior if R touches the
// incomplete rim of the patch.
bool is_fortress(const AdjacencyGraph& graph, std::span<const int> r, const RuleSpec& rule);

struct FortressSearchResult {
    std::vector<std::vector<int>> fortresses;  // sorted tile ids, deduplicated
    std::vector<int> skipped_seeds;
    long sets_examined = 0;
};

// Enumerates connected tile sets of size <= kmax containing each seed
// (each set visited once per seed) and keeps those passing is_fortress.
FortressSearchResult fortress_search(const AdjacencyGraph& graph, std::span<const int> seeds,
                                     int kmax, const RuleSpec& rule);

struct GonCounts {
    int n_max = 0;
    std::vector<long> total;   // [n] -> enclosing chordless cycles of length n
    std::vector<long> convex;  // subset with <= 2d segments, <= 2 runs per family
    std::vector<std::vector<int>> cycles;  // the enclosing cycles themselves
};

// Enumerates chordless cycles through the BFS ball of radius n_max
// around `tile` and keeps those whose barycenter polyline winds around
// the tile. Throws errc::margin_error when the ball leaves the interior
// and errc::invalid_input on degenerate winding geometry.
GonCounts enumerate_enclosing_gons(const AdjacencyGraph& graph, int tile, int n_max);

// (pi * D^2 / A) * n^(2d+2) with D the largest tile diameter and A the
// smallest tile area realizable from the basis directions.
double q_bound(const DirectionBasis& basis, int n);

enum class HoleClusterClass { rectangle, l_hexagon, boundary, other };

// Classifies a stable cluster of the grid-with-hole graph after the
// completion rule: adjoin the origin when at least three of its four
// axis neighbours are in S.
HoleClusterClass classify_hole_grid_cluster(const AdjacencyGraph& graph, std::span<const int> s);

} // namespace quasiperc
