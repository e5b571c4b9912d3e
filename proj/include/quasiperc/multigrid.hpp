#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "quasiperc/common.hpp"

namespace quasiperc {

// Finite patches of rhombus tilings built as duals of multigrids: N
// families of parallel lines, one rhombus per pairwise line crossing.
// All combinatorics (vertex identity, edges, adjacency) live on exact
// integer lattice coordinates; the Euclidean embedding is only used for
// geometry-flavoured predicates (winding numbers, monotonicity).

struct DirectionBasis {
    int n = 0;                  // number of line families (d below)
    double phi = 0.0;           // global rotation
    std::vector<Vec2> e;        // unit direction per family
    std::vector<double> gamma;  // real offset per family
    double theta = 0.0;         // min over i!=j of |<e_i, perp(e_j)>|
    bool gamma_sum_integral = false;

    Vec2 normal(int family) const { return perp(e[family]); }
};

// Canonical angle scheme: e_j at phi + j*(2*pi/N) for odd N and
// phi + j*(pi/N) for even N, so directions are pairwise non-collinear
// for every N >= 2 (the full-turn scheme folds opposite directions
// together when N is even).
DirectionBasis build_basis(int n, double phi, const std::vector<double>& gammas);

struct VertexKey {
    std::vector<std::int32_t> k;

    bool operator==(const VertexKey& o) const { return k == o.k; }
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto c : v.k) {
            h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(c));
            h *= 1099511628211ull;
        }
        return h;
    }
};

inline VertexKey key_shift(VertexKey v, int family, int delta) {
    v.k[static_cast<std::size_t>(family)] += delta;
    return v;
}

// An undirected tiling edge from V(anchor) to V(anchor + u_family).
struct EdgeKey {
    VertexKey anchor;
    int family = 0;

    bool operator==(const EdgeKey& o) const { return family == o.family && anchor == o.anchor; }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const {
        return VertexKeyHash{}(e.anchor) * 31u + static_cast<std::size_t>(e.family);
    }
};

struct Tile {
    int id = 0;
    std::array<int, 2> families{};  // i < j
    std::array<int, 2> lines{};     // grid line indices (k_i, k_j)
    VertexKey base;                 // vertices are base + eps_i*u_i + eps_j*u_j
    Vec2 barycenter;
};

struct PatchProvenance {
    std::string kind;      // "multigrid", "penrose", "grid", "band", ...
    double radius = 0.0;
    bool gamma_sum_integral = false;
    std::vector<int> sparse_families;  // families restricted to a single line
};

class TilingPatch {
  public:
    DirectionBasis basis;
    std::vector<Tile> tiles;
    std::unordered_map<VertexKey, std::vector<int>, VertexKeyHash> vertex_index;
    std::unordered_map<EdgeKey, std::vector<int>, EdgeKeyHash> edge_index;
    std::vector<std::uint8_t> interior;  // all four edges shared
    PatchProvenance provenance;

    int size() const { return static_cast<int>(tiles.size()); }

    Vec2 embed(const VertexKey& key) const;

    // Corners in counter-clockwise order starting at base.
    std::array<VertexKey, 4> corners_ccw(int tile) const;

    struct TileEdge {
        VertexKey a, b;     // ccw endpoints
        EdgeKey key;        // canonical (anchor, family)
    };
    // Edge k joins corner k to corner k+1 (mod 4).
    std::array<TileEdge, 4> edges_ccw(int tile) const;

    const std::vector<int>* tiles_on_edge(const EdgeKey& key) const;

    // True when the tiles around the vertex close up to a full turn.
    bool vertex_star_complete(const VertexKey& key) const;

    // Rebuild indexes, barycenters and interior mask from basis + tiles.
    void reindex();
};

// Dual of the full multigrid restricted to crossings within `radius` of
// the origin. Throws errc::singular_grid when three lines meet within
// 1e-9 of a common point.
TilingPatch generate_patch(const DirectionBasis& basis, double radius);

// Sparse-family multigrid: basis must have five families;
// families 0, 1 and 2 contribute a single line each (at their basis
// offset), families 3 and 4 are dense. The three sparse lines must form
// a nondegenerate triangle inside the window.
TilingPatch generate_band_tiling(const DirectionBasis& basis, double radius);

struct BandParams {
    double scale = 0.35;          // triangle size parameter
    Vec2 anchor{-0.10, 0.20};     // crossing of sparse lines 0 and 1
    double gamma3 = 0.43;
    double gamma4 = 0.57;
};

// Canonical band tiling whose three-tile "cube" is a fortress for the
// partially directed rule (see band_f3_rule in dynamics).
TilingPatch make_band_tiling(double radius, const BandParams& params = {});

// The three tiles with both families sparse, sorted by id.
std::array<int, 3> band_cube(const TilingPatch& patch);

// Default offsets: the classic Penrose-class choice (sum 1) and a
// generic non-singular choice for other N.
std::vector<double> penrose_offsets();
std::vector<double> default_offsets(int n);

} // namespace quasiperc
