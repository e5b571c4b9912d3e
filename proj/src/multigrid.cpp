#include "quasiperc/multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace quasiperc {

namespace {

constexpr double kSingularTol = 1e-9;

double nearest_int_dist(double v) { return std::abs(v - std::round(v)); }

} // namespace

DirectionBasis build_basis(int n, double phi, const std::vector<double>& gammas) {
    if (n < 2) {
        throw error(errc::invalid_basis, "direction basis needs at least 2 families");
    }
    if (static_cast<int>(gammas.size()) != n) {
        throw error(errc::invalid_basis, "offset count does not match family count");
    }
    DirectionBasis basis;
    basis.n = n;
    basis.phi = phi;
    basis.gamma = gammas;
    const double step = (n % 2 == 1) ? 2.0 * std::numbers::pi / n : std::numbers::pi / n;
    basis.e.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double a = phi + step * j;
        basis.e.push_back({std::cos(a), std::sin(a)});
    }
    double theta = 2.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double c = std::abs(dot(basis.e[static_cast<std::size_t>(i)],
                                          perp(basis.e[static_cast<std::size_t>(j)])));
            theta = std::min(theta, c);
            if (c < 1e-12) {
                std::ostringstream msg;
                msg << "collinear directions " << i << " and " << j;
                throw error(errc::degenerate_basis, msg.str());
            }
        }
    }
    basis.theta = theta;
    double sum = 0.0;
    for (double g : gammas) sum += g;
    basis.gamma_sum_integral = nearest_int_dist(sum) < 1e-9;
    return basis;
}

std::vector<double> penrose_offsets() { return {0.13, 0.27, 0.04, 0.35, 0.21}; }

std::vector<double> default_offsets(int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        g[static_cast<std::size_t>(j)] = (2.0 * j + 1.0) / (4.0 * n);
    }
    return g;
}

Vec2 TilingPatch::embed(const VertexKey& key) const {
    Vec2 v;
    for (int j = 0; j < basis.n; ++j) {
        v = v + basis.e[static_cast<std::size_t>(j)] * static_cast<double>(key.k[static_cast<std::size_t>(j)]);
    }
    return v;
}

std::array<VertexKey, 4> TilingPatch::corners_ccw(int tile) const {
    const Tile& t = tiles[static_cast<std::size_t>(tile)];
    const int fi = t.families[0];
    const int fj = t.families[1];
    const VertexKey b0 = t.base;
    const VertexKey b1 = key_shift(b0, fi, +1);
    const VertexKey b2 = key_shift(b1, fj, +1);
    const VertexKey b3 = key_shift(b0, fj, +1);
    const double orient = cross(basis.e[static_cast<std::size_t>(fi)], basis.e[static_cast<std::size_t>(fj)]);
    if (orient > 0.0) return {b0, b1, b2, b3};
    return {b0, b3, b2, b1};
}

std::array<TilingPatch::TileEdge, 4> TilingPatch::edges_ccw(int tile) const {
    const auto c = corners_ccw(tile);
    std::array<TileEdge, 4> out;
    for (int k = 0; k < 4; ++k) {
        const VertexKey& a = c[static_cast<std::size_t>(k)];
        const VertexKey& b = c[static_cast<std::size_t>((k + 1) % 4)];
        int family = -1;
        int delta = 0;
        for (int j = 0; j < basis.n && family < 0; ++j) {
            const int d = b.k[static_cast<std::size_t>(j)] - a.k[static_cast<std::size_t>(j)];
            if (d != 0) {
                family = j;
                delta = d;
            }
        }
        TileEdge e;
        e.a = a;
        e.b = b;
        e.key.family = family;
        e.key.anchor = delta > 0 ? a : b;
        out[static_cast<std::size_t>(k)] = e;
    }
    return out;
}

const std::vector<int>* TilingPatch::tiles_on_edge(const EdgeKey& key) const {
    auto it = edge_index.find(key);
    return it == edge_index.end() ? nullptr : &it->second;
}

bool TilingPatch::vertex_star_complete(const VertexKey& key) const {
    auto it = vertex_index.find(key);
    if (it == vertex_index.end()) return false;
    double angle = 0.0;
    for (int id : it->second) {
        const Tile& t = tiles[static_cast<std::size_t>(id)];
        const Vec2 ei = basis.e[static_cast<std::size_t>(t.families[0])];
        const Vec2 ej = basis.e[static_cast<std::size_t>(t.families[1])];
        // Edge vectors leaving this corner: +-e depending on which corner
        // of the rhombus the vertex is.
        const int di = key.k[static_cast<std::size_t>(t.families[0])] - t.base.k[static_cast<std::size_t>(t.families[0])];
        const int dj = key.k[static_cast<std::size_t>(t.families[1])] - t.base.k[static_cast<std::size_t>(t.families[1])];
        const Vec2 u = di == 0 ? ei : -ei;
        const Vec2 v = dj == 0 ? ej : -ej;
        angle += std::acos(std::clamp(dot(u, v), -1.0, 1.0));
    }
    return std::abs(angle - 2.0 * std::numbers::pi) < 1e-6;
}

void TilingPatch::reindex() {
    vertex_index.clear();
    edge_index.clear();
    interior.assign(tiles.size(), 0);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        Tile& t = tiles[i];
        t.id = static_cast<int>(i);
        t.barycenter = embed(t.base) +
                       (basis.e[static_cast<std::size_t>(t.families[0])] +
                        basis.e[static_cast<std::size_t>(t.families[1])]) *
                           0.5;
        const VertexKey b0 = t.base;
        const VertexKey b1 = key_shift(b0, t.families[0], +1);
        const VertexKey b2 = key_shift(b1, t.families[1], +1);
        const VertexKey b3 = key_shift(b0, t.families[1], +1);
        for (const VertexKey& v : {b0, b1, b2, b3}) {
            vertex_index[v].push_back(t.id);
        }
        edge_index[{b0, t.families[0]}].push_back(t.id);
        edge_index[{b0, t.families[1]}].push_back(t.id);
        edge_index[{b3, t.families[0]}].push_back(t.id);
        edge_index[{b1, t.families[1]}].push_back(t.id);
    }
    for (auto& [key, ids] : edge_index) {
        if (ids.size() > 2) {
            throw error(errc::invalid_patch, "edge shared by more than two tiles");
        }
    }
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const Tile& t = tiles[i];
        const VertexKey b0 = t.base;
        const VertexKey b1 = key_shift(b0, t.families[0], +1);
        const VertexKey b3 = key_shift(b0, t.families[1], +1);
        const EdgeKey edges[4] = {{b0, t.families[0]},
                                  {b0, t.families[1]},
                                  {b3, t.families[0]},
                                  {b1, t.families[1]}};
        bool inside = true;
        for (const EdgeKey& e : edges) {
            if (edge_index.at(e).size() != 2) inside = false;
        }
        interior[i] = inside ? 1 : 0;
    }
}

namespace {

struct FamilyLines {
    bool dense = true;
    // Sparse families contribute the single line of index 0.
};

std::vector<int> line_range(const DirectionBasis& basis, int family, double radius, bool dense) {
    if (!dense) return {0};
    const double g = basis.gamma[static_cast<std::size_t>(family)];
    const int lo = static_cast<int>(std::ceil(-radius - g - 1e-12));
    const int hi = static_cast<int>(std::floor(radius - g + 1e-12));
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
}

TilingPatch dual_patch(const DirectionBasis& basis, double radius,
                       const std::vector<FamilyLines>& families, PatchProvenance prov) {
    if (radius <= 0.0) {
        throw error(errc::invalid_input, "window radius must be positive");
    }
    TilingPatch patch;
    patch.basis = basis;
    patch.provenance = std::move(prov);
    patch.provenance.radius = radius;
    patch.provenance.gamma_sum_integral = basis.gamma_sum_integral;

    const int n = basis.n;
    std::vector<std::vector<int>> lines(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        lines[static_cast<std::size_t>(j)] = line_range(basis, j, radius, families[static_cast<std::size_t>(j)].dense);
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec2 ei = basis.e[static_cast<std::size_t>(i)];
            const Vec2 ej = basis.e[static_cast<std::size_t>(j)];
            const double det = cross(ei, ej);
            for (int ki : lines[static_cast<std::size_t>(i)]) {
                const double a = basis.gamma[static_cast<std::size_t>(i)] + ki;
                for (int kj : lines[static_cast<std::size_t>(j)]) {
                    const double b = basis.gamma[static_cast<std::size_t>(j)] + kj;
                    // Intersection of <x,ei> = a with <x,ej> = b.
                    const Vec2 p{(a * ej.y - b * ei.y) / det, (ei.x * b - ej.x * a) / det};
                    if (norm(p) > radius + 1e-12) continue;

                    Tile t;
                    t.families = {i, j};
                    t.lines = {ki, kj};
                    t.base.k.assign(static_cast<std::size_t>(n), 0);
                    bool singular = false;
                    for (int m = 0; m < n && !singular; ++m) {
                        if (m == i) {
                            t.base.k[static_cast<std::size_t>(m)] = ki;
                            continue;
                        }
                        if (m == j) {
                            t.base.k[static_cast<std::size_t>(m)] = kj;
                            continue;
                        }
                        const double v = dot(p, basis.e[static_cast<std::size_t>(m)]) - basis.gamma[static_cast<std::size_t>(m)];
                        if (families[static_cast<std::size_t>(m)].dense) {
                            if (nearest_int_dist(v) < kSingularTol) {
                                std::ostringstream msg;
                                msg << "singular multigrid: lines (" << i << "," << ki << "), (" << j
                                    << "," << kj << "), (" << m << "," << static_cast<int>(std::round(v))
                                    << ") meet near a common point";
                                throw error(errc::singular_grid, msg.str());
                            }
                            t.base.k[static_cast<std::size_t>(m)] = static_cast<int>(std::ceil(v));
                        } else {
                            if (std::abs(v) < kSingularTol) {
                                std::ostringstream msg;
                                msg << "singular multigrid: lines (" << i << "," << ki << "), (" << j
                                    << "," << kj << "), (" << m << ",0) meet near a common point";
                                throw error(errc::singular_grid, msg.str());
                            }
                            t.base.k[static_cast<std::size_t>(m)] = v > 0.0 ? 1 : 0;
                        }
                    }
                    patch.tiles.push_back(std::move(t));
                }
            }
        }
    }
    patch.reindex();
    return patch;
}

} // namespace

TilingPatch generate_patch(const DirectionBasis& basis, double radius) {
    std::vector<FamilyLines> families(static_cast<std::size_t>(basis.n));
    PatchProvenance prov;
    prov.kind = "multigrid";
    return dual_patch(basis, radius, families, std::move(prov));
}

TilingPatch generate_band_tiling(const DirectionBasis& basis, double radius) {
    if (basis.n != 5) {
        throw error(errc::invalid_input, "band tiling needs a 5-direction basis");
    }
    // The three sparse lines must pairwise cross inside the window and
    // must not be concurrent.
    Vec2 pts[3];
    int idx = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec2 ei = basis.e[static_cast<std::size_t>(i)];
            const Vec2 ej = basis.e[static_cast<std::size_t>(j)];
            const double det = cross(ei, ej);
            if (std::abs(det) < 1e-12) {
                throw error(errc::degenerate_band, "sparse lines parallel");
            }
            const double a = basis.gamma[static_cast<std::size_t>(i)];
            const double b = basis.gamma[static_cast<std::size_t>(j)];
            pts[idx++] = {(a * ej.y - b * ei.y) / det, (ei.x * b - ej.x * a) / det};
        }
    }
    const double area2 = std::abs(cross(pts[1] - pts[0], pts[2] - pts[0]));
    if (area2 < 1e-9) {
        throw error(errc::degenerate_band, "sparse lines concurrent");
    }
    for (const Vec2& p : pts) {
        if (norm(p) > radius - 2.0) {
            throw error(errc::degenerate_band, "sparse-line triangle too close to the window rim");
        }
    }
    std::vector<FamilyLines> families(5);
    families[0].dense = families[1].dense = families[2].dense = false;
    PatchProvenance prov;
    prov.kind = "band";
    prov.sparse_families = {0, 1, 2};
    return dual_patch(basis, radius, families, std::move(prov));
}

TilingPatch make_band_tiling(double radius, const BandParams& params) {
    DirectionBasis shape = build_basis(5, 0.0, {0, 0, 0, 0, 0});
    // Triangle with one vertex per pairwise sparse crossing, oriented so
    // that each "cube" tile keeps exactly one allowed outside neighbour
    // under band_f3_rule. Side directions: +n0, -n1, +n2 with lengths
    // (t, t*sin36/sin72, t).
    const double t = params.scale;
    const Vec2 g0 = perp(shape.e[0]);
    const Vec2 g1 = -perp(shape.e[1]);
    const double ratio = std::abs(dot(shape.e[0], perp(shape.e[2]))) /
                         std::abs(dot(shape.e[0], perp(shape.e[1])));
    const Vec2 a = params.anchor;         // line0 x line1
    const Vec2 b = a - g0 * t;            // line0 x line2
    const Vec2 c = a + g1 * (ratio * t);  // line1 x line2
    std::vector<double> gammas = {
        dot(a, shape.e[0]), dot(a, shape.e[1]), dot(b, shape.e[2]), params.gamma3, params.gamma4};
    // Consistency: c must sit on both line 1 and line 2.
    if (std::abs(dot(c, shape.e[1]) - gammas[1]) > 1e-9 ||
        std::abs(dot(c, shape.e[2]) - gammas[2]) > 1e-9) {
        throw error(errc::degenerate_band, "triangle construction inconsistent");
    }
    DirectionBasis basis = build_basis(5, 0.0, gammas);
    return generate_band_tiling(basis, radius);
}

std::array<int, 3> band_cube(const TilingPatch& patch) {
    std::array<int, 3> cube{-1, -1, -1};
    int found = 0;
    for (const Tile& t : patch.tiles) {
        if (t.families[0] <= 2 && t.families[1] <= 2) {
            if (found < 3) cube[static_cast<std::size_t>(found)] = t.id;
            ++found;
        }
    }
    if (found != 3) {
        throw error(errc::invalid_patch, "band tiling does not contain exactly one cube");
    }
    return cube;
}

} // namespace quasiperc
