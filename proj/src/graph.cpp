#include "quasiperc/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace quasiperc {

Vec2 AdjacencyGraph::node_point(int node) const {
    if (rhombus()) return patch->tiles[static_cast<std::size_t>(node)].barycenter;
    if (!polygons.empty() && !polygons[static_cast<std::size_t>(node)].empty()) {
        Vec2 c;
        const auto& poly = polygons[static_cast<std::size_t>(node)];
        for (const Vec2& p : poly) c = c + p;
        return c * (1.0 / static_cast<double>(poly.size()));
    }
    const auto& xy = coords[static_cast<std::size_t>(node)];
    return {static_cast<double>(xy[0]), static_cast<double>(xy[1])};
}

AdjacencyGraph build_adjacency(std::shared_ptr<const TilingPatch> patch) {
    AdjacencyGraph g;
    g.kind = AdjacencyGraph::Kind::rhombus;
    g.patch = patch;
    const TilingPatch& p = *patch;
    g.arcs.assign(p.tiles.size(), {});
    g.interior.assign(p.interior.begin(), p.interior.end());
    g.virtual_boundary.assign(p.tiles.size(), 0);

    for (const auto& [key, ids] : p.edge_index) {
        if (ids.size() > 2) {
            throw error(errc::invalid_patch, "edge shared by more than two tiles");
        }
        if (ids.size() != 2) continue;
        const int u = ids[0];
        const int v = ids[1];
        const Vec2 d = p.tiles[static_cast<std::size_t>(v)].barycenter -
                       p.tiles[static_cast<std::size_t>(u)].barycenter;
        const double proj = dot(d, p.basis.normal(key.family));
        if (std::abs(proj) < 1e-9) {
            throw error(errc::invalid_patch, "degenerate adjacency direction");
        }
        const std::int8_t s = proj > 0 ? 1 : -1;
        g.arcs[static_cast<std::size_t>(u)].push_back({v, static_cast<std::int16_t>(key.family), s});
        g.arcs[static_cast<std::size_t>(v)].push_back({u, static_cast<std::int16_t>(key.family), static_cast<std::int8_t>(-s)});
    }
    for (std::size_t i = 0; i < g.arcs.size(); ++i) {
        auto& a = g.arcs[i];
        std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) {
            return std::tie(x.family, x.sign, x.to) < std::tie(y.family, y.sign, y.to);
        });
        if (a.size() > 4) {
            throw error(errc::invalid_patch, "rhombus tile with more than four neighbours");
        }
        g.virtual_boundary[i] = 4 - static_cast<int>(a.size());
    }
    return g;
}

AdjacencyGraph build_adjacency(TilingPatch patch) {
    return build_adjacency(std::make_shared<const TilingPatch>(std::move(patch)));
}

namespace {

std::vector<Vec2> cell_square(int i, int j) {
    const double x = i, y = j;
    return {{x - 0.5, y - 0.5}, {x + 0.5, y - 0.5}, {x + 0.5, y + 0.5}, {x - 0.5, y + 0.5}};
}

void add_undirected(AdjacencyGraph& g, int u, int v) {
    g.arcs[static_cast<std::size_t>(u)].push_back({v, -1, 0});
    g.arcs[static_cast<std::size_t>(v)].push_back({u, -1, 0});
}

} // namespace

AdjacencyGraph generate_fortress_grid(int half_size) {
    if (half_size < 2) {
        throw error(errc::invalid_input, "fortress grid needs half_size >= 2");
    }
    AdjacencyGraph g;
    g.kind = AdjacencyGraph::Kind::generic;
    g.builder = "fortress-grid";
    g.half_size = half_size;
    const int h = half_size;

    std::map<std::pair<int, int>, int> cell_id;
    for (int j = -h; j <= h; ++j) {
        for (int i = -h; i <= h; ++i) {
            if (i == 0 && j == 0) continue;
            cell_id[{i, j}] = static_cast<int>(g.coords.size());
            g.coords.push_back({i, j});
            std::ostringstream name;
            name << "cell:" << i << "," << j;
            g.labels.push_back(name.str());
            g.polygons.push_back(cell_square(i, j));
        }
    }
    // The origin square is replaced by a small central square and four
    // trapezoids, one per side.
    const int c = static_cast<int>(g.coords.size());
    const char* names[5] = {"fortress:C", "fortress:N", "fortress:E", "fortress:S", "fortress:W"};
    const double s = 0.25;
    std::vector<std::vector<Vec2>> fortress_polys = {
        {{-s, -s}, {s, -s}, {s, s}, {-s, s}},
        {{-0.5, 0.5}, {-s, s}, {s, s}, {0.5, 0.5}},
        {{0.5, 0.5}, {s, s}, {s, -s}, {0.5, -0.5}},
        {{0.5, -0.5}, {s, -s}, {-s, -s}, {-0.5, -0.5}},
        {{-0.5, -0.5}, {-s, -s}, {-s, s}, {-0.5, 0.5}},
    };
    for (int k = 0; k < 5; ++k) {
        g.coords.push_back({0, 0});
        g.labels.push_back(names[k]);
        g.polygons.push_back(fortress_polys[static_cast<std::size_t>(k)]);
    }
    g.arcs.assign(g.coords.size(), {});
    g.interior.assign(g.coords.size(), 0);
    g.virtual_boundary.assign(g.coords.size(), 0);

    for (const auto& [xy, id] : cell_id) {
        const auto [i, j] = xy;
        g.interior[static_cast<std::size_t>(id)] = (std::abs(i) < h && std::abs(j) < h) ? 1 : 0;
        int missing = 0;
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ni = i + dx[d];
            const int nj = j + dy[d];
            if (std::abs(ni) > h || std::abs(nj) > h) {
                ++missing;
                continue;
            }
            if (ni == 0 && nj == 0) continue;  // handled by the fortress links
            auto it = cell_id.find({ni, nj});
            if (it->second > id) add_undirected(g, id, it->second);
        }
        g.virtual_boundary[static_cast<std::size_t>(id)] = missing;
    }
    const int C = c, N = c + 1, E = c + 2, S = c + 3, W = c + 4;
    add_undirected(g, C, N);
    add_undirected(g, C, E);
    add_undirected(g, C, S);
    add_undirected(g, C, W);
    add_undirected(g, N, E);
    add_undirected(g, E, S);
    add_undirected(g, S, W);
    add_undirected(g, W, N);
    add_undirected(g, N, cell_id.at({0, 1}));
    add_undirected(g, E, cell_id.at({1, 0}));
    add_undirected(g, S, cell_id.at({0, -1}));
    add_undirected(g, W, cell_id.at({-1, 0}));
    for (int k = 0; k < 5; ++k) g.interior[static_cast<std::size_t>(c + k)] = 1;

    for (auto& a : g.arcs) {
        std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
    }
    return g;
}

AdjacencyGraph grid_with_hole(int half_size) {
    if (half_size < 1) {
        throw error(errc::invalid_input, "grid with hole needs half_size >= 1");
    }
    AdjacencyGraph g;
    g.kind = AdjacencyGraph::Kind::generic;
    g.builder = "grid-hole";
    g.half_size = half_size;
    const int h = half_size;

    std::map<std::pair<int, int>, int> cell_id;
    for (int j = -h; j <= h; ++j) {
        for (int i = -h; i <= h; ++i) {
            if (i == 0 && j == 0) continue;
            cell_id[{i, j}] = static_cast<int>(g.coords.size());
            g.coords.push_back({i, j});
            std::ostringstream name;
            name << "cell:" << i << "," << j;
            g.labels.push_back(name.str());
            g.polygons.push_back(cell_square(i, j));
        }
    }
    g.arcs.assign(g.coords.size(), {});
    g.interior.assign(g.coords.size(), 0);
    g.virtual_boundary.assign(g.coords.size(), 0);
    for (const auto& [xy, id] : cell_id) {
        const auto [i, j] = xy;
        g.interior[static_cast<std::size_t>(id)] = (std::abs(i) < h && std::abs(j) < h) ? 1 : 0;
        int missing = 0;
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ni = i + dx[d];
            const int nj = j + dy[d];
            if (std::abs(ni) > h || std::abs(nj) > h) {
                ++missing;
                continue;
            }
            if (ni == 0 && nj == 0) continue;  // the hole never reappears
            auto it = cell_id.find({ni, nj});
            if (it->second > id) add_undirected(g, id, it->second);
        }
        g.virtual_boundary[static_cast<std::size_t>(id)] = missing;
    }
    for (auto& a : g.arcs) {
        std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
    }
    return g;
}

std::vector<int> fortress_nodes(const AdjacencyGraph& graph) {
    std::vector<int> out;
    for (std::size_t i = 0; i < graph.labels.size(); ++i) {
        if (graph.labels[i].rfind("fortress:", 0) == 0) out.push_back(static_cast<int>(i));
    }
    return out;
}

namespace {

void require_rhombus(const AdjacencyGraph& graph) {
    if (!graph.rhombus()) {
        throw error(errc::wrong_family, "operation requires a rhombus-kind graph");
    }
}

// Neighbour across an edge of `family` with the requested arc sign, if any.
int m_neighbour(const AdjacencyGraph& g, int tile, int family, int sign) {
    for (const Arc& a : g.arcs[static_cast<std::size_t>(tile)]) {
        if (a.family == family && a.sign == sign) return a.to;
    }
    return -1;
}

} // namespace

Chain chain_through(const AdjacencyGraph& graph, int tile, int family) {
    require_rhombus(graph);
    const TilingPatch& p = *graph.patch;
    const Tile& t = p.tiles[static_cast<std::size_t>(tile)];
    int slot = -1;
    if (t.families[0] == family) slot = 0;
    if (t.families[1] == family) slot = 1;
    if (slot < 0) {
        throw error(errc::wrong_family, "tile has no edge of the requested family");
    }
    Chain chain;
    chain.family = family;
    chain.line = t.lines[static_cast<std::size_t>(slot)];
    chain.normal = p.basis.normal(family);

    std::deque<int> run{tile};
    for (int cur = tile;;) {
        const int next = m_neighbour(graph, cur, family, +1);
        if (next < 0) break;
        run.push_back(next);
        cur = next;
    }
    for (int cur = tile;;) {
        const int prev = m_neighbour(graph, cur, family, -1);
        if (prev < 0) break;
        run.push_front(prev);
        cur = prev;
    }
    chain.tiles.assign(run.begin(), run.end());
    chain.truncated_lo = !graph.interior[static_cast<std::size_t>(chain.tiles.front())];
    chain.truncated_hi = !graph.interior[static_cast<std::size_t>(chain.tiles.back())];
    return chain;
}

std::vector<Chain> all_chains(const AdjacencyGraph& graph) {
    require_rhombus(graph);
    std::vector<Chain> out;
    std::set<std::pair<int, int>> seen;  // (family, line)
    for (const Tile& t : graph.patch->tiles) {
        for (int slot = 0; slot < 2; ++slot) {
            const int family = t.families[static_cast<std::size_t>(slot)];
            const int line = t.lines[static_cast<std::size_t>(slot)];
            if (!seen.insert({family, line}).second) continue;
            out.push_back(chain_through(graph, t.id, family));
        }
    }
    return out;
}

CrossingReport verify_chain_crossing(const AdjacencyGraph& graph) {
    const std::vector<Chain> chains = all_chains(graph);
    CrossingReport report;

    // Chains sharing a tile are found through per-tile membership; a
    // pair sharing two tiles shows up as a repeated pair.
    std::map<std::pair<int, int>, std::vector<int>> shared;  // (chain a, chain b) -> tiles
    std::vector<std::vector<int>> member(graph.arcs.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (int tile : chains[c].tiles) {
            member[static_cast<std::size_t>(tile)].push_back(static_cast<int>(c));
        }
    }
    for (std::size_t tile = 0; tile < member.size(); ++tile) {
        auto& ms = member[tile];
        if (ms.size() != 2) {
            report.violations.push_back(
                {-1, -1, "tile " + std::to_string(tile) + " lies in " + std::to_string(ms.size()) + " chains"});
            continue;
        }
        const int a = std::min(ms[0], ms[1]);
        const int b = std::max(ms[0], ms[1]);
        shared[{a, b}].push_back(static_cast<int>(tile));
    }
    for (const auto& [pair, tiles] : shared) {
        ++report.pairs_sharing;
        const Chain& ca = chains[static_cast<std::size_t>(pair.first)];
        const Chain& cb = chains[static_cast<std::size_t>(pair.second)];
        if (tiles.size() > 1) {
            report.violations.push_back({pair.first, pair.second,
                                         "chains intersect " + std::to_string(tiles.size()) + " times"});
        }
        if (ca.family == cb.family) {
            report.violations.push_back({pair.first, pair.second, "same-family chains intersect"});
        }
        for (int tile : tiles) {
            const Tile& t = graph.patch->tiles[static_cast<std::size_t>(tile)];
            const bool families_match = (t.families[0] == std::min(ca.family, cb.family) &&
                                         t.families[1] == std::max(ca.family, cb.family));
            if (!families_match) {
                report.violations.push_back(
                    {pair.first, pair.second, "shared tile families differ from chain directions"});
            }
        }
    }
    return report;
}

std::vector<int> vertex_neighbours(const AdjacencyGraph& graph, std::span<const int> s) {
    require_rhombus(graph);
    const TilingPatch& p = *graph.patch;
    std::unordered_set<int> in_s(s.begin(), s.end());
    std::set<int> out;
    for (int tile : s) {
        for (const VertexKey& v : p.corners_ccw(tile)) {
            auto it = p.vertex_index.find(v);
            if (it == p.vertex_index.end()) continue;
            for (int other : it->second) {
                if (!in_s.count(other)) out.insert(other);
            }
        }
    }
    return {out.begin(), out.end()};
}

std::vector<int> bfs_distances(const AdjacencyGraph& graph, int source) {
    std::vector<int> dist(graph.arcs.size(), -1);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const Arc& a : graph.arcs[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(a.to)] < 0) {
                dist[static_cast<std::size_t>(a.to)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(a.to);
            }
        }
    }
    return dist;
}

int central_node(const AdjacencyGraph& graph) {
    int best = 0;
    double best_d = 1e300;
    for (int i = 0; i < graph.size(); ++i) {
        const double d = norm(graph.node_point(i));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace quasiperc
