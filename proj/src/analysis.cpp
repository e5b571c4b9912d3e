#include "quasiperc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

namespace quasiperc {

namespace {

std::vector<int> sorted_ids(std::span<const int> s) {
    std::vector<int> out(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<std::vector<int>> clusters(const Configuration& config, Connectivity connectivity) {
    const AdjacencyGraph& g = *config.graph;
    if (connectivity == Connectivity::vertex && !g.rhombus()) {
        throw error(errc::invalid_input, "vertex connectivity needs a rhombus-kind graph");
    }
    std::vector<std::vector<int>> out;
    std::vector<std::uint8_t> seen(config.state.size(), 0);
    for (int start = 0; start < g.size(); ++start) {
        if (!config.state[start] || seen[start]) continue;
        std::vector<int> comp;
        std::deque<int> queue{start};
        seen[start] = 1;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            comp.push_back(u);
            auto visit = [&](int w) {
                if (config.state[w] && !seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            };
            if (connectivity == Connectivity::edge) {
                for (const Arc& a : g.arcs[u]) visit(a.to);
            } else {
                const TilingPatch& p = *g.patch;
                for (const VertexKey& v : p.corners_ccw(u)) {
                    auto it = p.vertex_index.find(v);
                    if (it == p.vertex_index.end()) continue;
                    for (int w : it->second) {
                        if (w != u) visit(w);
                    }
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chain convexity
// ---------------------------------------------------------------------------

namespace {

bool vertex_connected(const AdjacencyGraph& g, const std::vector<int>& s) {
    if (s.empty()) return false;
    const TilingPatch& p = *g.patch;
    std::unordered_set<int> in_s(s.begin(), s.end());
    std::unordered_set<int> seen{s[0]};
    std::deque<int> queue{s[0]};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (const VertexKey& v : p.corners_ccw(u)) {
            auto it = p.vertex_index.find(v);
            if (it == p.vertex_index.end()) continue;
            for (int w : it->second) {
                if (in_s.count(w) && !seen.count(w)) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    return seen.size() == s.size();
}

} // namespace

ClusterReport check_chain_convex(const AdjacencyGraph& graph, std::span<const int> s_in, int margin) {
    if (!graph.rhombus()) {
        throw error(errc::wrong_family, "chain convexity needs a rhombus-kind graph");
    }
    if (s_in.empty()) {
        throw error(errc::invalid_input, "empty tile set");
    }
    ClusterReport report;
    report.cluster = sorted_ids(s_in);
    if (!vertex_connected(graph, report.cluster)) {
        throw error(errc::invalid_input, "tile set is not vertex-connected");
    }

    const std::vector<int> star = vertex_neighbours(graph, report.cluster);
    std::unordered_set<int> in_s(report.cluster.begin(), report.cluster.end());
    std::unordered_set<int> in_star(star.begin(), star.end());
    std::unordered_set<int> edge_adjacent;  // N(S)
    for (int t : star) {
        for (const Arc& a : graph.arcs[t]) {
            if (in_s.count(a.to)) {
                edge_adjacent.insert(t);
                break;
            }
        }
    }

    for (int t : report.cluster) {
        if (!graph.interior[t]) report.touches_boundary = true;
    }
    for (int t : star) {
        if (!graph.interior[t]) report.touches_boundary = true;
    }

    // Chains touching S u N*(S), one per (family, line).
    std::set<std::pair<int, int>> keys;
    std::vector<Chain> relevant;
    auto add_chains_of = [&](int tile) {
        const Tile& t = graph.patch->tiles[tile];
        for (int slot = 0; slot < 2; ++slot) {
            if (keys.insert({t.families[slot], t.lines[slot]}).second) {
                relevant.push_back(chain_through(graph, tile, t.families[slot]));
            }
        }
    };
    for (int t : report.cluster) add_chains_of(t);
    for (int t : star) add_chains_of(t);

    bool any_truncated = false;
    for (const Chain& chain : relevant) {
        const int len = static_cast<int>(chain.tiles.size());
        int win_lo = len, win_hi = -1;
        std::vector<int> s_idx, star_idx, edge_idx;
        for (int i = 0; i < len; ++i) {
            const int tile = chain.tiles[i];
            const bool is_s = in_s.count(tile) > 0;
            const bool is_star = in_star.count(tile) > 0;
            if (is_s || is_star) {
                win_lo = std::min(win_lo, i);
                win_hi = std::max(win_hi, i);
            }
            if (is_s) s_idx.push_back(i);
            if (is_star) star_idx.push_back(i);
            if (edge_adjacent.count(tile)) edge_idx.push_back(i);
        }
        if (win_hi < 0) continue;

        auto fail = [&](const std::string& what) {
            report.chain_convex = Verdict::no;
            report.witness = chain;
            report.witness_what = what;
        };

        // The interval check is definite even on a truncated window: a
        // gap between S-tiles cannot close by extending the chain.
        if (!s_idx.empty() && s_idx.back() - s_idx.front() + 1 != static_cast<int>(s_idx.size())) {
            fail("chain intersection with S is not an interval");
            return report;
        }

        const bool margin_ok = win_lo >= margin && (len - 1 - win_hi) >= margin;
        if (!margin_ok) {
            any_truncated = true;
            continue;
        }

        // Dichotomy of the definition for every vertex-adjacent pair.
        for (std::size_t a = 0; a < star_idx.size(); ++a) {
            for (std::size_t b = a + 1; b < star_idx.size(); ++b) {
                const int i = star_idx[a];
                const int j = star_idx[b];
                bool branch1 = s_idx.empty();
                for (int k = i + 1; k < j && branch1; ++k) {
                    if (!edge_adjacent.count(chain.tiles[k])) branch1 = false;
                }
                bool branch2 = edge_idx.size() == 2 && edge_idx[0] == i && edge_idx[1] == j;
                if (branch2) {
                    branch2 = static_cast<int>(s_idx.size()) == j - i - 1 &&
                              (s_idx.empty() || (s_idx.front() == i + 1 && s_idx.back() == j - 1));
                }
                if (!branch1 && !branch2) {
                    std::ostringstream what;
                    what << "vertex-neighbour pair at chain positions " << i << "," << j
                         << " violates the dichotomy";
                    fail(what.str());
                    return report;
                }
            }
        }
    }
    report.chain_convex = any_truncated || report.touches_boundary ? Verdict::indeterminate : Verdict::yes;
    return report;
}

// ---------------------------------------------------------------------------
// Exterior boundary walk
// ---------------------------------------------------------------------------

namespace {

struct DirectedEdge {
    VertexKey from, to;
    EdgeKey key;
    int owner = 0;  // S-tile on the left
};

// Tile on the other side of `key` from `tile`, or -1.
int across(const TilingPatch& p, int tile, const EdgeKey& key) {
    const std::vector<int>* ids = p.tiles_on_edge(key);
    if (!ids) return -1;
    for (int id : *ids) {
        if (id != tile) return id;
    }
    return -1;
}

// The tile's other edge at corner `v` (each corner joins two edges).
EdgeKey other_edge_at(const TilingPatch& p, int tile, const VertexKey& v, const EdgeKey& entered) {
    for (const auto& e : p.edges_ccw(tile)) {
        if (!(e.key == entered) && (e.a == v || e.b == v)) return e.key;
    }
    throw error(errc::invalid_patch, "corner is not on the tile");
}

} // namespace

ClusterReport boundary_decomposition(const AdjacencyGraph& graph, std::span<const int> s_in) {
    if (!graph.rhombus()) {
        throw error(errc::wrong_family, "boundary decomposition needs a rhombus-kind graph");
    }
    if (s_in.empty()) {
        throw error(errc::invalid_input, "empty tile set");
    }
    const TilingPatch& p = *graph.patch;
    ClusterReport report;
    report.cluster = sorted_ids(s_in);
    if (!vertex_connected(graph, report.cluster)) {
        throw error(errc::invalid_input, "tile set is not vertex-connected");
    }
    std::unordered_set<int> in_s(report.cluster.begin(), report.cluster.end());
    const std::vector<int> star = vertex_neighbours(graph, report.cluster);

    for (int t : report.cluster) {
        if (!graph.interior[t]) report.touches_boundary = true;
    }
    for (int t : star) {
        if (!graph.interior[t]) report.touches_boundary = true;
    }
    if (!report.touches_boundary) {
        // The walk pivots through complete vertex stars only.
        for (int t : report.cluster) {
            for (const VertexKey& v : p.corners_ccw(t)) {
                if (!p.vertex_star_complete(v)) {
                    report.touches_boundary = true;
                    break;
                }
            }
            if (report.touches_boundary) break;
        }
    }
    if (report.touches_boundary) {
        report.boundary_what = "cluster touches the patch boundary";
        return report;
    }

    // Directed boundary edges of S, oriented with S on the left.
    std::vector<DirectedEdge> boundary;
    for (int t : report.cluster) {
        for (const auto& e : p.edges_ccw(t)) {
            const int other = across(p, t, e.key);
            if (other < 0 || !in_s.count(other)) {
                boundary.push_back({e.a, e.b, e.key, t});
            }
        }
    }
    if (boundary.empty()) {
        report.boundary_what = "no boundary edges";
        return report;
    }

    // Start on the outer component: boundary edge with extreme midpoint.
    std::size_t start = 0;
    double best = -1e300;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const Vec2 mid = (p.embed(boundary[i].from) + p.embed(boundary[i].to)) * 0.5;
        const double score = mid.x * 1e6 + mid.y;
        if (score > best) {
            best = score;
            start = i;
        }
    }

    auto find_edge = [&](const VertexKey& from, const EdgeKey& key, int owner) -> long {
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            if (boundary[i].owner == owner && boundary[i].key == key && boundary[i].from == from) {
                return static_cast<long>(i);
            }
        }
        return -1;
    };

    // Walk the outer boundary. At each vertex the exterior fan rotates
    // from the tile across the incoming edge until it crosses back into
    // S; that crossing is the outgoing boundary edge. Deriving the exit
    // from the fan itself keeps the walk correct at vertices where the
    // cluster pinches to a point. The tile in front of the crossing is
    // left for the next fan.
    std::vector<int> cycle;
    std::vector<std::uint8_t> used(boundary.size(), 0);
    std::size_t cur = start;
    for (std::size_t steps = 0; steps <= boundary.size() + 1; ++steps) {
        if (used[cur]) break;  // loop closed
        used[cur] = 1;
        const DirectedEdge e = boundary[cur];
        const VertexKey pivot_vertex = e.to;

        int w = across(p, e.owner, e.key);
        EdgeKey entered = e.key;
        long out_idx = -1;
        for (int guard = 0; guard < 64; ++guard) {
            if (w < 0) {
                report.boundary_what = "boundary fan left the patch";
                return report;
            }
            const EdgeKey exit = other_edge_at(p, w, pivot_vertex, entered);
            const int nxt = across(p, w, exit);
            if (nxt >= 0 && in_s.count(nxt)) {
                out_idx = find_edge(pivot_vertex, exit, nxt);
                break;
            }
            cycle.push_back(w);
            w = nxt;
            entered = exit;
        }
        if (out_idx < 0) {
            report.boundary_what = "boundary walk lost";
            return report;
        }
        cur = static_cast<std::size_t>(out_idx);
    }
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        if (!used[i]) {
            report.boundary_what = "cluster has interior holes";
            return report;
        }
    }

    // Validate: exactly N*(S), consecutive tiles edge-adjacent, no chords.
    std::vector<int> cyc_sorted = cycle;
    std::sort(cyc_sorted.begin(), cyc_sorted.end());
    if (std::adjacent_find(cyc_sorted.begin(), cyc_sorted.end()) != cyc_sorted.end()) {
        report.boundary_what = "exterior cycle revisits a tile";
        return report;
    }
    if (cyc_sorted != star) {
        report.boundary_what = "exterior cycle differs from the vertex neighbourhood";
        return report;
    }

    const int len = static_cast<int>(cycle.size());
    ChainGon gon;
    gon.cycle = cycle;
    std::vector<int> families(len, -1);
    for (int i = 0; i < len; ++i) {
        const int u = cycle[i];
        const int v = cycle[(i + 1) % len];
        int fam = -1;
        for (const Arc& a : graph.arcs[u]) {
            if (a.to == v) fam = a.family;
        }
        if (fam < 0) {
            report.boundary_what = "consecutive exterior tiles are not edge-adjacent";
            return report;
        }
        families[i] = fam;
    }
    for (int i = 0; i < len; ++i) {
        for (const Arc& a : graph.arcs[cycle[i]]) {
            const auto it = std::find(cycle.begin(), cycle.end(), a.to);
            if (it == cycle.end()) continue;
            const int j = static_cast<int>(it - cycle.begin());
            const int d = std::abs(i - j);
            if (d != 1 && d != len - 1 && d != 0) {
                report.boundary_what = "exterior cycle has a chord";
                return report;
            }
        }
    }

    // Runs of constant shared-edge family around the cycle.
    int run_start = 0;
    while (run_start < len && families[(run_start + len - 1) % len] == families[run_start]) {
        ++run_start;
        if (run_start == len) break;  // single family all around
    }
    if (run_start == len) run_start = 0;
    int i = run_start;
    do {
        ChainGon::Segment seg;
        seg.family = families[i];
        seg.start = i;
        int j = i;
        int edges = 1;
        while (families[(j + 1) % len] == seg.family && edges < len) {
            j = (j + 1) % len;
            ++edges;
        }
        seg.length = edges + 1;
        gon.segments.push_back(seg);
        i = (j + 1) % len;
    } while (i != run_start && static_cast<int>(gon.segments.size()) <= len);

    const int d = p.basis.n;
    std::map<int, int> per_family;
    for (const auto& seg : gon.segments) ++per_family[seg.family];
    bool family_ok = true;
    for (const auto& entry : per_family) {
        if (entry.second > 2) family_ok = false;
    }
    gon.convex = static_cast<int>(gon.segments.size()) <= 2 * d && family_ok;

    report.boundary_segments = static_cast<int>(gon.segments.size());
    report.boundary_valid = true;
    report.enclosing_gon = std::move(gon);
    return report;
}

// ---------------------------------------------------------------------------
// Fortresses
// ---------------------------------------------------------------------------

bool is_fortress(const AdjacencyGraph& graph, std::span<const int> r, const RuleSpec& rule) {
    if (r.empty()) {
        throw error(errc::invalid_input, "empty tile set");
    }
    std::unordered_set<int> in_r(r.begin(), r.end());
    for (int t : r) {
        if (!graph.interior[t]) {
            throw error(errc::not_interior, "fortress candidate touches the patch boundary");
        }
        int outside = 0;
        for (const Arc& a : graph.arcs[t]) {
            if (in_r.count(a.to)) continue;
            if (rule.allows(a.family, a.sign)) ++outside;
        }
        if (outside > rule.threshold - 1) return false;
    }
    return true;
}

FortressSearchResult fortress_search(const AdjacencyGraph& graph, std::span<const int> seeds,
                                     int kmax, const RuleSpec& rule) {
    if (kmax < 1) {
        throw error(errc::invalid_input, "kmax must be at least 1");
    }
    FortressSearchResult result;
    std::set<std::vector<int>> found;

    std::vector<std::uint8_t> in_s(graph.arcs.size(), 0);
    std::vector<std::uint8_t> forbidden(graph.arcs.size(), 0);
    std::vector<int> members;

    // Binary branching on frontier candidates: every connected superset
    // of the seed is visited exactly once.
    auto rec = [&](auto&& self) -> void {
        ++result.sets_examined;
        if (is_fortress(graph, members, rule)) {
            std::vector<int> sorted = members;
            std::sort(sorted.begin(), sorted.end());
            found.insert(std::move(sorted));
        }
        if (static_cast<int>(members.size()) == kmax) return;
        std::set<int> cand;
        for (int t : members) {
            for (const Arc& a : graph.arcs[t]) {
                if (!in_s[a.to] && !forbidden[a.to]) cand.insert(a.to);
            }
        }
        std::vector<int> blocked;
        for (int v : cand) {
            members.push_back(v);
            in_s[v] = 1;
            self(self);
            members.pop_back();
            in_s[v] = 0;
            forbidden[v] = 1;
            blocked.push_back(v);
        }
        for (int v : blocked) forbidden[v] = 0;
    };

    for (int seed : seeds) {
        // The whole reachable ball must be interior so every candidate
        // set can be judged.
        const std::vector<int> dist = bfs_distances(graph, seed);
        bool ok = graph.interior[seed] != 0;
        for (int v = 0; v < graph.size() && ok; ++v) {
            if (dist[v] >= 0 && dist[v] < kmax && !graph.interior[v]) ok = false;
        }
        if (!ok) {
            result.skipped_seeds.push_back(seed);
            continue;
        }
        members = {seed};
        in_s[seed] = 1;
        rec(rec);
        in_s[seed] = 0;
    }
    result.fortresses.assign(found.begin(), found.end());
    return result;
}

// ---------------------------------------------------------------------------
// Enclosing gons
// ---------------------------------------------------------------------------

namespace {

double winding_turns(const std::vector<Vec2>& poly, Vec2 center) {
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i] - center;
        const Vec2 b = poly[(i + 1) % n] - center;
        total += std::atan2(cross(a, b), dot(a, b));
    }
    return total / (2.0 * std::numbers::pi);
}

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

} // namespace

GonCounts enumerate_enclosing_gons(const AdjacencyGraph& graph, int tile, int n_max) {
    if (n_max < 3) {
        throw error(errc::invalid_input, "n_max must be at least 3");
    }
    const std::vector<int> dist_all = bfs_distances(graph, tile);
    std::vector<int> ball;
    for (int v = 0; v < graph.size(); ++v) {
        if (dist_all[v] < 0 || dist_all[v] > n_max) continue;
        if (!graph.interior[v]) {
            throw error(errc::margin_error, "gon enumeration ball reaches the patch boundary");
        }
        // A cycle through the tile itself never encloses it.
        if (v != tile) ball.push_back(v);
    }
    const int m = static_cast<int>(ball.size());
    std::vector<int> local(graph.arcs.size(), -1);
    for (int i = 0; i < m; ++i) local[ball[i]] = i;
    std::vector<std::vector<int>> adj(m);
    const std::size_t words = (static_cast<std::size_t>(m) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> adj_bits(m, std::vector<std::uint64_t>(words, 0));
    for (int i = 0; i < m; ++i) {
        for (const Arc& a : graph.arcs[ball[i]]) {
            const int j = local[a.to];
            if (j >= 0) {
                adj[i].push_back(j);
                adj_bits[i][j / 64] |= 1ull << (j % 64);
            }
        }
        std::sort(adj[i].begin(), adj[i].end());
    }
    auto adjacent = [&](int i, int j) { return (adj_bits[i][j / 64] >> (j % 64)) & 1ull; };

    GonCounts counts;
    counts.n_max = n_max;
    counts.total.assign(n_max + 1, 0);
    counts.convex.assign(n_max + 1, 0);
    const Vec2 center = graph.node_point(tile);
    const int d = graph.rhombus() ? graph.patch->basis.n : 0;

    auto record_cycle = [&](const std::vector<int>& path_local) {
        std::vector<int> cyc;
        cyc.reserve(path_local.size());
        std::vector<Vec2> poly;
        for (int li : path_local) {
            cyc.push_back(ball[li]);
            poly.push_back(graph.node_point(ball[li]));
        }
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (point_segment_dist(center, poly[i], poly[(i + 1) % poly.size()]) < 1e-9) {
                throw error(errc::invalid_input,
                            "degenerate winding geometry: cycle polyline passes through the tile centre");
            }
        }
        if (std::lround(winding_turns(poly, center)) == 0) return;
        const int n = static_cast<int>(cyc.size());
        ++counts.total[n];
        if (graph.rhombus()) {
            std::vector<int> fams(n, -1);
            for (int i = 0; i < n; ++i) {
                for (const Arc& a : graph.arcs[cyc[i]]) {
                    if (a.to == cyc[(i + 1) % n]) fams[i] = a.family;
                }
            }
            int runs = 0;
            std::map<int, int> per_family;
            for (int i = 0; i < n; ++i) {
                if (fams[i] != fams[(i + n - 1) % n]) {
                    ++runs;
                    ++per_family[fams[i]];
                }
            }
            if (runs == 0) {
                runs = 1;
                per_family[fams[0]] = 1;
            }
            bool family_ok = true;
            for (const auto& entry : per_family) {
                if (entry.second > 2) family_ok = false;
            }
            if (runs <= 2 * d && family_ok) ++counts.convex[n];
        }
        counts.cycles.push_back(std::move(cyc));
    };

    // Chordless cycles rooted at their minimum local id, one direction
    // each: a new path vertex may touch the path only at its
    // predecessor, or at the root when it closes the cycle.
    std::vector<int> path;
    std::vector<std::uint8_t> on_path(m, 0);
    std::vector<int> dist_root(m, -1);

    auto dfs = [&](auto&& self, int root) -> void {
        const int last = path.back();
        for (int w : adj[last]) {
            if (w <= root || on_path[w]) continue;
            int extra = 0;
            bool to_root = false;
            for (int q : path) {
                if (q == last) continue;
                if (adjacent(w, q)) {
                    if (q == root) {
                        to_root = true;
                    } else {
                        ++extra;
                    }
                }
            }
            if (extra > 0) continue;
            if (to_root) {
                if (path.size() >= 2 && path[1] < w && static_cast<int>(path.size()) + 1 <= n_max) {
                    std::vector<int> cyc = path;
                    cyc.push_back(w);
                    record_cycle(cyc);
                }
                continue;  // extending through w would leave a chord to the root
            }
            if (static_cast<int>(path.size()) + 1 + std::max(0, dist_root[w] - 1) > n_max) continue;
            path.push_back(w);
            on_path[w] = 1;
            self(self, root);
            path.pop_back();
            on_path[w] = 0;
        }
    };

    for (int root = 0; root < m; ++root) {
        std::fill(dist_root.begin(), dist_root.end(), -1);
        std::deque<int> queue{root};
        dist_root[root] = 0;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int w : adj[u]) {
                if (dist_root[w] < 0) {
                    dist_root[w] = dist_root[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        path = {root};
        on_path.assign(m, 0);
        on_path[root] = 1;
        dfs(dfs, root);
    }
    return counts;
}

double q_bound(const DirectionBasis& basis, int n) {
    if (n < 1) {
        throw error(errc::invalid_input, "n must be at least 1");
    }
    double diameter = 0.0;
    double area = 2.0;
    for (int i = 0; i < basis.n; ++i) {
        for (int j = i + 1; j < basis.n; ++j) {
            const double s = std::abs(cross(basis.e[i], basis.e[j]));
            const double c = std::abs(dot(basis.e[i], basis.e[j]));
            // Unit rhombus with acute angle alpha: area sin(alpha), long
            // diagonal 2 cos(alpha / 2).
            const double alpha = std::atan2(s, c);
            diameter = std::max(diameter, 2.0 * std::cos(alpha / 2.0));
            area = std::min(area, std::sin(alpha));
        }
    }
    const double coeff = std::numbers::pi * diameter * diameter / area;
    return coeff * std::pow(static_cast<double>(n), 2.0 * basis.n + 2.0);
}

// ---------------------------------------------------------------------------
// Grid-with-hole cluster classification
// ---------------------------------------------------------------------------

namespace {

struct CellSet {
    std::set<std::pair<int, int>> cells;
    bool contains(int i, int j) const { return cells.count({i, j}) > 0; }
};

// Corner census of the polyomino boundary: a lattice corner is convex
// when exactly 1 of its 4 cells is inside, reflex when exactly 3; a
// diagonal pinch (two opposite cells) disqualifies the shape.
HoleClusterClass classify_shape(const CellSet& s) {
    if (s.cells.empty()) return HoleClusterClass::other;
    int min_i = 1 << 30, max_i = -(1 << 30), min_j = 1 << 30, max_j = -(1 << 30);
    for (const auto& [i, j] : s.cells) {
        min_i = std::min(min_i, i);
        max_i = std::max(max_i, i);
        min_j = std::min(min_j, j);
        max_j = std::max(max_j, j);
    }
    int convex_corners = 0;
    int reflex_corners = 0;
    for (int i = min_i; i <= max_i + 1; ++i) {
        for (int j = min_j; j <= max_j + 1; ++j) {
            const int a = s.contains(i - 1, j - 1);
            const int b = s.contains(i, j - 1);
            const int c = s.contains(i - 1, j);
            const int d = s.contains(i, j);
            const int inside = a + b + c + d;
            if (inside == 1) ++convex_corners;
            if (inside == 3) ++reflex_corners;
            if (inside == 2 && a == d) return HoleClusterClass::other;  // diagonal pinch
        }
    }
    if (convex_corners == 4 && reflex_corners == 0) return HoleClusterClass::rectangle;
    if (convex_corners == 5 && reflex_corners == 1) return HoleClusterClass::l_hexagon;
    return HoleClusterClass::other;
}

} // namespace

HoleClusterClass classify_hole_grid_cluster(const AdjacencyGraph& graph, std::span<const int> s) {
    if (graph.builder != "grid-hole") {
        throw error(errc::invalid_input, "classification needs a grid-with-hole graph");
    }
    if (s.empty()) {
        throw error(errc::invalid_input, "empty cluster");
    }
    const int h = graph.half_size;
    CellSet set;
    for (int id : s) {
        const auto& xy = graph.coords[id];
        if (std::abs(xy[0]) >= h || std::abs(xy[1]) >= h) return HoleClusterClass::boundary;
        set.cells.insert({xy[0], xy[1]});
    }
    int axis = 0;
    axis += set.contains(1, 0);
    axis += set.contains(-1, 0);
    axis += set.contains(0, 1);
    axis += set.contains(0, -1);
    if (axis >= 3) {
        // Completion rule: the hole behaves as an ordinary cell once
        // three of its sides are contaminated.
        set.cells.insert({0, 0});
        return classify_shape(set);
    }
    // Singular clusters (axis == 2) wrap a corner of the hole, so the
    // cluster itself reads as a rectangle with one notched corner: an
    // L-shaped hexagon. Regular clusters away from the hole stay
    // rectangles. Either way the raw shape is classified.
    return classify_shape(set);
}

} // namespace quasiperc
