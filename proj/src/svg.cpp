#include "quasiperc/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "quasiperc/analysis.hpp"

namespace quasiperc {

namespace {

std::string fixed(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    // Avoid the two spellings of zero.
    std::string s(buf);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

const char* kClusterPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
                                 "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd"};

std::vector<Vec2> node_polygon(const AdjacencyGraph& graph, int node) {
    if (graph.rhombus()) {
        const TilingPatch& p = *graph.patch;
        std::vector<Vec2> poly;
        for (const VertexKey& v : p.corners_ccw(node)) poly.push_back(p.embed(v));
        return poly;
    }
    return graph.polygons.empty() ? std::vector<Vec2>{} : graph.polygons[node];
}

} // namespace

std::string render_svg(const AdjacencyGraph& graph, const RenderStyle& style,
                       const Configuration* config) {
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    std::vector<std::vector<Vec2>> polys(graph.size());
    for (int v = 0; v < graph.size(); ++v) {
        polys[v] = node_polygon(graph, v);
        for (const Vec2& p : polys[v]) {
            min_x = std::min(min_x, p.x);
            min_y = std::min(min_y, p.y);
            max_x = std::max(max_x, p.x);
            max_y = std::max(max_y, p.y);
        }
    }
    if (min_x > max_x) {
        min_x = min_y = 0.0;
        max_x = max_y = 1.0;
    }
    const double s = style.scale;
    const double pad = 1.0;
    const double w = (max_x - min_x + 2 * pad) * s;
    const double h = (max_y - min_y + 2 * pad) * s;
    auto tx = [&](Vec2 p) {
        // Flip y so the mathematical orientation reads naturally.
        return Vec2{(p.x - min_x + pad) * s, (max_y - p.y + pad) * s};
    };

    std::vector<int> cluster_of;
    if (style.fill == RenderStyle::Fill::by_cluster && config) {
        cluster_of.assign(graph.size(), -1);
        int idx = 0;
        for (const auto& comp : clusters(*config, Connectivity::edge)) {
            for (int t : comp) cluster_of[t] = idx;
            ++idx;
        }
    }
    std::vector<int> chain_of;
    if (style.fill == RenderStyle::Fill::by_chain && graph.rhombus()) {
        chain_of.assign(graph.size(), -1);
        int idx = 0;
        for (const Chain& chain : all_chains(graph)) {
            if (chain.family == 0) {
                for (int t : chain.tiles) chain_of[t] = idx;
            }
            ++idx;
        }
    }
    std::unordered_set<int> highlighted(style.highlighted.begin(), style.highlighted.end());

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(w) << "\" height=\""
        << fixed(h) << "\" viewBox=\"0 0 " << fixed(w) << " " << fixed(h) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (int v = 0; v < graph.size(); ++v) {
        if (polys[v].empty()) continue;
        std::string fill = "#f2f1ec";
        switch (style.fill) {
            case RenderStyle::Fill::plain:
                break;
            case RenderStyle::Fill::by_state:
                if (config && config->state[v]) fill = "#3a3a3a";
                break;
            case RenderStyle::Fill::by_cluster:
                if (!cluster_of.empty() && cluster_of[v] >= 0) {
                    fill = kClusterPalette[cluster_of[v] % 10];
                }
                break;
            case RenderStyle::Fill::by_chain:
                if (!chain_of.empty() && chain_of[v] >= 0) {
                    fill = kClusterPalette[chain_of[v] % 10];
                }
                break;
        }
        const bool bold = highlighted.count(v) > 0;
        out << "<polygon points=\"";
        for (std::size_t i = 0; i < polys[v].size(); ++i) {
            const Vec2 p = tx(polys[v][i]);
            if (i) out << ' ';
            out << fixed(p.x) << ',' << fixed(p.y);
        }
        out << "\" fill=\"" << fill << "\" stroke=\"" << (bold ? "#c01010" : "#202020")
            << "\" stroke-width=\"" << fixed(style.stroke_width * s * (bold ? 3.0 : 1.0))
            << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace quasiperc
