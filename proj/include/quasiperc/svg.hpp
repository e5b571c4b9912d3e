#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasiperc/dynamics.hpp"
#include "quasiperc/graph.hpp"

namespace quasiperc {

// Deterministic SVG stills: identical inputs produce byte-identical
// output (fixed precision, stable tile order).
struct RenderStyle {
    enum class Fill { plain, by_state, by_cluster, by_chain };
    Fill fill = Fill::plain;
    double stroke_width = 0.02;
    double scale = 40.0;
    std::vector<int> highlighted;  // bold outline
};

std::string render_svg(const AdjacencyGraph& graph, const RenderStyle& style,
                       const Configuration* config = nullptr);

} // namespace quasiperc
