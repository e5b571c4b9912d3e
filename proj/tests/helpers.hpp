#pragma once

#include <memory>

#include "quasiperc/graph.hpp"
#include "quasiperc/multigrid.hpp"

namespace qt {

using namespace quasiperc;

inline std::shared_ptr<const TilingPatch> grid_patch(double radius) {
    return std::make_shared<const TilingPatch>(
        generate_patch(build_basis(2, 0.0, {0.5, 0.5}), radius));
}

inline std::shared_ptr<const TilingPatch> penrose_patch(double radius) {
    return std::make_shared<const TilingPatch>(
        generate_patch(build_basis(5, 0.0, penrose_offsets()), radius));
}

inline std::shared_ptr<const TilingPatch> ammann_patch(double radius) {
    return std::make_shared<const TilingPatch>(
        generate_patch(build_basis(4, 0.0, default_offsets(4)), radius));
}

// Square-grid tile addressed by its generating line pair; the unit cell
// with corners (k0, k1)..(k0+1, k1+1).
inline int cell(const TilingPatch& p, int k0, int k1) {
    for (const Tile& t : p.tiles) {
        if (t.lines[0] == k0 && t.lines[1] == k1) return t.id;
    }
    return -1;
}

} // namespace qt
