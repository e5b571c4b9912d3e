#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "quasiperc/graph.hpp"

namespace quasiperc {

enum class BoundaryPolicy { open, infected };

// Binary state per tile. Owned by one trial at a time; the graph is
// shared read-only.
struct Configuration {
    const AdjacencyGraph* graph = nullptr;
    std::vector<std::uint8_t> state;
    BoundaryPolicy boundary = BoundaryPolicy::open;

    int ones() const;
    bool operator==(const Configuration& o) const {
        return state == o.state && boundary == o.boundary && graph == o.graph;
    }
};

Configuration make_configuration(const AdjacencyGraph& graph,
                                 BoundaryPolicy boundary = BoundaryPolicy::open);

// m-neighbour contamination, optionally restricted to an allowed set of
// adjacency directions given as (family, sign) pairs.
struct RuleSpec {
    int threshold = 2;
    std::optional<std::vector<std::pair<int, int>>> allowed;

    bool directed() const { return allowed.has_value(); }
    bool allows(int family, int sign) const;
};

// The partially directed rule matching make_band_tiling: families 3 and
// 4 count both ways, families 0..2 only from their protected side.
RuleSpec band_f3_rule();

// One synchronous step: a healthy tile turns 1 when at least
// rule.threshold of its allowed neighbours are 1; 1s stay 1.
Configuration step(const Configuration& config, const RuleSpec& rule);

struct FixpointResult {
    Configuration config;
    int rounds = 0;  // synchronous rounds until stationary
};

// Limit configuration via a round-layered worklist; O(edges) total work.
FixpointResult fixpoint(const Configuration& config, const RuleSpec& rule);

// Reference implementation: iterate `step` until nothing changes.
FixpointResult fixpoint_oracle(const Configuration& config, const RuleSpec& rule);

bool is_stable(const Configuration& config, const RuleSpec& rule);

// Run-length encoding of the state vector, e.g. "0x12,1x3,0x7".
std::string encode_state(const Configuration& config);
std::vector<std::uint8_t> decode_state(const std::string& rle);

} // namespace quasiperc
