#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasiperc/graph.hpp"

namespace quasiperc {

// The one-shot structural regression suite: chain crossing, uniform
// monotonicity, chain/line duality, fortress absence, stable-cluster
// chain-convexity, boundary segment bound and gon counting.

struct VerifyEntry {
    std::string check;
    std::string status;  // "pass", "fail", "skipped", "indeterminate"
    std::string detail;
    nlohmann::json data;  // witnesses, per-length gon counts, ...
};

struct VerifyOptions {
    std::string suite = "all";  // geometry | stability | counting | all
    int kmax = 6;
    int seeds = 20;
    int samples = 40;
    double p = 0.05;
    int gon_tiles = 4;
    int gon_nmax = 10;
    std::uint64_t seed = 1;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;

    bool ok() const;
    nlohmann::json to_json() const;
};

VerifyReport run_verify(const AdjacencyGraph& graph, const VerifyOptions& options);

} // namespace quasiperc
