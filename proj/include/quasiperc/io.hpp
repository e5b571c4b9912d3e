#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "quasiperc/analysis.hpp"
#include "quasiperc/graph.hpp"
#include "quasiperc/multigrid.hpp"
#include "quasiperc/percolation.hpp"

namespace quasiperc {

using json = nlohmann::json;

// Patch/graph documents ("quasiperc-patch-v1"). Rhombus patches store
// basis, provenance and the exact tile records; reloading reproduces
// identical tile ids. Generic graphs store their builder parameters
// (fortress-grid, grid-hole) or explicit coords + edges.
json patch_to_json(const TilingPatch& patch);
TilingPatch patch_from_json(const json& doc);

json graph_to_json(const AdjacencyGraph& graph);
AdjacencyGraph graph_from_json(const json& doc);

AdjacencyGraph load_graph_file(const std::string& path);
void save_json_file(const std::string& path, const json& doc);
json load_json_file(const std::string& path);

// Experiment documents: patch parameters (or a patch file), rule,
// measure, criterion, trials, seed, boundary.
struct ParsedExperiment {
    Experiment experiment;
    json raw;
};
ParsedExperiment experiment_from_json(const json& doc, const std::string& base_dir = "");

RuleSpec rule_from_string(const std::string& text);
MeasureSpec measure_from_string(const std::string& text);

json estimate_to_json(const Estimate& estimate);

// Debug / report views.
json chain_to_json(const Chain& chain);
json cluster_report_to_json(const ClusterReport& report);
json gon_counts_to_json(const GonCounts& counts);
std::string trials_to_csv(const std::vector<TrialStats>& trials);
std::string sweep_to_csv(std::span<const double> ps, const std::vector<Estimate>& estimates);

std::string format_double(double v);  // shortest round-trip representation

} // namespace quasiperc
