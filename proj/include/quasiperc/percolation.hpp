#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "quasiperc/analysis.hpp"
#include "quasiperc/dynamics.hpp"
#include "quasiperc/rng.hpp"

namespace quasiperc {

struct MeasureSpec {
    enum class Kind { bernoulli, neighbourhood_max };
    Kind kind = Kind::bernoulli;
    double param = 0.0;  // p or q in [0, 1]
};

// neighbourhood_max draws iid Bernoulli(q) seeds and takes the max over
// the closed edge-neighbourhood ball; it is 3-Markov, non-vanishing and
// positively correlated.
Configuration sample(const MeasureSpec& measure, const AdjacencyGraph& graph,
                     const RngStream& stream, BoundaryPolicy boundary = BoundaryPolicy::open);

struct CriterionSpec {
    enum class Kind { full_patch, central_ball, target_set };
    Kind kind = Kind::central_ball;
    int radius = -1;           // central_ball; -1 means half the BFS radius
    std::vector<int> targets;  // target_set
};

struct Experiment {
    std::shared_ptr<const AdjacencyGraph> graph;
    RuleSpec rule;
    MeasureSpec measure;
    CriterionSpec criterion;
    long trials = 0;
    std::uint64_t master_seed = 0;
    BoundaryPolicy boundary = BoundaryPolicy::open;

    // Resolved by prepare(): criterion target mask and the auxiliary
    // "fortress initially disarmed" probe set (fortress-grid nodes or
    // the band cube) when the graph has one.
    std::vector<std::uint8_t> target_mask;
    std::vector<int> aux_fortress;
    int resolved_radius = -1;

    void prepare();
};

struct TrialStats {
    long trial = 0;
    bool invaded = false;
    int rounds = 0;
    int initial_ones = 0;
    int final_ones = 0;
    double final_fraction = 0.0;
    std::map<int, long> cluster_histogram;  // final 1-cluster size -> count
    bool fortress_disarmed = false;
};

TrialStats run_trial(const Experiment& experiment, long trial);

struct Estimate {
    double point = 0.0;
    double lo = 0.0;   // 95% Wilson interval
    double hi = 1.0;
    long trials = 0;
    long successes = 0;
    double mean_rounds = 0.0;
    double fortress_disarmed_rate = 0.0;
};

Estimate wilson(long successes, long trials);

// Aggregates trials; embarrassingly parallel and bit-deterministic in
// (spec, master seed) regardless of `threads`.
Estimate monte_carlo(const Experiment& experiment, int threads = 1,
                     std::vector<TrialStats>* per_trial = nullptr);

// When coupled, one uniform per (trial, tile) is shared across all p,
// so per-trial infected sets grow monotonically along the sweep.
std::vector<Estimate> sweep(const Experiment& experiment, std::span<const double> ps,
                            bool coupled, int threads = 1, bool* nested_ok = nullptr);

// Estimates the probability that `tile` is enclosed in an all-zero gon
// of length <= n_max (the trivial gon counts: configurations with the
// tile itself at 0 are enclosed). A lower bound for the untruncated
// enclosure event.
Estimate enclosure_probability(const AdjacencyGraph& graph, int tile, int n_max,
                               const MeasureSpec& measure, long trials, std::uint64_t seed);

struct DecayPoint {
    int size = 0;
    std::vector<int> domain;
    long hits = 0;
    long trials = 0;
    double estimate = 0.0;
    double exact = -1.0;  // Bernoulli only: (1-p)^n
    double bound = 1.0;   // beta^n
};

struct DecayReport {
    double beta = 1.0;
    std::vector<DecayPoint> points;
    double log_slope = 0.0;  // least-squares slope of log-estimate vs n
    bool within_bound = true;
};

// Zero-cylinder decay on random connected domains of the given sizes.
// beta is (1-p) for Bernoulli and the generic (1-alpha)^(1/(2*Delta^k))
// bound with Delta = 4, k = 3, alpha = q for neighbourhood_max.
DecayReport zero_cylinder_decay(const AdjacencyGraph& graph, const MeasureSpec& measure,
                                std::span<const int> sizes, long trials, std::uint64_t seed);

struct EventSpec {
    std::vector<int> tiles;
    int min_ones = 0;  // upward-closed: at least this many 1s on `tiles`
};

struct CorrelationReport {
    double p_xy = 0.0, p_x = 0.0, p_y = 0.0;
    double difference = 0.0;  // mu(X and Y) - mu(X) mu(Y)
    double zscore = 0.0;
    bool significant_negative = false;  // z < -3
};

CorrelationReport positive_correlation_check(const AdjacencyGraph& graph,
                                             const MeasureSpec& measure, const EventSpec& x,
                                             const EventSpec& y, long trials,
                                             std::uint64_t seed);

} // namespace quasiperc
