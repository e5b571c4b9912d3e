#include "quasiperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace quasiperc {

Configuration sample(const MeasureSpec& measure, const AdjacencyGraph& graph,
                     const RngStream& stream, BoundaryPolicy boundary) {
    if (measure.param < 0.0 || measure.param > 1.0) {
        throw error(errc::invalid_input, "measure parameter outside [0,1]");
    }
    Configuration c = make_configuration(graph, boundary);
    const int n = graph.size();
    if (measure.kind == MeasureSpec::Kind::bernoulli) {
        for (int v = 0; v < n; ++v) {
            c.state[v] = stream.uniform(v, salt::occupation) < measure.param ? 1 : 0;
        }
        return c;
    }
    // neighbourhood_max: iid seeds, then max over the closed ball B(v,1).
    std::vector<std::uint8_t> seeds(n, 0);
    for (int v = 0; v < n; ++v) {
        seeds[v] = stream.uniform(v, salt::seed_layer) < measure.param ? 1 : 0;
    }
    for (int v = 0; v < n; ++v) {
        std::uint8_t x = seeds[v];
        for (const Arc& a : graph.arcs[v]) x = std::max(x, seeds[a.to]);
        c.state[v] = x;
    }
    return c;
}

void Experiment::prepare() {
    if (!graph) {
        throw error(errc::invalid_input, "experiment without a graph");
    }
    if (trials < 1) {
        throw error(errc::invalid_input, "experiment needs at least one trial");
    }
    const AdjacencyGraph& g = *graph;
    target_mask.assign(g.size(), 0);
    switch (criterion.kind) {
        case CriterionSpec::Kind::full_patch:
            std::fill(target_mask.begin(), target_mask.end(), 1);
            resolved_radius = -1;
            break;
        case CriterionSpec::Kind::central_ball: {
            const int center = central_node(g);
            const std::vector<int> dist = bfs_distances(g, center);
            int ecc = 0;
            for (int d : dist) ecc = std::max(ecc, d);
            resolved_radius = criterion.radius >= 0 ? criterion.radius : ecc / 2;
            for (int v = 0; v < g.size(); ++v) {
                if (dist[v] >= 0 && dist[v] <= resolved_radius) target_mask[v] = 1;
            }
            break;
        }
        case CriterionSpec::Kind::target_set: {
            if (criterion.targets.empty()) {
                throw error(errc::invalid_input, "target-set criterion without targets");
            }
            for (int v : criterion.targets) {
                if (v < 0 || v >= g.size()) {
                    throw error(errc::invalid_input, "criterion target outside the graph");
                }
                target_mask[v] = 1;
            }
            break;
        }
    }
    aux_fortress.clear();
    if (!g.rhombus()) {
        aux_fortress = fortress_nodes(g);
    } else if (g.patch->provenance.kind == "band") {
        const auto cube = band_cube(*g.patch);
        aux_fortress.assign(cube.begin(), cube.end());
    }
}

TrialStats run_trial(const Experiment& experiment, long trial) {
    const AdjacencyGraph& g = *experiment.graph;
    const RngStream stream{experiment.master_seed, static_cast<std::uint64_t>(trial)};
    Configuration initial = sample(experiment.measure, g, stream, experiment.boundary);

    TrialStats stats;
    stats.trial = trial;
    stats.initial_ones = initial.ones();
    for (int v : experiment.aux_fortress) {
        if (initial.state[v]) stats.fortress_disarmed = true;
    }
    const FixpointResult fixed = fixpoint(initial, experiment.rule);
    stats.rounds = fixed.rounds;
    stats.final_ones = fixed.config.ones();
    stats.final_fraction = g.size() ? static_cast<double>(stats.final_ones) / g.size() : 0.0;

    bool invaded = true;
    for (int v = 0; v < g.size(); ++v) {
        if (experiment.target_mask[v] && !fixed.config.state[v]) {
            invaded = false;
            break;
        }
    }
    stats.invaded = invaded;

    for (const auto& comp : clusters(fixed.config, Connectivity::edge)) {
        ++stats.cluster_histogram[static_cast<int>(comp.size())];
    }
    return stats;
}

Estimate wilson(long successes, long trials) {
    Estimate e;
    e.trials = trials;
    e.successes = successes;
    if (trials <= 0) return e;
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    e.point = phat;
    e.lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    e.hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    return e;
}

namespace {

template <typename Body>
void parallel_for_trials(long trials, int threads, Body&& body) {
    threads = std::max(1, threads);
    if (threads == 1 || trials < 2) {
        for (long t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body]() {
            for (long t = lo; t < hi; ++t) body(t);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

Estimate monte_carlo(const Experiment& experiment_in, int threads,
                     std::vector<TrialStats>* per_trial) {
    Experiment experiment = experiment_in;
    experiment.prepare();
    if (experiment.trials < 30) {
        throw error(errc::invalid_input, "need at least 30 trials for interval validity");
    }
    std::vector<TrialStats> all(experiment.trials);
    parallel_for_trials(experiment.trials, threads,
                        [&](long t) { all[t] = run_trial(experiment, t); });

    long successes = 0;
    long disarmed = 0;
    double rounds = 0.0;
    for (const TrialStats& s : all) {
        successes += s.invaded ? 1 : 0;
        disarmed += s.fortress_disarmed ? 1 : 0;
        rounds += s.rounds;
    }
    Estimate e = wilson(successes, experiment.trials);
    e.mean_rounds = rounds / static_cast<double>(experiment.trials);
    e.fortress_disarmed_rate = static_cast<double>(disarmed) / static_cast<double>(experiment.trials);
    if (per_trial) *per_trial = std::move(all);
    return e;
}

std::vector<Estimate> sweep(const Experiment& experiment_in, std::span<const double> ps,
                            bool coupled, int threads, bool* nested_ok) {
    Experiment experiment = experiment_in;
    experiment.prepare();
    if (experiment.measure.kind != MeasureSpec::Kind::bernoulli) {
        throw error(errc::invalid_input, "sweep is defined for Bernoulli measures");
    }
    for (std::size_t i = 1; i < ps.size(); ++i) {
        if (ps[i] < ps[i - 1]) {
            throw error(errc::invalid_input, "sweep parameters must be sorted ascending");
        }
    }
    const AdjacencyGraph& g = *experiment.graph;
    const int n = g.size();
    const std::size_t np = ps.size();
    std::vector<long> successes(np, 0);
    std::vector<std::uint8_t> nested(experiment.trials, 1);
    std::mutex agg;

    parallel_for_trials(experiment.trials, threads, [&](long trial) {
        const RngStream stream{experiment.master_seed, static_cast<std::uint64_t>(trial)};
        std::vector<double> u;
        if (coupled) {
            u.resize(n);
            for (int v = 0; v < n; ++v) u[v] = stream.uniform(v, salt::occupation);
        }
        std::vector<std::uint8_t> prev_final;
        std::vector<long> my_hits(np, 0);
        bool my_nested = true;
        for (std::size_t pi = 0; pi < np; ++pi) {
            Configuration c = make_configuration(g, experiment.boundary);
            if (coupled) {
                for (int v = 0; v < n; ++v) c.state[v] = u[v] < ps[pi] ? 1 : 0;
            } else {
                for (int v = 0; v < n; ++v) {
                    c.state[v] = stream.uniform(v, salt::sweep_base + pi) < ps[pi] ? 1 : 0;
                }
            }
            const FixpointResult fixed = fixpoint(c, experiment.rule);
            bool invaded = true;
            for (int v = 0; v < n; ++v) {
                if (experiment.target_mask[v] && !fixed.config.state[v]) {
                    invaded = false;
                    break;
                }
            }
            if (invaded) ++my_hits[pi];
            if (coupled && !prev_final.empty()) {
                for (int v = 0; v < n; ++v) {
                    if (prev_final[v] && !fixed.config.state[v]) my_nested = false;
                }
            }
            prev_final = fixed.config.state;
        }
        std::lock_guard<std::mutex> lock(agg);
        for (std::size_t pi = 0; pi < np; ++pi) successes[pi] += my_hits[pi];
        nested[trial] = my_nested ? 1 : 0;
    });

    if (nested_ok) {
        *nested_ok = std::all_of(nested.begin(), nested.end(), [](std::uint8_t b) { return b != 0; });
    }
    std::vector<Estimate> out;
    out.reserve(np);
    for (std::size_t pi = 0; pi < np; ++pi) out.push_back(wilson(successes[pi], experiment.trials));
    return out;
}

Estimate enclosure_probability(const AdjacencyGraph& graph, int tile, int n_max,
                               const MeasureSpec& measure, long trials, std::uint64_t seed) {
    const GonCounts gons = enumerate_enclosing_gons(graph, tile, n_max);

    // Tiles whose states decide the event; sampled lazily so the values
    // agree with full-graph sampling of the same stream.
    std::vector<int> needed{tile};
    for (const auto& cyc : gons.cycles) needed.insert(needed.end(), cyc.begin(), cyc.end());
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    auto state_of = [&](const RngStream& stream, int v) -> int {
        if (measure.kind == MeasureSpec::Kind::bernoulli) {
            return stream.uniform(v, salt::occupation) < measure.param ? 1 : 0;
        }
        if (stream.uniform(v, salt::seed_layer) < measure.param) return 1;
        for (const Arc& a : graph.arcs[v]) {
            if (stream.uniform(a.to, salt::seed_layer) < measure.param) return 1;
        }
        return 0;
    };

    long hits = 0;
    for (long t = 0; t < trials; ++t) {
        const RngStream stream{seed, static_cast<std::uint64_t>(t)};
        if (state_of(stream, tile) == 0) {
            ++hits;  // trivial gon
            continue;
        }
        bool enclosed = false;
        for (const auto& cyc : gons.cycles) {
            bool all_zero = true;
            for (int v : cyc) {
                if (state_of(stream, v) != 0) {
                    all_zero = false;
                    break;
                }
            }
            if (all_zero) {
                enclosed = true;
                break;
            }
        }
        if (enclosed) ++hits;
    }
    return wilson(hits, trials);
}

DecayReport zero_cylinder_decay(const AdjacencyGraph& graph, const MeasureSpec& measure,
                                std::span<const int> sizes, long trials, std::uint64_t seed) {
    DecayReport report;
    if (measure.kind == MeasureSpec::Kind::bernoulli) {
        report.beta = 1.0 - measure.param;
    } else {
        // Generic bound with degree cap 4, Markov range 3 and the crude
        // one-site lower bound alpha = q.
        const double alpha = measure.param;
        report.beta = std::pow(1.0 - alpha, 1.0 / (2.0 * std::pow(4.0, 3.0)));
    }

    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const int n = sizes[si];
        if (n < 0 || n > graph.size()) {
            throw error(errc::invalid_input, "domain size outside the patch");
        }
        DecayPoint point;
        point.size = n;
        point.trials = trials;
        // One random connected domain per size, grown deterministically
        // from the stream.
        const RngStream dstream{seed, 0x0d00 + si};
        if (n > 0) {
            std::vector<int> interior;
            for (int v = 0; v < graph.size(); ++v) {
                if (graph.interior[v]) interior.push_back(v);
            }
            if (interior.empty()) throw error(errc::invalid_input, "no interior tiles");
            std::vector<int> domain;
            std::vector<std::uint8_t> in_domain(graph.size(), 0);
            std::vector<int> frontier;
            const int start = interior[dstream.bits(0, salt::domain) % interior.size()];
            domain.push_back(start);
            in_domain[start] = 1;
            for (const Arc& a : graph.arcs[start]) frontier.push_back(a.to);
            std::uint64_t draw = 1;
            while (static_cast<int>(domain.size()) < n) {
                frontier.erase(std::remove_if(frontier.begin(), frontier.end(),
                                              [&](int v) { return in_domain[v] != 0; }),
                               frontier.end());
                if (frontier.empty()) break;
                const int pick = frontier[dstream.bits(draw++, salt::domain) % frontier.size()];
                domain.push_back(pick);
                in_domain[pick] = 1;
                for (const Arc& a : graph.arcs[pick]) {
                    if (!in_domain[a.to]) frontier.push_back(a.to);
                }
            }
            if (static_cast<int>(domain.size()) < n) {
                throw error(errc::invalid_input, "patch too small for the requested domain size");
            }
            point.domain = domain;
        }

        auto state_of = [&](const RngStream& stream, int v) -> int {
            if (measure.kind == MeasureSpec::Kind::bernoulli) {
                return stream.uniform(v, salt::occupation) < measure.param ? 1 : 0;
            }
            if (stream.uniform(v, salt::seed_layer) < measure.param) return 1;
            for (const Arc& a : graph.arcs[v]) {
                if (stream.uniform(a.to, salt::seed_layer) < measure.param) return 1;
            }
            return 0;
        };
        long hits = 0;
        for (long t = 0; t < trials; ++t) {
            const RngStream stream{seed, static_cast<std::uint64_t>(t)};
            bool all_zero = true;
            for (int v : point.domain) {
                if (state_of(stream, v) != 0) {
                    all_zero = false;
                    break;
                }
            }
            if (all_zero) ++hits;
        }
        point.hits = hits;
        point.estimate = trials > 0 ? static_cast<double>(hits) / trials : 0.0;
        point.bound = std::pow(report.beta, n);
        if (measure.kind == MeasureSpec::Kind::bernoulli) {
            point.exact = std::pow(1.0 - measure.param, n);
        }
        // Statistical slack: three binomial sigmas above the bound.
        const double sigma = std::sqrt(std::max(point.bound * (1.0 - point.bound), 1e-12) /
                                       std::max<long>(trials, 1));
        if (point.estimate > point.bound + 3.0 * sigma) report.within_bound = false;
        report.points.push_back(std::move(point));
    }

    // Least-squares slope of log-estimate against n over positive points.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& pt : report.points) {
        if (pt.estimate <= 0.0 || pt.size == 0) continue;
        const double x = pt.size;
        const double y = std::log(pt.estimate);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k >= 2 && sxx * k - sx * sx > 0) {
        report.log_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    return report;
}

CorrelationReport positive_correlation_check(const AdjacencyGraph& graph,
                                             const MeasureSpec& measure, const EventSpec& x,
                                             const EventSpec& y, long trials,
                                             std::uint64_t seed) {
    auto state_of = [&](const RngStream& stream, int v) -> int {
        if (measure.kind == MeasureSpec::Kind::bernoulli) {
            return stream.uniform(v, salt::occupation) < measure.param ? 1 : 0;
        }
        if (stream.uniform(v, salt::seed_layer) < measure.param) return 1;
        for (const Arc& a : graph.arcs[v]) {
            if (stream.uniform(a.to, salt::seed_layer) < measure.param) return 1;
        }
        return 0;
    };
    auto holds = [&](const RngStream& stream, const EventSpec& ev) {
        int ones = 0;
        for (int v : ev.tiles) ones += state_of(stream, v);
        return ones >= ev.min_ones;
    };

    long cx = 0, cy = 0, cxy = 0;
    for (long t = 0; t < trials; ++t) {
        const RngStream stream{seed, static_cast<std::uint64_t>(t)};
        const bool hx = holds(stream, x);
        const bool hy = holds(stream, y);
        cx += hx;
        cy += hy;
        cxy += hx && hy;
    }
    CorrelationReport report;
    const double n = static_cast<double>(trials);
    report.p_x = cx / n;
    report.p_y = cy / n;
    report.p_xy = cxy / n;
    report.difference = report.p_xy - report.p_x * report.p_y;
    const double var = report.p_xy * (1.0 - report.p_xy) +
                       report.p_x * report.p_x * report.p_y * (1.0 - report.p_y) +
                       report.p_y * report.p_y * report.p_x * (1.0 - report.p_x);
    const double se = std::sqrt(std::max(var, 1e-300) / n);
    report.zscore = report.difference / se;
    report.significant_negative = report.zscore < -3.0;
    return report;
}

} // namespace quasiperc
