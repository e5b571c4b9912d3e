#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "quasiperc/percolation.hpp"

using namespace quasiperc;

namespace {

std::shared_ptr<const AdjacencyGraph> shared_graph(AdjacencyGraph g) {
    return std::make_shared<const AdjacencyGraph>(std::move(g));
}

} // namespace

TEST_CASE("sample: Bernoulli endpoints") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(6.0));
    const RngStream stream{42, 0};
    CHECK(sample({MeasureSpec::Kind::bernoulli, 0.0}, g, stream).ones() == 0);
    CHECK(sample({MeasureSpec::Kind::bernoulli, 1.0}, g, stream).ones() == g.size());
}

TEST_CASE("sample: neighbourhood-max frequency on interior tiles") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(7.0));
    const int t = central_node(g);
    REQUIRE(g.degree(t) == 4);
    const double q = 0.15;
    const long trials = 100000;
    long hits = 0;
    for (long k = 0; k < trials; ++k) {
        const RngStream stream{2024, static_cast<std::uint64_t>(k)};
        hits += sample({MeasureSpec::Kind::neighbourhood_max, q}, g, stream).state[t];
    }
    // Closed ball of an interior tile has 5 tiles.
    const double want = 1.0 - std::pow(1.0 - q, 5);
    const double sigma = std::sqrt(want * (1.0 - want) / trials);
    CHECK(std::abs(static_cast<double>(hits) / trials - want) < 3.0 * sigma);
}

TEST_CASE("run_trial: determinism and endpoints") {
    Experiment e;
    e.graph = shared_graph(build_adjacency(qt::penrose_patch(6.0)));
    e.measure = {MeasureSpec::Kind::bernoulli, 1.0};
    e.trials = 30;
    e.master_seed = 9;
    e.prepare();

    const TrialStats full = run_trial(e, 0);
    CHECK(full.invaded);
    CHECK(full.rounds == 0);

    e.measure.param = 0.0;
    e.prepare();
    CHECK_FALSE(run_trial(e, 0).invaded);

    e.measure.param = 0.37;
    e.prepare();
    const TrialStats a = run_trial(e, 5);
    const TrialStats b = run_trial(e, 5);
    CHECK(a.invaded == b.invaded);
    CHECK(a.rounds == b.rounds);
    CHECK(a.final_ones == b.final_ones);
    CHECK(a.cluster_histogram == b.cluster_histogram);
}

TEST_CASE("monte_carlo: thread count never changes results") {
    Experiment e;
    e.graph = shared_graph(build_adjacency(qt::penrose_patch(7.0)));
    e.measure = {MeasureSpec::Kind::bernoulli, 0.12};
    e.trials = 120;
    e.master_seed = 31;

    std::vector<TrialStats> t1, t8;
    const Estimate e1 = monte_carlo(e, 1, &t1);
    const Estimate e8 = monte_carlo(e, 8, &t8);
    CHECK(e1.point == e8.point);
    CHECK(e1.successes == e8.successes);
    REQUIRE(t1.size() == t8.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].invaded == t8[i].invaded);
        CHECK(t1[i].rounds == t8[i].rounds);
        CHECK(t1[i].final_ones == t8[i].final_ones);
    }
}

TEST_CASE("wilson interval sanity") {
    const Estimate e = wilson(50, 100);
    CHECK(e.point == doctest::Approx(0.5));
    CHECK(e.lo < e.point);
    CHECK(e.hi > e.point);
    CHECK(e.lo > 0.39);
    CHECK(e.hi < 0.61);
    CHECK(wilson(0, 100).lo == 0.0);
    CHECK(wilson(100, 100).hi == 1.0);
}

TEST_CASE("sweep: coupled monotonicity and endpoints") {
    Experiment e;
    e.graph = shared_graph(build_adjacency(qt::grid_patch(7.0)));
    e.measure = {MeasureSpec::Kind::bernoulli, 0.0};
    e.trials = 60;
    e.master_seed = 17;
    const std::vector<double> ps{0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0};

    bool nested = false;
    const auto estimates = sweep(e, ps, true, 2, &nested);
    CHECK(nested);  // infected sets grow along the sweep, trial by trial
    CHECK(estimates.front().point == 0.0);
    CHECK(estimates.back().point == 1.0);
    for (std::size_t i = 1; i < estimates.size(); ++i) {
        CHECK(estimates[i].point >= estimates[i - 1].point);
    }

    // Uncoupled: still non-decreasing within interval slack.
    const auto loose = sweep(e, ps, false, 2, nullptr);
    for (std::size_t i = 1; i < loose.size(); ++i) {
        CHECK(loose[i].hi >= loose[i - 1].lo);
    }
}

TEST_CASE("enclosure_probability: exact grid value") {
    const AdjacencyGraph g = build_adjacency(qt::grid_patch(14.0));
    const int c = central_node(g);

    SUBCASE("closed form at p = 0.4, n = 8") {
        // The 8-ring is the only gon up to length 8, so the probability
        // is (1-p) + p (1-p)^8.
        const Estimate est =
            enclosure_probability(g, c, 8, {MeasureSpec::Kind::bernoulli, 0.4}, 200000, 77);
        const double want = 0.6 + 0.4 * std::pow(0.6, 8);
        CHECK(std::abs(est.point - want) < 4.0 * std::sqrt(want * (1.0 - want) / 200000.0));
    }
    SUBCASE("trivial endpoints") {
        CHECK(enclosure_probability(g, c, 8, {MeasureSpec::Kind::bernoulli, 1.0}, 500, 1).point ==
              0.0);
        CHECK(enclosure_probability(g, c, 8, {MeasureSpec::Kind::bernoulli, 0.0}, 500, 1).point ==
              1.0);
    }
}

TEST_CASE("zero_cylinder_decay") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(9.0));

    SUBCASE("Bernoulli is exact in expectation") {
        const std::vector<int> sizes{0, 2, 5, 8};
        const DecayReport report =
            zero_cylinder_decay(g, {MeasureSpec::Kind::bernoulli, 0.3}, sizes, 60000, 5);
        CHECK(report.beta == doctest::Approx(0.7));
        CHECK(report.within_bound);
        for (const DecayPoint& pt : report.points) {
            CHECK(pt.exact == doctest::Approx(std::pow(0.7, pt.size)));
            if (pt.size == 0) {
                CHECK(pt.estimate == 1.0);
            } else {
                const double sigma = std::sqrt(pt.exact * (1.0 - pt.exact) / pt.trials);
                CHECK(std::abs(pt.estimate - pt.exact) < 4.0 * sigma + 1e-12);
            }
        }
    }
    SUBCASE("neighbourhood-max decays exponentially") {
        const std::vector<int> sizes{3, 6, 9};
        const DecayReport report =
            zero_cylinder_decay(g, {MeasureSpec::Kind::neighbourhood_max, 0.2}, sizes, 200000, 5);
        CHECK(report.within_bound);
        CHECK(report.log_slope < 0.0);
    }
}

TEST_CASE("positive_correlation_check") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(7.0));
    const int t = central_node(g);
    std::vector<int> near{t};
    for (const Arc& a : g.arcs[t]) near.push_back(a.to);

    SUBCASE("Bernoulli on disjoint sets is uncorrelated") {
        EventSpec x{{near[0], near[1]}, 2};
        EventSpec y{{near[2], near[3]}, 2};
        const CorrelationReport r =
            positive_correlation_check(g, {MeasureSpec::Kind::bernoulli, 0.4}, x, y, 200000, 3);
        CHECK(std::abs(r.zscore) < 4.0);
        CHECK_FALSE(r.significant_negative);
    }
    SUBCASE("an event is positively correlated with itself") {
        EventSpec x{{near[0], near[1], near[2]}, 2};
        const CorrelationReport r =
            positive_correlation_check(g, {MeasureSpec::Kind::bernoulli, 0.35}, x, x, 100000, 3);
        CHECK(r.difference > 0.0);
        CHECK(r.difference == doctest::Approx(r.p_x * (1.0 - r.p_x)).epsilon(0.05));
    }
    SUBCASE("neighbourhood-max adjacent events are not negatively correlated") {
        EventSpec x{{near[0], near[1]}, 2};
        EventSpec y{{near[2], near[4]}, 2};
        const CorrelationReport r = positive_correlation_check(
            g, {MeasureSpec::Kind::neighbourhood_max, 0.3}, x, y, 200000, 3);
        CHECK_FALSE(r.significant_negative);
        CHECK(r.difference > -0.01);
    }
}

TEST_CASE("wilson calibration on a known cylinder event") {
    // Coverage of the 95% interval over repeated experiments; the event
    // is a two-tile cylinder with known product probability.
    const AdjacencyGraph g = build_adjacency(qt::grid_patch(5.0));
    const int t = central_node(g);
    const int u = g.arcs[t][0].to;
    const double p = 0.5;
    const double truth = p * p;
    int covered = 0;
    const int experiments = 100;
    const long per = 400;
    for (int e = 0; e < experiments; ++e) {
        long hits = 0;
        for (long k = 0; k < per; ++k) {
            const RngStream stream{static_cast<std::uint64_t>(5000 + e), static_cast<std::uint64_t>(k)};
            const Configuration c = sample({MeasureSpec::Kind::bernoulli, p}, g, stream);
            hits += (c.state[t] && c.state[u]) ? 1 : 0;
        }
        const Estimate est = wilson(hits, per);
        if (est.lo <= truth && truth <= est.hi) ++covered;
    }
    CHECK(covered >= 93);
}

TEST_CASE("fortress-grid invasion probability (reduced size)") {
    Experiment e;
    e.graph = shared_graph(generate_fortress_grid(24));
    e.measure = {MeasureSpec::Kind::bernoulli, 0.5};
    e.trials = 600;
    e.master_seed = 2;
    const Estimate est = monte_carlo(e, 4);
    CHECK(std::abs(est.point - 0.96875) < 0.03);
    CHECK(est.fortress_disarmed_rate >= est.point);
}

TEST_CASE("band-cube invasion probability (reduced size)") {
    const auto band = std::make_shared<const TilingPatch>(make_band_tiling(12.0));
    Experiment e;
    e.graph = shared_graph(build_adjacency(band));
    e.rule = band_f3_rule();
    e.measure = {MeasureSpec::Kind::bernoulli, 0.6};
    const auto cube = band_cube(*band);
    e.criterion.kind = CriterionSpec::Kind::target_set;
    e.criterion.targets.assign(cube.begin(), cube.end());
    e.trials = 600;
    e.master_seed = 2;
    const Estimate est = monte_carlo(e, 4);
    CHECK(std::abs(est.point - (1.0 - 0.4 * 0.4 * 0.4)) < 0.04);
}
