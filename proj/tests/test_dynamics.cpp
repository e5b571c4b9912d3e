#include <doctest.h>

#include "helpers.hpp"
#include "quasiperc/analysis.hpp"
#include "quasiperc/dynamics.hpp"
#include "quasiperc/percolation.hpp"

using namespace quasiperc;

namespace {

Configuration random_config(const AdjacencyGraph& g, double p, std::uint64_t seed,
                            std::uint64_t trial) {
    const RngStream stream{seed, trial};
    return sample({MeasureSpec::Kind::bernoulli, p}, g, stream);
}

} // namespace

TEST_CASE("step: hand-evaluated grid neighbourhood") {
    const auto patch = qt::grid_patch(4.0);
    const AdjacencyGraph g = build_adjacency(patch);
    Configuration c = make_configuration(g);
    c.state[qt::cell(*patch, 0, 0)] = 1;
    c.state[qt::cell(*patch, 1, 1)] = 1;
    const Configuration next = step(c, RuleSpec{});
    CHECK(next.state[qt::cell(*patch, 0, 1)] == 1);
    CHECK(next.state[qt::cell(*patch, 1, 0)] == 1);
    CHECK(next.ones() == 4);
}

TEST_CASE("step: all-zero is a fixed point") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(5.0));
    const Configuration zero = make_configuration(g);
    CHECK(step(zero, RuleSpec{}).ones() == 0);
    CHECK(is_stable(zero, RuleSpec{}));
}

TEST_CASE("fixpoint: diagonal fills its square") {
    const auto patch = qt::grid_patch(8.0);
    const AdjacencyGraph g = build_adjacency(patch);
    Configuration c = make_configuration(g);
    const int n = 5;
    for (int i = -2; i < n - 2; ++i) c.state[qt::cell(*patch, i, i)] = 1;
    const FixpointResult fixed = fixpoint(c, RuleSpec{});
    const FixpointResult oracle = fixpoint_oracle(c, RuleSpec{});
    CHECK(fixed.config.state == oracle.config.state);
    CHECK(fixed.rounds == oracle.rounds);
    for (int i = -2; i < n - 2; ++i) {
        for (int j = -2; j < n - 2; ++j) {
            CHECK(fixed.config.state[qt::cell(*patch, i, j)] == 1);
        }
    }
}

TEST_CASE("fixpoint: m=1 is connectivity") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(6.0));
    Configuration c = make_configuration(g);
    c.state[central_node(g)] = 1;
    RuleSpec m1;
    m1.threshold = 1;
    CHECK(fixpoint(c, m1).config.ones() == g.size());
}

TEST_CASE("fixpoint: single tile cannot spread at m=2") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(6.0));
    Configuration c = make_configuration(g);
    c.state[central_node(g)] = 1;
    const FixpointResult fixed = fixpoint(c, RuleSpec{});
    CHECK(fixed.config.ones() == 1);
    CHECK(fixed.rounds == 0);
}

TEST_CASE("fortress grid: fortress of zeros survives") {
    const AdjacencyGraph g = generate_fortress_grid(4);
    Configuration c = make_configuration(g);
    std::fill(c.state.begin(), c.state.end(), 1);
    for (int v : fortress_nodes(g)) c.state[v] = 0;
    const Configuration fixed = fixpoint(c, RuleSpec{}).config;
    for (int v : fortress_nodes(g)) CHECK(fixed.state[v] == 0);
    CHECK(is_stable(c, RuleSpec{}));
}

TEST_CASE("band tiling: cube of zeros survives F3") {
    const auto band = std::make_shared<const TilingPatch>(make_band_tiling(12.0));
    const AdjacencyGraph g = build_adjacency(band);
    const auto cube = band_cube(*band);
    Configuration c = make_configuration(g);
    std::fill(c.state.begin(), c.state.end(), 1);
    for (int v : cube) c.state[v] = 0;
    const RuleSpec f3 = band_f3_rule();
    const Configuration fixed = fixpoint(c, f3).config;
    for (int v : cube) CHECK(fixed.state[v] == 0);

    // Disarming any single cube tile floods the whole cube.
    for (int armed = 0; armed < 3; ++armed) {
        Configuration d = c;
        d.state[cube[armed]] = 1;
        const Configuration after = fixpoint(d, f3).config;
        for (int v : cube) CHECK(after.state[v] == 1);
    }
}

TEST_CASE("is_stable examples") {
    const auto patch = qt::grid_patch(5.0);
    const AdjacencyGraph g = build_adjacency(patch);

    Configuration diag = make_configuration(g);
    diag.state[qt::cell(*patch, 0, 0)] = 1;
    diag.state[qt::cell(*patch, 1, 1)] = 1;
    CHECK_FALSE(is_stable(diag, RuleSpec{}));

    Configuration rect = make_configuration(g);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) rect.state[qt::cell(*patch, i, j)] = 1;
    }
    CHECK(is_stable(rect, RuleSpec{}));

    Configuration ones = make_configuration(g);
    std::fill(ones.state.begin(), ones.state.end(), 1);
    CHECK(is_stable(ones, RuleSpec{}));
}

TEST_CASE("worklist equals synchronous oracle on random instances") {
    const auto penrose = std::make_shared<const TilingPatch>(
        generate_patch(build_basis(5, 0.0, penrose_offsets()), 8.0));
    const auto band = std::make_shared<const TilingPatch>(make_band_tiling(10.0));
    struct CaseDef {
        AdjacencyGraph graph;
        RuleSpec rule;
    };
    std::vector<CaseDef> cases;
    cases.push_back({build_adjacency(penrose), RuleSpec{}});
    cases.push_back({build_adjacency(qt::grid_patch(6.0)), RuleSpec{}});
    cases.push_back({build_adjacency(band), band_f3_rule()});
    cases.push_back({generate_fortress_grid(5), RuleSpec{}});
    cases.push_back({grid_with_hole(5), RuleSpec{}});
    RuleSpec m3;
    m3.threshold = 3;
    cases.push_back({build_adjacency(penrose), m3});

    int checked = 0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        for (int t = 0; t < 40; ++t) {
            const double p = 0.05 + 0.55 * (t / 39.0);
            Configuration c = random_config(cases[k].graph, p, 1000 + k, t);
            if (t % 2 == 1 && !cases[k].rule.directed()) c.boundary = BoundaryPolicy::infected;
            const FixpointResult fast = fixpoint(c, cases[k].rule);
            const FixpointResult slow = fixpoint_oracle(c, cases[k].rule);
            REQUIRE(fast.config.state == slow.config.state);
            REQUIRE(fast.rounds == slow.rounds);
            ++checked;
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("freezing and monotonicity") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(7.0));
    for (int t = 0; t < 50; ++t) {
        const Configuration c = random_config(g, 0.2, 77, t);
        const Configuration next = step(c, RuleSpec{});
        for (int v = 0; v < g.size(); ++v) CHECK(next.state[v] >= c.state[v]);

        // Coupled pair: same uniforms, two thresholds.
        const RngStream stream{77, static_cast<std::uint64_t>(t)};
        Configuration lo = make_configuration(g);
        Configuration hi = make_configuration(g);
        for (int v = 0; v < g.size(); ++v) {
            const double u = stream.uniform(v, salt::occupation);
            lo.state[v] = u < 0.08 ? 1 : 0;
            hi.state[v] = u < 0.15 ? 1 : 0;
        }
        const Configuration flo = fixpoint(lo, RuleSpec{}).config;
        const Configuration fhi = fixpoint(hi, RuleSpec{}).config;
        for (int v = 0; v < g.size(); ++v) CHECK(flo.state[v] <= fhi.state[v]);
    }
}

TEST_CASE("idempotence at the limit") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(7.0));
    for (int t = 0; t < 20; ++t) {
        const Configuration c = random_config(g, 0.15, 5, t);
        const Configuration fixed = fixpoint(c, RuleSpec{}).config;
        CHECK(step(fixed, RuleSpec{}).state == fixed.state);
    }
}

TEST_CASE("rule errors") {
    const AdjacencyGraph generic = generate_fortress_grid(3);
    Configuration c = make_configuration(generic);
    CHECK_THROWS_AS(step(c, band_f3_rule()), error);

    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(4.0));
    Configuration infected = make_configuration(g, BoundaryPolicy::infected);
    CHECK_THROWS_AS(step(infected, band_f3_rule()), error);
}

TEST_CASE("run-length state codec") {
    const AdjacencyGraph g = build_adjacency(qt::grid_patch(4.0));
    Configuration c = random_config(g, 0.35, 9, 4);
    const std::string rle = encode_state(c);
    CHECK(decode_state(rle) == c.state);
    Configuration zero = make_configuration(g);
    CHECK(decode_state(encode_state(zero)) == zero.state);
}
