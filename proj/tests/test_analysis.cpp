#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "helpers.hpp"
#include "quasiperc/analysis.hpp"
#include "quasiperc/percolation.hpp"

using namespace quasiperc;

TEST_CASE("clusters: connectivity flavours") {
    const auto patch = qt::grid_patch(4.0);
    const AdjacencyGraph g = build_adjacency(patch);
    Configuration c = make_configuration(g);
    c.state[qt::cell(*patch, 0, 0)] = 1;
    c.state[qt::cell(*patch, 1, 1)] = 1;
    CHECK(clusters(c, Connectivity::edge).size() == 2);
    CHECK(clusters(c, Connectivity::vertex).size() == 1);

    const Configuration zero = make_configuration(g);
    CHECK(clusters(zero, Connectivity::edge).empty());

    // Partition: every 1 in exactly one cluster.
    const RngStream stream{3, 0};
    const Configuration r = sample({MeasureSpec::Kind::bernoulli, 0.4}, g, stream);
    long covered = 0;
    for (const auto& comp : clusters(r, Connectivity::edge)) covered += comp.size();
    CHECK(covered == r.ones());
}

TEST_CASE("check_chain_convex: grid shapes") {
    const auto patch = qt::grid_patch(8.0);
    const AdjacencyGraph g = build_adjacency(patch);

    SUBCASE("rectangle is chain convex") {
        std::vector<int> rect;
        for (int i = -1; i <= 1; ++i) {
            for (int j = 0; j < 2; ++j) rect.push_back(qt::cell(*patch, i, j));
        }
        CHECK(check_chain_convex(g, rect).chain_convex == Verdict::yes);
    }
    SUBCASE("L-tromino is not") {
        const std::vector<int> l{qt::cell(*patch, 0, 0), qt::cell(*patch, 1, 0),
                                 qt::cell(*patch, 0, 1)};
        const ClusterReport report = check_chain_convex(g, l);
        CHECK(report.chain_convex == Verdict::no);
        CHECK(report.witness.has_value());
    }
    SUBCASE("single tile is chain convex") {
        const std::vector<int> one{qt::cell(*patch, 0, 0)};
        CHECK(check_chain_convex(g, one).chain_convex == Verdict::yes);
    }
    SUBCASE("empty set is an error") {
        CHECK_THROWS_AS(check_chain_convex(g, std::vector<int>{}), error);
    }
}

TEST_CASE("boundary_decomposition: grid") {
    const auto patch = qt::grid_patch(8.0);
    const AdjacencyGraph g = build_adjacency(patch);

    SUBCASE("rectangle boundary has 4 segments") {
        std::vector<int> rect;
        for (int i = -1; i <= 1; ++i) {
            for (int j = 0; j < 2; ++j) rect.push_back(qt::cell(*patch, i, j));
        }
        const ClusterReport report = boundary_decomposition(g, rect);
        REQUIRE(report.boundary_valid);
        CHECK(report.boundary_segments == 4);
        CHECK(report.enclosing_gon->convex);
        CHECK(report.enclosing_gon->length() == 14);
    }
    SUBCASE("single tile ring") {
        const std::vector<int> one{qt::cell(*patch, 0, 0)};
        const ClusterReport report = boundary_decomposition(g, one);
        REQUIRE(report.boundary_valid);
        CHECK(report.enclosing_gon->length() == 8);
        CHECK(report.boundary_segments == 4);
    }
    SUBCASE("boundary contact is indeterminate, not an error") {
        // A tile hugging the rim of the disk.
        int rim = -1;
        for (int v = 0; v < g.size(); ++v) {
            if (!g.interior[v]) rim = v;
        }
        REQUIRE(rim >= 0);
        const ClusterReport report = boundary_decomposition(g, std::vector<int>{rim});
        CHECK(report.touches_boundary);
        CHECK(report.boundary_segments == -1);
    }
}

TEST_CASE("boundary_decomposition: Penrose single tile stays within 2d segments") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(8.0));
    const int t = central_node(g);
    const ClusterReport report = boundary_decomposition(g, std::vector<int>{t});
    REQUIRE(report.boundary_valid);
    CHECK(report.boundary_segments <= 10);
    CHECK(report.enclosing_gon->length() >= 8);
}

TEST_CASE("is_fortress") {
    SUBCASE("fortress-grid five-node set") {
        const AdjacencyGraph g = generate_fortress_grid(3);
        CHECK(is_fortress(g, fortress_nodes(g), RuleSpec{}));
    }
    SUBCASE("band cube under F3, but not undirected") {
        const auto band = std::make_shared<const TilingPatch>(make_band_tiling(10.0));
        const AdjacencyGraph g = build_adjacency(band);
        const auto cube = band_cube(*band);
        const std::vector<int> r(cube.begin(), cube.end());
        CHECK(is_fortress(g, r, band_f3_rule()));
        CHECK_FALSE(is_fortress(g, r, RuleSpec{}));
    }
    SUBCASE("single rhombus tile is never an m=2 fortress") {
        const AdjacencyGraph g = build_adjacency(qt::penrose_patch(6.0));
        CHECK_FALSE(is_fortress(g, std::vector<int>{central_node(g)}, RuleSpec{}));
    }
    SUBCASE("boundary contact raises") {
        const AdjacencyGraph g = build_adjacency(qt::grid_patch(3.0));
        int rim = -1;
        for (int v = 0; v < g.size(); ++v) {
            if (!g.interior[v]) rim = v;
        }
        CHECK_THROWS_AS(is_fortress(g, std::vector<int>{rim}, RuleSpec{}), error);
    }
}

TEST_CASE("fortress_search") {
    SUBCASE("fortress grid: the five-node set is found from the centre square") {
        const AdjacencyGraph g = generate_fortress_grid(4);
        const auto fortress = fortress_nodes(g);
        int centre = -1;
        for (int v : fortress) {
            if (g.labels[v] == "fortress:C") centre = v;
        }
        const FortressSearchResult result = fortress_search(g, std::vector<int>{centre}, 5, RuleSpec{});
        std::vector<int> expected = fortress;
        std::sort(expected.begin(), expected.end());
        bool found = false;
        for (const auto& f : result.fortresses) {
            if (f == expected) found = true;
        }
        CHECK(found);
    }
    SUBCASE("no m=2 fortress on a rhombus patch") {
        const AdjacencyGraph g = build_adjacency(qt::penrose_patch(10.0));
        const int centre = central_node(g);
        std::vector<int> seeds;
        for (const Arc& a : g.arcs[centre]) seeds.push_back(a.to);
        seeds.push_back(centre);
        const FortressSearchResult result = fortress_search(g, seeds, 6, RuleSpec{});
        CHECK(result.fortresses.empty());
        CHECK(result.sets_examined > 1000);
    }
    SUBCASE("seeds with too little margin are skipped") {
        const AdjacencyGraph g = build_adjacency(qt::grid_patch(4.0));
        int rim = -1;
        for (int v = 0; v < g.size(); ++v) {
            if (!g.interior[v]) rim = v;
        }
        const FortressSearchResult result = fortress_search(g, std::vector<int>{rim}, 3, RuleSpec{});
        CHECK(result.fortresses.empty());
        CHECK(result.skipped_seeds == std::vector<int>{rim});
    }
}

TEST_CASE("enumerate_enclosing_gons: square grid") {
    const AdjacencyGraph g = build_adjacency(qt::grid_patch(16.0));
    const int c = central_node(g);

    SUBCASE("nothing encloses below the 8-ring") {
        const GonCounts counts = enumerate_enclosing_gons(g, c, 7);
        for (int n = 0; n <= 7; ++n) CHECK(counts.total[n] == 0);
    }
    SUBCASE("the 8-ring is the unique minimal enclosing gon") {
        const GonCounts counts = enumerate_enclosing_gons(g, c, 8);
        CHECK(counts.total[8] == 1);
        CHECK(counts.convex[8] == 1);
        REQUIRE(counts.cycles.size() == 1);
        const auto ring = vertex_neighbours(g, std::vector<int>{c});
        std::vector<int> cyc = counts.cycles[0];
        std::sort(cyc.begin(), cyc.end());
        CHECK(cyc == ring);
    }
    SUBCASE("counts stay under the polynomial bound") {
        const GonCounts counts = enumerate_enclosing_gons(g, c, 10);
        const DirectionBasis basis = build_basis(2, 0.0, {0.5, 0.5});
        for (int n = 1; n <= 10; ++n) {
            CHECK(static_cast<double>(counts.convex[n]) <= q_bound(basis, n));
        }
        CHECK(counts.total[10] == 4);  // rings around the four dominoes containing c
    }
    SUBCASE("margin violations raise") {
        const AdjacencyGraph small = build_adjacency(qt::grid_patch(4.0));
        CHECK_THROWS_AS(enumerate_enclosing_gons(small, central_node(small), 8), error);
    }
}

TEST_CASE("enumerate_enclosing_gons: short cycles cannot wind") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(8.0));
    const GonCounts counts = enumerate_enclosing_gons(g, central_node(g), 3);
    for (int n = 0; n <= 3; ++n) CHECK(counts.total[n] == 0);
}

TEST_CASE("q_bound values") {
    const DirectionBasis grid = build_basis(2, 0.0, {0.5, 0.5});
    CHECK(q_bound(grid, 1) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
    CHECK(q_bound(grid, 3) == doctest::Approx(2.0 * std::numbers::pi * 729.0).epsilon(1e-12));

    const DirectionBasis penrose = build_basis(5, 0.0, penrose_offsets());
    // Thin rhombus: diameter 2 cos 18, area sin 36.
    const double deg = std::numbers::pi / 180.0;
    const double coeff = std::numbers::pi * std::pow(2.0 * std::cos(18.0 * deg), 2) / std::sin(36.0 * deg);
    CHECK(coeff == doctest::Approx(19.337656).epsilon(1e-5));
    CHECK(q_bound(penrose, 1) == doctest::Approx(coeff).epsilon(1e-12));
    CHECK(q_bound(penrose, 2) == doctest::Approx(coeff * 4096.0).epsilon(1e-12));

    for (int n = 1; n < 9; ++n) CHECK(q_bound(penrose, n + 1) > q_bound(penrose, n));
}

TEST_CASE("classify_hole_grid_cluster") {
    const AdjacencyGraph g = grid_with_hole(8);
    auto at = [&](int i, int j) {
        for (int v = 0; v < g.size(); ++v) {
            if (g.coords[v][0] == i && g.coords[v][1] == j) return v;
        }
        return -1;
    };

    SUBCASE("rectangle away from the hole") {
        std::vector<int> rect;
        for (int i = 2; i <= 4; ++i) {
            for (int j = 2; j <= 3; ++j) rect.push_back(at(i, j));
        }
        CHECK(classify_hole_grid_cluster(g, rect) == HoleClusterClass::rectangle);
    }
    SUBCASE("singular cluster hugging the hole is an L-hexagon") {
        // Rectangle with the hole at its corner, minus that corner:
        // contains exactly (1,0) and (0,1) of the hole's axis
        // neighbours, and the only reflex corner sits at the hole.
        std::set<std::pair<int, int>> shape;
        for (int i = 0; i <= 3; ++i) {
            for (int j = 0; j <= 2; ++j) shape.insert({i, j});
        }
        shape.erase({0, 0});
        std::vector<int> cluster;
        for (const auto& [i, j] : shape) cluster.push_back(at(i, j));
        // The shape must really be stable on the holed grid.
        Configuration c = make_configuration(g);
        for (int v : cluster) c.state[v] = 1;
        REQUIRE(is_stable(c, RuleSpec{}));
        CHECK(classify_hole_grid_cluster(g, cluster) == HoleClusterClass::l_hexagon);
    }
    SUBCASE("three axis neighbours: rectangle after adjoining the origin") {
        // Seed a rectangle overlapping the hole and let it stabilize.
        Configuration c = make_configuration(g);
        for (int i = -1; i <= 2; ++i) {
            for (int j = -1; j <= 1; ++j) {
                if (i == 0 && j == 0) continue;
                c.state[at(i, j)] = 1;
            }
        }
        const Configuration fixed = fixpoint(c, RuleSpec{}).config;
        REQUIRE(is_stable(fixed, RuleSpec{}));
        const auto comps = clusters(fixed, Connectivity::edge);
        REQUIRE(comps.size() == 1);
        int axis = 0;
        for (int v : comps[0]) {
            const auto& xy = g.coords[v];
            if (std::abs(xy[0]) + std::abs(xy[1]) == 1) ++axis;
        }
        CHECK(axis >= 3);
        CHECK(classify_hole_grid_cluster(g, comps[0]) == HoleClusterClass::rectangle);
    }
    SUBCASE("window contact reports boundary") {
        const std::vector<int> rim{at(8, 0)};
        CHECK(classify_hole_grid_cluster(g, rim) == HoleClusterClass::boundary);
    }
}

TEST_CASE("subcritical stable clusters on Penrose obey the lemmas") {
    const AdjacencyGraph g = build_adjacency(qt::penrose_patch(14.0));
    const int d = g.patch->basis.n;
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const RngStream stream{909, static_cast<std::uint64_t>(trial)};
        const Configuration initial = sample({MeasureSpec::Kind::bernoulli, 0.06}, g, stream);
        const Configuration fixed = fixpoint(initial, RuleSpec{}).config;
        if (fixed.ones() == g.size()) continue;
        for (const auto& cluster : clusters(fixed, Connectivity::vertex)) {
            const ClusterReport convex = check_chain_convex(g, cluster);
            CHECK(convex.chain_convex != Verdict::no);
            const ClusterReport walls = boundary_decomposition(g, cluster);
            if (walls.touches_boundary) continue;
            ++checked;
            REQUIRE(walls.boundary_valid);
            CHECK(walls.boundary_segments <= 2 * d);
            // Exterior boundary tiles of a maximal cluster are all 0.
            for (int t : walls.enclosing_gon->cycle) CHECK(fixed.state[t] == 0);
        }
    }
    CHECK(checked >= 10);
}
