#include "quasiperc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace quasiperc {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json patch_to_json(const TilingPatch& patch) {
    json doc;
    doc["format"] = "quasiperc-patch-v1";
    doc["kind"] = "rhombus";
    doc["basis"] = {{"n", patch.basis.n}, {"phi", patch.basis.phi}, {"gammas", patch.basis.gamma}};
    doc["provenance"] = {{"kind", patch.provenance.kind},
                         {"radius", patch.provenance.radius},
                         {"gamma_sum_integral", patch.provenance.gamma_sum_integral},
                         {"sparse_families", patch.provenance.sparse_families}};
    json tiles = json::array();
    for (const Tile& t : patch.tiles) {
        tiles.push_back({{"f", {t.families[0], t.families[1]}},
                         {"k", {t.lines[0], t.lines[1]}},
                         {"b", t.base.k}});
    }
    doc["tiles"] = std::move(tiles);
    return doc;
}

TilingPatch patch_from_json(const json& doc) {
    if (doc.value("format", "") != "quasiperc-patch-v1" || doc.value("kind", "") != "rhombus") {
        throw error(errc::bad_file, "not a rhombus patch document");
    }
    const json& b = doc.at("basis");
    TilingPatch patch;
    patch.basis = build_basis(b.at("n").get<int>(), b.at("phi").get<double>(),
                              b.at("gammas").get<std::vector<double>>());
    const json& prov = doc.at("provenance");
    patch.provenance.kind = prov.value("kind", "multigrid");
    patch.provenance.radius = prov.value("radius", 0.0);
    patch.provenance.gamma_sum_integral = prov.value("gamma_sum_integral", false);
    patch.provenance.sparse_families = prov.value("sparse_families", std::vector<int>{});
    for (const json& jt : doc.at("tiles")) {
        Tile t;
        t.families = {jt.at("f").at(0).get<int>(), jt.at("f").at(1).get<int>()};
        t.lines = {jt.at("k").at(0).get<int>(), jt.at("k").at(1).get<int>()};
        t.base.k = jt.at("b").get<std::vector<std::int32_t>>();
        if (static_cast<int>(t.base.k.size()) != patch.basis.n) {
            throw error(errc::bad_file, "tile key length does not match the basis");
        }
        patch.tiles.push_back(std::move(t));
    }
    patch.reindex();
    return patch;
}

json graph_to_json(const AdjacencyGraph& graph) {
    if (graph.rhombus()) return patch_to_json(*graph.patch);
    json doc;
    doc["format"] = "quasiperc-patch-v1";
    doc["kind"] = "generic";
    if (graph.builder == "fortress-grid" || graph.builder == "grid-hole") {
        doc["generic"] = {{"builder", graph.builder}, {"half_size", graph.half_size}};
        return doc;
    }
    // Explicit graphs: coords + undirected edge list (+ interior flags).
    json nodes = json::array();
    for (int v = 0; v < graph.size(); ++v) {
        const Vec2 pt = graph.node_point(v);
        nodes.push_back({pt.x, pt.y});
    }
    json edges = json::array();
    for (int v = 0; v < graph.size(); ++v) {
        for (const Arc& a : graph.arcs[v]) {
            if (a.to > v) edges.push_back({v, a.to});
        }
    }
    json interior = json::array();
    for (int v = 0; v < graph.size(); ++v) interior.push_back(graph.interior[v] != 0);
    doc["generic"] = {{"builder", "explicit"}, {"nodes", nodes}, {"edges", edges}, {"interior", interior}};
    return doc;
}

AdjacencyGraph graph_from_json(const json& doc) {
    if (doc.value("format", "") != "quasiperc-patch-v1") {
        throw error(errc::bad_file, "not a patch document");
    }
    const std::string kind = doc.value("kind", "");
    if (kind == "rhombus") {
        return build_adjacency(patch_from_json(doc));
    }
    if (kind != "generic") {
        throw error(errc::bad_file, "unknown patch kind");
    }
    const json& g = doc.at("generic");
    const std::string builder = g.value("builder", "");
    if (builder == "fortress-grid") return generate_fortress_grid(g.at("half_size").get<int>());
    if (builder == "grid-hole") return grid_with_hole(g.at("half_size").get<int>());
    if (builder != "explicit") {
        throw error(errc::bad_file, "unknown generic builder");
    }
    AdjacencyGraph out;
    out.kind = AdjacencyGraph::Kind::generic;
    out.builder = "explicit";
    const json& nodes = g.at("nodes");
    const int n = static_cast<int>(nodes.size());
    out.arcs.assign(n, {});
    out.coords.assign(n, {0, 0});
    out.polygons.assign(n, {});
    out.labels.assign(n, "");
    out.virtual_boundary.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        const double x = nodes.at(v).at(0).get<double>();
        const double y = nodes.at(v).at(1).get<double>();
        out.polygons[v] = {{x, y}};  // degenerate polygon carries the point
        out.labels[v] = "node:" + std::to_string(v);
    }
    for (const json& e : g.at("edges")) {
        const int u = e.at(0).get<int>();
        const int v = e.at(1).get<int>();
        if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
            throw error(errc::bad_file, "bad edge in explicit graph");
        }
        out.arcs[u].push_back({v, -1, 0});
        out.arcs[v].push_back({u, -1, 0});
    }
    if (g.contains("interior")) {
        out.interior.assign(n, 0);
        for (int v = 0; v < n; ++v) out.interior[v] = g.at("interior").at(v).get<bool>() ? 1 : 0;
    } else {
        out.interior.assign(n, 1);
    }
    return out;
}

void save_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::bad_file, "cannot write " + path);
    out << doc.dump(1, '\t') << '\n';
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::bad_file, "cannot read " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw error(errc::bad_file, std::string("malformed JSON: ") + e.what());
    }
    return doc;
}

AdjacencyGraph load_graph_file(const std::string& path) {
    return graph_from_json(load_json_file(path));
}

RuleSpec rule_from_string(const std::string& text) {
    RuleSpec rule;
    if (text == "m2") return rule;
    if (text == "m3") {
        rule.threshold = 3;
        return rule;
    }
    if (text.rfind("m", 0) == 0 && text.size() > 1 && std::isdigit(static_cast<unsigned char>(text[1]))) {
        rule.threshold = std::stoi(text.substr(1));
        return rule;
    }
    if (text == "directed:band-f3") return band_f3_rule();
    if (text.rfind("directed:", 0) == 0) {
        // e.g. directed:0+,1-,2+,3*,4*  (* = both signs)
        rule.allowed = std::vector<std::pair<int, int>>{};
        std::istringstream in(text.substr(9));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.size() < 2) throw error(errc::invalid_input, "bad direction token " + tok);
            const int fam = std::stoi(tok.substr(0, tok.size() - 1));
            const char s = tok.back();
            if (s == '+') {
                rule.allowed->push_back({fam, +1});
            } else if (s == '-') {
                rule.allowed->push_back({fam, -1});
            } else if (s == '*') {
                rule.allowed->push_back({fam, +1});
                rule.allowed->push_back({fam, -1});
            } else {
                throw error(errc::invalid_input, "bad direction sign in " + tok);
            }
        }
        return rule;
    }
    throw error(errc::invalid_input, "unknown rule " + text);
}

MeasureSpec measure_from_string(const std::string& text) {
    MeasureSpec m;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw error(errc::invalid_input, "measure needs a parameter");
    const std::string kind = text.substr(0, colon);
    m.param = std::stod(text.substr(colon + 1));
    if (kind == "bernoulli") {
        m.kind = MeasureSpec::Kind::bernoulli;
    } else if (kind == "nmax" || kind == "neighbourhood-max") {
        m.kind = MeasureSpec::Kind::neighbourhood_max;
    } else {
        throw error(errc::invalid_input, "unknown measure " + kind);
    }
    if (m.param < 0.0 || m.param > 1.0) throw error(errc::invalid_input, "measure parameter outside [0,1]");
    return m;
}

namespace {

RuleSpec rule_from_json(const json& r) {
    if (r.is_string()) return rule_from_string(r.get<std::string>());
    RuleSpec rule;
    rule.threshold = r.value("m", 2);
    if (r.contains("directed")) {
        const json& d = r.at("directed");
        if (d.is_string()) {
            const std::string s = d.get<std::string>();
            RuleSpec named = rule_from_string(s == "band-f3" ? "directed:band-f3" : "directed:" + s);
            named.threshold = rule.threshold;
            return named;
        }
        rule.allowed = std::vector<std::pair<int, int>>{};
        for (const json& pair : d) {
            rule.allowed->push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
        }
    }
    return rule;
}

MeasureSpec measure_from_json(const json& m) {
    if (m.is_string()) return measure_from_string(m.get<std::string>());
    MeasureSpec out;
    const std::string kind = m.value("kind", "bernoulli");
    if (kind == "bernoulli") {
        out.kind = MeasureSpec::Kind::bernoulli;
        out.param = m.at("p").get<double>();
    } else if (kind == "neighbourhood-max" || kind == "nmax") {
        out.kind = MeasureSpec::Kind::neighbourhood_max;
        out.param = m.at("q").get<double>();
    } else {
        throw error(errc::invalid_input, "unknown measure kind " + kind);
    }
    return out;
}

std::shared_ptr<const AdjacencyGraph> graph_from_experiment(const json& p, const std::string& base_dir) {
    if (p.contains("file")) {
        std::string path = p.at("file").get<std::string>();
        if (!base_dir.empty() && !path.empty() && path[0] != '/') path = base_dir + "/" + path;
        return std::make_shared<const AdjacencyGraph>(load_graph_file(path));
    }
    const std::string kind = p.value("kind", "");
    if (kind == "penrose" || kind == "grid" || kind == "ngrid") {
        int n = 5;
        std::vector<double> offsets;
        if (kind == "grid") n = 2;
        if (kind == "ngrid") n = p.at("n").get<int>();
        if (p.contains("offsets")) {
            offsets = p.at("offsets").get<std::vector<double>>();
        } else if (kind == "penrose") {
            offsets = penrose_offsets();
        } else if (kind == "grid") {
            offsets = {0.5, 0.5};
        } else {
            offsets = default_offsets(n);
        }
        const double phi = p.value("phi", 0.0);
        const DirectionBasis basis = build_basis(n, phi, offsets);
        TilingPatch patch = generate_patch(basis, p.at("radius").get<double>());
        patch.provenance.kind = kind;
        return std::make_shared<const AdjacencyGraph>(build_adjacency(std::move(patch)));
    }
    if (kind == "band") {
        BandParams params;
        if (p.contains("scale")) params.scale = p.at("scale").get<double>();
        return std::make_shared<const AdjacencyGraph>(
            build_adjacency(make_band_tiling(p.at("radius").get<double>(), params)));
    }
    if (kind == "fortress-grid") {
        return std::make_shared<const AdjacencyGraph>(generate_fortress_grid(p.at("half_size").get<int>()));
    }
    if (kind == "grid-hole") {
        return std::make_shared<const AdjacencyGraph>(grid_with_hole(p.at("half_size").get<int>()));
    }
    throw error(errc::invalid_input, "unknown patch kind " + kind);
}

} // namespace

ParsedExperiment experiment_from_json(const json& doc, const std::string& base_dir) {
    ParsedExperiment out;
    out.raw = doc;
    Experiment& e = out.experiment;
    e.graph = graph_from_experiment(doc.at("patch"), base_dir);
    e.rule = doc.contains("rule") ? rule_from_json(doc.at("rule")) : RuleSpec{};
    e.measure = measure_from_json(doc.at("measure"));
    e.trials = doc.at("trials").get<long>();
    e.master_seed = doc.value("seed", 1);
    const std::string boundary = doc.value("boundary", "open");
    if (boundary == "open") {
        e.boundary = BoundaryPolicy::open;
    } else if (boundary == "infected") {
        e.boundary = BoundaryPolicy::infected;
    } else {
        throw error(errc::invalid_input, "unknown boundary policy " + boundary);
    }
    if (doc.contains("criterion")) {
        const json& c = doc.at("criterion");
        const std::string kind = c.is_string() ? c.get<std::string>() : c.value("kind", "central-ball");
        if (kind == "full-patch") {
            e.criterion.kind = CriterionSpec::Kind::full_patch;
        } else if (kind == "central-ball") {
            e.criterion.kind = CriterionSpec::Kind::central_ball;
            if (c.is_object()) e.criterion.radius = c.value("radius", -1);
        } else if (kind == "target-set") {
            e.criterion.kind = CriterionSpec::Kind::target_set;
            e.criterion.targets = c.at("tiles").get<std::vector<int>>();
        } else if (kind == "cube") {
            if (!e.graph->rhombus() || e.graph->patch->provenance.kind != "band") {
                throw error(errc::invalid_input, "cube criterion needs a band patch");
            }
            const auto cube = band_cube(*e.graph->patch);
            e.criterion.kind = CriterionSpec::Kind::target_set;
            e.criterion.targets.assign(cube.begin(), cube.end());
        } else if (kind == "fortress-ball") {
            // Fortress nodes plus the central ball; on the fortress grid
            // the ball around the centre square already contains the
            // fortress, so this resolves to a central ball rooted there.
            e.criterion.kind = CriterionSpec::Kind::central_ball;
            if (c.is_object()) e.criterion.radius = c.value("radius", -1);
        } else {
            throw error(errc::invalid_input, "unknown criterion " + kind);
        }
    }
    e.prepare();
    return out;
}

json estimate_to_json(const Estimate& estimate) {
    return json{{"estimate", estimate.point},
                {"wilson_lo", estimate.lo},
                {"wilson_hi", estimate.hi},
                {"trials", estimate.trials},
                {"successes", estimate.successes},
                {"mean_rounds", estimate.mean_rounds},
                {"fortress_disarmed_rate", estimate.fortress_disarmed_rate}};
}

json chain_to_json(const Chain& chain) {
    return json{{"family", chain.family},
                {"line", chain.line},
                {"tiles", chain.tiles},
                {"truncated", {chain.truncated_lo, chain.truncated_hi}}};
}

json cluster_report_to_json(const ClusterReport& report) {
    json doc;
    doc["cluster"] = report.cluster;
    doc["touches_boundary"] = report.touches_boundary;
    doc["chain_convex"] = report.chain_convex == Verdict::yes ? "yes"
                          : report.chain_convex == Verdict::no ? "no"
                                                               : "indeterminate";
    if (report.witness) {
        doc["witness"] = chain_to_json(*report.witness);
        doc["witness_what"] = report.witness_what;
    }
    doc["boundary_segments"] = report.boundary_segments;
    doc["boundary_valid"] = report.boundary_valid;
    if (!report.boundary_what.empty()) doc["boundary_what"] = report.boundary_what;
    if (report.enclosing_gon) {
        json segments = json::array();
        for (const auto& s : report.enclosing_gon->segments) {
            segments.push_back({{"family", s.family}, {"start", s.start}, {"length", s.length}});
        }
        doc["enclosing_gon"] = {{"cycle", report.enclosing_gon->cycle},
                                {"segments", segments},
                                {"convex", report.enclosing_gon->convex}};
    }
    return doc;
}

json gon_counts_to_json(const GonCounts& counts) {
    json per_length = json::array();
    for (int n = 0; n <= counts.n_max; ++n) {
        if (counts.total[n] == 0) continue;
        per_length.push_back({{"length", n}, {"total", counts.total[n]}, {"convex", counts.convex[n]}});
    }
    return json{{"n_max", counts.n_max}, {"counts", per_length}};
}

std::string trials_to_csv(const std::vector<TrialStats>& trials) {
    std::ostringstream out;
    out << "trial,invaded,rounds,initial_ones,final_ones,final_fraction,clusters,largest_cluster\n";
    for (const TrialStats& t : trials) {
        long clusters = 0;
        int largest = 0;
        for (const auto& [size, count] : t.cluster_histogram) {
            clusters += count;
            largest = std::max(largest, size);
        }
        out << t.trial << ',' << (t.invaded ? 1 : 0) << ',' << t.rounds << ',' << t.initial_ones
            << ',' << t.final_ones << ',' << format_double(t.final_fraction) << ',' << clusters
            << ',' << largest << '\n';
    }
    return out.str();
}

std::string sweep_to_csv(std::span<const double> ps, const std::vector<Estimate>& estimates) {
    std::ostringstream out;
    out << "p,estimate,wilson_lo,wilson_hi,successes,trials\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Estimate& e = estimates[i];
        out << format_double(ps[i]) << ',' << format_double(e.point) << ',' << format_double(e.lo)
            << ',' << format_double(e.hi) << ',' << e.successes << ',' << e.trials << '\n';
    }
    return out.str();
}

} // namespace quasiperc
