#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quasiperc/io.hpp"
#include "quasiperc/percolation.hpp"
#include "quasiperc/svg.hpp"
#include "quasiperc/verify.hpp"

using namespace quasiperc;

namespace {

// Exit codes: 0 ok, 2 usage, 3 generation, 4 incompatibility,
// 5 verification failure.
constexpr int kExitUsage = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitIncompatible = 4;
constexpr int kExitVerification = 5;

int exit_code_for(const error& e) {
    switch (e.code()) {
        case errc::singular_grid:
        case errc::degenerate_band:
        case errc::degenerate_basis:
            return kExitGeneration;
        case errc::wrong_family:
        case errc::unsupported_rule:
        case errc::not_interior:
        case errc::margin_error:
            return kExitIncompatible;
        default:
            return kExitUsage;
    }
}

int default_threads() {
    if (const char* env = std::getenv("QUASIPERC_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::bad_file, "cannot write " + path);
    out << text;
}

std::vector<double> parse_offsets(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

struct TileArgs {
    std::string kind = "penrose";
    double radius = 10.0;
    int half_size = 8;
    double phi = 0.0;
    std::string offsets;
    std::string out;
    std::string svg;
};

int cmd_tile(const TileArgs& args) {
    AdjacencyGraph graph;
    std::string kind = args.kind;
    int ngrid = 0;
    if (kind.rfind("ngrid:", 0) == 0) {
        ngrid = std::stoi(kind.substr(6));
        kind = "ngrid";
    }
    if (kind == "penrose" || kind == "grid" || kind == "ngrid") {
        const int n = kind == "penrose" ? 5 : (kind == "grid" ? 2 : ngrid);
        std::vector<double> offsets;
        if (!args.offsets.empty()) {
            offsets = parse_offsets(args.offsets);
        } else if (kind == "penrose") {
            offsets = penrose_offsets();
        } else if (kind == "grid") {
            offsets = {0.5, 0.5};
        } else {
            offsets = default_offsets(n);
        }
        TilingPatch patch = generate_patch(build_basis(n, args.phi, offsets), args.radius);
        patch.provenance.kind = kind;
        graph = build_adjacency(std::move(patch));
    } else if (kind == "band") {
        graph = build_adjacency(make_band_tiling(args.radius));
    } else if (kind == "fortress-grid") {
        graph = generate_fortress_grid(args.half_size);
    } else if (kind == "grid-hole") {
        graph = grid_with_hole(args.half_size);
    } else {
        throw error(errc::invalid_input, "unknown kind " + args.kind);
    }
    if (!args.out.empty()) save_json_file(args.out, graph_to_json(graph));
    if (!args.svg.empty()) write_text(args.svg, render_svg(graph, RenderStyle{}));
    std::cout << "tiles: " << graph.size() << "\n";
    return 0;
}

struct RunArgs {
    std::string patch;
    std::string rule = "m2";
    std::string measure = "bernoulli:0.1";
    std::uint64_t seed = 1;
    std::string boundary = "open";
    std::string record;
    std::string svg_initial;
    std::string svg_final;
    std::string frames;
};

int cmd_run(const RunArgs& args) {
    const auto graph = std::make_shared<const AdjacencyGraph>(load_graph_file(args.patch));
    const RuleSpec rule = rule_from_string(args.rule);
    const MeasureSpec measure = measure_from_string(args.measure);
    const BoundaryPolicy boundary =
        args.boundary == "infected" ? BoundaryPolicy::infected : BoundaryPolicy::open;

    const RngStream stream{args.seed, 0};
    const Configuration initial = sample(measure, *graph, stream, boundary);

    if (!args.svg_initial.empty()) {
        RenderStyle style;
        style.fill = RenderStyle::Fill::by_state;
        write_text(args.svg_initial, render_svg(*graph, style, &initial));
    }
    if (!args.frames.empty()) {
        std::filesystem::create_directories(args.frames);
        RenderStyle style;
        style.fill = RenderStyle::Fill::by_state;
        Configuration frame = initial;
        for (int round = 0;; ++round) {
            char name[32];
            std::snprintf(name, sizeof(name), "/round_%04d.svg", round);
            write_text(args.frames + name, render_svg(*graph, style, &frame));
            Configuration next = step(frame, rule);
            if (next.state == frame.state) break;
            frame = std::move(next);
        }
    }
    const FixpointResult fixed = fixpoint(initial, rule);
    if (!args.svg_final.empty()) {
        RenderStyle style;
        style.fill = RenderStyle::Fill::by_state;
        write_text(args.svg_final, render_svg(*graph, style, &fixed.config));
    }

    const int zeros = graph->size() - fixed.config.ones();
    json record;
    record["tiles"] = graph->size();
    record["rule"] = args.rule;
    record["measure"] = args.measure;
    record["seed"] = args.seed;
    record["boundary"] = args.boundary;
    record["initial_ones"] = initial.ones();
    record["rounds"] = fixed.rounds;
    record["final_ones"] = fixed.config.ones();
    record["final_fraction"] =
        graph->size() ? static_cast<double>(fixed.config.ones()) / graph->size() : 0.0;
    record["surviving_zeros"] = zeros;
    record["initial_state"] = encode_state(initial);
    record["final_state"] = encode_state(fixed.config);
    if (!args.record.empty()) save_json_file(args.record, record);

    std::cout << "rounds: " << fixed.rounds << "\nfinal fraction: "
              << format_double(record["final_fraction"].get<double>())
              << "\nsurviving zeros: " << zeros << "\n";
    return 0;
}

struct McArgs {
    std::string experiment;
    std::string csv;
    std::string summary;
    int threads = 0;
};

int cmd_mc(const McArgs& args) {
    const json doc = load_json_file(args.experiment);
    const std::string base = std::filesystem::path(args.experiment).parent_path().string();
    ParsedExperiment parsed = experiment_from_json(doc, base);
    const int threads = args.threads > 0 ? args.threads : default_threads();

    std::vector<TrialStats> trials;
    const Estimate estimate = monte_carlo(parsed.experiment, threads, &trials);

    if (!args.csv.empty()) write_text(args.csv, trials_to_csv(trials));
    json summary = estimate_to_json(estimate);
    summary["seed"] = parsed.experiment.master_seed;
    summary["trials"] = parsed.experiment.trials;
    summary["experiment"] = parsed.raw;
    if (!args.summary.empty()) save_json_file(args.summary, summary);
    std::cout << "estimate: " << format_double(estimate.point) << " [" << format_double(estimate.lo)
              << ", " << format_double(estimate.hi) << "]\n";
    return 0;
}

struct SweepArgs {
    std::string experiment;
    std::string ps;
    bool uncoupled = false;
    std::string csv;
    std::string summary;
    int threads = 0;
};

int cmd_sweep(const SweepArgs& args) {
    const json doc = load_json_file(args.experiment);
    const std::string base = std::filesystem::path(args.experiment).parent_path().string();
    ParsedExperiment parsed = experiment_from_json(doc, base);
    const int threads = args.threads > 0 ? args.threads : default_threads();

    std::vector<double> ps;
    if (!args.ps.empty()) {
        std::istringstream in(args.ps);
        std::string tok;
        while (std::getline(in, tok, ',')) ps.push_back(std::stod(tok));
    } else if (doc.contains("ps")) {
        ps = doc.at("ps").get<std::vector<double>>();
    } else {
        for (int i = 0; i <= 20; ++i) ps.push_back(i / 20.0);
    }
    const bool coupled = !args.uncoupled;
    bool nested = false;
    const auto estimates = sweep(parsed.experiment, ps, coupled, threads, &nested);

    if (!args.csv.empty()) write_text(args.csv, sweep_to_csv(ps, estimates));
    json rows = json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        json row = estimate_to_json(estimates[i]);
        row["p"] = ps[i];
        rows.push_back(row);
    }
    json summary{{"coupled", coupled},
                 {"nested_monotone", nested},
                 {"seed", parsed.experiment.master_seed},
                 {"points", rows}};
    if (!args.summary.empty()) save_json_file(args.summary, summary);
    std::cout << "sweep points: " << ps.size() << (coupled ? " (coupled" : " (uncoupled")
              << (coupled && nested ? ", monotone)" : ")") << "\n";
    return 0;
}

struct VerifyArgs {
    std::string patch;
    std::string suite = "all";
    int kmax = 6;
    int samples = 40;
    int seeds = 20;
    double p = 0.05;
    int gon_tiles = 4;
    int gon_nmax = 10;
    std::uint64_t seed = 1;
    std::string report;
};

int cmd_verify(const VerifyArgs& args) {
    const AdjacencyGraph graph = load_graph_file(args.patch);
    VerifyOptions options;
    options.suite = args.suite;
    options.kmax = args.kmax;
    options.samples = args.samples;
    options.seeds = args.seeds;
    options.p = args.p;
    options.gon_tiles = args.gon_tiles;
    options.gon_nmax = args.gon_nmax;
    options.seed = args.seed;
    const VerifyReport report = run_verify(graph, options);
    for (const VerifyEntry& e : report.entries) {
        std::cout << (e.status == "fail" ? "[FAIL] " : e.status == "pass" ? "[ ok ] " : "[skip] ")
                  << e.check << ": " << e.detail << "\n";
    }
    if (!args.report.empty()) save_json_file(args.report, report.to_json());
    return report.ok() ? 0 : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rhombus tilings, bootstrap percolation and structural checks"};
    app.require_subcommand(1);

    TileArgs tile_args;
    CLI::App* tile = app.add_subcommand("tile", "generate a tiling patch or grid graph");
    tile->add_option("--kind", tile_args.kind,
                     "penrose | grid | ngrid:N | band | fortress-grid | grid-hole");
    tile->add_option("--radius", tile_args.radius, "window radius for multigrid kinds");
    tile->add_option("--half-size", tile_args.half_size, "window half-size for grid kinds");
    tile->add_option("--phi", tile_args.phi, "global rotation");
    tile->add_option("--offsets", tile_args.offsets, "comma-separated grid offsets");
    tile->add_option("--out", tile_args.out, "patch JSON output");
    tile->add_option("--svg", tile_args.svg, "SVG output");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "sample one configuration and run to the fixpoint");
    run->add_option("--patch", run_args.patch, "patch JSON")->required();
    run->add_option("--rule", run_args.rule, "m2 | m3 | directed:band-f3 | directed:0+,1-,...");
    run->add_option("--measure", run_args.measure, "bernoulli:p | nmax:q");
    run->add_option("--seed", run_args.seed, "master seed");
    run->add_option("--boundary", run_args.boundary, "open | infected");
    run->add_option("--record", run_args.record, "trial record JSON");
    run->add_option("--svg-initial", run_args.svg_initial, "initial state SVG");
    run->add_option("--svg-final", run_args.svg_final, "final state SVG");
    run->add_option("--frames", run_args.frames, "directory for per-round SVGs");

    McArgs mc_args;
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo invasion estimate");
    mc->add_option("--experiment", mc_args.experiment, "experiment JSON")->required();
    mc->add_option("--csv", mc_args.csv, "per-trial CSV output");
    mc->add_option("--summary", mc_args.summary, "summary JSON output");
    mc->add_option("--threads", mc_args.threads, "worker threads (default QUASIPERC_THREADS)");

    SweepArgs sweep_args;
    CLI::App* sw = app.add_subcommand("sweep", "invasion estimates across p");
    sw->add_option("--experiment", sweep_args.experiment, "experiment JSON")->required();
    sw->add_option("--ps", sweep_args.ps, "comma-separated p values (ascending)");
    sw->add_flag("--uncoupled", sweep_args.uncoupled, "independent samples per p");
    sw->add_option("--csv", sweep_args.csv, "per-p CSV output");
    sw->add_option("--summary", sweep_args.summary, "summary JSON output");
    sw->add_option("--threads", sweep_args.threads, "worker threads");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "structural checks");
    verify->add_option("--patch", verify_args.patch, "patch JSON")->required();
    verify->add_option("--suite", verify_args.suite, "geometry | stability | counting | all");
    verify->add_option("--kmax", verify_args.kmax, "fortress search size cap");
    verify->add_option("--samples", verify_args.samples, "subcritical fixpoint samples");
    verify->add_option("--seeds", verify_args.seeds, "fortress search seeds");
    verify->add_option("--p", verify_args.p, "subcritical density");
    verify->add_option("--gon-tiles", verify_args.gon_tiles, "gon probe tiles");
    verify->add_option("--gon-nmax", verify_args.gon_nmax, "gon length cap");
    verify->add_option("--seed", verify_args.seed, "sampling seed");
    verify->add_option("--report", verify_args.report, "JSON report output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (tile->parsed()) return cmd_tile(tile_args);
        if (run->parsed()) return cmd_run(run_args);
        if (mc->parsed()) return cmd_mc(mc_args);
        if (sw->parsed()) return cmd_sweep(sweep_args);
        if (verify->parsed()) return cmd_verify(verify_args);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
