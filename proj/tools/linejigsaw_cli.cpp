#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linejigsaw.h"

using nlohmann::json;

namespace {

int exit_code_for(lj_status status) {
    switch (status) {
        case LJ_OK:
            return 0;
        case LJ_ERR_INVALID_ARGUMENT:
            return 1;
        case LJ_ERR_IO:
        case LJ_ERR_PARSE:
            return 2;
        default:
            return 3;
    }
}

int report_failure(lj_status status) {
    std::cerr << "error: " << lj_last_error() << '\n';
    return exit_code_for(status);
}

void write_manifest(const std::string& out_path, const std::string& explicit_path,
                    bool disabled, const json& manifest) {
    if (disabled) return;
    const std::string path = explicit_path.empty() ? out_path + ".manifest.json" : explicit_path;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "warning: cannot write manifest " << path << '\n';
        return;
    }
    out << manifest.dump(2) << '\n';
}

/// Flags shared by generate and ingest: how to cut a line set into pieces.
struct CutFlags {
    std::string cut = "square";
    int rows = 3;
    int cols = 3;
    std::string pattern = "brick";
    int rotations = 1;
    bool keep_order = false;
    std::uint64_t seed = 0;
};

void add_cut_flags(CLI::App* cmd, CutFlags& flags) {
    cmd->add_option("--cut", flags.cut, "Cut scheme")
        ->check(CLI::IsMember({"square", "polygonal", "irregular"}))
        ->capture_default_str();
    cmd->add_option("--rows", flags.rows, "Grid rows")->capture_default_str();
    cmd->add_option("--cols", flags.cols, "Grid columns")->capture_default_str();
    cmd->add_option("--pattern", flags.pattern, "Polygonal tiling (brick, tromino, rects)")
        ->capture_default_str();
    cmd->add_option("--rotations", flags.rotations, "Admissible piece orientations")
        ->check(CLI::IsMember({1, 4}))
        ->capture_default_str();
    cmd->add_flag("--keep-order", flags.keep_order,
                  "Skip scrambling; pieces stay in ground-truth order");
}

int cut_and_write(lj_lineset* lines, const CutFlags& flags, const std::string& out_path) {
    lj_cut_params params;
    lj_cut_params_init(&params);
    params.scheme = flags.cut.c_str();
    params.rows = flags.rows;
    params.cols = flags.cols;
    params.pattern = flags.pattern.c_str();
    params.rotations = flags.rotations;
    params.scramble = flags.keep_order ? 0 : 1;
    params.cut_seed = flags.seed + 1;
    params.scramble_seed = flags.seed + 2;

    lj_puzzle* puzzle = nullptr;
    if (lj_status s = lj_cut(lines, &params, &puzzle)) return report_failure(s);
    std::unique_ptr<lj_puzzle, void (*)(lj_puzzle*)> guard(puzzle, lj_puzzle_free);
    if (lj_status s = lj_puzzle_write(puzzle, out_path.c_str())) return report_failure(s);
    std::cout << "wrote " << out_path << ": " << lj_puzzle_piece_count(puzzle) << " "
              << flags.cut << " pieces, " << lj_puzzle_rotations(puzzle) << " orientation(s)\n";
    return 0;
}

json cut_config_json(const CutFlags& flags) {
    return {{"cut", flags.cut},         {"rows", flags.rows},
            {"cols", flags.cols},       {"pattern", flags.pattern},
            {"rotations", flags.rotations}, {"scramble", !flags.keep_order},
            {"seed", flags.seed}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jigsaw puzzles over line drawings: generation, solving, scoring"};
    app.set_config("--config", "", "Configuration file with per-command sections")
        ->envname("LINEJIGSAW_CONFIG");
    app.require_subcommand(1);
    app.fallthrough();

    std::string manifest_path;
    bool no_manifest = false;
    app.add_option("--manifest", manifest_path, "Run manifest path (default <out>.manifest.json)");
    app.add_flag("--no-manifest", no_manifest, "Skip writing the run manifest");

    int exit_code = 0;

    // generate: random annotated lines, then cut
    auto* generate = app.add_subcommand("generate", "Draw random lines and cut them into a puzzle");
    struct {
        double width = 1000.0;
        double height = 1000.0;
        int lines = 50;
        int categories = 1;
        CutFlags cut;
        std::string out;
    } gen;
    generate->add_option("--width", gen.width, "Canvas width")->capture_default_str();
    generate->add_option("--height", gen.height, "Canvas height")->capture_default_str();
    generate->add_option("--lines", gen.lines, "Number of line segments")->capture_default_str();
    generate->add_option("--categories", gen.categories, "Number of line categories")
        ->capture_default_str();
    add_cut_flags(generate, gen.cut);
    generate->add_option("--seed", gen.cut.seed, "Random seed")->capture_default_str();
    generate->add_option("--out", gen.out, "Output puzzle path")->required();
    generate->callback([&] {
        lj_lineset* lines = nullptr;
        if (lj_status s = lj_generate_lines(gen.width, gen.height, gen.lines, gen.categories,
                                            gen.cut.seed, &lines)) {
            exit_code = report_failure(s);
            return;
        }
        std::unique_ptr<lj_lineset, void (*)(lj_lineset*)> guard(lines, lj_lineset_free);
        exit_code = cut_and_write(lines, gen.cut, gen.out);
        if (exit_code == 0) {
            json manifest = {{"command", "generate"},
                             {"config", cut_config_json(gen.cut)},
                             {"outputs", {{"puzzle", gen.out}}}};
            manifest["config"]["width"] = gen.width;
            manifest["config"]["height"] = gen.height;
            manifest["config"]["lines"] = gen.lines;
            manifest["config"]["categories"] = gen.categories;
            write_manifest(gen.out, manifest_path, no_manifest, manifest);
        }
    });

    // ingest: externally drawn polylines, then cut
    auto* ingest = app.add_subcommand("ingest", "Cut a polyline file into a puzzle");
    struct {
        std::string in;
        double width = 0.0;
        double height = 0.0;
        CutFlags cut;
        std::string out;
    } ing;
    ingest->add_option("--in", ing.in, "Polyline file: '<category> x1 y1 x2 y2 ...' per line")
        ->required();
    ingest->add_option("--width", ing.width, "Canvas width (0 = fit the data)")
        ->capture_default_str();
    ingest->add_option("--height", ing.height, "Canvas height (0 = fit the data)")
        ->capture_default_str();
    add_cut_flags(ingest, ing.cut);
    ingest->add_option("--seed", ing.cut.seed, "Random seed")->capture_default_str();
    ingest->add_option("--out", ing.out, "Output puzzle path")->required();
    ingest->callback([&] {
        lj_lineset* lines = nullptr;
        if (lj_status s = lj_ingest_polylines(ing.in.c_str(), ing.width, ing.height, &lines)) {
            exit_code = report_failure(s);
            return;
        }
        std::unique_ptr<lj_lineset, void (*)(lj_lineset*)> guard(lines, lj_lineset_free);
        exit_code = cut_and_write(lines, ing.cut, ing.out);
        if (exit_code == 0) {
            json manifest = {{"command", "ingest"},
                             {"config", cut_config_json(ing.cut)},
                             {"inputs", {{"polylines", ing.in}}},
                             {"outputs", {{"puzzle", ing.out}}}};
            manifest["config"]["width"] = ing.width;
            manifest["config"]["height"] = ing.height;
            write_manifest(ing.out, manifest_path, no_manifest, manifest);
        }
    });

    // solve: reconstruct a puzzle
    auto* solve = app.add_subcommand("solve", "Reconstruct a puzzle from its descriptor");
    struct {
        std::string in;
        std::string out;
        std::string trace;
        std::string payoffs;
        std::string anchor = "auto";
        std::string rotations = "auto";
        int max_iters = 5000;
        double eps = 1e-6;
        double nash_eps = 1e-4;
        double shift = 0.0;
        double noise = 0.4;
        int restarts = 1;
        std::uint64_t seed = 0;
        int threads = 0;
        double angle_eps_deg = -1.0;
        double cost_max = -1.0;
        double penalty_k = -1.0;
        double tau = -1.0;
        double band = -1.0;
    } sol;
    solve->add_option("--in", sol.in, "Puzzle descriptor")->required();
    solve->add_option("--out", sol.out, "Output placement path")->required();
    solve->add_option("--trace", sol.trace, "Write the iteration trace here");
    solve->add_option("--payoffs", sol.payoffs, "Dump the payoff table here");
    solve->add_option("--anchor", sol.anchor, "Anchored piece id, or 'auto'")
        ->capture_default_str();
    solve->add_option("--rotations", sol.rotations, "Orientations to search: 1, 4 or 'auto'")
        ->check(CLI::IsMember({"auto", "1", "4"}))
        ->capture_default_str();
    solve->add_option("--max-iters", sol.max_iters, "Iteration budget")->capture_default_str();
    solve->add_option("--eps", sol.eps, "Fixed-point threshold on profile change")
        ->capture_default_str();
    solve->add_option("--nash-eps", sol.nash_eps, "Equilibrium residual threshold")
        ->capture_default_str();
    solve->add_option("--shift", sol.shift, "Payoff shift (0 = auto)")->capture_default_str();
    solve->add_option("--noise", sol.noise, "Relative noise of the interior start")
        ->capture_default_str();
    solve->add_option("--restarts", sol.restarts, "Independent restarts; best residual wins")
        ->capture_default_str();
    solve->add_option("--seed", sol.seed, "Random seed")->capture_default_str();
    solve->add_option("--threads", sol.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    solve->add_option("--angle-eps-deg", sol.angle_eps_deg,
                      "Line matching angle tolerance in degrees (negative = default)");
    solve->add_option("--cost-max", sol.cost_max, "Mismatch cost (negative = default)");
    solve->add_option("--penalty-k", sol.penalty_k, "Unmatched-line penalty (negative = default)");
    solve->add_option("--tau", sol.tau, "Compatibility saturation (negative = calibrate)");
    solve->add_option("--band", sol.band, "Coherence band width (negative = default)");
    solve->callback([&] {
        lj_puzzle* puzzle = nullptr;
        if (lj_status s = lj_puzzle_read(sol.in.c_str(), 0, &puzzle)) {
            exit_code = report_failure(s);
            return;
        }
        std::unique_ptr<lj_puzzle, void (*)(lj_puzzle*)> guard(puzzle, lj_puzzle_free);

        lj_solve_params params;
        lj_solve_params_init(&params);
        if (sol.anchor != "auto") {
            try {
                size_t used = 0;
                params.anchor_piece = std::stoi(sol.anchor, &used);
                if (used != sol.anchor.size()) throw std::invalid_argument(sol.anchor);
            } catch (const std::exception&) {
                std::cerr << "error: --anchor takes a piece id or 'auto'\n";
                exit_code = 1;
                return;
            }
        }
        if (sol.rotations != "auto") params.rotations = std::stoi(sol.rotations);
        params.restarts = sol.restarts;
        params.max_iterations = sol.max_iters;
        params.convergence_epsilon = sol.eps;
        params.nash_epsilon = sol.nash_eps;
        params.payoff_shift = sol.shift;
        params.init_noise = sol.noise;
        params.seed = sol.seed;
        params.thread_count = sol.threads;
        params.record_trajectory = 1;
        params.epsilon_angle_deg = sol.angle_eps_deg;
        params.cost_max = sol.cost_max;
        params.penalty_k = sol.penalty_k;
        params.tau = sol.tau;
        params.coherence_band = sol.band;

        lj_solution* solution = nullptr;
        if (lj_status s = lj_solve(puzzle, &params, &solution)) {
            exit_code = report_failure(s);
            return;
        }
        std::unique_ptr<lj_solution, void (*)(lj_solution*)> sguard(solution, lj_solution_free);

        if (lj_status s = lj_solution_write_placement(solution, sol.out.c_str())) {
            exit_code = report_failure(s);
            return;
        }
        if (!sol.trace.empty()) {
            if (lj_status s = lj_solution_write_trace(solution, sol.trace.c_str())) {
                exit_code = report_failure(s);
                return;
            }
        }
        if (!sol.payoffs.empty()) {
            if (lj_status s = lj_solution_write_payoffs(solution, sol.payoffs.c_str())) {
                exit_code = report_failure(s);
                return;
            }
        }

        std::cout << "placed " << lj_solution_placed_count(solution) << "/"
                  << lj_puzzle_piece_count(puzzle) << " pieces in "
                  << lj_solution_iterations(solution) << " iterations, residual "
                  << lj_solution_residual(solution)
                  << (lj_solution_converged(solution) ? " (converged)" : " (not converged)")
                  << '\n';

        json manifest = {{"command", "solve"},
                         {"config", json::parse(lj_solution_config_json(solution))},
                         {"inputs", {{"puzzle", sol.in}}},
                         {"outputs", {{"placement", sol.out}}}};
        if (!sol.trace.empty()) manifest["outputs"]["trace"] = sol.trace;
        if (!sol.payoffs.empty()) manifest["outputs"]["payoffs"] = sol.payoffs;
        manifest["result"] = {{"iterations", lj_solution_iterations(solution)},
                              {"converged", lj_solution_converged(solution) != 0},
                              {"residual", lj_solution_residual(solution)},
                              {"placed", lj_solution_placed_count(solution)},
                              {"conflicts", lj_solution_conflicts(solution)}};
        manifest["timings"] = {{"payoff_build_s", lj_solution_phase_seconds(solution, 0)},
                               {"solve_s", lj_solution_phase_seconds(solution, 1)},
                               {"decode_s", lj_solution_phase_seconds(solution, 2)}};
        write_manifest(sol.out, manifest_path, no_manifest, manifest);
    });

    // evaluate: score placements against ground truth
    auto* evaluate = app.add_subcommand("evaluate", "Score placements against ground truth");
    struct {
        std::vector<std::string> truths;
        std::vector<std::string> placements;
        std::vector<std::string> ids;
        std::string out;
    } ev;
    evaluate->add_option("--truth", ev.truths, "Puzzle descriptor with ground truth")
        ->required();
    evaluate->add_option("--placement", ev.placements, "Placement file (one per --truth)")
        ->required();
    evaluate->add_option("--id", ev.ids, "Record labels (default: placement paths)");
    evaluate->add_option("--out", ev.out, "Metrics file path");
    evaluate->callback([&] {
        if (ev.truths.size() != ev.placements.size()) {
            std::cerr << "error: --truth and --placement counts differ\n";
            exit_code = 1;
            return;
        }
        if (!ev.ids.empty() && ev.ids.size() != ev.placements.size()) {
            std::cerr << "error: --id count must match --placement\n";
            exit_code = 1;
            return;
        }
        struct Row {
            std::string id;
            int n;
            double direct;
            int has_neighbors;
            double neighbors;
            double tol;
            int rot_tol;
        };
        std::vector<Row> rows;
        for (size_t k = 0; k < ev.truths.size(); ++k) {
            lj_puzzle* puzzle = nullptr;
            if (lj_status s = lj_puzzle_read(ev.truths[k].c_str(), 1, &puzzle)) {
                exit_code = report_failure(s);
                return;
            }
            std::unique_ptr<lj_puzzle, void (*)(lj_puzzle*)> guard(puzzle, lj_puzzle_free);
            lj_report* report = nullptr;
            if (lj_status s = lj_evaluate(puzzle, ev.placements[k].c_str(), &report)) {
                exit_code = report_failure(s);
                return;
            }
            std::unique_ptr<lj_report, void (*)(lj_report*)> rguard(report, lj_report_free);
            Row row;
            row.id = ev.ids.empty() ? ev.placements[k] : ev.ids[k];
            row.n = lj_puzzle_piece_count(puzzle);
            row.direct = lj_report_direct(report);
            row.has_neighbors = lj_report_has_neighbors(report);
            row.neighbors = row.has_neighbors ? lj_report_neighbors(report) : 0.0;
            row.tol = lj_report_translation_tolerance(report);
            row.rot_tol = lj_report_rotation_tolerance(report);
            rows.push_back(row);
            std::cout << row.id << ": D=" << row.direct;
            if (row.has_neighbors) std::cout << " N=" << row.neighbors;
            std::cout << '\n';
        }
        if (!ev.out.empty()) {
            std::vector<lj_metric_row> crows;
            for (const Row& row : rows) {
                crows.push_back({row.id.c_str(), row.n, row.direct, row.has_neighbors,
                                 row.neighbors, row.tol, row.rot_tol});
            }
            if (lj_status s = lj_metrics_write(ev.out.c_str(), crows.data(),
                                               static_cast<int>(crows.size()))) {
                exit_code = report_failure(s);
                return;
            }
            json manifest = {{"command", "evaluate"},
                             {"inputs",
                              {{"truths", ev.truths}, {"placements", ev.placements}}},
                             {"outputs", {{"metrics", ev.out}}}};
            write_manifest(ev.out, manifest_path, no_manifest, manifest);
        }
    });

    // render: SVG drawings
    auto* render = app.add_subcommand("render", "Draw a puzzle or reconstruction as SVG");
    struct {
        std::string in;
        std::string placement;
        std::string mode = "pieces";
        std::string out;
    } ren;
    render->add_option("--in", ren.in, "Puzzle descriptor")->required();
    render->add_option("--placement", ren.placement, "Placement file (assembled and compare)");
    render->add_option("--mode", ren.mode, "pieces, assembled or compare")
        ->check(CLI::IsMember({"pieces", "assembled", "compare"}))
        ->capture_default_str();
    render->add_option("--out", ren.out, "Output SVG path")->required();
    render->callback([&] {
        lj_puzzle* puzzle = nullptr;
        if (lj_status s = lj_puzzle_read(ren.in.c_str(), 1, &puzzle)) {
            exit_code = report_failure(s);
            return;
        }
        std::unique_ptr<lj_puzzle, void (*)(lj_puzzle*)> guard(puzzle, lj_puzzle_free);
        if (lj_status s = lj_render(puzzle, ren.placement.empty() ? nullptr : ren.placement.c_str(),
                                    ren.mode.c_str(), ren.out.c_str())) {
            exit_code = report_failure(s);
            return;
        }
        std::cout << "wrote " << ren.out << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return exit_code;
}
