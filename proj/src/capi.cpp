#include "linejigsaw.h"

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linejigsaw/evaluation.hpp"
#include "linejigsaw/generate.hpp"
#include "linejigsaw/io.hpp"
#include "linejigsaw/pipeline.hpp"
#include "linejigsaw/render.hpp"

namespace lj = linejigsaw;

struct lj_lineset {
    lj::LineSet value;
};

struct lj_puzzle {
    lj::Puzzle value;
};

struct lj_solution {
    lj::SolveOutcome outcome;
    int rotation_count = 1;
    double grid_step = 1.0;
    std::string config_json;
};

struct lj_report {
    lj::MetricReport value;
};

namespace {

thread_local std::string g_last_error;

lj_status set_error(lj_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

/// Runs fn, translating exceptions to status codes. Plain runtime errors map
/// to `on_runtime` so file operations report LJ_ERR_IO and solves report
/// LJ_ERR_SOLVER.
template <typename Fn>
lj_status guarded(lj_status on_runtime, Fn&& fn) noexcept {
    try {
        return fn();
    } catch (const lj::ParseError& e) {
        return set_error(LJ_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(LJ_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return set_error(on_runtime, e.what());
    } catch (const std::exception& e) {
        return set_error(LJ_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(LJ_ERR_INTERNAL, "unknown error");
    }
}

lj_status require(bool ok, const char* message) {
    return ok ? LJ_OK : set_error(LJ_ERR_INVALID_ARGUMENT, message);
}

std::string build_config_json(const lj::Puzzle& puzzle, const lj::SolveOptions& options,
                              const lj::SolveOutcome& outcome) {
    nlohmann::json j;
    j["anchor_piece"] = outcome.anchor_piece;
    j["anchor_strategy"] = outcome.anchor_strategy;
    j["restarts"] = options.restarts;
    j["seed"] = options.solver.seed;
    j["max_iterations"] = options.solver.max_iterations;
    j["convergence_epsilon"] = options.solver.convergence_epsilon;
    j["nash_epsilon"] = options.solver.nash_epsilon;
    j["payoff_shift"] = options.solver.payoff_shift > 0
                            ? options.solver.payoff_shift
                            : static_cast<double>(puzzle.piece_count());
    j["init_noise"] = options.solver.init_noise;
    j["thread_count"] = options.thread_count;
    j["rotations"] = puzzle.rotation_count;
    j["grid_step"] = puzzle.grid_step;
    j["match"] = {
        {"epsilon_angle", outcome.match_config.epsilon_angle},
        {"cost_max", outcome.match_config.cost_max},
        {"penalty_k", outcome.match_config.penalty_k},
        {"coherence_band", outcome.match_config.coherence_band},
        {"tau", outcome.table.tau()},
    };
    return j.dump();
}

}  // namespace

extern "C" {

const char* lj_last_error(void) { return g_last_error.c_str(); }

lj_status lj_generate_lines(double width, double height, int line_count, int category_count,
                            uint64_t seed, lj_lineset** out) {
    if (lj_status s = require(out != nullptr, "null output pointer")) return s;
    return guarded(LJ_ERR_INTERNAL, [&] {
        auto ls = std::make_unique<lj_lineset>();
        ls->value = lj::generate_lines(width, height, line_count, category_count, seed);
        *out = ls.release();
        return LJ_OK;
    });
}

lj_status lj_ingest_polylines(const char* path, double canvas_width, double canvas_height,
                              lj_lineset** out) {
    if (lj_status s = require(out && path, "null argument")) return s;
    return guarded(LJ_ERR_IO, [&] {
        auto ls = std::make_unique<lj_lineset>();
        ls->value = lj::read_polylines_file(path, canvas_width, canvas_height);
        *out = ls.release();
        return LJ_OK;
    });
}

void lj_lineset_free(lj_lineset* ls) { delete ls; }

int lj_lineset_count(const lj_lineset* ls) {
    return ls ? static_cast<int>(ls->value.lines.size()) : 0;
}

void lj_cut_params_init(lj_cut_params* params) {
    if (!params) return;
    *params = lj_cut_params{};
    params->scheme = "square";
    params->rows = 3;
    params->cols = 3;
    params->pattern = nullptr;
    params->rotations = 1;
    params->scramble = 1;
    params->scramble_seed = 0;
    params->cut_seed = 0;
}

lj_status lj_cut(const lj_lineset* ls, const lj_cut_params* params, lj_puzzle** out) {
    if (lj_status s = require(ls && params && out && params->scheme, "null argument")) return s;
    return guarded(LJ_ERR_INTERNAL, [&] {
        const auto scheme = lj::cut_scheme_from_name(params->scheme);
        if (!scheme) throw std::invalid_argument("unknown cut scheme");
        if (params->rotations != 1 && params->rotations != 2 && params->rotations != 4) {
            throw std::invalid_argument("rotations must be 1, 2 or 4");
        }
        auto p = std::make_unique<lj_puzzle>();
        switch (*scheme) {
            case lj::CutScheme::Square:
                p->value = lj::cut_square(ls->value, params->rows, params->cols);
                break;
            case lj::CutScheme::Polygonal: {
                lj::PolygonalPattern pattern;
                if (params->pattern) pattern.name = params->pattern;
                pattern.rows = params->rows;
                pattern.cols = params->cols;
                p->value = lj::cut_polygonal(ls->value, pattern);
                break;
            }
            case lj::CutScheme::Irregular:
                p->value = lj::cut_irregular(ls->value, params->cut_seed, params->rows,
                                             params->cols);
                break;
        }
        p->value.rotation_count = params->rotations;
        if (params->scramble) p->value = lj::scramble(p->value, params->scramble_seed);
        *out = p.release();
        return LJ_OK;
    });
}

lj_status lj_puzzle_read(const char* path, int include_ground_truth, lj_puzzle** out) {
    if (lj_status s = require(path && out, "null argument")) return s;
    return guarded(LJ_ERR_IO, [&] {
        auto p = std::make_unique<lj_puzzle>();
        p->value = lj::read_descriptor_file(path, include_ground_truth != 0);
        *out = p.release();
        return LJ_OK;
    });
}

lj_status lj_puzzle_write(const lj_puzzle* p, const char* path) {
    if (lj_status s = require(p && path, "null argument")) return s;
    return guarded(LJ_ERR_IO, [&] {
        lj::write_descriptor_file(p->value, path);
        return LJ_OK;
    });
}

void lj_puzzle_free(lj_puzzle* p) { delete p; }

int lj_puzzle_piece_count(const lj_puzzle* p) { return p ? p->value.piece_count() : 0; }
int lj_puzzle_rows(const lj_puzzle* p) { return p ? p->value.rows() : 0; }
int lj_puzzle_cols(const lj_puzzle* p) { return p ? p->value.cols() : 0; }
int lj_puzzle_rotations(const lj_puzzle* p) { return p ? p->value.rotation_count : 0; }
int lj_puzzle_categories(const lj_puzzle* p) { return p ? p->value.category_count : 0; }
int lj_puzzle_has_ground_truth(const lj_puzzle* p) {
    return p && p->value.ground_truth ? 1 : 0;
}
double lj_puzzle_canvas_width(const lj_puzzle* p) { return p ? p->value.canvas_width : 0.0; }
double lj_puzzle_canvas_height(const lj_puzzle* p) { return p ? p->value.canvas_height : 0.0; }
double lj_puzzle_grid_step(const lj_puzzle* p) { return p ? p->value.grid_step : 0.0; }
const char* lj_puzzle_scheme(const lj_puzzle* p) {
    if (!p) return "";
    thread_local std::string name;
    name = lj::cut_scheme_name(p->value.scheme);
    return name.c_str();
}

void lj_solve_params_init(lj_solve_params* params) {
    if (!params) return;
    const lj::SolverConfig defaults;
    *params = lj_solve_params{};
    params->anchor_piece = -1;
    params->rotations = 0;
    params->restarts = 1;
    params->max_iterations = defaults.max_iterations;
    params->convergence_epsilon = defaults.convergence_epsilon;
    params->nash_epsilon = defaults.nash_epsilon;
    params->payoff_shift = 0.0;
    params->init_noise = defaults.init_noise;
    params->seed = 0;
    params->thread_count = 0;
    params->record_trajectory = 1;
    params->epsilon_angle_deg = -1.0;
    params->cost_max = -1.0;
    params->penalty_k = -1.0;
    params->tau = -1.0;
    params->coherence_band = -1.0;
}

lj_status lj_solve(const lj_puzzle* p, const lj_solve_params* params, lj_solution** out) {
    if (lj_status s = require(p && params && out, "null argument")) return s;
    return guarded(LJ_ERR_SOLVER, [&] {
        lj::SolveOptions options;
        if (params->anchor_piece >= 0) options.anchor_piece = params->anchor_piece;
        options.restarts = params->restarts;
        options.solver.max_iterations = params->max_iterations;
        options.solver.convergence_epsilon = params->convergence_epsilon;
        options.solver.nash_epsilon = params->nash_epsilon;
        options.solver.payoff_shift = params->payoff_shift;
        options.solver.init_noise = params->init_noise;
        options.solver.seed = params->seed;
        options.solver.thread_count = params->thread_count;
        options.solver.record_trajectory = params->record_trajectory != 0;
        options.thread_count = params->thread_count;
        if (params->epsilon_angle_deg >= 0) {
            options.match.epsilon_angle = params->epsilon_angle_deg * lj::kPi / 180.0;
        }
        if (params->cost_max >= 0) options.match.cost_max = params->cost_max;
        if (params->penalty_k >= 0) options.match.penalty_k = params->penalty_k;
        if (params->tau >= 0) options.match.tau = params->tau;
        if (params->coherence_band >= 0) options.match.coherence_band = params->coherence_band;
        if (params->rotations != 0 && params->rotations != 1 && params->rotations != 2 &&
            params->rotations != 4) {
            throw std::invalid_argument("rotations must be 1, 2 or 4");
        }

        const lj::Puzzle* puzzle = &p->value;
        lj::Puzzle reoriented;
        if (params->rotations > 0 && params->rotations != p->value.rotation_count) {
            reoriented = p->value;
            reoriented.rotation_count = params->rotations;
            puzzle = &reoriented;
        }
        auto s = std::make_unique<lj_solution>();
        s->outcome = lj::solve_puzzle(*puzzle, options);
        s->rotation_count = puzzle->rotation_count;
        s->grid_step = puzzle->grid_step;
        s->config_json = build_config_json(*puzzle, options, s->outcome);
        *out = s.release();
        return LJ_OK;
    });
}

void lj_solution_free(lj_solution* s) { delete s; }

int lj_solution_iterations(const lj_solution* s) { return s ? s->outcome.report.iterations_run : 0; }
int lj_solution_converged(const lj_solution* s) {
    return s && s->outcome.report.converged ? 1 : 0;
}
double lj_solution_residual(const lj_solution* s) {
    return s ? s->outcome.report.nash_residual : NAN;
}
double lj_solution_tau(const lj_solution* s) { return s ? s->outcome.table.tau() : NAN; }
int lj_solution_anchor_piece(const lj_solution* s) { return s ? s->outcome.anchor_piece : -1; }
int lj_solution_placed_count(const lj_solution* s) {
    return s ? s->outcome.placement.placed_count() : 0;
}
int lj_solution_conflicts(const lj_solution* s) {
    return s ? s->outcome.placement.conflicts_resolved : 0;
}
int lj_solution_restart_count(const lj_solution* s) {
    return s ? static_cast<int>(s->outcome.restart_residuals.size()) : 0;
}
double lj_solution_restart_residual(const lj_solution* s, int restart) {
    if (!s || restart < 0 || restart >= lj_solution_restart_count(s)) return NAN;
    return s->outcome.restart_residuals[restart];
}

double lj_solution_phase_seconds(const lj_solution* s, int phase) {
    if (!s) return 0.0;
    switch (phase) {
        case 0: return s->outcome.timings.payoff_build_s;
        case 1: return s->outcome.timings.solve_s;
        case 2: return s->outcome.timings.decode_s;
        default: return 0.0;
    }
}

int lj_solution_piece_placed(const lj_solution* s, int piece) {
    if (!s || piece < 0 || static_cast<size_t>(piece) >= s->outcome.placement.poses.size()) {
        return 0;
    }
    return s->outcome.placement.poses[piece] ? 1 : 0;
}

lj_status lj_solution_piece_pose(const lj_solution* s, int piece, double* x, double* y,
                                 int* rotation) {
    if (lj_status st = require(s && x && y && rotation, "null argument")) return st;
    if (!lj_solution_piece_placed(s, piece)) {
        return set_error(LJ_ERR_INVALID_ARGUMENT, "piece has no pose");
    }
    const lj::Pose& pose = *s->outcome.placement.poses[piece];
    *x = pose.position.x;
    *y = pose.position.y;
    *rotation = pose.rotation_index;
    return LJ_OK;
}

const char* lj_solution_config_json(const lj_solution* s) {
    return s ? s->config_json.c_str() : "";
}

lj_status lj_solution_write_placement(const lj_solution* s, const char* path) {
    if (lj_status st = require(s && path, "null argument")) return st;
    return guarded(LJ_ERR_IO, [&] {
        lj::write_placement_file(s->outcome.placement, s->rotation_count, s->grid_step, path);
        return LJ_OK;
    });
}

lj_status lj_solution_write_trace(const lj_solution* s, const char* path) {
    if (lj_status st = require(s && path, "null argument")) return st;
    return guarded(LJ_ERR_IO, [&] {
        lj::write_trace_file(s->outcome.report, path);
        return LJ_OK;
    });
}

lj_status lj_solution_write_payoffs(const lj_solution* s, const char* path) {
    if (lj_status st = require(s && path, "null argument")) return st;
    return guarded(LJ_ERR_IO, [&] {
        std::string out = "linejigsaw payoffs v1\n";
        out += "tau " + lj::format_real(s->outcome.table.tau()) + '\n';
        const auto records = s->outcome.table.dump();
        out += "entries " + std::to_string(records.size()) + '\n';
        for (const auto& r : records) {
            out += "pay " + std::to_string(r.i) + ' ' + std::to_string(r.j) + ' ' +
                   std::to_string(r.dx) + ' ' + std::to_string(r.dy) + ' ' +
                   std::to_string(r.d_rotation) + ' ' + lj::format_real(r.value) + '\n';
        }
        out += "end\n";
        lj::write_text_file(path, out);
        return LJ_OK;
    });
}

lj_status lj_evaluate(const lj_puzzle* p, const char* placement_path, lj_report** out) {
    if (lj_status st = require(p && placement_path && out, "null argument")) return st;
    return guarded(LJ_ERR_IO, [&] {
        if (!p->value.ground_truth) {
            throw std::invalid_argument("puzzle has no ground truth to evaluate against");
        }
        const lj::PlacementFile pf = lj::read_placement_file(placement_path);
        if (pf.placement.poses.size() != static_cast<size_t>(p->value.piece_count())) {
            throw std::invalid_argument("placement piece count does not match the puzzle");
        }
        auto r = std::make_unique<lj_report>();
        r->value = lj::direct_metric(pf.placement, p->value.ground_truth->poses,
                                     p->value.rotation_count, p->value.grid_step,
                                     lj::default_translation_tolerance(p->value), 0);
        r->value.neighbors =
            lj::neighbors_metric(pf.placement, p->value.ground_truth->poses, p->value);
        *out = r.release();
        return LJ_OK;
    });
}

void lj_report_free(lj_report* r) { delete r; }

double lj_report_direct(const lj_report* r) { return r ? r->value.direct : NAN; }
int lj_report_has_neighbors(const lj_report* r) {
    return r && r->value.neighbors ? 1 : 0;
}
double lj_report_neighbors(const lj_report* r) {
    return r && r->value.neighbors ? *r->value.neighbors : NAN;
}
double lj_report_translation_tolerance(const lj_report* r) {
    return r ? r->value.translation_tolerance : NAN;
}
int lj_report_rotation_tolerance(const lj_report* r) {
    return r ? r->value.rotation_tolerance_steps : 0;
}

lj_status lj_metrics_write(const char* path, const lj_metric_row* rows, int count) {
    if (lj_status st = require(path && (rows || count == 0) && count >= 0, "null argument")) {
        return st;
    }
    return guarded(LJ_ERR_IO, [&] {
        std::vector<lj::MetricRecord> records;
        for (int i = 0; i < count; ++i) {
            lj::MetricRecord rec;
            rec.id = rows[i].id ? rows[i].id : "";
            rec.piece_count = rows[i].piece_count;
            rec.report.direct = rows[i].direct;
            if (rows[i].has_neighbors) rec.report.neighbors = rows[i].neighbors;
            rec.report.translation_tolerance = rows[i].translation_tolerance;
            rec.report.rotation_tolerance_steps = rows[i].rotation_tolerance_steps;
            records.push_back(std::move(rec));
        }
        lj::write_metrics_file(records, path);
        return LJ_OK;
    });
}

lj_status lj_render(const lj_puzzle* p, const char* placement_path, const char* mode,
                    const char* out_path) {
    if (lj_status st = require(p && mode && out_path, "null argument")) return st;
    return guarded(LJ_ERR_IO, [&] {
        lj::RenderMode m;
        const std::string name = mode;
        if (name == "pieces") {
            m = lj::RenderMode::Pieces;
        } else if (name == "assembled") {
            m = lj::RenderMode::Assembled;
        } else if (name == "compare") {
            m = lj::RenderMode::Compare;
        } else {
            throw std::invalid_argument("unknown render mode '" + name + "'");
        }
        std::optional<lj::Placement> placement;
        if (placement_path) {
            lj::PlacementFile pf = lj::read_placement_file(placement_path);
            placement = std::move(pf.placement);
        }
        lj::render_svg_file(p->value, placement ? &*placement : nullptr, m, out_path);
        return LJ_OK;
    });
}

}  // extern "C"
