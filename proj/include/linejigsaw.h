#ifndef LINEJIGSAW_H
#define LINEJIGSAW_H

/* C interface to the line-continuation jigsaw solver. All functions returning
 * lj_status leave their outputs untouched on failure; the failure message is
 * available from lj_last_error() on the same thread. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lj_status {
    LJ_OK = 0,
    LJ_ERR_INVALID_ARGUMENT = 1,
    LJ_ERR_IO = 2,
    LJ_ERR_PARSE = 3,
    LJ_ERR_SOLVER = 4,
    LJ_ERR_INTERNAL = 5
} lj_status;

/* Message for the most recent failure on the calling thread. */
const char* lj_last_error(void);

typedef struct lj_lineset lj_lineset;
typedef struct lj_puzzle lj_puzzle;
typedef struct lj_solution lj_solution;
typedef struct lj_report lj_report;

/* ----- line sets ----- */

lj_status lj_generate_lines(double width, double height, int line_count, int category_count,
                            uint64_t seed, lj_lineset** out);
/* Reads "<category> x1 y1 x2 y2 ..." polyline records. A non-positive canvas
 * dimension grows the canvas to the data's bounding box. */
lj_status lj_ingest_polylines(const char* path, double canvas_width, double canvas_height,
                              lj_lineset** out);
void lj_lineset_free(lj_lineset* ls);
int lj_lineset_count(const lj_lineset* ls);

/* ----- cutting ----- */

typedef struct lj_cut_params {
    const char* scheme;  /* "square", "polygonal" or "irregular" */
    int rows;
    int cols;
    const char* pattern; /* polygonal tiling name; NULL picks "brick" */
    int rotations;       /* 1 or 4 admissible orientations */
    int scramble;        /* nonzero shuffles ids and randomizes orientations */
    uint64_t scramble_seed;
    uint64_t cut_seed;   /* irregular border wiggles */
} lj_cut_params;

void lj_cut_params_init(lj_cut_params* params);
lj_status lj_cut(const lj_lineset* ls, const lj_cut_params* params, lj_puzzle** out);

/* ----- puzzles ----- */

lj_status lj_puzzle_read(const char* path, int include_ground_truth, lj_puzzle** out);
lj_status lj_puzzle_write(const lj_puzzle* p, const char* path);
void lj_puzzle_free(lj_puzzle* p);
int lj_puzzle_piece_count(const lj_puzzle* p);
int lj_puzzle_rows(const lj_puzzle* p);
int lj_puzzle_cols(const lj_puzzle* p);
int lj_puzzle_rotations(const lj_puzzle* p);
int lj_puzzle_categories(const lj_puzzle* p);
int lj_puzzle_has_ground_truth(const lj_puzzle* p);
double lj_puzzle_canvas_width(const lj_puzzle* p);
double lj_puzzle_canvas_height(const lj_puzzle* p);
double lj_puzzle_grid_step(const lj_puzzle* p);
const char* lj_puzzle_scheme(const lj_puzzle* p);

/* ----- solving ----- */

typedef struct lj_solve_params {
    int anchor_piece;           /* -1 selects the piece with most lines */
    int rotations;              /* admissible orientations; 0 keeps the descriptor value */
    int restarts;               /* independent runs with seeds seed, seed+1, ... */
    int max_iterations;
    double convergence_epsilon; /* replicator fixed-point threshold */
    double nash_epsilon;        /* equilibrium residual threshold */
    double payoff_shift;        /* <= 0 selects the minimum safe value */
    double init_noise;
    uint64_t seed;
    int thread_count;           /* 0 = hardware concurrency */
    int record_trajectory;
    /* line matching; negative values keep the puzzle-derived defaults */
    double epsilon_angle_deg;
    double cost_max;
    double penalty_k;
    double tau;
    double coherence_band;
} lj_solve_params;

void lj_solve_params_init(lj_solve_params* params);
lj_status lj_solve(const lj_puzzle* p, const lj_solve_params* params, lj_solution** out);
void lj_solution_free(lj_solution* s);

int lj_solution_iterations(const lj_solution* s);
int lj_solution_converged(const lj_solution* s);
double lj_solution_residual(const lj_solution* s);
double lj_solution_tau(const lj_solution* s);
int lj_solution_anchor_piece(const lj_solution* s);
int lj_solution_placed_count(const lj_solution* s);
int lj_solution_conflicts(const lj_solution* s);
int lj_solution_restart_count(const lj_solution* s);
double lj_solution_restart_residual(const lj_solution* s, int restart);
/* phase 0 = payoff build, 1 = replicator run, 2 = decoding */
double lj_solution_phase_seconds(const lj_solution* s, int phase);
int lj_solution_piece_placed(const lj_solution* s, int piece);
lj_status lj_solution_piece_pose(const lj_solution* s, int piece, double* x, double* y,
                                 int* rotation);
/* Resolved configuration as a JSON object; the string lives with the handle. */
const char* lj_solution_config_json(const lj_solution* s);

lj_status lj_solution_write_placement(const lj_solution* s, const char* path);
lj_status lj_solution_write_trace(const lj_solution* s, const char* path);
lj_status lj_solution_write_payoffs(const lj_solution* s, const char* path);

/* ----- evaluation ----- */

/* Scores a placement file against the puzzle's ground truth. */
lj_status lj_evaluate(const lj_puzzle* p, const char* placement_path, lj_report** out);
void lj_report_free(lj_report* r);
double lj_report_direct(const lj_report* r);
int lj_report_has_neighbors(const lj_report* r);
double lj_report_neighbors(const lj_report* r);
double lj_report_translation_tolerance(const lj_report* r);
int lj_report_rotation_tolerance(const lj_report* r);

typedef struct lj_metric_row {
    const char* id;
    int piece_count;
    double direct;
    int has_neighbors;
    double neighbors;
    double translation_tolerance;
    int rotation_tolerance_steps;
} lj_metric_row;

lj_status lj_metrics_write(const char* path, const lj_metric_row* rows, int count);

/* ----- rendering ----- */

/* mode: "pieces", "assembled" or "compare". placement_path may be NULL for
 * pieces, and for assembled when the puzzle carries ground truth. */
lj_status lj_render(const lj_puzzle* p, const char* placement_path, const char* mode,
                    const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* LINEJIGSAW_H */
