#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linejigsaw/assembly.hpp"
#include "linejigsaw/evaluation.hpp"
#include "linejigsaw/solver.hpp"

namespace linejigsaw {

/// Schema or syntax violation in any of the text formats. The message
/// carries "path:line:" so batch tooling can point at the record.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, int line, const std::string& message)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + message) {}
};

/// Reals in all formats are written with 9 significant digits.
std::string format_real(double v);

// ---------------------------------------------------------------------------
// Puzzle descriptor
// ---------------------------------------------------------------------------

std::string write_descriptor(const Puzzle& puzzle);
void write_descriptor_file(const Puzzle& puzzle, const std::string& path);

/// include_ground_truth=false skips the ground-truth block entirely; this is
/// the only reader mode the solve path uses.
Puzzle read_descriptor(const std::string& text, const std::string& path,
                       bool include_ground_truth);
Puzzle read_descriptor_file(const std::string& path, bool include_ground_truth);

// ---------------------------------------------------------------------------
// Placement
// ---------------------------------------------------------------------------

std::string write_placement(const Placement& placement, int rotation_count, double grid_step);
void write_placement_file(const Placement& placement, int rotation_count, double grid_step,
                          const std::string& path);

struct PlacementFile {
    Placement placement;
    int rotation_count = 1;
    double grid_step = 1.0;
};
PlacementFile read_placement(const std::string& text, const std::string& path);
PlacementFile read_placement_file(const std::string& path);

// ---------------------------------------------------------------------------
// Solve trace
// ---------------------------------------------------------------------------

std::string write_trace(const SolveReport& report);
void write_trace_file(const SolveReport& report, const std::string& path);

struct TraceFile {
    std::vector<double> payoff_trajectory;
    std::vector<double> change_trajectory;
    double residual = 0.0;
    bool converged = false;
};
TraceFile read_trace(const std::string& text, const std::string& path);
TraceFile read_trace_file(const std::string& path);

// ---------------------------------------------------------------------------
// Metric records
// ---------------------------------------------------------------------------

struct MetricRecord {
    std::string id;
    int piece_count = 0;
    MetricReport report;
};

std::string write_metrics(const std::vector<MetricRecord>& records);
void write_metrics_file(const std::vector<MetricRecord>& records, const std::string& path);
std::vector<MetricRecord> read_metrics(const std::string& text, const std::string& path);
std::vector<MetricRecord> read_metrics_file(const std::string& path);

// ---------------------------------------------------------------------------
// Polyline ingestion
// ---------------------------------------------------------------------------

/// One record per line: category then an even run of coordinates,
/// "<category> x1 y1 x2 y2 [x3 y3 ...]". '#' starts a comment.
/// Polylines split into straight segments, clipped to the canvas; a zero
/// canvas dimension is grown to the data's bounding box.
LineSet read_polylines(const std::string& text, const std::string& path, double canvas_width,
                       double canvas_height);
LineSet read_polylines_file(const std::string& path, double canvas_width, double canvas_height);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace linejigsaw
