#pragma once

#include <optional>
#include <vector>

#include "linejigsaw/assembly.hpp"

namespace linejigsaw {

struct MetricReport {
    double direct = 0.0;
    std::optional<double> neighbors;  // square-cell puzzles only
    std::vector<bool> per_piece_correct;
    double translation_tolerance = 0.0;
    int rotation_tolerance_steps = 0;
};

/// Fraction of pieces whose pose matches ground truth within the tolerances.
/// By default the single best global translation + rotation-set element is
/// applied first, since the solver's frame hangs off an arbitrary anchor;
/// align=false scores the raw poses.
MetricReport direct_metric(const Placement& placement, const std::vector<Pose>& truth,
                           int rotation_count, double grid_step, double tol_translation,
                           int tol_rotation_steps, bool align = true);

/// Fraction of ground-truth 4-neighbor pairs whose relative configuration
/// survives in the placement. Absent unless every piece is a square cell
/// and the truth poses sit on the cell lattice.
std::optional<double> neighbors_metric(const Placement& placement, const std::vector<Pose>& truth,
                                       const Puzzle& puzzle);

/// Translation tolerance used for irregular pieces: 25% of the mean piece
/// diameter; exact schemes default to 0.
double default_translation_tolerance(const Puzzle& puzzle);

}  // namespace linejigsaw
