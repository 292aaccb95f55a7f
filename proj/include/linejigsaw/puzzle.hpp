#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linejigsaw/shape.hpp"

namespace linejigsaw {

/// How the canvas was cut into pieces.
enum class CutScheme { Square, Polygonal, Irregular };

std::string cut_scheme_name(CutScheme scheme);
std::optional<CutScheme> cut_scheme_from_name(const std::string& name);

/// One puzzle piece: its shape and the line fragments that fell on it, both
/// expressed in the piece's local frame (origin at the piece's nominal grid
/// anchor in the unscrambled layout).
struct Piece {
    int id = 0;
    PieceShape shape;
    std::vector<LineSegment> lines;

    /// Anchor selection prefers information-rich pieces.
    double anchor_hint() const { return static_cast<double>(lines.size()); }
};

/// Ground-truth pose per piece, available for generated puzzles only.
struct GroundTruth {
    std::vector<Pose> poses;  // indexed by piece id
};

struct Puzzle {
    double canvas_width = 0.0;
    double canvas_height = 0.0;
    double grid_step = 1.0;
    int rotation_count = 1;
    int category_count = 1;
    CutScheme scheme = CutScheme::Square;
    std::vector<Piece> pieces;
    std::optional<GroundTruth> ground_truth;

    int piece_count() const { return static_cast<int>(pieces.size()); }
    int rows() const { return static_cast<int>(std::lround(canvas_height / grid_step)); }
    int cols() const { return static_cast<int>(std::lround(canvas_width / grid_step)); }
    double canvas_diagonal() const { return std::hypot(canvas_width, canvas_height); }

    /// Mean bbox diagonal across pieces; proximity thresholds scale with it.
    double mean_diameter() const;

    /// Proximity thresholds for this puzzle's geometry.
    ProximityConfig proximity() const;
};

}  // namespace linejigsaw
