#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linejigsaw/puzzle.hpp"

namespace linejigsaw {

/// Source drawing: annotated straight strokes on a blank canvas.
struct LineSet {
    double canvas_width = 0.0;
    double canvas_height = 0.0;
    int category_count = 1;
    std::vector<LineSegment> lines;
};

/// Random lines with uniform endpoints and categories. Segments shorter than
/// 10% of the canvas diagonal are redrawn; tiny strokes carry no usable
/// continuation signal.
LineSet generate_lines(double width, double height, int n_lines, int n_categories,
                       std::uint64_t seed);

/// Even grid cut. Cells must be square: width/cols == height/rows.
Puzzle cut_square(const LineSet& ls, int rows, int cols);

/// Handcrafted polyomino tilings over a rows x cols cell grid.
///   brick    half-offset 1x2 bricks with single-cell row fillers
///   tromino  2x3 blocks split into two L-trominoes (needs rows%2==0, cols%3==0)
///   rects    deterministic mix of 2x2, 1x2, 2x1 and 1x1 rectangles
struct PolygonalPattern {
    std::string name = "brick";
    int rows = 6;
    int cols = 6;
};

const std::vector<std::string>& polygonal_pattern_names();

Puzzle cut_polygonal(const LineSet& ls, const PolygonalPattern& pattern);

/// Grid lines perturbed into smooth bounded curves; pieces are occupancy
/// masks over a subgrid of mask_resolution cells per puzzle cell per axis.
/// Lines are clipped against the exact curved borders, not the masks.
Puzzle cut_irregular(const LineSet& ls, std::uint64_t seed, int rows, int cols,
                     int mask_resolution = 4);

/// Permute piece identities and apply a random rotation-set element to each
/// piece's local frame. Ground truth is rewritten so reassembly is exact.
Puzzle scramble(const Puzzle& p, std::uint64_t seed);

}  // namespace linejigsaw
