#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "linejigsaw/geometry.hpp"

namespace linejigsaw {

/// A discrete pose on the strategy grid: where a piece's local origin lands
/// and which element of the rotation set it uses.
struct Pose {
    Point2 position;
    int rotation_index = 0;
};

/// Angle of a rotation-set element: index * 2*pi / rotation_count.
double rotation_angle(int rotation_index, int rotation_count);

/// Local -> canvas: rotate about the local origin, then translate.
Point2 apply_pose(const Pose& pose, int rotation_count, Point2 local);

/// Rigid transform of a line list under a pose. Orientations follow modulo
/// pi, categories are preserved.
std::vector<LineSegment> transform_lines(const std::vector<LineSegment>& lines,
                                         const Pose& pose, int rotation_count);

/// Relative pose of one piece against another, in grid cells and rotation
/// steps. Offsets live in the reference piece's local frame.
struct RelativeStrategy {
    int dx = 0;
    int dy = 0;
    int d_rotation = 0;
    double grid_step = 1.0;

    Pose to_pose() const { return {{dx * grid_step, dy * grid_step}, d_rotation}; }
};

/// gamma such that entry (j, i, gamma) describes the same configuration as
/// (i, j, original). Exact only for right-angle rotation sets.
RelativeStrategy inverse_strategy(const RelativeStrategy& g, int rotation_count);

/// Relative strategy of `b` against `a` given their global poses. Throws if
/// the offset does not land on the cell grid.
RelativeStrategy relative_between(const Pose& a, const Pose& b, int rotation_count,
                                  double grid_step);

// ---------------------------------------------------------------------------
// Piece shapes
// ---------------------------------------------------------------------------

struct SquareCell {
    double side = 1.0;  // occupies [0, side]^2 in local coordinates
};

/// Binary occupancy grid. Cell (ix, iy) covers
/// [origin + ix*cell, origin + (ix+1)*cell) x [.. iy ..).
struct MaskShape {
    Point2 origin;
    double cell = 1.0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major, y*width + x

    bool at(int ix, int iy) const {
        if (ix < 0 || iy < 0 || ix >= width || iy >= height) return false;
        return bits[static_cast<size_t>(iy) * width + ix] != 0;
    }
    int occupied_count() const;
};

struct PieceShape {
    std::variant<SquareCell, Polygon, MaskShape> value;

    PieceShape() : value(SquareCell{1.0}) {}
    PieceShape(SquareCell s) : value(s) {}
    PieceShape(Polygon p) : value(std::move(p)) {}
    PieceShape(MaskShape m) : value(std::move(m)) {}

    bool is_square() const { return std::holds_alternative<SquareCell>(value); }
    bool is_polygon() const { return std::holds_alternative<Polygon>(value); }
    bool is_mask() const { return std::holds_alternative<MaskShape>(value); }
};

double shape_area(const PieceShape& shape);
BBox shape_bbox(const PieceShape& shape);
double shape_diameter(const PieceShape& shape);  // bbox diagonal

/// True if the local-frame point is inside the shape.
bool point_in_shape(const PieceShape& shape, Point2 local);

struct BoundarySegment {
    Point2 a;
    Point2 b;
};

/// Boundary of the shape under a pose, as canvas-frame segments. Mask shapes
/// yield the exposed edges of their occupied cells.
std::vector<BoundarySegment> boundary_segments(const PieceShape& shape, const Pose& pose,
                                               int rotation_count);

enum class RegionLabel { Adjacent, Overlapping, Neutral };

/// Pairwise spatial thresholds. The bands are fractions of the mean piece
/// diameter; overlap tolerance is a fraction of the smaller piece's area.
struct ProximityConfig {
    double grid_step = 1.0;
    int rotation_count = 1;
    int radius_cells = 2;
    double mean_diameter = 1.0;
    double overlap_epsilon_frac = 0.01;
    double contact_band_frac = 0.02;
    double contact_min_frac = 0.05;
    int mask_resolution = 4;  // mask cells per puzzle cell, per axis

    double contact_band() const { return contact_band_frac * mean_diameter; }
    double contact_min() const { return contact_min_frac * mean_diameter; }
    double mask_cell() const { return grid_step / mask_resolution; }

    static ProximityConfig for_shapes(const PieceShape& a, const PieceShape& b,
                                      double grid_step, int rotation_count);
};

/// Intersection area of two posed shapes, in canvas units^2.
double overlap_area(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                    const Pose& pose_b, const ProximityConfig& cfg);

/// Convenience form: `a` at the canonical pose, `b` displaced by gamma.
double overlap_area(const PieceShape& a, const PieceShape& b, const RelativeStrategy& g,
                    const ProximityConfig& cfg);

/// Length of a's boundary lying within the contact band of b's boundary.
double contact_length(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                      const Pose& pose_b, const ProximityConfig& cfg);
double contact_length(const PieceShape& a, const PieceShape& b, const RelativeStrategy& g,
                      const ProximityConfig& cfg);

RegionLabel classify_region(const PieceShape& a, const PieceShape& b,
                            const RelativeStrategy& g, const ProximityConfig& cfg);
RegionLabel classify_region(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                            const Pose& pose_b, const ProximityConfig& cfg);

/// Sample points of a's boundary (under pose_a) within the contact band of
/// b's boundary. This is the zone line endpoints are tested against.
std::vector<Point2> contact_zone(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                                 const Pose& pose_b, const ProximityConfig& cfg);

/// Rasterize any shape onto an occupancy grid with the given cell size.
MaskShape rasterize(const PieceShape& shape, double cell);

/// Extra matching slack for rasterized shapes: half a mask-cell diagonal.
/// Zero for exact (square/polygon) shapes.
double quantization_slack(const PieceShape& shape);

}  // namespace linejigsaw
