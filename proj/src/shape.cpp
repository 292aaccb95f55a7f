#include "linejigsaw/shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linejigsaw {

double rotation_angle(int rotation_index, int rotation_count) {
    return rotation_index * (2.0 * kPi / rotation_count);
}

Point2 apply_pose(const Pose& pose, int rotation_count, Point2 local) {
    const Rotation2 rot = Rotation2::from_angle(rotation_angle(pose.rotation_index, rotation_count));
    return rot.apply(local) + pose.position;
}

std::vector<LineSegment> transform_lines(const std::vector<LineSegment>& lines, const Pose& pose,
                                         int rotation_count) {
    const double theta = rotation_angle(pose.rotation_index, rotation_count);
    const Rotation2 rot = Rotation2::from_angle(theta);
    std::vector<LineSegment> out;
    out.reserve(lines.size());
    for (const LineSegment& l : lines) {
        LineSegment t;
        t.a = rot.apply(l.a) + pose.position;
        t.b = rot.apply(l.b) + pose.position;
        t.angle = wrap_orientation(l.angle + theta);
        t.category = l.category;
        out.push_back(t);
    }
    return out;
}

RelativeStrategy inverse_strategy(const RelativeStrategy& g, int rotation_count) {
    RelativeStrategy inv;
    inv.grid_step = g.grid_step;
    inv.d_rotation = ((-g.d_rotation) % rotation_count + rotation_count) % rotation_count;
    const Rotation2 rot = Rotation2::from_angle(-rotation_angle(g.d_rotation, rotation_count));
    const Point2 d = rot.apply({static_cast<double>(g.dx), static_cast<double>(g.dy)});
    inv.dx = static_cast<int>(std::lround(-d.x));
    inv.dy = static_cast<int>(std::lround(-d.y));
    return inv;
}

RelativeStrategy relative_between(const Pose& a, const Pose& b, int rotation_count,
                                  double grid_step) {
    RelativeStrategy g;
    g.grid_step = grid_step;
    g.d_rotation =
        ((b.rotation_index - a.rotation_index) % rotation_count + rotation_count) % rotation_count;
    const Rotation2 rot = Rotation2::from_angle(-rotation_angle(a.rotation_index, rotation_count));
    const Point2 d = rot.apply(b.position - a.position);
    const double fx = d.x / grid_step;
    const double fy = d.y / grid_step;
    g.dx = static_cast<int>(std::lround(fx));
    g.dy = static_cast<int>(std::lround(fy));
    if (std::fabs(fx - g.dx) > 1e-6 || std::fabs(fy - g.dy) > 1e-6) {
        throw std::invalid_argument("relative_between: poses are not cell-grid aligned");
    }
    return g;
}

int MaskShape::occupied_count() const {
    int n = 0;
    for (std::uint8_t v : bits) n += (v != 0);
    return n;
}

namespace {

Polygon square_polygon(const SquareCell& s) {
    return {{0, 0}, {s.side, 0}, {s.side, s.side}, {0, s.side}};
}

Polygon shape_outline(const PieceShape& shape) {
    if (shape.is_square()) return square_polygon(std::get<SquareCell>(shape.value));
    if (shape.is_polygon()) return std::get<Polygon>(shape.value);
    throw std::logic_error("shape_outline: mask shapes have no single outline polygon");
}

Polygon transformed_outline(const PieceShape& shape, const Pose& pose, int rotation_count) {
    Polygon poly = shape_outline(shape);
    for (Point2& p : poly) p = apply_pose(pose, rotation_count, p);
    return poly;
}

Point2 to_local(const Pose& pose, int rotation_count, Point2 canvas) {
    const Rotation2 rot =
        Rotation2::from_angle(rotation_angle(pose.rotation_index, rotation_count)).inverse();
    return rot.apply(canvas - pose.position);
}

}  // namespace

double shape_area(const PieceShape& shape) {
    if (shape.is_square()) {
        const double s = std::get<SquareCell>(shape.value).side;
        return s * s;
    }
    if (shape.is_polygon()) return polygon_area(std::get<Polygon>(shape.value));
    const MaskShape& m = std::get<MaskShape>(shape.value);
    return m.occupied_count() * m.cell * m.cell;
}

BBox shape_bbox(const PieceShape& shape) {
    if (shape.is_square()) {
        const double s = std::get<SquareCell>(shape.value).side;
        return {0, 0, s, s};
    }
    if (shape.is_polygon()) return BBox::of(std::get<Polygon>(shape.value));
    const MaskShape& m = std::get<MaskShape>(shape.value);
    BBox box{m.origin.x + m.width * m.cell, m.origin.y + m.height * m.cell, m.origin.x, m.origin.y};
    bool any = false;
    for (int iy = 0; iy < m.height; ++iy) {
        for (int ix = 0; ix < m.width; ++ix) {
            if (!m.at(ix, iy)) continue;
            box.expand({m.origin.x + ix * m.cell, m.origin.y + iy * m.cell});
            box.expand({m.origin.x + (ix + 1) * m.cell, m.origin.y + (iy + 1) * m.cell});
            any = true;
        }
    }
    if (!any) return {0, 0, 0, 0};
    return box;
}

double shape_diameter(const PieceShape& shape) { return shape_bbox(shape).diagonal(); }

bool point_in_shape(const PieceShape& shape, Point2 local) {
    if (shape.is_square()) {
        const double s = std::get<SquareCell>(shape.value).side;
        return local.x >= 0 && local.x <= s && local.y >= 0 && local.y <= s;
    }
    if (shape.is_polygon()) return point_in_polygon(local, std::get<Polygon>(shape.value));
    const MaskShape& m = std::get<MaskShape>(shape.value);
    const int ix = static_cast<int>(std::floor((local.x - m.origin.x) / m.cell));
    const int iy = static_cast<int>(std::floor((local.y - m.origin.y) / m.cell));
    return m.at(ix, iy);
}

std::vector<BoundarySegment> boundary_segments(const PieceShape& shape, const Pose& pose,
                                               int rotation_count) {
    std::vector<BoundarySegment> segs;
    if (!shape.is_mask()) {
        const Polygon poly = transformed_outline(shape, pose, rotation_count);
        const size_t n = poly.size();
        segs.reserve(n);
        for (size_t i = 0; i < n; ++i) segs.push_back({poly[i], poly[(i + 1) % n]});
        return segs;
    }
    const MaskShape& m = std::get<MaskShape>(shape.value);
    auto corner = [&](int ix, int iy) {
        return apply_pose(pose, rotation_count,
                          {m.origin.x + ix * m.cell, m.origin.y + iy * m.cell});
    };
    for (int iy = 0; iy < m.height; ++iy) {
        for (int ix = 0; ix < m.width; ++ix) {
            if (!m.at(ix, iy)) continue;
            if (!m.at(ix, iy - 1)) segs.push_back({corner(ix, iy), corner(ix + 1, iy)});
            if (!m.at(ix, iy + 1)) segs.push_back({corner(ix, iy + 1), corner(ix + 1, iy + 1)});
            if (!m.at(ix - 1, iy)) segs.push_back({corner(ix, iy), corner(ix, iy + 1)});
            if (!m.at(ix + 1, iy)) segs.push_back({corner(ix + 1, iy), corner(ix + 1, iy + 1)});
        }
    }
    return segs;
}

ProximityConfig ProximityConfig::for_shapes(const PieceShape& a, const PieceShape& b,
                                            double grid_step, int rotation_count) {
    ProximityConfig cfg;
    cfg.grid_step = grid_step;
    cfg.rotation_count = rotation_count;
    cfg.mean_diameter = 0.5 * (shape_diameter(a) + shape_diameter(b));
    return cfg;
}

namespace {

bool bboxes_apart(const PieceShape& a, const Pose& pa, const PieceShape& b, const Pose& pb,
                  int rotation_count, double margin) {
    // Conservative reject using circumscribed circles around the posed bboxes.
    auto circum = [&](const PieceShape& s, const Pose& p) {
        const BBox box = shape_bbox(s);
        const Point2 center_local = {0.5 * (box.min_x + box.max_x), 0.5 * (box.min_y + box.max_y)};
        const Point2 c = apply_pose(p, rotation_count, center_local);
        return std::pair<Point2, double>(c, 0.5 * box.diagonal());
    };
    const auto [ca, ra] = circum(a, pa);
    const auto [cb, rb] = circum(b, pb);
    return distance(ca, cb) > ra + rb + margin;
}

double mask_route_overlap(const PieceShape& a, const Pose& pa, const PieceShape& b, const Pose& pb,
                          int rotation_count, double cell) {
    // Count occupied cells of the mask side whose centers land inside the
    // other shape. If both are masks, iterate the sparser one.
    const PieceShape* iter = &a;
    const PieceShape* other = &b;
    const Pose* iter_pose = &pa;
    const Pose* other_pose = &pb;
    if (!a.is_mask() || (b.is_mask() && std::get<MaskShape>(b.value).occupied_count() <
                                            std::get<MaskShape>(a.value).occupied_count())) {
        std::swap(iter, other);
        std::swap(iter_pose, other_pose);
    }
    MaskShape grid;
    if (iter->is_mask() && std::fabs(std::get<MaskShape>(iter->value).cell - cell) < 1e-12) {
        grid = std::get<MaskShape>(iter->value);
    } else {
        grid = rasterize(*iter, cell);
    }
    int count = 0;
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            if (!grid.at(ix, iy)) continue;
            const Point2 center_local = {grid.origin.x + (ix + 0.5) * grid.cell,
                                         grid.origin.y + (iy + 0.5) * grid.cell};
            const Point2 canvas = apply_pose(*iter_pose, rotation_count, center_local);
            if (point_in_shape(*other, to_local(*other_pose, rotation_count, canvas))) ++count;
        }
    }
    return count * grid.cell * grid.cell;
}

}  // namespace

double overlap_area(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                    const Pose& pose_b, const ProximityConfig& cfg) {
    if (bboxes_apart(a, pose_a, b, pose_b, cfg.rotation_count, 0.0)) return 0.0;
    if (a.is_mask() || b.is_mask()) {
        return mask_route_overlap(a, pose_a, b, pose_b, cfg.rotation_count, cfg.mask_cell());
    }
    const Polygon pa = transformed_outline(a, pose_a, cfg.rotation_count);
    const Polygon pb = transformed_outline(b, pose_b, cfg.rotation_count);
    return polygon_intersection_area(pa, pb);
}

double overlap_area(const PieceShape& a, const PieceShape& b, const RelativeStrategy& g,
                    const ProximityConfig& cfg) {
    return overlap_area(a, Pose{}, b, g.to_pose(), cfg);
}

double contact_length(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                      const Pose& pose_b, const ProximityConfig& cfg) {
    const double band = cfg.contact_band();
    if (bboxes_apart(a, pose_a, b, pose_b, cfg.rotation_count, band)) return 0.0;
    const auto segs_a = boundary_segments(a, pose_a, cfg.rotation_count);
    const auto segs_b = boundary_segments(b, pose_b, cfg.rotation_count);
    if (segs_a.empty() || segs_b.empty()) return 0.0;

    auto near_b = [&](Point2 p) {
        for (const BoundarySegment& s : segs_b) {
            if (point_segment_distance(p, s.a, s.b) <= band) return true;
        }
        return false;
    };

    double total = 0.0;
    for (const BoundarySegment& s : segs_a) {
        const double len = distance(s.a, s.b);
        if (len <= 0) continue;
        const int steps = std::max(1, static_cast<int>(std::ceil(len / (band / 4.0))));
        const double dlen = len / steps;
        for (int i = 0; i < steps; ++i) {
            const double t = (i + 0.5) / steps;
            if (near_b(s.a + (s.b - s.a) * t)) total += dlen;
        }
    }
    return total;
}

double contact_length(const PieceShape& a, const PieceShape& b, const RelativeStrategy& g,
                      const ProximityConfig& cfg) {
    return contact_length(a, Pose{}, b, g.to_pose(), cfg);
}

std::vector<Point2> contact_zone(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                                 const Pose& pose_b, const ProximityConfig& cfg) {
    std::vector<Point2> zone;
    const double band = cfg.contact_band();
    if (bboxes_apart(a, pose_a, b, pose_b, cfg.rotation_count, band)) return zone;
    const auto segs_a = boundary_segments(a, pose_a, cfg.rotation_count);
    const auto segs_b = boundary_segments(b, pose_b, cfg.rotation_count);
    for (const BoundarySegment& s : segs_a) {
        const double len = distance(s.a, s.b);
        if (len <= 0) continue;
        const int steps = std::max(1, static_cast<int>(std::ceil(len / (band / 4.0))));
        for (int i = 0; i < steps; ++i) {
            const double t = (i + 0.5) / steps;
            const Point2 p = s.a + (s.b - s.a) * t;
            for (const BoundarySegment& sb : segs_b) {
                if (point_segment_distance(p, sb.a, sb.b) <= band) {
                    zone.push_back(p);
                    break;
                }
            }
        }
    }
    return zone;
}

RegionLabel classify_region(const PieceShape& a, const Pose& pose_a, const PieceShape& b,
                            const Pose& pose_b, const ProximityConfig& cfg) {
    const double eps = cfg.overlap_epsilon_frac * std::min(shape_area(a), shape_area(b));
    if (overlap_area(a, pose_a, b, pose_b, cfg) > eps) return RegionLabel::Overlapping;
    if (contact_length(a, pose_a, b, pose_b, cfg) > cfg.contact_min()) return RegionLabel::Adjacent;
    return RegionLabel::Neutral;
}

RegionLabel classify_region(const PieceShape& a, const PieceShape& b, const RelativeStrategy& g,
                            const ProximityConfig& cfg) {
    return classify_region(a, Pose{}, b, g.to_pose(), cfg);
}

MaskShape rasterize(const PieceShape& shape, double cell) {
    if (shape.is_mask() && std::fabs(std::get<MaskShape>(shape.value).cell - cell) < 1e-12) {
        return std::get<MaskShape>(shape.value);
    }
    const BBox box = shape_bbox(shape);
    MaskShape m;
    m.cell = cell;
    m.origin = {std::floor(box.min_x / cell) * cell, std::floor(box.min_y / cell) * cell};
    m.width = std::max(1, static_cast<int>(std::ceil((box.max_x - m.origin.x) / cell - 1e-9)));
    m.height = std::max(1, static_cast<int>(std::ceil((box.max_y - m.origin.y) / cell - 1e-9)));
    m.bits.assign(static_cast<size_t>(m.width) * m.height, 0);
    for (int iy = 0; iy < m.height; ++iy) {
        for (int ix = 0; ix < m.width; ++ix) {
            const Point2 center = {m.origin.x + (ix + 0.5) * cell, m.origin.y + (iy + 0.5) * cell};
            if (point_in_shape(shape, center)) {
                m.bits[static_cast<size_t>(iy) * m.width + ix] = 1;
            }
        }
    }
    return m;
}

double quantization_slack(const PieceShape& shape) {
    if (!shape.is_mask()) return 0.0;
    const MaskShape& m = std::get<MaskShape>(shape.value);
    return 0.5 * m.cell * std::sqrt(2.0);
}

}  // namespace linejigsaw
