#include "linejigsaw/generate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "linejigsaw/rng.hpp"

namespace linejigsaw {

LineSet generate_lines(double width, double height, int n_lines, int n_categories,
                       std::uint64_t seed) {
    if (!(width > 0) || !(height > 0)) {
        throw std::invalid_argument("generate_lines: canvas must have positive area");
    }
    if (n_lines < 1) throw std::invalid_argument("generate_lines: n_lines must be >= 1");
    if (n_categories < 1) throw std::invalid_argument("generate_lines: n_categories must be >= 1");

    const double min_length = 0.1 * std::hypot(width, height);
    Rng rng(seed);
    LineSet ls;
    ls.canvas_width = width;
    ls.canvas_height = height;
    ls.category_count = n_categories;
    ls.lines.reserve(n_lines);
    while (static_cast<int>(ls.lines.size()) < n_lines) {
        const Point2 a = {rng.uniform(0, width), rng.uniform(0, height)};
        const Point2 b = {rng.uniform(0, width), rng.uniform(0, height)};
        if (distance(a, b) < min_length) continue;
        ls.lines.push_back(LineSegment::from_endpoints(a, b, rng.uniform_int(n_categories)));
    }
    return ls;
}

namespace {

/// Liang-Barsky: parameter range of segment a->b inside an axis-aligned
/// rectangle. Returns false when the segment misses it.
bool clip_interval(Point2 a, Point2 b, double x0, double y0, double x1, double y1, double& t0,
                   double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    const double d[2] = {b.x - a.x, b.y - a.y};
    const double p[2] = {a.x, a.y};
    const double lo[2] = {x0, y0};
    const double hi[2] = {x1, y1};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (p[axis] < lo[axis] || p[axis] > hi[axis]) return false;
            continue;
        }
        double ta = (lo[axis] - p[axis]) / d[axis];
        double tb = (hi[axis] - p[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

/// Clip one source line to a union of grid cells, merge touching parameter
/// intervals and emit the sub-segments relative to `node`.
void clip_line_to_cells(const LineSegment& line, const std::vector<std::pair<int, int>>& cells,
                        double step, Point2 node, std::vector<LineSegment>& out) {
    std::vector<std::pair<double, double>> spans;
    for (auto [cx, cy] : cells) {
        double t0, t1;
        if (clip_interval(line.a, line.b, cx * step, cy * step, (cx + 1) * step, (cy + 1) * step,
                          t0, t1)) {
            spans.emplace_back(t0, t1);
        }
    }
    if (spans.empty()) return;
    std::sort(spans.begin(), spans.end());
    std::vector<std::pair<double, double>> merged;
    for (auto [t0, t1] : spans) {
        if (!merged.empty() && t0 <= merged.back().second + 1e-12) {
            merged.back().second = std::max(merged.back().second, t1);
        } else {
            merged.emplace_back(t0, t1);
        }
    }
    const Point2 dir = line.b - line.a;
    const double len = norm(dir);
    for (auto [t0, t1] : merged) {
        if ((t1 - t0) * len < 1e-9) continue;
        const Point2 a = line.a + dir * t0 - node;
        const Point2 b = line.a + dir * t1 - node;
        out.push_back(LineSegment::from_endpoints(a, b, line.category));
    }
}

double cell_step_or_throw(const LineSet& ls, int rows, int cols, const char* op) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument(std::string(op) + ": rows and cols must be >= 1");
    }
    const double sx = ls.canvas_width / cols;
    const double sy = ls.canvas_height / rows;
    if (std::fabs(sx - sy) > 1e-9 * std::max(sx, sy)) {
        throw std::invalid_argument(std::string(op) + ": canvas does not divide into square cells");
    }
    return sx;
}

/// A piece under construction: its grid cells, outline relative to the
/// handle node, and the handle cell itself.
struct ProtoPiece {
    std::vector<std::pair<int, int>> cells;
    Polygon outline;
    int hx = 0;
    int hy = 0;
};

ProtoPiece rect_proto(int cx, int cy, int w, int h, double step) {
    ProtoPiece p;
    p.hx = cx;
    p.hy = cy;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) p.cells.emplace_back(cx + x, cy + y);
    }
    p.outline = {{0, 0}, {w * step, 0}, {w * step, h * step}, {0, h * step}};
    return p;
}

std::vector<ProtoPiece> brick_protos(int rows, int cols, double step) {
    if (cols < 2) throw std::invalid_argument("cut_polygonal: brick pattern needs cols >= 2");
    std::vector<ProtoPiece> protos;
    for (int cy = 0; cy < rows; ++cy) {
        int cx = 0;
        if (cy % 2 == 1) {
            protos.push_back(rect_proto(0, cy, 1, 1, step));
            cx = 1;
        }
        while (cx < cols) {
            const int w = (cx + 1 < cols) ? 2 : 1;
            protos.push_back(rect_proto(cx, cy, w, 1, step));
            cx += w;
        }
    }
    return protos;
}

std::vector<ProtoPiece> tromino_protos(int rows, int cols, double step) {
    if (rows % 2 != 0 || cols % 3 != 0) {
        throw std::invalid_argument(
            "cut_polygonal: tromino pattern needs rows divisible by 2 and cols by 3");
    }
    std::vector<ProtoPiece> protos;
    for (int by = 0; by < rows / 2; ++by) {
        for (int bx = 0; bx < cols / 3; ++bx) {
            const int ox = 3 * bx;
            const int oy = 2 * by;
            ProtoPiece a;
            a.hx = ox;
            a.hy = oy;
            a.cells = {{ox, oy}, {ox + 1, oy}, {ox, oy + 1}};
            a.outline = {{0, 0},        {2 * step, 0},    {2 * step, step},
                         {step, step},  {step, 2 * step}, {0, 2 * step}};
            protos.push_back(std::move(a));
            ProtoPiece b;
            b.hx = ox + 1;
            b.hy = oy;
            b.cells = {{ox + 2, oy}, {ox + 1, oy + 1}, {ox + 2, oy + 1}};
            b.outline = {{step, 0},        {2 * step, 0}, {2 * step, 2 * step},
                         {0, 2 * step},    {0, step},     {step, step}};
            protos.push_back(std::move(b));
        }
    }
    return protos;
}

std::vector<ProtoPiece> rects_protos(int rows, int cols, double step) {
    static const std::array<std::pair<int, int>, 4> kSizes = {
        {{2, 2}, {2, 1}, {1, 2}, {1, 1}}};
    std::vector<std::uint8_t> used(static_cast<size_t>(rows) * cols, 0);
    auto taken = [&](int cx, int cy) { return used[static_cast<size_t>(cy) * cols + cx] != 0; };
    std::vector<ProtoPiece> protos;
    int cycle = 0;
    for (int cy = 0; cy < rows; ++cy) {
        for (int cx = 0; cx < cols; ++cx) {
            if (taken(cx, cy)) continue;
            for (int k = 0; k < 4; ++k) {
                const auto [w, h] = kSizes[(cycle + k) % 4];
                if (cx + w > cols || cy + h > rows) continue;
                bool free = true;
                for (int y = 0; y < h && free; ++y) {
                    for (int x = 0; x < w && free; ++x) free = !taken(cx + x, cy + y);
                }
                if (!free) continue;
                for (int y = 0; y < h; ++y) {
                    for (int x = 0; x < w; ++x) used[static_cast<size_t>(cy + y) * cols + cx + x] = 1;
                }
                protos.push_back(rect_proto(cx, cy, w, h, step));
                break;
            }
            ++cycle;
        }
    }
    return protos;
}

Puzzle assemble_from_protos(const LineSet& ls, std::vector<ProtoPiece> protos, double step,
                            CutScheme scheme, bool squares) {
    Puzzle p;
    p.canvas_width = ls.canvas_width;
    p.canvas_height = ls.canvas_height;
    p.grid_step = step;
    p.rotation_count = 1;
    p.category_count = ls.category_count;
    p.scheme = scheme;
    p.ground_truth.emplace();
    for (size_t i = 0; i < protos.size(); ++i) {
        ProtoPiece& proto = protos[i];
        const Point2 node = {proto.hx * step, proto.hy * step};
        Piece piece;
        piece.id = static_cast<int>(i);
        if (squares) {
            piece.shape = PieceShape(SquareCell{step});
        } else {
            piece.shape = PieceShape(std::move(proto.outline));
        }
        for (const LineSegment& line : ls.lines) {
            clip_line_to_cells(line, proto.cells, step, node, piece.lines);
        }
        p.pieces.push_back(std::move(piece));
        p.ground_truth->poses.push_back({node, 0});
    }
    return p;
}

}  // namespace

Puzzle cut_square(const LineSet& ls, int rows, int cols) {
    const double step = cell_step_or_throw(ls, rows, cols, "cut_square");
    std::vector<ProtoPiece> protos;
    protos.reserve(static_cast<size_t>(rows) * cols);
    for (int cy = 0; cy < rows; ++cy) {
        for (int cx = 0; cx < cols; ++cx) protos.push_back(rect_proto(cx, cy, 1, 1, step));
    }
    return assemble_from_protos(ls, std::move(protos), step, CutScheme::Square, true);
}

const std::vector<std::string>& polygonal_pattern_names() {
    static const std::vector<std::string> names = {"brick", "tromino", "rects"};
    return names;
}

Puzzle cut_polygonal(const LineSet& ls, const PolygonalPattern& pattern) {
    const double step = cell_step_or_throw(ls, pattern.rows, pattern.cols, "cut_polygonal");
    std::vector<ProtoPiece> protos;
    if (pattern.name == "brick") {
        protos = brick_protos(pattern.rows, pattern.cols, step);
    } else if (pattern.name == "tromino") {
        protos = tromino_protos(pattern.rows, pattern.cols, step);
    } else if (pattern.name == "rects") {
        protos = rects_protos(pattern.rows, pattern.cols, step);
    } else {
        throw std::invalid_argument("cut_polygonal: unknown pattern '" + pattern.name + "'");
    }
    return assemble_from_protos(ls, std::move(protos), step, CutScheme::Polygonal, false);
}

namespace {

/// One perturbed grid line: offset(s) = A1 sin(2 pi f1 s/span + p1)
///                                    + A2 sin(2 pi f2 s/span + p2).
struct WavyLine {
    double a1 = 0, f1 = 1, p1 = 0;
    double a2 = 0, f2 = 2, p2 = 0;
    double span = 1;

    double offset(double s) const {
        return a1 * std::sin(2 * kPi * f1 * s / span + p1) +
               a2 * std::sin(2 * kPi * f2 * s / span + p2);
    }
};

WavyLine draw_wave(Rng& rng, double step, double span) {
    WavyLine w;
    w.span = span;
    w.a1 = rng.uniform(0.08, 0.18) * step;
    w.f1 = 1 + rng.uniform_int(2);
    w.p1 = rng.uniform(0, 2 * kPi);
    w.a2 = rng.uniform(0.02, 0.10) * step;
    w.f2 = 2 + rng.uniform_int(3);
    w.p2 = rng.uniform(0, 2 * kPi);
    return w;
}

}  // namespace

Puzzle cut_irregular(const LineSet& ls, std::uint64_t seed, int rows, int cols,
                     int mask_resolution) {
    if (rows < 2 || cols < 2) {
        throw std::invalid_argument("cut_irregular: rows and cols must be >= 2");
    }
    if (mask_resolution < 1) {
        throw std::invalid_argument("cut_irregular: mask_resolution must be >= 1");
    }
    const double step = cell_step_or_throw(ls, rows, cols, "cut_irregular");
    Rng rng(seed);
    std::vector<WavyLine> vertical;   // interior borders j = 1..cols-1, offset of x over y
    std::vector<WavyLine> horizontal; // interior borders i = 1..rows-1, offset of y over x
    for (int j = 1; j < cols; ++j) vertical.push_back(draw_wave(rng, step, ls.canvas_height));
    for (int i = 1; i < rows; ++i) horizontal.push_back(draw_wave(rng, step, ls.canvas_width));

    auto col_of = [&](Point2 pt) {
        int c = 0;
        for (int j = 1; j < cols; ++j) {
            if (pt.x >= j * step + vertical[j - 1].offset(pt.y)) c = j;
        }
        return c;
    };
    auto row_of = [&](Point2 pt) {
        int r = 0;
        for (int i = 1; i < rows; ++i) {
            if (pt.y >= i * step + horizontal[i - 1].offset(pt.x)) r = i;
        }
        return r;
    };
    auto piece_of = [&](Point2 pt) { return row_of(pt) * cols + col_of(pt); };

    const double mc = step / mask_resolution;
    const int gw = cols * mask_resolution;
    const int gh = rows * mask_resolution;
    const int n = rows * cols;
    struct Extent {
        int min_x = 1 << 30, min_y = 1 << 30, max_x = -1, max_y = -1;
    };
    std::vector<Extent> extents(n);
    std::vector<int> owner(static_cast<size_t>(gw) * gh);
    for (int iy = 0; iy < gh; ++iy) {
        for (int ix = 0; ix < gw; ++ix) {
            const int id = piece_of({(ix + 0.5) * mc, (iy + 0.5) * mc});
            owner[static_cast<size_t>(iy) * gw + ix] = id;
            Extent& e = extents[id];
            e.min_x = std::min(e.min_x, ix);
            e.min_y = std::min(e.min_y, iy);
            e.max_x = std::max(e.max_x, ix);
            e.max_y = std::max(e.max_y, iy);
        }
    }

    Puzzle p;
    p.canvas_width = ls.canvas_width;
    p.canvas_height = ls.canvas_height;
    p.grid_step = step;
    p.rotation_count = 1;
    p.category_count = ls.category_count;
    p.scheme = CutScheme::Irregular;
    p.ground_truth.emplace();
    p.pieces.resize(n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int id = r * cols + c;
            const Extent& e = extents[id];
            const Point2 node = {c * step, r * step};
            MaskShape m;
            m.cell = mc;
            m.origin = {e.min_x * mc - node.x, e.min_y * mc - node.y};
            m.width = e.max_x - e.min_x + 1;
            m.height = e.max_y - e.min_y + 1;
            m.bits.assign(static_cast<size_t>(m.width) * m.height, 0);
            for (int iy = e.min_y; iy <= e.max_y; ++iy) {
                for (int ix = e.min_x; ix <= e.max_x; ++ix) {
                    if (owner[static_cast<size_t>(iy) * gw + ix] == id) {
                        m.bits[static_cast<size_t>(iy - e.min_y) * m.width + (ix - e.min_x)] = 1;
                    }
                }
            }
            p.pieces[id].id = id;
            p.pieces[id].shape = PieceShape(std::move(m));
            p.ground_truth->poses.push_back({node, 0});
        }
    }

    // Split each line at the exact curved borders: walk the parameter, find
    // owner changes, refine each crossing by bisection.
    for (const LineSegment& line : ls.lines) {
        const Point2 dir = line.b - line.a;
        const double len = norm(dir);
        const int steps = std::max(8, static_cast<int>(std::ceil(len / (mc / 4.0))));
        auto owner_at = [&](double t) { return piece_of(line.a + dir * t); };
        double t_start = 0.0;
        int cur = owner_at(0.0);
        for (int k = 1; k <= steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            const int id = owner_at(t);
            if (id == cur && k < steps) continue;
            double t_cut = t;
            if (id != cur) {
                double lo = static_cast<double>(k - 1) / steps;
                double hi = t;
                while ((hi - lo) * len > 1e-10) {
                    const double mid = 0.5 * (lo + hi);
                    if (owner_at(mid) == cur) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                t_cut = hi;
            }
            if ((t_cut - t_start) * len > 1e-9) {
                const Point2 node = {(cur % cols) * step, (cur / cols) * step};
                p.pieces[cur].lines.push_back(LineSegment::from_endpoints(
                    line.a + dir * t_start - node, line.a + dir * t_cut - node, line.category));
            }
            t_start = t_cut;
            cur = id;
        }
        if ((1.0 - t_start) * len > 1e-9) {
            const Point2 node = {(cur % cols) * step, (cur / cols) * step};
            p.pieces[cur].lines.push_back(LineSegment::from_endpoints(
                line.a + dir * t_start - node, line.b - node, line.category));
        }
    }
    return p;
}

namespace {

MaskShape rotate_mask(const MaskShape& m, double theta) {
    const double quarter = std::fmod(theta, kPi / 2);
    if (std::fabs(quarter) > 1e-9 && std::fabs(quarter - kPi / 2) > 1e-9) {
        throw std::invalid_argument("scramble: mask pieces support right-angle rotations only");
    }
    const Rotation2 rot = Rotation2::from_angle(theta);
    std::vector<Point2> centers;
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    bool first = true;
    for (int iy = 0; iy < m.height; ++iy) {
        for (int ix = 0; ix < m.width; ++ix) {
            if (!m.at(ix, iy)) continue;
            const Point2 c = rot.apply(
                {m.origin.x + (ix + 0.5) * m.cell, m.origin.y + (iy + 0.5) * m.cell});
            centers.push_back(c);
            if (first || c.x < min_x) min_x = c.x;
            if (first || c.y < min_y) min_y = c.y;
            if (first || c.x > max_x) max_x = c.x;
            if (first || c.y > max_y) max_y = c.y;
            first = false;
        }
    }
    MaskShape out;
    out.cell = m.cell;
    if (centers.empty()) return out;
    out.origin = {min_x - 0.5 * m.cell, min_y - 0.5 * m.cell};
    out.width = static_cast<int>(std::lround((max_x - min_x) / m.cell)) + 1;
    out.height = static_cast<int>(std::lround((max_y - min_y) / m.cell)) + 1;
    out.bits.assign(static_cast<size_t>(out.width) * out.height, 0);
    for (const Point2& c : centers) {
        const int ix = static_cast<int>(std::lround((c.x - min_x) / m.cell));
        const int iy = static_cast<int>(std::lround((c.y - min_y) / m.cell));
        out.bits[static_cast<size_t>(iy) * out.width + ix] = 1;
    }
    return out;
}

/// Rotated local geometry plus the re-anchoring shift that keeps exact
/// shapes in non-negative local coordinates. The shift is a whole number of
/// cells, so ground-truth poses stay on the cell lattice. Masks keep their
/// origin instead: their bbox is only subcell-aligned.
struct RotatedShape {
    PieceShape shape;
    Point2 shift;
};

RotatedShape rotate_shape(const PieceShape& shape, int rot_index, int rotation_count) {
    if (rot_index == 0) return {shape, {0, 0}};
    const double theta = rotation_angle(rot_index, rotation_count);
    const Rotation2 rot = Rotation2::from_angle(theta);
    if (shape.is_square()) {
        const double side = std::get<SquareCell>(shape.value).side;
        Polygon corners = {{0, 0}, {side, 0}, {side, side}, {0, side}};
        for (Point2& v : corners) v = rot.apply(v);
        const BBox box = BBox::of(corners);
        return {PieceShape(SquareCell{side}), {-box.min_x, -box.min_y}};
    }
    if (shape.is_polygon()) {
        Polygon poly = std::get<Polygon>(shape.value);
        for (Point2& v : poly) v = rot.apply(v);
        const BBox box = BBox::of(poly);
        const Point2 shift = {-box.min_x, -box.min_y};
        for (Point2& v : poly) v = v + shift;
        return {PieceShape(std::move(poly)), shift};
    }
    return {PieceShape(rotate_mask(std::get<MaskShape>(shape.value), theta)), {0, 0}};
}

}  // namespace

Puzzle scramble(const Puzzle& p, std::uint64_t seed) {
    Rng rng(seed);
    const int n = p.piece_count();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    Puzzle out;
    out.canvas_width = p.canvas_width;
    out.canvas_height = p.canvas_height;
    out.grid_step = p.grid_step;
    out.rotation_count = p.rotation_count;
    out.category_count = p.category_count;
    out.scheme = p.scheme;
    if (p.ground_truth) out.ground_truth.emplace();
    for (int new_id = 0; new_id < n; ++new_id) {
        const Piece& src = p.pieces[order[new_id]];
        const int rho = rng.uniform_int(p.rotation_count);
        RotatedShape rotated = rotate_shape(src.shape, rho, p.rotation_count);
        Piece piece;
        piece.id = new_id;
        piece.shape = std::move(rotated.shape);
        piece.lines = transform_lines(src.lines, Pose{rotated.shift, rho}, p.rotation_count);
        out.pieces.push_back(std::move(piece));
        if (p.ground_truth) {
            const Pose& gt = p.ground_truth->poses[src.id];
            const int undo = (p.rotation_count - rho) % p.rotation_count;
            const int combined = (gt.rotation_index + undo) % p.rotation_count;
            const Rotation2 rot =
                Rotation2::from_angle(rotation_angle(combined, p.rotation_count));
            const Point2 position = gt.position - rot.apply(rotated.shift);
            out.ground_truth->poses.push_back({position, combined});
        }
    }
    return out;
}

}  // namespace linejigsaw
