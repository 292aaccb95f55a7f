#include "linejigsaw/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linejigsaw/io.hpp"

namespace linejigsaw {

namespace {

const char* const kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#17becf", "#8c564b", "#e377c2", "#bcbd22", "#7f7f7f",
};
constexpr int kPaletteSize = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));

struct Canvas {
    std::string body;
    double height = 0.0;  // world-space height, for the y flip
    double stroke_border = 1.0;
    double stroke_line = 1.0;

    std::string fx(double x) const { return format_real(x); }
    std::string fy(double y) const { return format_real(height - y); }

    void edge(const Point2& a, const Point2& b, const std::string& color, double width) {
        body += "  <line x1=\"" + fx(a.x) + "\" y1=\"" + fy(a.y) + "\" x2=\"" + fx(b.x) +
                "\" y2=\"" + fy(b.y) + "\" stroke=\"" + color + "\" stroke-width=\"" +
                format_real(width) + "\" stroke-linecap=\"round\"/>\n";
    }

    void piece(const Piece& p, const Pose& pose, const Point2& shift, int rotation_count) {
        for (const BoundarySegment& seg : boundary_segments(p.shape, pose, rotation_count)) {
            edge(seg.a + shift, seg.b + shift, "#444444", stroke_border);
        }
        for (const LineSegment& raw : p.lines) {
            const LineSegment l = transform_lines({raw}, pose, rotation_count)[0];
            edge(l.a + shift, l.b + shift, kPalette[raw.category % kPaletteSize], stroke_line);
        }
    }
};

BBox posed_bbox(const PieceShape& shape, const Pose& pose, int rotation_count) {
    const BBox local = shape_bbox(shape);
    const Point2 corners[4] = {{local.min_x, local.min_y},
                               {local.max_x, local.min_y},
                               {local.max_x, local.max_y},
                               {local.min_x, local.max_y}};
    BBox out;
    for (const Point2& c : corners) out.expand(apply_pose(pose, rotation_count, c));
    return out;
}

BBox assembled_bbox(const Puzzle& puzzle, const std::vector<std::optional<Pose>>& poses) {
    BBox box;
    bool any = false;
    for (const Piece& p : puzzle.pieces) {
        if (static_cast<size_t>(p.id) >= poses.size() || !poses[p.id]) continue;
        const BBox b = posed_bbox(p.shape, *poses[p.id], puzzle.rotation_count);
        box.expand({b.min_x, b.min_y});
        box.expand({b.max_x, b.max_y});
        any = true;
    }
    if (!any) throw std::invalid_argument("nothing to render: no piece has a pose");
    return box;
}

void draw_assembly(Canvas& canvas, const Puzzle& puzzle,
                   const std::vector<std::optional<Pose>>& poses, const Point2& shift) {
    for (const Piece& p : puzzle.pieces) {
        if (static_cast<size_t>(p.id) >= poses.size() || !poses[p.id]) continue;
        canvas.piece(p, *poses[p.id], shift, puzzle.rotation_count);
    }
}

std::string document(const Canvas& canvas, double width) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_real(width) +
                      "\" height=\"" + format_real(canvas.height) + "\" viewBox=\"0 0 " +
                      format_real(width) + ' ' + format_real(canvas.height) + "\">\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out += canvas.body;
    out += "</svg>\n";
    return out;
}

std::vector<std::optional<Pose>> truth_poses(const Puzzle& puzzle) {
    if (!puzzle.ground_truth) {
        throw std::invalid_argument("rendering needs a placement or ground truth");
    }
    std::vector<std::optional<Pose>> poses;
    for (const Pose& pose : puzzle.ground_truth->poses) poses.emplace_back(pose);
    return poses;
}

}  // namespace

std::string render_svg(const Puzzle& puzzle, const Placement* placement, RenderMode mode) {
    if (puzzle.pieces.empty()) throw std::invalid_argument("cannot render an empty puzzle");
    Canvas canvas;
    canvas.stroke_border = puzzle.mean_diameter() * 0.01;
    canvas.stroke_line = canvas.stroke_border * 2.0;
    const double margin = puzzle.mean_diameter() * 0.25;

    if (mode == RenderMode::Pieces) {
        double cell_w = 0.0, cell_h = 0.0;
        for (const Piece& p : puzzle.pieces) {
            const BBox b = shape_bbox(p.shape);
            cell_w = std::max(cell_w, b.width());
            cell_h = std::max(cell_h, b.height());
        }
        cell_w += margin;
        cell_h += margin;
        const int n = puzzle.piece_count();
        const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        const int rows = (n + cols - 1) / cols;
        canvas.height = rows * cell_h + margin;
        const double width = cols * cell_w + margin;
        for (const Piece& p : puzzle.pieces) {
            const int col = p.id % cols;
            const int row = p.id / cols;
            const BBox b = shape_bbox(p.shape);
            // Rows fill top-down, so flip the row index in world space.
            const Point2 center = {margin + col * cell_w + cell_w / 2,
                                   margin + (rows - 1 - row) * cell_h + cell_h / 2};
            const Point2 shift = {center.x - (b.min_x + b.max_x) / 2,
                                  center.y - (b.min_y + b.max_y) / 2};
            canvas.piece(p, Pose{}, shift, puzzle.rotation_count);
        }
        return document(canvas, width);
    }

    if (mode == RenderMode::Assembled) {
        const auto poses = placement ? placement->poses : truth_poses(puzzle);
        const BBox box = assembled_bbox(puzzle, poses);
        canvas.height = box.height() + 2 * margin;
        const Point2 shift = {margin - box.min_x, margin - box.min_y};
        draw_assembly(canvas, puzzle, poses, shift);
        return document(canvas, box.width() + 2 * margin);
    }

    if (!placement) throw std::invalid_argument("compare rendering needs a placement");
    const auto truth = truth_poses(puzzle);
    const BBox left = assembled_bbox(puzzle, truth);
    const BBox right = assembled_bbox(puzzle, placement->poses);
    canvas.height = std::max(left.height(), right.height()) + 2 * margin;
    draw_assembly(canvas, puzzle, truth, {margin - left.min_x, margin - left.min_y});
    const double offset = left.width() + 2 * margin;
    draw_assembly(canvas, puzzle, placement->poses,
                  {offset + margin - right.min_x, margin - right.min_y});
    canvas.edge({offset, 0}, {offset, canvas.height}, "#bbbbbb", canvas.stroke_border);
    return document(canvas, offset + right.width() + 2 * margin);
}

void render_svg_file(const Puzzle& puzzle, const Placement* placement, RenderMode mode,
                     const std::string& path) {
    write_text_file(path, render_svg(puzzle, placement, mode));
}

}  // namespace linejigsaw
