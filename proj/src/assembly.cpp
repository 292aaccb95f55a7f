#include "linejigsaw/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace linejigsaw {

Placement decode(const MixedStrategyProfile& profile, const StrategyGrid& grid,
                 const std::vector<PieceShape>& shapes, const ProximityConfig& prox) {
    const int n = profile.piece_count;
    const int c = profile.strategy_count;
    const double floor = 1.0 / (2.0 * c);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> peak(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = profile.row(i);
        peak[i] = *std::max_element(row, row + c);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return peak[a] > peak[b]; });

    Placement placement;
    placement.poses.resize(n);
    std::vector<double> areas(n);
    for (int i = 0; i < n; ++i) areas[i] = shape_area(shapes[i]);
    std::vector<int> placed;
    std::vector<int> ranked(c);
    for (int i : order) {
        const double* row = profile.row(i);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](int a, int b) { return row[a] > row[b]; });
        bool found = false;
        for (int rank = 0; rank < c; ++rank) {
            const int h = ranked[rank];
            if (row[h] < floor) break;
            const Pose pose = grid.pose_of(h);
            bool clear = true;
            for (int j : placed) {
                const double eps =
                    prox.overlap_epsilon_frac * std::min(areas[i], areas[j]);
                if (overlap_area(shapes[i], pose, shapes[j], *placement.poses[j], prox) > eps) {
                    clear = false;
                    break;
                }
            }
            if (!clear) continue;
            placement.poses[i] = pose;
            placed.push_back(i);
            if (rank > 0) ++placement.conflicts_resolved;
            found = true;
            break;
        }
        if (!found) placement.unplaced.push_back(i);
    }
    std::sort(placement.unplaced.begin(), placement.unplaced.end());
    return placement;
}

LineSet compose_lines(const Placement& placement, const Puzzle& puzzle) {
    LineSet ls;
    ls.category_count = puzzle.category_count;
    bool any = false;
    BBox box;
    for (size_t i = 0; i < placement.poses.size(); ++i) {
        if (!placement.poses[i]) continue;
        const Pose& pose = *placement.poses[i];
        const BBox local = shape_bbox(puzzle.pieces[i].shape);
        const Polygon corners = {{local.min_x, local.min_y},
                                 {local.max_x, local.min_y},
                                 {local.max_x, local.max_y},
                                 {local.min_x, local.max_y}};
        for (const Point2& corner : corners) {
            const Point2 p = apply_pose(pose, puzzle.rotation_count, corner);
            if (!any) {
                box = {p.x, p.y, p.x, p.y};
                any = true;
            } else {
                box.expand(p);
            }
        }
    }
    if (!any) return ls;
    const Point2 shift = {-box.min_x, -box.min_y};
    ls.canvas_width = box.width();
    ls.canvas_height = box.height();
    for (size_t i = 0; i < placement.poses.size(); ++i) {
        if (!placement.poses[i]) continue;
        for (LineSegment l :
             transform_lines(puzzle.pieces[i].lines, *placement.poses[i], puzzle.rotation_count)) {
            l.a = l.a + shift;
            l.b = l.b + shift;
            ls.lines.push_back(l);
        }
    }
    return ls;
}

}  // namespace linejigsaw
