#include "linejigsaw/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace linejigsaw {

namespace {

int rotation_distance(int a, int b, int rotation_count) {
    const int d = ((a - b) % rotation_count + rotation_count) % rotation_count;
    return std::min(d, rotation_count - d);
}

struct Alignment {
    Rotation2 rot{1.0, 0.0};
    int rot_steps = 0;
    Point2 shift;
};

std::vector<bool> score_candidate(const Placement& placement, const std::vector<Pose>& truth,
                                  const Alignment& align, int rotation_count, double tol_pos,
                                  int tol_rot) {
    std::vector<bool> correct(truth.size(), false);
    for (size_t i = 0; i < truth.size(); ++i) {
        if (!placement.poses[i]) continue;
        const Pose& pose = *placement.poses[i];
        const Point2 position = align.rot.apply(pose.position) + align.shift;
        if (distance(position, truth[i].position) > tol_pos) continue;
        const int rotation = (pose.rotation_index + align.rot_steps) % rotation_count;
        if (rotation_distance(rotation, truth[i].rotation_index, rotation_count) > tol_rot) {
            continue;
        }
        correct[i] = true;
    }
    return correct;
}

}  // namespace

MetricReport direct_metric(const Placement& placement, const std::vector<Pose>& truth,
                           int rotation_count, double grid_step, double tol_translation,
                           int tol_rotation_steps, bool align) {
    MetricReport report;
    report.translation_tolerance = tol_translation;
    report.rotation_tolerance_steps = tol_rotation_steps;
    const size_t n = truth.size();
    report.per_piece_correct.assign(n, false);
    if (n == 0) return report;

    const double tol_pos = tol_translation + 1e-6 * grid_step;
    std::vector<Alignment> candidates;
    candidates.push_back({});
    if (align) {
        for (size_t i = 0; i < n; ++i) {
            if (!placement.poses[i]) continue;
            for (int r = 0; r < rotation_count; ++r) {
                Alignment a;
                a.rot_steps = r;
                a.rot = Rotation2::from_angle(rotation_angle(r, rotation_count));
                a.shift = truth[i].position - a.rot.apply(placement.poses[i]->position);
                candidates.push_back(a);
            }
        }
    }

    int best = -1;
    for (const Alignment& candidate : candidates) {
        std::vector<bool> correct = score_candidate(placement, truth, candidate, rotation_count,
                                                    tol_pos, tol_rotation_steps);
        const int count = static_cast<int>(std::count(correct.begin(), correct.end(), true));
        if (count > best) {
            best = count;
            report.per_piece_correct = std::move(correct);
        }
    }
    report.direct = static_cast<double>(best) / static_cast<double>(n);
    return report;
}

std::optional<double> neighbors_metric(const Placement& placement, const std::vector<Pose>& truth,
                                       const Puzzle& puzzle) {
    for (const Piece& piece : puzzle.pieces) {
        if (!piece.shape.is_square()) return std::nullopt;
    }
    const double step = puzzle.grid_step;
    const int R = puzzle.rotation_count;
    std::unordered_map<long long, int> cell_to_id;
    std::vector<std::pair<int, int>> cells(truth.size());
    for (size_t i = 0; i < truth.size(); ++i) {
        const double fu = truth[i].position.x / step;
        const double fv = truth[i].position.y / step;
        const int u = static_cast<int>(std::lround(fu));
        const int v = static_cast<int>(std::lround(fv));
        if (std::fabs(fu - u) > 1e-6 || std::fabs(fv - v) > 1e-6) return std::nullopt;
        cells[i] = {u, v};
        cell_to_id[(static_cast<long long>(v) << 32) | static_cast<unsigned>(u)] =
            static_cast<int>(i);
    }

    static constexpr int kDir[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    int total = 0;
    int intact = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
        for (const auto& d : kDir) {
            const long long key =
                (static_cast<long long>(cells[i].second + d[1]) << 32) |
                static_cast<unsigned>(cells[i].first + d[0]);
            auto it = cell_to_id.find(key);
            if (it == cell_to_id.end()) continue;
            const int j = it->second;
            ++total;
            if (!placement.poses[i] || !placement.poses[j]) continue;
            const RelativeStrategy want = relative_between(truth[i], truth[j], R, step);
            const RelativeStrategy got =
                relative_between(*placement.poses[i], *placement.poses[j], R, step);
            if (want.dx == got.dx && want.dy == got.dy && want.d_rotation == got.d_rotation) {
                ++intact;
            }
        }
    }
    if (total == 0) return 1.0;
    return static_cast<double>(intact) / static_cast<double>(total);
}

double default_translation_tolerance(const Puzzle& puzzle) {
    if (puzzle.scheme == CutScheme::Irregular) return 0.25 * puzzle.mean_diameter();
    return 0.0;
}

}  // namespace linejigsaw
