#include "linejigsaw/puzzle.hpp"

#include <algorithm>
#include <cmath>

namespace linejigsaw {

std::string cut_scheme_name(CutScheme scheme) {
    switch (scheme) {
        case CutScheme::Square: return "square";
        case CutScheme::Polygonal: return "polygonal";
        case CutScheme::Irregular: return "irregular";
    }
    return "square";
}

std::optional<CutScheme> cut_scheme_from_name(const std::string& name) {
    if (name == "square") return CutScheme::Square;
    if (name == "polygonal") return CutScheme::Polygonal;
    if (name == "irregular") return CutScheme::Irregular;
    return std::nullopt;
}

double Puzzle::mean_diameter() const {
    if (pieces.empty()) return grid_step;
    double sum = 0.0;
    for (const Piece& p : pieces) sum += shape_diameter(p.shape);
    return sum / pieces.size();
}

ProximityConfig Puzzle::proximity() const {
    ProximityConfig cfg;
    cfg.grid_step = grid_step;
    cfg.rotation_count = rotation_count;
    cfg.mean_diameter = mean_diameter();
    // Anchors of touching pieces can sit one cell further apart than the
    // widest piece extent, so grow the relative-offset radius accordingly.
    int extent = 1;
    for (const Piece& p : pieces) {
        const BBox box = shape_bbox(p.shape);
        const double span = std::max(box.width(), box.height());
        extent = std::max(extent, static_cast<int>(std::ceil(span / grid_step - 1e-9)));
    }
    cfg.radius_cells = std::max(cfg.radius_cells, extent + 1);
    return cfg;
}

}  // namespace linejigsaw
