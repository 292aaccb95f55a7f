#pragma once

#include <optional>
#include <vector>

#include "linejigsaw/generate.hpp"
#include "linejigsaw/solver.hpp"

namespace linejigsaw {

/// A concrete, overlap-free layout decoded from a profile.
struct Placement {
    std::vector<std::optional<Pose>> poses;  // indexed by piece id
    std::vector<int> unplaced;
    int conflicts_resolved = 0;

    int placed_count() const {
        int n = 0;
        for (const auto& p : poses) n += p.has_value();
        return n;
    }
};

/// Greedy readout: pieces in descending order of peak probability, each at
/// its best strategy that does not overlap anything already placed. Pieces
/// whose usable strategies all fall below 1/(2c) stay unplaced.
Placement decode(const MixedStrategyProfile& profile, const StrategyGrid& grid,
                 const std::vector<PieceShape>& shapes, const ProximityConfig& prox);

/// Reassembled drawing of the placed pieces, shifted onto a canvas whose
/// lower-left corner is the origin.
LineSet compose_lines(const Placement& placement, const Puzzle& puzzle);

}  // namespace linejigsaw
