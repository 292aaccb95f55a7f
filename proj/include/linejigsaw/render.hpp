#pragma once

#include <string>

#include "linejigsaw/assembly.hpp"
#include "linejigsaw/puzzle.hpp"

namespace linejigsaw {

/// What a rendering shows.
///   Pieces:    every piece in its local frame, laid out on a contact sheet.
///   Assembled: pieces drawn at their placement poses (ground truth when no
///              placement is given).
///   Compare:   ground truth on the left, the placement on the right.
enum class RenderMode { Pieces, Assembled, Compare };

/// Renders the puzzle as an SVG document. Output is deterministic: pieces are
/// drawn in id order, borders first, then the line fragments colored by
/// category. `placement` may be null for Pieces and for Assembled when the
/// puzzle carries ground truth. Compare requires both.
std::string render_svg(const Puzzle& puzzle, const Placement* placement, RenderMode mode);

void render_svg_file(const Puzzle& puzzle, const Placement* placement, RenderMode mode,
                     const std::string& path);

}  // namespace linejigsaw
