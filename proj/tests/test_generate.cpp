#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linejigsaw/generate.hpp"
#include "linejigsaw/puzzle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace linejigsaw;

namespace {

double total_length(const std::vector<LineSegment>& lines) {
    double acc = 0;
    for (const LineSegment& l : lines) acc += l.length();
    return acc;
}

double fragment_length(const Puzzle& p) {
    double acc = 0;
    for (const Piece& piece : p.pieces) acc += total_length(piece.lines);
    return acc;
}

double piece_area(const Puzzle& p) {
    double acc = 0;
    for (const Piece& piece : p.pieces) acc += shape_area(piece.shape);
    return acc;
}

// Canonical multiset key for a global-frame fragment: endpoints sorted so
// direction does not matter, coordinates rounded to tolerate rotation noise.
using FragmentKey = std::array<long long, 5>;

std::vector<FragmentKey> global_fragments(const Puzzle& p) {
    std::vector<FragmentKey> keys;
    REQUIRE(p.ground_truth.has_value());
    for (const Piece& piece : p.pieces) {
        const auto world =
            transform_lines(piece.lines, p.ground_truth->poses[piece.id], p.rotation_count);
        for (const LineSegment& l : world) {
            auto r = [](double v) { return std::llround(v * 1e6); };
            FragmentKey key = {r(l.a.x), r(l.a.y), r(l.b.x), r(l.b.y), l.category};
            FragmentKey flipped = {key[2], key[3], key[0], key[1], key[4]};
            keys.push_back(std::min(key, flipped));
        }
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace

TEST_CASE("line generation is deterministic and respects the canvas") {
    const LineSet a = generate_lines(300, 200, 40, 3, 7);
    const LineSet b = generate_lines(300, 200, 40, 3, 7);
    const LineSet c = generate_lines(300, 200, 40, 3, 8);
    REQUIRE(a.lines.size() == 40);
    CHECK(a.category_count == 3);

    bool identical = true;
    bool differs_from_c = false;
    for (size_t i = 0; i < a.lines.size(); ++i) {
        identical = identical && a.lines[i].a.x == b.lines[i].a.x &&
                    a.lines[i].b.y == b.lines[i].b.y && a.lines[i].category == b.lines[i].category;
        differs_from_c = differs_from_c || a.lines[i].a.x != c.lines[i].a.x;
    }
    CHECK(identical);
    CHECK(differs_from_c);

    const double min_length = 0.1 * std::hypot(300.0, 200.0);
    for (const LineSegment& l : a.lines) {
        CHECK(l.length() >= min_length);
        CHECK(l.a.x >= 0);
        CHECK(l.a.x <= 300);
        CHECK(l.b.y >= 0);
        CHECK(l.b.y <= 200);
        CHECK(l.category >= 0);
        CHECK(l.category < 3);
    }
}

TEST_CASE("line generation rejects invalid requests") {
    CHECK_THROWS_AS(generate_lines(0, 100, 10, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_lines(100, -5, 10, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_lines(100, 100, 0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_lines(100, 100, 10, 0, 0), std::invalid_argument);
}

TEST_CASE("square cutting tiles the canvas and conserves line length") {
    const LineSet ls = generate_lines(300, 300, 30, 2, 42);
    const Puzzle p = cut_square(ls, 3, 3);
    REQUIRE(p.piece_count() == 9);
    CHECK(p.grid_step == doctest::Approx(100.0));
    CHECK(p.scheme == CutScheme::Square);
    CHECK(piece_area(p) == doctest::Approx(300.0 * 300.0).epsilon(0.005));
    CHECK(fragment_length(p) == doctest::Approx(total_length(ls.lines)).epsilon(1e-9));

    REQUIRE(p.ground_truth.has_value());
    for (int id = 0; id < 9; ++id) {
        const Pose& pose = p.ground_truth->poses[id];
        CHECK(pose.rotation_index == 0);
        CHECK(pose.position.x == doctest::Approx((id % 3) * 100.0));
        CHECK(pose.position.y == doctest::Approx((id / 3) * 100.0));
        // Fragments live in the piece's local cell.
        for (const LineSegment& l : p.pieces[id].lines) {
            for (const Point2 e : {l.a, l.b}) {
                CHECK(e.x >= -1e-6);
                CHECK(e.x <= 100.0 + 1e-6);
                CHECK(e.y >= -1e-6);
                CHECK(e.y <= 100.0 + 1e-6);
            }
        }
    }
}

TEST_CASE("square cutting requires square cells") {
    const LineSet ls = generate_lines(300, 200, 10, 1, 1);
    CHECK_THROWS_AS(cut_square(ls, 3, 3), std::invalid_argument);
    CHECK_NOTHROW(cut_square(ls, 2, 3));
    CHECK_THROWS_AS(cut_square(ls, 0, 3), std::invalid_argument);
}

TEST_CASE("polygonal patterns tile exactly and conserve line length") {
    const LineSet ls = generate_lines(600, 600, 25, 5, 9);
    REQUIRE(polygonal_pattern_names().size() == 3);
    for (const std::string& name : polygonal_pattern_names()) {
        PolygonalPattern pattern;
        pattern.name = name;
        pattern.rows = 6;
        pattern.cols = 6;
        const Puzzle p = cut_polygonal(ls, pattern);
        CAPTURE(name);
        CHECK(p.scheme == CutScheme::Polygonal);
        CHECK(piece_area(p) == doctest::Approx(600.0 * 600.0).epsilon(0.005));
        CHECK(fragment_length(p) == doctest::Approx(total_length(ls.lines)).epsilon(1e-9));
        REQUIRE(p.ground_truth.has_value());
        for (const Pose& pose : p.ground_truth->poses) {
            CHECK(pose.rotation_index == 0);
            CHECK(std::fmod(pose.position.x, p.grid_step) == doctest::Approx(0.0));
            CHECK(std::fmod(pose.position.y, p.grid_step) == doctest::Approx(0.0));
        }
        // Multi-cell pieces are the point of these patterns.
        bool has_multi_cell = false;
        for (const Piece& piece : p.pieces) {
            has_multi_cell =
                has_multi_cell || shape_area(piece.shape) > p.grid_step * p.grid_step * 1.5;
        }
        CHECK(has_multi_cell);
    }
}

TEST_CASE("polygonal patterns validate their grid preconditions") {
    const LineSet ls = generate_lines(600, 600, 10, 1, 2);
    PolygonalPattern tromino;
    tromino.name = "tromino";
    tromino.rows = 3;
    tromino.cols = 6;
    CHECK_THROWS_AS(cut_polygonal(ls, tromino), std::invalid_argument);
    tromino.rows = 6;
    tromino.cols = 4;
    CHECK_THROWS_AS(cut_polygonal(ls, tromino), std::invalid_argument);
    PolygonalPattern unknown;
    unknown.name = "hexagons";
    unknown.rows = 6;
    unknown.cols = 6;
    CHECK_THROWS_AS(cut_polygonal(ls, unknown), std::invalid_argument);
}

TEST_CASE("irregular cutting produces masks that partition the canvas") {
    const LineSet ls = generate_lines(400, 400, 20, 2, 5);
    const Puzzle p = cut_irregular(ls, 17, 4, 4);
    REQUIRE(p.piece_count() == 16);
    CHECK(p.scheme == CutScheme::Irregular);
    for (const Piece& piece : p.pieces) CHECK(piece.shape.is_mask());
    CHECK(piece_area(p) == doctest::Approx(400.0 * 400.0).epsilon(0.005));
    CHECK(fragment_length(p) == doctest::Approx(total_length(ls.lines)).epsilon(1e-6));

    const Puzzle q = cut_irregular(ls, 17, 4, 4);
    CHECK(global_fragments(p) == global_fragments(q));
    const Puzzle r = cut_irregular(ls, 18, 4, 4);
    CHECK(global_fragments(p) != global_fragments(r));

    CHECK_THROWS_AS(cut_irregular(ls, 0, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(cut_irregular(ls, 0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(cut_irregular(ls, 0, 4, 4, 0), std::invalid_argument);
}

TEST_CASE("scrambling permutes pieces but keeps the assembled drawing") {
    const LineSet ls = generate_lines(500, 500, 30, 4, 3);
    for (int rotations : {1, 4}) {
        Puzzle p = cut_square(ls, 5, 5);
        p.rotation_count = rotations;
        const auto before = global_fragments(p);
        const Puzzle s = scramble(p, 99);
        CAPTURE(rotations);
        CHECK(s.piece_count() == p.piece_count());
        CHECK(fragment_length(s) == doctest::Approx(fragment_length(p)).epsilon(1e-9));
        CHECK(global_fragments(s) == before);

        // Ground truth stays on the strategy lattice after re-anchoring.
        REQUIRE(s.ground_truth.has_value());
        for (const Pose& pose : s.ground_truth->poses) {
            CHECK_NOTHROW(relative_between(s.ground_truth->poses[0], pose, rotations, s.grid_step));
        }

        // Some piece must actually move or rotate for the scramble to count.
        bool moved = false;
        for (int id = 0; id < s.piece_count(); ++id) {
            const Pose& pose = s.ground_truth->poses[id];
            moved = moved || pose.rotation_index != 0 ||
                    std::fabs(pose.position.x - p.ground_truth->poses[id].position.x) > 1e-9;
        }
        CHECK(moved);
    }
}

TEST_CASE("scrambling polygonal and irregular pieces preserves the drawing") {
    const LineSet ls = generate_lines(600, 600, 25, 3, 11);
    PolygonalPattern pattern;
    pattern.rows = 6;
    pattern.cols = 6;
    Puzzle poly = cut_polygonal(ls, pattern);
    poly.rotation_count = 4;
    const auto poly_before = global_fragments(poly);
    const Puzzle poly_s = scramble(poly, 5);
    CHECK(global_fragments(poly_s) == poly_before);

    Puzzle irr = cut_irregular(ls, 2, 3, 3);
    irr.rotation_count = 4;
    const auto irr_before = global_fragments(irr);
    const Puzzle irr_s = scramble(irr, 6);
    CHECK(global_fragments(irr_s) == irr_before);
    CHECK(piece_area(irr_s) == doctest::Approx(600.0 * 600.0).epsilon(0.005));
}

TEST_CASE("scrambling is deterministic per seed") {
    const LineSet ls = generate_lines(300, 300, 15, 1, 21);
    Puzzle p = cut_square(ls, 3, 3);
    p.rotation_count = 4;
    const Puzzle a = scramble(p, 7);
    const Puzzle b = scramble(p, 7);
    REQUIRE(a.ground_truth.has_value());
    REQUIRE(b.ground_truth.has_value());
    for (int id = 0; id < a.piece_count(); ++id) {
        CHECK(a.ground_truth->poses[id].position.x == b.ground_truth->poses[id].position.x);
        CHECK(a.ground_truth->poses[id].rotation_index == b.ground_truth->poses[id].rotation_index);
        CHECK(a.pieces[id].lines.size() == b.pieces[id].lines.size());
    }
}

TEST_CASE("puzzle proximity radius grows with the widest piece") {
    const LineSet ls = generate_lines(600, 600, 10, 1, 4);
    const Puzzle squares = cut_square(ls, 6, 6);
    CHECK(squares.proximity().radius_cells == 2);
    CHECK(squares.mean_diameter() == doctest::Approx(100.0 * std::sqrt(2.0)));

    PolygonalPattern pattern;
    pattern.name = "brick";
    pattern.rows = 6;
    pattern.cols = 6;
    const Puzzle bricks = cut_polygonal(ls, pattern);
    CHECK(bricks.proximity().radius_cells == 3);
    CHECK(bricks.proximity().rotation_count == bricks.rotation_count);
    CHECK(bricks.proximity().grid_step == doctest::Approx(bricks.grid_step));
}
