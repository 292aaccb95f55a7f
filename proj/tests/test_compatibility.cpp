#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linejigsaw/compatibility.hpp"
#include "linejigsaw/generate.hpp"
#include "linejigsaw/puzzle.hpp"
#include "linejigsaw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace linejigsaw;

namespace {

// Exhaustive assignment oracle: try every injection of the shorter side
// into the longer one and keep the cheapest total.
double brute_force_lap(const std::vector<std::vector<double>>& matrix) {
    const int rows = static_cast<int>(matrix.size());
    const int cols = rows ? static_cast<int>(matrix[0].size()) : 0;
    if (rows == 0 || cols == 0) return 0.0;
    const bool transpose = rows > cols;
    const int small = transpose ? cols : rows;
    const int large = transpose ? rows : cols;
    auto at = [&](int r, int c) { return transpose ? matrix[c][r] : matrix[r][c]; };
    std::vector<int> perm(large);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double acc = 0;
        for (int r = 0; r < small; ++r) acc += at(r, perm[r]);
        best = std::min(best, acc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Piece square_piece(int id, std::vector<LineSegment> lines, double side = 1.0) {
    Piece piece;
    piece.id = id;
    piece.shape = PieceShape{SquareCell{side}};
    piece.lines = std::move(lines);
    return piece;
}

LineSegment seg(double ax, double ay, double bx, double by, int category = 0) {
    return LineSegment::from_endpoints({ax, ay}, {bx, by}, category);
}

RelativeStrategy strat(int dx, int dy, int dr = 0, double step = 1.0) {
    RelativeStrategy g;
    g.dx = dx;
    g.dy = dy;
    g.d_rotation = dr;
    g.grid_step = step;
    return g;
}

bool same_dump(const std::vector<PartialPayoffTable::DumpRecord>& a,
               const std::vector<PartialPayoffTable::DumpRecord>& b) {
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k].i != b[k].i || a[k].j != b[k].j || a[k].dx != b[k].dx || a[k].dy != b[k].dy ||
            a[k].d_rotation != b[k].d_rotation || a[k].value != b[k].value) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("line matching cost is the closest endpoint gap") {
    LineMatchConfig cfg;
    cfg.cost_max = 100.0;
    const LineSegment a = seg(0, 0, 1, 0);
    const LineSegment b = seg(1.5, 0, 3, 0);
    CHECK(line_cost(a, b, cfg) == doctest::Approx(0.5));
    CHECK(line_cost(b, a, cfg) == doctest::Approx(0.5));
    // Swapping endpoint order must not matter.
    CHECK(line_cost(seg(1, 0, 0, 0), b, cfg) == doctest::Approx(0.5));

    // Misaligned or differently labeled lines are maximally expensive.
    const LineSegment steep = seg(1.5, 0, 2.5, 1.2);
    CHECK(line_cost(a, steep, cfg) == doctest::Approx(100.0));
    const LineSegment other_cat = seg(1.5, 0, 3, 0, 1);
    CHECK(line_cost(a, other_cat, cfg) == doctest::Approx(100.0));

    // Just inside the angular gate the endpoint distance comes back.
    LineMatchConfig wide = cfg;
    wide.epsilon_angle = kPi / 3;
    CHECK(line_cost(a, steep, wide) == doctest::Approx(0.5));
}

TEST_CASE("lap assignment matches the exhaustive oracle") {
    const std::vector<std::vector<double>> example = {{1, 2}, {3, 0}};
    const LapResult res = lap_assign(example);
    CHECK(res.cost == doctest::Approx(1.0));
    REQUIRE(res.matches.size() == 2);
    CHECK(res.matches[0] == std::pair<int, int>(0, 0));
    CHECK(res.matches[1] == std::pair<int, int>(1, 1));

    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = 1 + static_cast<int>(rng.uniform_int(6));
        const int cols = 1 + static_cast<int>(rng.uniform_int(6));
        std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
        for (auto& row : m) {
            for (double& v : row) v = rng.uniform(0.0, 10.0);
        }
        const LapResult lap = lap_assign(m);
        CHECK(lap.cost == doctest::Approx(brute_force_lap(m)).epsilon(1e-12));
        CHECK(lap.matches.size() == static_cast<size_t>(std::min(rows, cols)));

        // Each row and column is used at most once.
        std::vector<int> row_used(rows, 0), col_used(cols, 0);
        double acc = 0;
        for (auto [r, c] : lap.matches) {
            ++row_used[r];
            ++col_used[c];
            acc += m[r][c];
        }
        CHECK(acc == doctest::Approx(lap.cost));
        CHECK(*std::max_element(row_used.begin(), row_used.end()) == 1);
        CHECK(*std::max_element(col_used.begin(), col_used.end()) <= 1);
    }
}

TEST_CASE("tau calibration doubles the median best cost") {
    CHECK(calibrate_tau({2.0, 4.0, 6.0}, 2.0, 1e-6) == doctest::Approx(8.0));
    CHECK(calibrate_tau({4.0, 2.0, 6.0}, 2.0, 1e-6) == doctest::Approx(8.0));
    CHECK(calibrate_tau({1.0, 3.0}, 2.0, 1e-6) == doctest::Approx(4.0));
    CHECK(calibrate_tau({}, 2.0, 1e-6) == doctest::Approx(1e-6));
    CHECK(calibrate_tau({0.0, 0.0, 0.0}, 2.0, 1e-6) == doctest::Approx(1e-6));
    CHECK(calibrate_tau({5.0}, 3.0, 1e-6) == doctest::Approx(15.0));
}

TEST_CASE("compatibility score rescales cost and saturates at tau") {
    CHECK(compatibility_score(0.0, 4.0) == doctest::Approx(1.0));
    CHECK(compatibility_score(2.0, 4.0) == doctest::Approx(0.5));
    CHECK(compatibility_score(4.0, 4.0) == doctest::Approx(0.0));
    CHECK(compatibility_score(9.0, 4.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(compatibility_score(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compatibility_score(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("coherent lines keep only segments reaching the contact zone") {
    LineMatchConfig cfg;
    cfg.coherence_band = 0.02;
    ProximityConfig prox;
    prox.mean_diameter = std::sqrt(2.0);

    // Border with the right-hand neighbor is x = 1.
    const Piece piece = square_piece(0, {
                                            seg(0.5, 0.2, 1.0, 0.4),
                                            seg(0.1, 0.1, 0.4, 0.3),
                                            seg(1.0, 0.9, 0.3, 0.8),
                                        });
    const PieceShape other{SquareCell{1.0}};
    const auto idx = coherent_line_indices(piece, other, strat(1, 0), cfg, prox);
    REQUIRE(idx.size() == 2);
    CHECK(idx[0] == 0);
    CHECK(idx[1] == 2);

    // The far border selects nothing; there is no contact zone at all.
    CHECK(coherent_line_indices(piece, other, strat(3, 0), cfg, prox).empty());
    // The left border touches none of the endpoints.
    CHECK(coherent_line_indices(piece, other, strat(-1, 0), cfg, prox).empty());
}

TEST_CASE("pair cost penalizes cardinality mismatch and flags empty zones") {
    LineMatchConfig cfg;
    cfg.cost_max = 10.0;
    cfg.penalty_k = 5.0;
    cfg.coherence_band = 0.02;
    ProximityConfig prox;
    prox.mean_diameter = std::sqrt(2.0);

    const Piece left = square_piece(0, {seg(0.2, 0.25, 1.0, 0.25), seg(0.3, 0.75, 1.0, 0.75)});
    const Piece right_full = square_piece(1, {seg(0.0, 0.25, 0.8, 0.25)});
    const Piece right_empty = square_piece(2, {});

    const PairCost pc = pair_cost(left, right_full, strat(1, 0), cfg, prox);
    CHECK_FALSE(pc.empty_contact);
    CHECK(pc.unmatched_count == 1);
    CHECK(pc.penalty == doctest::Approx(5.0));
    // One line pairs across the border at zero gap; the spare one pays k.
    CHECK(pc.lap_cost == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pc.total == doctest::Approx(pc.lap_cost + pc.penalty));
    REQUIRE(pc.matches.size() == 1);
    CHECK(pc.matches[0].first == 0);
    CHECK(pc.matches[0].second == 0);

    const PairCost empty = pair_cost(right_empty, right_empty, strat(1, 0), cfg, prox);
    CHECK(empty.empty_contact);

    // A one-sided zone still pays for every stranded line.
    const PairCost stranded = pair_cost(left, right_empty, strat(1, 0), cfg, prox);
    CHECK_FALSE(stranded.empty_contact);
    CHECK(stranded.unmatched_count == 2);
    CHECK(stranded.total == doctest::Approx(10.0));
}

TEST_CASE("pair cost stays within the assignment bound") {
    Rng rng(33);
    LineMatchConfig cfg;
    cfg.cost_max = 12.0;
    cfg.penalty_k = 6.0;
    cfg.coherence_band = 0.05;
    ProximityConfig prox;
    prox.mean_diameter = std::sqrt(2.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto random_lines = [&](int count) {
            std::vector<LineSegment> lines;
            for (int k = 0; k < count; ++k) {
                const Point2 a = {rng.uniform(), rng.uniform()};
                Point2 b = {rng.uniform(), rng.uniform()};
                while (distance(a, b) < 1e-3) b = {rng.uniform(), rng.uniform()};
                lines.push_back(LineSegment::from_endpoints(a, b, rng.uniform_int(2)));
            }
            return lines;
        };
        const Piece pi = square_piece(0, random_lines(1 + rng.uniform_int(5)));
        const Piece pj = square_piece(1, random_lines(1 + rng.uniform_int(5)));
        const PairCost pc = pair_cost(pi, pj, strat(1, 0), cfg, prox);
        if (pc.empty_contact) continue;
        CHECK(pc.lap_cost >= -1e-12);
        CHECK(pc.lap_cost <=
              cfg.cost_max * std::min(pi.lines.size(), pj.lines.size()) + 1e-9);
        CHECK(pc.total == doctest::Approx(pc.lap_cost + cfg.penalty_k * pc.unmatched_count));
    }
}

TEST_CASE("partial payoff tables sort, look up and dump deterministically") {
    PartialPayoffTable table(2, 4, 1.0, 2);
    table.add(0, 1, {1, 0, 0, 0.75});
    table.add(0, 1, {-1, 0, 1, 0.25});
    table.add(0, 1, {0, -1, 2, -1.0});
    table.add(1, 0, {-1, 0, 0, 0.75});
    table.finalize();

    CHECK(table.value(0, 1, 1, 0, 0) == doctest::Approx(0.75));
    CHECK(table.value(0, 1, -1, 0, 1) == doctest::Approx(0.25));
    CHECK(table.value(0, 1, 5, 5, 0) == doctest::Approx(0.0));
    CHECK(table.value(0, 0, 0, 0, 0) == doctest::Approx(-1.0));
    CHECK(table.stored_entries() == 4);

    const auto records = table.dump();
    REQUIRE(records.size() == 4);
    for (size_t k = 1; k < records.size(); ++k) {
        const auto& p = records[k - 1];
        const auto& q = records[k];
        const auto key = [](const PartialPayoffTable::DumpRecord& r) {
            return std::make_tuple(r.i, r.j, r.dx, r.dy, r.d_rotation);
        };
        CHECK(key(p) < key(q));
    }
}

TEST_CASE("two half canvas pieces score highest at the true joint") {
    const LineSet ls = generate_lines(200, 100, 14, 1, 51);
    for (int rotations : {1, 4}) {
        Puzzle p = cut_square(ls, 1, 2);
        p.rotation_count = rotations;
        const PartialPayoffTable table =
            build_payoff_table(p.pieces, p.proximity(), LineMatchConfig::for_puzzle(p));
        CHECK(table.tau() > 0.0);

        const RelativeStrategy truth = relative_between(
            p.ground_truth->poses[0], p.ground_truth->poses[1], rotations, p.grid_step);
        PayoffEntry best{0, 0, 0, -2.0};
        for (const PayoffEntry& e : table.entries(0, 1)) {
            if (e.value > best.value) best = e;
        }
        CAPTURE(rotations);
        CHECK(best.dx == truth.dx);
        CHECK(best.dy == truth.dy);
        CHECK(best.d_rotation == truth.d_rotation);
        CHECK(best.value > 0.0);
    }
}

TEST_CASE("payoff tables are symmetric and bounded") {
    const LineSet ls = generate_lines(400, 400, 20, 3, 52);
    PolygonalPattern pattern;
    pattern.rows = 4;
    pattern.cols = 4;
    Puzzle p = cut_polygonal(ls, pattern);
    p.rotation_count = 4;
    const Puzzle s = scramble(p, 3);
    const PartialPayoffTable table =
        build_payoff_table(s.pieces, s.proximity(), LineMatchConfig::for_puzzle(s));

    CHECK(table.stored_entries() > 0);
    for (int i = 0; i < s.piece_count(); ++i) {
        for (int j = 0; j < s.piece_count(); ++j) {
            for (const PayoffEntry& e : table.entries(i, j)) {
                CHECK(e.value >= -1.0);
                CHECK(e.value <= 1.0);
                CHECK(e.value != 0.0);
                const RelativeStrategy inv = inverse_strategy(
                    strat(e.dx, e.dy, e.d_rotation, s.grid_step), s.rotation_count);
                CHECK(table.value(j, i, inv.dx, inv.dy, inv.d_rotation) ==
                      doctest::Approx(e.value).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("payoff construction ignores thread count") {
    const LineSet ls = generate_lines(300, 300, 18, 2, 53);
    Puzzle p = cut_square(ls, 3, 3);
    p.rotation_count = 4;
    const auto solo = build_payoff_table(p.pieces, p.proximity(), LineMatchConfig::for_puzzle(p), 1);
    const auto multi =
        build_payoff_table(p.pieces, p.proximity(), LineMatchConfig::for_puzzle(p), 4);
    CHECK(solo.tau() == multi.tau());
    CHECK(same_dump(solo.dump(), multi.dump()));
}

TEST_CASE("consistent category relabeling leaves the table unchanged") {
    const LineSet ls = generate_lines(300, 300, 16, 3, 54);
    const Puzzle p = cut_square(ls, 3, 3);
    Puzzle relabeled = p;
    for (Piece& piece : relabeled.pieces) {
        for (LineSegment& l : piece.lines) l.category = (l.category + 1) % 3;
    }
    const auto base = build_payoff_table(p.pieces, p.proximity(), LineMatchConfig::for_puzzle(p));
    const auto moved = build_payoff_table(relabeled.pieces, relabeled.proximity(),
                                          LineMatchConfig::for_puzzle(relabeled));
    CHECK(base.tau() == moved.tau());
    CHECK(same_dump(base.dump(), moved.dump()));
}

TEST_CASE("blank pieces produce overlap entries only") {
    LineSet ls;
    ls.canvas_width = 300;
    ls.canvas_height = 300;
    ls.lines.push_back(seg(10, 10, 290, 290));
    Puzzle p = cut_square(ls, 3, 3);
    for (Piece& piece : p.pieces) piece.lines.clear();
    const auto table = build_payoff_table(p.pieces, p.proximity(), LineMatchConfig::for_puzzle(p));
    CHECK(table.stored_entries() > 0);
    for (const auto& rec : table.dump()) CHECK(rec.value == doctest::Approx(-1.0));
}
