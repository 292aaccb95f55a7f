#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linejigsaw/geometry.hpp"
#include "linejigsaw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace linejigsaw;

namespace {

Polygon unit_square_at(double x, double y, double side = 1.0) {
    return {{x, y}, {x + side, y}, {x + side, y + side}, {x, y + side}};
}

// Axis-aligned rectangle intersection, the closed-form oracle for the
// polygon clipper on rectangular inputs.
double rect_overlap(double ax, double ay, double aw, double ah, double bx, double by, double bw,
                    double bh) {
    const double w = std::min(ax + aw, bx + bw) - std::max(ax, bx);
    const double h = std::min(ay + ah, by + bh) - std::max(ay, by);
    if (w <= 0 || h <= 0) return 0.0;
    return w * h;
}

// Random convex polygon: sorted angles on a circle of random radius.
Polygon random_convex(Rng& rng, Point2 centre, double scale) {
    const int n = 3 + static_cast<int>(rng.uniform_int(5));
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.uniform(0.0, 2.0 * kPi);
    std::sort(angles.begin(), angles.end());
    const double r = scale * (0.5 + rng.uniform());
    Polygon poly;
    for (double a : angles) {
        poly.push_back({centre.x + r * std::cos(a), centre.y + r * std::sin(a)});
    }
    return poly;
}

// Monte Carlo area of the intersection of two polygons over a bounding box.
double sampled_intersection(const Polygon& a, const Polygon& b, Rng& rng, int samples) {
    BBox box = BBox::of(a);
    const BBox other = BBox::of(b);
    box.min_x = std::max(box.min_x, other.min_x);
    box.min_y = std::max(box.min_y, other.min_y);
    box.max_x = std::min(box.max_x, other.max_x);
    box.max_y = std::min(box.max_y, other.max_y);
    if (box.width() <= 0 || box.height() <= 0) return 0.0;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        const Point2 p{box.min_x + rng.uniform() * box.width(),
                       box.min_y + rng.uniform() * box.height()};
        if (point_in_polygon(p, a) && point_in_polygon(p, b)) ++hits;
    }
    return box.width() * box.height() * hits / samples;
}

}  // namespace

TEST_CASE("orientation wraps into the half-turn range") {
    CHECK(wrap_orientation(0.3) == doctest::Approx(0.3));
    CHECK(wrap_orientation(kPi + 0.3) == doctest::Approx(0.3));
    CHECK(wrap_orientation(-0.3) == doctest::Approx(kPi - 0.3));
    CHECK(wrap_orientation(5.0 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(-50.0, 50.0);
        const double w = wrap_orientation(a);
        CHECK(w >= 0.0);
        CHECK(w < kPi);
        CHECK(std::fabs(std::sin(w - a)) < 1e-9);
    }
}

TEST_CASE("segment orientation ignores endpoint order") {
    const Point2 a{0, 0};
    const Point2 b{1, 1};
    CHECK(segment_orientation(a, b) == doctest::Approx(kPi / 4));
    CHECK(segment_orientation(b, a) == doctest::Approx(kPi / 4));
    CHECK(segment_orientation({0, 0}, {-2, 0}) == doctest::Approx(0.0));
    CHECK(segment_orientation({0, 0}, {0, 3}) == doctest::Approx(kPi / 2));
}

TEST_CASE("orientation difference folds to the nearest half turn") {
    CHECK(orientation_difference(0.1, kPi - 0.1) == doctest::Approx(0.2));
    CHECK(orientation_difference(0.0, kPi / 2) == doctest::Approx(kPi / 2));
    CHECK(orientation_difference(1.0, 1.0 + 4 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const double d = orientation_difference(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
        CHECK(d >= 0.0);
        CHECK(d <= kPi / 2 + 1e-12);
    }
}

TEST_CASE("line segments reject degenerate and non-finite endpoints") {
    CHECK_THROWS_AS(LineSegment::from_endpoints({1, 1}, {1, 1}, 0), std::invalid_argument);
    CHECK_THROWS_AS(LineSegment::from_endpoints({0, 0}, {1, std::nan("")}, 0),
                    std::invalid_argument);
    const LineSegment seg = LineSegment::from_endpoints({0, 0}, {3, 4}, 2);
    CHECK(seg.length() == doctest::Approx(5.0));
    CHECK(seg.category == 2);
    CHECK(seg.angle == doctest::Approx(std::atan2(4.0, 3.0)));
}

TEST_CASE("signed area tracks winding and area drops the sign") {
    const Polygon ccw = unit_square_at(0, 0, 2.0);
    Polygon cw = ccw;
    std::reverse(cw.begin(), cw.end());
    CHECK(polygon_signed_area(ccw) == doctest::Approx(4.0));
    CHECK(polygon_signed_area(cw) == doctest::Approx(-4.0));
    CHECK(polygon_area(cw) == doctest::Approx(4.0));
}

TEST_CASE("point in polygon handles convex and concave shapes") {
    const Polygon square = unit_square_at(0, 0);
    CHECK(point_in_polygon({0.5, 0.5}, square));
    CHECK_FALSE(point_in_polygon({1.5, 0.5}, square));
    CHECK_FALSE(point_in_polygon({-0.1, 0.5}, square));

    // L-shape with the notch at the top right.
    const Polygon ell = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    CHECK(point_in_polygon({0.5, 1.5}, ell));
    CHECK(point_in_polygon({1.5, 0.5}, ell));
    CHECK_FALSE(point_in_polygon({1.5, 1.5}, ell));
}

TEST_CASE("point to segment distance covers interior feet and endpoints") {
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(point_segment_distance({3, 4}, {-1, 0}, {1, 0}) == doctest::Approx(std::hypot(2.0, 4.0)));
    CHECK(point_segment_distance({0.25, 0}, {0, 0}, {1, 0}) == doctest::Approx(0.0));
    // Degenerate segment falls back to point distance.
    CHECK(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
}

TEST_CASE("triangulation preserves area for convex and concave polygons") {
    const Polygon ell = {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}};
    std::vector<Polygon> shapes = {unit_square_at(0, 0, 2.0), ell};
    Rng rng(13);
    for (int i = 0; i < 20; ++i) shapes.push_back(random_convex(rng, {0, 0}, 2.0));
    for (const Polygon& poly : shapes) {
        const auto tris = triangulate(poly);
        CHECK(tris.size() == poly.size() - 2);
        double acc = 0.0;
        for (const auto& t : tris) acc += polygon_area({t[0], t[1], t[2]});
        CHECK(acc == doctest::Approx(polygon_area(poly)).epsilon(1e-9));
    }
}

TEST_CASE("convex clipping matches rectangle intersection") {
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const double ax = rng.uniform(-2.0, 2.0);
        const double ay = rng.uniform(-2.0, 2.0);
        const double bx = rng.uniform(-2.0, 2.0);
        const double by = rng.uniform(-2.0, 2.0);
        const double aw = rng.uniform(0.5, 2.0);
        const double ah = rng.uniform(0.5, 2.0);
        const double bw = rng.uniform(0.5, 2.0);
        const double bh = rng.uniform(0.5, 2.0);
        const Polygon clipped =
            clip_convex(unit_square_at(ax, ay, 1.0), unit_square_at(bx, by, 1.0));
        // Re-run through the area helper with real extents for the oracle.
        const Polygon a = {{ax, ay}, {ax + aw, ay}, {ax + aw, ay + ah}, {ax, ay + ah}};
        const Polygon b = {{bx, by}, {bx + bw, by}, {bx + bw, by + bh}, {bx, by + bh}};
        CHECK(polygon_intersection_area(a, b) ==
              doctest::Approx(rect_overlap(ax, ay, aw, ah, bx, by, bw, bh)).epsilon(1e-9));
        if (!clipped.empty()) {
            CHECK(polygon_area(clipped) ==
                  doctest::Approx(rect_overlap(ax, ay, 1, 1, bx, by, 1, 1)).epsilon(1e-9));
        } else {
            CHECK(rect_overlap(ax, ay, 1, 1, bx, by, 1, 1) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("intersection area agrees with a sampling estimate on convex pairs") {
    Rng shapes(15);
    Rng samples(16);
    for (int i = 0; i < 12; ++i) {
        const Polygon a = random_convex(shapes, {0, 0}, 1.5);
        const Polygon b =
            random_convex(shapes, {shapes.uniform(-1.0, 1.0), shapes.uniform(-1.0, 1.0)}, 1.5);
        const double exact = polygon_intersection_area(a, b);
        const double estimate = sampled_intersection(a, b, samples, 60000);
        CHECK(exact == doctest::Approx(estimate).epsilon(0.05).scale(0.1));
    }
}

TEST_CASE("intersection area is symmetric and bounded by both operands") {
    Rng rng(17);
    for (int i = 0; i < 40; ++i) {
        const Polygon a = random_convex(rng, {0, 0}, 1.5);
        const Polygon b = random_convex(rng, {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)}, 1.5);
        const double ab = polygon_intersection_area(a, b);
        const double ba = polygon_intersection_area(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
        CHECK(ab <= polygon_area(a) + 1e-9);
        CHECK(ab <= polygon_area(b) + 1e-9);
        CHECK(ab >= 0.0);
    }
    const Polygon a = unit_square_at(0, 0);
    CHECK(polygon_intersection_area(a, a) == doctest::Approx(1.0));
    CHECK(polygon_intersection_area(a, unit_square_at(5, 5)) == doctest::Approx(0.0));
}

TEST_CASE("rotations apply, invert and preserve norms") {
    const Rotation2 rot = Rotation2::from_angle(kPi / 3);
    const Point2 p{2.0, -1.0};
    const Point2 q = rot.apply(p);
    CHECK(norm(q) == doctest::Approx(norm(p)));
    const Point2 back = rot.inverse().apply(q);
    CHECK(back.x == doctest::Approx(p.x));
    CHECK(back.y == doctest::Approx(p.y));
    const Point2 r = Rotation2::from_angle(kPi / 2).apply({1, 0});
    CHECK(r.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.y == doctest::Approx(1.0));
}

TEST_CASE("bounding boxes expand to cover points and report extents") {
    const BBox box = BBox::of({{1, 2}, {4, 6}, {2, 3}});
    CHECK(box.min_x == doctest::Approx(1.0));
    CHECK(box.max_y == doctest::Approx(6.0));
    CHECK(box.width() == doctest::Approx(3.0));
    CHECK(box.height() == doctest::Approx(4.0));
    CHECK(box.diagonal() == doctest::Approx(5.0));
    BBox grown = box;
    grown.expand({10, -2});
    CHECK(grown.max_x == doctest::Approx(10.0));
    CHECK(grown.min_y == doctest::Approx(-2.0));
}
