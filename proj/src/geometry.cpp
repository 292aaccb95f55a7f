#include "linejigsaw/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace linejigsaw {

double wrap_orientation(double radians) {
    double a = std::fmod(radians, kPi);
    if (a < 0) a += kPi;
    if (a >= kPi) a -= kPi;  // fmod can land exactly on pi after the +=
    return a;
}

double segment_orientation(Point2 a, Point2 b) {
    return wrap_orientation(std::atan2(b.y - a.y, b.x - a.x));
}

double orientation_difference(double a, double b) {
    double d = std::fabs(wrap_orientation(a) - wrap_orientation(b));
    return std::min(d, kPi - d);
}

LineSegment LineSegment::from_endpoints(Point2 a, Point2 b, int category) {
    if (a.x == b.x && a.y == b.y) {
        throw std::invalid_argument("degenerate line segment: identical endpoints");
    }
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) || !std::isfinite(b.y)) {
        throw std::invalid_argument("line segment endpoints must be finite");
    }
    LineSegment seg;
    seg.a = a;
    seg.b = b;
    seg.angle = segment_orientation(a, b);
    seg.category = category;
    return seg;
}

double polygon_signed_area(const Polygon& poly) {
    double acc = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        acc += cross(p, q);
    }
    return 0.5 * acc;
}

double polygon_area(const Polygon& poly) { return std::fabs(polygon_signed_area(poly)); }

bool point_in_polygon(Point2 p, const Polygon& poly) {
    // Crossing-parity test; points on the boundary may land either way.
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = poly[i];
        const Point2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 <= 0.0) return distance(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

namespace {

bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c, double eps) {
    const double d1 = cross(b - a, p - a);
    const double d2 = cross(c - b, p - b);
    const double d3 = cross(a - c, p - c);
    const bool has_neg = (d1 < -eps) || (d2 < -eps) || (d3 < -eps);
    const bool has_pos = (d1 > eps) || (d2 > eps) || (d3 > eps);
    return !(has_neg && has_pos);
}

}  // namespace

std::vector<std::array<Point2, 3>> triangulate(const Polygon& poly) {
    std::vector<std::array<Point2, 3>> tris;
    if (poly.size() < 3) return tris;

    Polygon verts = poly;
    if (polygon_signed_area(verts) < 0) std::reverse(verts.begin(), verts.end());

    const double scale = BBox::of(verts).diagonal();
    const double eps = 1e-12 * std::max(scale * scale, 1.0);

    size_t guard = 0;
    const size_t guard_max = verts.size() * verts.size() + 16;
    while (verts.size() > 3) {
        bool clipped = false;
        const size_t n = verts.size();
        for (size_t i = 0; i < n; ++i) {
            const Point2 prev = verts[(i + n - 1) % n];
            const Point2 cur = verts[i];
            const Point2 next = verts[(i + 1) % n];
            const double conv = cross(cur - prev, next - cur);
            if (conv <= eps) continue;  // reflex or collinear corner
            bool ear = true;
            for (size_t j = 0; j < n; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                if (point_in_triangle(verts[j], prev, cur, next, eps)) {
                    ear = false;
                    break;
                }
            }
            if (!ear) continue;
            tris.push_back({prev, cur, next});
            verts.erase(verts.begin() + static_cast<long>(i));
            clipped = true;
            break;
        }
        if (!clipped) {
            // Collinear runs can leave no strictly convex ear; drop the
            // flattest corner and keep going.
            size_t flattest = 0;
            double best = std::numeric_limits<double>::max();
            for (size_t i = 0; i < verts.size(); ++i) {
                const size_t n2 = verts.size();
                const Point2 prev = verts[(i + n2 - 1) % n2];
                const Point2 next = verts[(i + 1) % n2];
                const double c = std::fabs(cross(verts[i] - prev, next - verts[i]));
                if (c < best) {
                    best = c;
                    flattest = i;
                }
            }
            verts.erase(verts.begin() + static_cast<long>(flattest));
            if (verts.size() < 3) break;
        }
        if (++guard > guard_max) throw std::invalid_argument("triangulate: polygon is not simple");
    }
    if (verts.size() == 3) tris.push_back({verts[0], verts[1], verts[2]});
    return tris;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    Polygon output = subject;
    const size_t m = clip.size();
    for (size_t i = 0; i < m && !output.empty(); ++i) {
        const Point2 a = clip[i];
        const Point2 b = clip[(i + 1) % m];
        const Point2 edge = b - a;
        Polygon input;
        input.swap(output);
        const size_t n = input.size();
        for (size_t j = 0; j < n; ++j) {
            const Point2 p = input[j];
            const Point2 q = input[(j + 1) % n];
            const double sp = cross(edge, p - a);
            const double sq = cross(edge, q - a);
            const bool in_p = sp >= 0.0;
            const bool in_q = sq >= 0.0;
            if (in_p) output.push_back(p);
            if (in_p != in_q) {
                const double t = sp / (sp - sq);
                output.push_back(p + (q - p) * t);
            }
        }
    }
    return output;
}

double polygon_intersection_area(const Polygon& a, const Polygon& b) {
    if (a.size() < 3 || b.size() < 3) return 0.0;
    const auto tris_a = triangulate(a);
    const auto tris_b = triangulate(b);
    double total = 0.0;
    for (const auto& ta : tris_a) {
        Polygon pa = {ta[0], ta[1], ta[2]};
        if (polygon_signed_area(pa) < 0) std::reverse(pa.begin(), pa.end());
        for (const auto& tb : tris_b) {
            Polygon pb = {tb[0], tb[1], tb[2]};
            if (polygon_signed_area(pb) < 0) std::reverse(pb.begin(), pb.end());
            const Polygon inter = clip_convex(pa, pb);
            if (inter.size() >= 3) total += polygon_area(inter);
        }
    }
    return total;
}

void BBox::expand(Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
}

BBox BBox::of(const Polygon& poly) {
    BBox box;
    if (poly.empty()) return box;
    box.min_x = box.max_x = poly[0].x;
    box.min_y = box.max_y = poly[0].y;
    for (const Point2& p : poly) box.expand(p);
    return box;
}

}  // namespace linejigsaw
