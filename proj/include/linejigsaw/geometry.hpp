#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace linejigsaw {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Plane rotation kept as (cos, sin) so repeated application stays cheap.
struct Rotation2 {
    double c = 1.0;
    double s = 0.0;

    static Rotation2 from_angle(double radians) {
        return {std::cos(radians), std::sin(radians)};
    }
    Point2 apply(Point2 p) const { return {c * p.x - s * p.y, s * p.x + c * p.y}; }
    Rotation2 inverse() const { return {c, -s}; }
};

/// Wraps an angle into [0, pi). Line orientations are undirected.
double wrap_orientation(double radians);

/// Orientation of the direction b - a, in [0, pi).
double segment_orientation(Point2 a, Point2 b);

/// |a - b| compared modulo pi and folded into [0, pi/2].
double orientation_difference(double a, double b);

/// An annotated straight stroke: endpoints, undirected orientation and a
/// semantic category label.
struct LineSegment {
    Point2 a;
    Point2 b;
    double angle = 0.0;  // orientation of (b - a), wrapped to [0, pi)
    int category = 0;

    static LineSegment from_endpoints(Point2 a, Point2 b, int category);
    double length() const { return distance(a, b); }
};

// ---------------------------------------------------------------------------
// Polygon helpers. Polygons are ordered vertex lists, closed implicitly.
// ---------------------------------------------------------------------------

using Polygon = std::vector<Point2>;

double polygon_signed_area(const Polygon& poly);
double polygon_area(const Polygon& poly);
bool point_in_polygon(Point2 p, const Polygon& poly);
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Ear-clipping triangulation of a simple polygon (any winding).
std::vector<std::array<Point2, 3>> triangulate(const Polygon& poly);

/// Sutherland-Hodgman clip of `subject` against a convex CCW `clip` region.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Exact intersection area of two simple polygons (triangulate, clip, sum).
double polygon_intersection_area(const Polygon& a, const Polygon& b);

struct BBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    double diagonal() const { return std::hypot(width(), height()); }
    void expand(Point2 p);
    static BBox of(const Polygon& poly);
};

}  // namespace linejigsaw
