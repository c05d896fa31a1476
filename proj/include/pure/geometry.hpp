#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace pure {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

// Axis-aligned box in pixel coordinates, (x1,y1) top-left, (x2,y2) bottom-right.
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    bool valid() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
               std::isfinite(y2) && x1 < x2 && y1 < y2;
    }
    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
};

// Convex polygon, vertices counter-clockwise. Fewer than 3 vertices is the
// degenerate case (point or segment) and has zero area.
struct Polygon {
    std::vector<Point2> vertices;
};

// Cross product of (a - o) x (b - o). Positive means a counter-clockwise turn.
double cross(const Point2& o, const Point2& a, const Point2& b);

Point2 box_center(const BoundingBox& b);

// Minimal convex polygon containing all points (monotone chain). Hull vertices
// are a subset of the input; duplicates and collinear boundary points are
// dropped. Throws EmptyInput on an empty list.
Polygon convex_hull(std::span<const Point2> points);

// Shoelace area. Degenerate polygons (< 3 vertices) return exactly 0.
double polygon_area(const Polygon& p);

// Intersection over union of two valid boxes, in [0, 1].
double iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace pure
