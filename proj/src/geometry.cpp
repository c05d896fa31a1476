#include "pure/geometry.hpp"

#include <algorithm>
#include <cassert>

#include "pure/errors.hpp"

namespace pure {

namespace {

// Absolute tolerance for orientation predicates. Collinear-within-tolerance
// points are treated as non-turns and dropped from hull boundaries.
constexpr double kOrientEps = 1e-9;

bool lex_less(const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point2 box_center(const BoundingBox& b) {
    assert(b.valid());
    return {b.x1 + (b.x2 - b.x1) / 2.0, b.y1 + (b.y2 - b.y1) / 2.0};
}

Polygon convex_hull(std::span<const Point2> points) {
    if (points.empty()) {
        throw EmptyInput("convex_hull: no points");
    }

    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());

    const std::size_t n = pts.size();
    if (n <= 2) {
        return Polygon{std::move(pts)};
    }

    // Andrew's monotone chain; strict turns only, so collinear points never
    // land on the boundary. Output is counter-clockwise.
    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= kOrientEps) {
            --k;
        }
        hull[k++] = pts[i];
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower_end && cross(hull[k - 2], hull[k - 1], pts[i]) <= kOrientEps) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return Polygon{std::move(hull)};
}

double polygon_area(const Polygon& p) {
    const auto& v = p.vertices;
    if (v.size() < 3) {
        return 0.0;
    }
    double twice_area = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        twice_area += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice_area) / 2.0;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    assert(a.valid() && b.valid());
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

}  // namespace pure
