#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pure/geometry.hpp"
#include "pure/rng.hpp"

namespace testutil {

inline std::vector<pure::Point2> random_points(pure::CounterRng& rng, std::size_t n, double lo,
                                               double hi) {
    std::vector<pure::Point2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.next_uniform(lo, hi), rng.next_uniform(lo, hi)});
    return pts;
}

inline pure::BoundingBox random_box(pure::CounterRng& rng, double extent, double max_side) {
    const double w = rng.next_uniform(1.0, max_side);
    const double h = rng.next_uniform(1.0, max_side);
    const double x1 = rng.next_uniform(0.0, extent - w);
    const double y1 = rng.next_uniform(0.0, extent - h);
    return {x1, y1, x1 + w, y1 + h};
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double rel) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= rel * std::max(scale, 1.0);
}

}  // namespace testutil
