#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pure/geometry.hpp"

namespace pure {

// Label given to points that belong to no cluster.
inline constexpr int kNoise = -1;

struct DbscanParams {
    double epsilon = 100.0;
    int min_samples = 3;
};

struct ClusterAssignment {
    // Per-point cluster id (contiguous from 0) or kNoise.
    std::vector<int> labels;
    // Per-point core flag: at least min_samples neighbors within epsilon,
    // the point itself included.
    std::vector<std::uint8_t> core;
    int n_clusters = 0;
};

// DBSCAN over 2D points with Euclidean distance. The neighborhood test is
// squared distance <= epsilon^2, the point itself included. Points are
// processed in input order, so runs are reproducible bit-for-bit; border
// points join the first cluster whose expansion reaches them in that order.
// Neighbor queries are computed in parallel; the result is identical to the
// sequential scan. Throws EmptyInput when points is empty.
ClusterAssignment dbscan(std::span<const Point2> points, const DbscanParams& params);

}  // namespace pure
