#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pure/clustering.hpp"
#include "pure/geometry.hpp"

namespace pure {

struct Detection {
    BoundingBox box;
    int run_index = 0;
    std::optional<double> confidence;
    std::optional<std::string> class_label;
};

// All detections for one image across T Monte-Carlo runs.
struct PredictionSet {
    std::string image_id;
    int t_runs = 1;
    std::optional<double> dropout_ratio;
    std::vector<Detection> detections;
};

// Index order of the four box corners tracked per cluster.
enum Corner : std::size_t {
    kCornerX1Y1 = 0,
    kCornerX1Y2 = 1,
    kCornerX2Y1 = 2,
    kCornerX2Y2 = 3,
};

// One object hypothesis: the detections whose centers were grouped, with the
// per-corner point clouds and their convex-hull areas.
struct ObjectCluster {
    int cluster_id = 0;
    std::vector<Detection> members;
    std::array<std::vector<Point2>, 4> corner_points;
    std::array<double, 4> corner_areas{};
    // Mean of the four corner hull areas, in squared pixels.
    double cluster_uncertainty = 0.0;
};

struct UncertaintyReport {
    std::string image_id;
    std::vector<ObjectCluster> clusters;
    int noise_count = 0;
    // Unweighted mean of cluster uncertainties; present iff defined.
    std::optional<double> uncertainty;
    bool defined = false;
};

// Per-cluster component-wise mean of member boxes; the predictive-mean box.
struct RepresentativeBox {
    int cluster_id = 0;
    BoundingBox box;
};

// One center per detection, paired with the detection's index, in input order.
std::vector<std::pair<Point2, std::size_t>> collect_centers(const PredictionSet& ps);

// The full per-image measurement: cluster centers, build the four per-corner
// hulls per cluster, average their areas per cluster and across clusters.
// Noise detections are excluded from clusters but counted. Zero clusters
// (including zero detections) yields defined == false.
UncertaintyReport quantify(const PredictionSet& ps, const DbscanParams& params);

// Requires report.defined. Output is ordered by cluster_id. Throws
// DegenerateBox if a mean box collapses (possible only with invalid members).
std::vector<RepresentativeBox> representative_boxes(const UncertaintyReport& report);

// Sample variance, the single-output baseline. Throws InsufficientSamples
// when fewer than two values are given.
double prediction_variance(std::span<const double> values);

}  // namespace pure
