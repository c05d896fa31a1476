#include "pure/surface.hpp"

#include <string>

#include "pure/errors.hpp"

namespace pure {

std::vector<std::pair<Point2, std::size_t>> collect_centers(const PredictionSet& ps) {
    std::vector<std::pair<Point2, std::size_t>> centers;
    centers.reserve(ps.detections.size());
    for (std::size_t i = 0; i < ps.detections.size(); ++i) {
        centers.emplace_back(box_center(ps.detections[i].box), i);
    }
    return centers;
}

UncertaintyReport quantify(const PredictionSet& ps, const DbscanParams& params) {
    UncertaintyReport report;
    report.image_id = ps.image_id;
    if (ps.detections.empty()) {
        return report;
    }

    const auto centers = collect_centers(ps);
    std::vector<Point2> points;
    points.reserve(centers.size());
    for (const auto& [c, idx] : centers) {
        points.push_back(c);
    }
    const ClusterAssignment assignment = dbscan(points, params);

    report.clusters.resize(assignment.n_clusters);
    for (int cid = 0; cid < assignment.n_clusters; ++cid) {
        report.clusters[cid].cluster_id = cid;
    }
    for (std::size_t i = 0; i < ps.detections.size(); ++i) {
        const int label = assignment.labels[i];
        if (label == kNoise) {
            ++report.noise_count;
            continue;
        }
        const Detection& d = ps.detections[i];
        ObjectCluster& cluster = report.clusters[label];
        cluster.members.push_back(d);
        cluster.corner_points[kCornerX1Y1].push_back({d.box.x1, d.box.y1});
        cluster.corner_points[kCornerX1Y2].push_back({d.box.x1, d.box.y2});
        cluster.corner_points[kCornerX2Y1].push_back({d.box.x2, d.box.y1});
        cluster.corner_points[kCornerX2Y2].push_back({d.box.x2, d.box.y2});
    }

    double total = 0.0;
    for (ObjectCluster& cluster : report.clusters) {
        double corner_sum = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            cluster.corner_areas[c] = polygon_area(convex_hull(cluster.corner_points[c]));
            corner_sum += cluster.corner_areas[c];
        }
        cluster.cluster_uncertainty = corner_sum / 4.0;
        total += cluster.cluster_uncertainty;
    }

    if (!report.clusters.empty()) {
        report.defined = true;
        report.uncertainty = total / static_cast<double>(report.clusters.size());
    }
    return report;
}

std::vector<RepresentativeBox> representative_boxes(const UncertaintyReport& report) {
    std::vector<RepresentativeBox> boxes;
    boxes.reserve(report.clusters.size());
    for (const ObjectCluster& cluster : report.clusters) {
        const double n = static_cast<double>(cluster.members.size());
        BoundingBox mean;
        for (const Detection& d : cluster.members) {
            mean.x1 += d.box.x1;
            mean.y1 += d.box.y1;
            mean.x2 += d.box.x2;
            mean.y2 += d.box.y2;
        }
        mean.x1 /= n;
        mean.y1 /= n;
        mean.x2 /= n;
        mean.y2 /= n;
        if (!mean.valid()) {
            throw DegenerateBox("representative box for cluster " +
                                std::to_string(cluster.cluster_id) +
                                " collapses to an empty box");
        }
        boxes.push_back({cluster.cluster_id, mean});
    }
    return boxes;
}

double prediction_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw InsufficientSamples("prediction_variance: need at least 2 values");
    }
    // Welford's online moments.
    double mean = 0.0;
    double m2 = 0.0;
    double count = 0.0;
    for (const double v : values) {
        count += 1.0;
        const double delta = v - mean;
        mean += delta / count;
        m2 += delta * (v - mean);
    }
    return m2 / (count - 1.0);
}

}  // namespace pure
