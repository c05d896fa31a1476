#include "pure/clustering.hpp"

#include <cstddef>
#include <deque>
#include <stdexcept>

#include "pure/errors.hpp"

namespace pure {

namespace {

constexpr int kUnvisited = -2;

}  // namespace

ClusterAssignment dbscan(std::span<const Point2> points, const DbscanParams& params) {
    if (points.empty()) {
        throw EmptyInput("dbscan: no points");
    }
    if (!(params.epsilon > 0.0)) {
        throw std::invalid_argument("dbscan: epsilon must be > 0");
    }
    if (params.min_samples < 1) {
        throw std::invalid_argument("dbscan: min_samples must be >= 1");
    }

    const std::size_t n = points.size();
    const double eps_sq = params.epsilon * params.epsilon;

    // Neighbor lists are independent per point; this is the O(n^2) hot spot.
    std::vector<std::vector<std::uint32_t>> neighbors(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        auto& list = neighbors[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = points[i].x - points[j].x;
            const double dy = points[i].y - points[j].y;
            if (dx * dx + dy * dy <= eps_sq) {
                list.push_back(static_cast<std::uint32_t>(j));
            }
        }
    }

    ClusterAssignment out;
    out.labels.assign(n, kUnvisited);
    out.core.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out.core[i] = neighbors[i].size() >= static_cast<std::size_t>(params.min_samples);
    }

    int cid = 0;
    std::deque<std::uint32_t> seeds;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] != kUnvisited) {
            continue;
        }
        if (!out.core[i]) {
            out.labels[i] = kNoise;
            continue;
        }
        out.labels[i] = cid;
        seeds.assign(neighbors[i].begin(), neighbors[i].end());
        while (!seeds.empty()) {
            const std::uint32_t j = seeds.front();
            seeds.pop_front();
            if (out.labels[j] == kNoise) {
                out.labels[j] = cid;  // border point claimed by this cluster
            }
            if (out.labels[j] != kUnvisited) {
                continue;
            }
            out.labels[j] = cid;
            if (out.core[j]) {
                seeds.insert(seeds.end(), neighbors[j].begin(), neighbors[j].end());
            }
        }
        ++cid;
    }
    out.n_clusters = cid;
    return out;
}

}  // namespace pure
