#include "pure/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pure/errors.hpp"
#include "pure/rng.hpp"

namespace pure {
namespace {

// Twice the default clustering radius: objects this far apart always land in
// distinct clusters.
constexpr double kMinSeparation = 200.0;
constexpr int kPlacementAttempts = 200;
constexpr int kSceneRestarts = 50;

void validate(const SceneSpec& spec) {
    if (!(spec.image_width > 0.0) || !(spec.image_height > 0.0))
        throw std::invalid_argument("image dimensions must be positive");
    if (spec.min_objects < 1 || spec.max_objects < spec.min_objects)
        throw std::invalid_argument("object count range is empty");
    if (!(spec.min_box_size > 0.0) || spec.max_box_size < spec.min_box_size)
        throw std::invalid_argument("box size range is empty");
    if (spec.max_box_size > spec.image_width || spec.max_box_size > spec.image_height)
        throw std::invalid_argument("box size range exceeds image bounds");
}

void validate(const NoiseModel& noise) {
    if (!(noise.corner_sigma >= 0.0))
        throw std::invalid_argument("corner_sigma must be >= 0");
    if (!(noise.miss_rate >= 0.0 && noise.miss_rate < 1.0))
        throw std::invalid_argument("miss_rate must lie in [0, 1)");
    if (!(noise.spurious_rate >= 0.0))
        throw std::invalid_argument("spurious_rate must be >= 0");
}

BoundingBox draw_box(CounterRng& rng, const SceneSpec& spec) {
    const double w = rng.next_uniform(spec.min_box_size, spec.max_box_size);
    const double h = rng.next_uniform(spec.min_box_size, spec.max_box_size);
    const double x1 = rng.next_uniform(0.0, spec.image_width - w);
    const double y1 = rng.next_uniform(0.0, spec.image_height - h);
    return {x1, y1, x1 + w, y1 + h};
}

}  // namespace

GroundTruthSet generate_scene(const SceneSpec& spec, const std::string& image_id) {
    validate(spec);
    if (image_id.empty()) throw std::invalid_argument("image_id must be non-empty");

    CounterRng rng(spec.seed);
    const int n_objects = rng.next_int(spec.min_objects, spec.max_objects);

    for (int restart = 0; restart < kSceneRestarts; ++restart) {
        std::vector<BoundingBox> boxes;
        std::vector<Point2> centers;
        boxes.reserve(static_cast<std::size_t>(n_objects));
        bool failed = false;
        for (int i = 0; i < n_objects && !failed; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
                const BoundingBox box = draw_box(rng, spec);
                const Point2 c = box_center(box);
                const bool clear = std::all_of(centers.begin(), centers.end(), [&](const Point2& o) {
                    const double dx = c.x - o.x;
                    const double dy = c.y - o.y;
                    return dx * dx + dy * dy > kMinSeparation * kMinSeparation;
                });
                if (clear) {
                    boxes.push_back(box);
                    centers.push_back(c);
                    placed = true;
                    break;
                }
            }
            if (!placed) failed = true;
        }
        if (!failed) {
            GroundTruthSet out;
            out.image_id = image_id;
            out.boxes = std::move(boxes);
            return out;
        }
    }
    throw InfeasibleScene("could not place " + std::to_string(n_objects) +
                          " boxes with separation > " + std::to_string(kMinSeparation) +
                          " px in " + image_id);
}

PredictionSet simulate_runs(const GroundTruthSet& truths, const SceneSpec& spec,
                            const NoiseModel& noise, int t_runs) {
    validate(spec);
    validate(noise);
    if (t_runs < 1) throw std::invalid_argument("t_runs must be >= 1");
    if (truths.image_id.empty()) throw std::invalid_argument("image_id must be non-empty");

    const double w_max = spec.image_width;
    const double h_max = spec.image_height;
    const bool labelled =
        truths.class_labels && truths.class_labels->size() == truths.boxes.size();

    PredictionSet out;
    out.image_id = truths.image_id;
    out.t_runs = t_runs;

    CounterRng rng(noise.seed);
    for (int run = 0; run < t_runs; ++run) {
        for (std::size_t i = 0; i < truths.boxes.size(); ++i) {
            const bool miss = rng.next_unit() < noise.miss_rate;
            const double jx1 = rng.next_gaussian(noise.corner_sigma);
            const double jy1 = rng.next_gaussian(noise.corner_sigma);
            const double jx2 = rng.next_gaussian(noise.corner_sigma);
            const double jy2 = rng.next_gaussian(noise.corner_sigma);
            if (miss) continue;

            const BoundingBox& t = truths.boxes[i];
            BoundingBox b;
            b.x1 = std::clamp(t.x1 + jx1, 0.0, w_max - 1.0);
            b.y1 = std::clamp(t.y1 + jy1, 0.0, h_max - 1.0);
            b.x2 = std::clamp(t.x2 + jx2, b.x1 + 1.0, w_max);
            b.y2 = std::clamp(t.y2 + jy2, b.y1 + 1.0, h_max);

            Detection d;
            d.box = b;
            d.run_index = run;
            if (labelled) d.class_label = (*truths.class_labels)[i];
            out.detections.push_back(std::move(d));
        }
        const int spurious = rng.next_poisson(noise.spurious_rate);
        for (int s = 0; s < spurious; ++s) {
            Detection d;
            d.box = draw_box(rng, spec);
            d.run_index = run;
            out.detections.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace pure
