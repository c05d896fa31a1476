#pragma once

#include <cstdint>
#include <string>

#include "pure/detmetrics.hpp"
#include "pure/surface.hpp"

namespace pure {

// Scene geometry for synthetic ground truth. Object count is drawn from
// [min_objects, max_objects], box side lengths from [min_box_size,
// max_box_size], both uniformly.
struct SceneSpec {
    double image_width = 1280.0;
    double image_height = 720.0;
    int min_objects = 2;
    int max_objects = 6;
    double min_box_size = 40.0;
    double max_box_size = 160.0;
    std::uint64_t seed = 0;
};

// Perturbation applied per simulated detection run: every ground-truth box
// is dropped with probability miss_rate, surviving corners get independent
// Gaussian(0, corner_sigma) jitter, and Poisson(spurious_rate) false boxes
// are placed uniformly.
struct NoiseModel {
    double corner_sigma = 0.0;
    double miss_rate = 0.0;
    double spurious_rate = 0.0;
    std::uint64_t seed = 0;
};

// Places boxes with pairwise center separation > 200 px so each object maps
// to its own cluster under the default radius. Restarts placement a bounded
// number of times before giving up with InfeasibleScene. Deterministic per
// spec.seed. Throws std::invalid_argument on out-of-range spec fields.
GroundTruthSet generate_scene(const SceneSpec& spec, const std::string& image_id);

// Produces t_runs perturbed copies of the scene. The draw order per run is
// fixed: for each truth box in order, one uniform miss decision, then four
// Gaussian offsets for x1, y1, x2, y2 (drawn even when the box is missed,
// so the stream position never depends on the decisions); then one Poisson
// count and per spurious box four uniforms (width, height, x1, y1).
// Jittered corners clamp to image bounds with a 1-pixel validity floor.
// With a fixed noise.seed the offset stream is identical across
// corner_sigma levels, so sweeps are exactly paired. Deterministic per
// noise.seed. Throws std::invalid_argument on invalid noise fields or
// t_runs < 1.
PredictionSet simulate_runs(const GroundTruthSet& truths, const SceneSpec& spec,
                            const NoiseModel& noise, int t_runs);

}  // namespace pure
