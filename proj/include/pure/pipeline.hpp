#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pure/clustering.hpp"
#include "pure/detmetrics.hpp"
#include "pure/io.hpp"
#include "pure/simulator.hpp"
#include "pure/surface.hpp"

namespace pure {

// Batch uncertainty rows, sorted by image_id. parallel toggles the OpenMP
// path over images; both paths produce identical rows.
std::vector<ReportRow> quantify_images(std::span<const PredictionSet> sets,
                                       const DbscanParams& params, bool parallel = true);

// Full evaluation: uncertainty plus detection metrics of the representative
// boxes against ground truth keyed by image_id.
struct EvaluationBatch {
    std::vector<ReportRow> rows;             // sorted by image_id
    std::vector<EvaluationRecord> records;   // evaluated images only, same order
};

// Throws MissingGroundTruth when an image has no ground-truth entry, unless
// allow_missing, which leaves that image's metric columns empty.
EvaluationBatch evaluate_images(std::span<const PredictionSet> sets,
                                const std::map<std::string, GroundTruthSet>& truths,
                                const DbscanParams& params, double iou_threshold,
                                bool allow_missing = false, bool parallel = true);

// Cluster-granularity correlation samples: each cluster contributes its own
// uncertainty and the IoU its representative box achieved in the greedy
// match (0 for unmatched representatives).
struct ObjectPair {
    double uncertainty = 0.0;
    double iou = 0.0;
};

std::vector<ObjectPair> per_object_pairs(std::span<const PredictionSet> sets,
                                         const std::map<std::string, GroundTruthSet>& truths,
                                         const DbscanParams& params,
                                         bool allow_missing = false);

// Synthetic dataset with image ids img_000000, img_000001, ... Scene i uses
// seed derive(spec.seed, 2i) and noise seed derive(noise.seed, 2i+1), so a
// fixed spec seed pins the scenes while noise parameters vary freely.
struct SimulatedDataset {
    std::vector<GroundTruthSet> truths;
    std::vector<PredictionSet> predictions;
};

SimulatedDataset simulate_dataset(const SceneSpec& spec, const NoiseModel& noise, int n_images,
                                  int t_runs, bool parallel = true);

}  // namespace pure
