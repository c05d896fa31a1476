#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pure/geometry.hpp"

namespace pure {

struct GroundTruthSet {
    std::string image_id;
    std::vector<BoundingBox> boxes;
    // Optional class tokens, parallel to boxes.
    std::optional<std::vector<std::string>> class_labels;
};

struct MatchPair {
    std::size_t prediction = 0;
    std::size_t truth = 0;
    double iou = 0.0;
};

struct MatchResult {
    std::vector<MatchPair> pairs;
    std::vector<std::size_t> unmatched_predictions;
    std::vector<std::size_t> unmatched_truths;
};

// Per-image detection metrics at IoU threshold t.
struct EvaluationRecord {
    std::string image_id;
    double avg_iou = 0.0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double threshold = 0.5;
};

// Greedy one-to-one matching by descending IoU over all (prediction, truth)
// couples with iou > 0; ties break on lower prediction index, then lower
// truth index. Class-agnostic.
MatchResult match(std::span<const BoundingBox> predictions, const GroundTruthSet& truths);

// Class-aware variant: a couple is eligible only when labels are equal.
// prediction_labels must parallel predictions and truths must carry labels.
MatchResult match(std::span<const BoundingBox> predictions,
                  std::span<const std::string> prediction_labels,
                  const GroundTruthSet& truths);

// TP are matched pairs with iou >= t; every other prediction is FP, every
// other truth FN. avg_iou averages all matched pairs regardless of t.
// Throws InvalidThreshold when t is outside (0, 1).
EvaluationRecord evaluate(std::span<const BoundingBox> predictions,
                          const GroundTruthSet& truths, double t = 0.5);

// Dataset-level summaries in both aggregations (the per-image mean of each
// metric, and metrics recomputed from pooled TP/FP/FN counts).
struct AggregateMetrics {
    std::size_t n_images = 0;
    double mean_avg_iou = 0.0;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    double mean_f1 = 0.0;
    long pooled_tp = 0;
    long pooled_fp = 0;
    long pooled_fn = 0;
    double pooled_precision = 0.0;
    double pooled_recall = 0.0;
    double pooled_f1 = 0.0;
};

AggregateMetrics aggregate(std::span<const EvaluationRecord> records);

}  // namespace pure
