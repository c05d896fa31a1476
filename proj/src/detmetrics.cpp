#include "pure/detmetrics.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>

#include "pure/errors.hpp"

namespace pure {
namespace {

struct Candidate {
    double iou;
    std::size_t prediction;
    std::size_t truth;
};

MatchResult greedy_match(std::span<const BoundingBox> predictions,
                         const GroundTruthSet& truths,
                         const std::vector<std::string>* pred_labels) {
    const auto& boxes = truths.boxes;
    std::vector<Candidate> candidates;
    candidates.reserve(predictions.size() * boxes.size());
    for (std::size_t pi = 0; pi < predictions.size(); ++pi) {
        for (std::size_t ti = 0; ti < boxes.size(); ++ti) {
            if (pred_labels && (*pred_labels)[pi] != (*truths.class_labels)[ti]) continue;
            const double v = iou(predictions[pi], boxes[ti]);
            if (v > 0.0) candidates.push_back({v, pi, ti});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.prediction != b.prediction) return a.prediction < b.prediction;
        return a.truth < b.truth;
    });

    MatchResult out;
    std::vector<bool> pred_used(predictions.size(), false);
    std::vector<bool> truth_used(boxes.size(), false);
    for (const auto& c : candidates) {
        if (pred_used[c.prediction] || truth_used[c.truth]) continue;
        pred_used[c.prediction] = true;
        truth_used[c.truth] = true;
        out.pairs.push_back({c.prediction, c.truth, c.iou});
    }
    for (std::size_t pi = 0; pi < predictions.size(); ++pi)
        if (!pred_used[pi]) out.unmatched_predictions.push_back(pi);
    for (std::size_t ti = 0; ti < boxes.size(); ++ti)
        if (!truth_used[ti]) out.unmatched_truths.push_back(ti);
    return out;
}

}  // namespace

MatchResult match(std::span<const BoundingBox> predictions, const GroundTruthSet& truths) {
    return greedy_match(predictions, truths, nullptr);
}

MatchResult match(std::span<const BoundingBox> predictions,
                  std::span<const std::string> prediction_labels,
                  const GroundTruthSet& truths) {
    if (prediction_labels.size() != predictions.size())
        throw std::invalid_argument("prediction_labels must parallel predictions");
    if (!truths.class_labels || truths.class_labels->size() != truths.boxes.size())
        throw std::invalid_argument("class-aware matching needs ground-truth labels");
    std::vector<std::string> labels(prediction_labels.begin(), prediction_labels.end());
    return greedy_match(predictions, truths, &labels);
}

EvaluationRecord evaluate(std::span<const BoundingBox> predictions,
                          const GroundTruthSet& truths, double t) {
    if (!(t > 0.0 && t < 1.0))
        throw InvalidThreshold("iou threshold must lie in (0, 1), got " + std::to_string(t));

    const MatchResult m = match(predictions, truths);

    EvaluationRecord rec;
    rec.image_id = truths.image_id;
    rec.threshold = t;
    double iou_sum = 0.0;
    for (const auto& p : m.pairs) {
        iou_sum += p.iou;
        if (p.iou >= t) ++rec.tp;
    }
    rec.avg_iou = m.pairs.empty() ? 0.0 : iou_sum / static_cast<double>(m.pairs.size());
    rec.fp = static_cast<int>(predictions.size()) - rec.tp;
    rec.fn = static_cast<int>(truths.boxes.size()) - rec.tp;
    rec.precision = (rec.tp + rec.fp) > 0
                        ? static_cast<double>(rec.tp) / static_cast<double>(rec.tp + rec.fp)
                        : 0.0;
    rec.recall = (rec.tp + rec.fn) > 0
                     ? static_cast<double>(rec.tp) / static_cast<double>(rec.tp + rec.fn)
                     : 0.0;
    rec.f1 = (rec.precision + rec.recall) > 0.0
                 ? 2.0 * rec.precision * rec.recall / (rec.precision + rec.recall)
                 : 0.0;
    return rec;
}

AggregateMetrics aggregate(std::span<const EvaluationRecord> records) {
    AggregateMetrics agg;
    agg.n_images = records.size();
    if (records.empty()) return agg;

    for (const auto& r : records) {
        agg.mean_avg_iou += r.avg_iou;
        agg.mean_precision += r.precision;
        agg.mean_recall += r.recall;
        agg.mean_f1 += r.f1;
        agg.pooled_tp += r.tp;
        agg.pooled_fp += r.fp;
        agg.pooled_fn += r.fn;
    }
    const double n = static_cast<double>(records.size());
    agg.mean_avg_iou /= n;
    agg.mean_precision /= n;
    agg.mean_recall /= n;
    agg.mean_f1 /= n;

    const long pd = agg.pooled_tp + agg.pooled_fp;
    const long rd = agg.pooled_tp + agg.pooled_fn;
    agg.pooled_precision = pd > 0 ? static_cast<double>(agg.pooled_tp) / static_cast<double>(pd) : 0.0;
    agg.pooled_recall = rd > 0 ? static_cast<double>(agg.pooled_tp) / static_cast<double>(rd) : 0.0;
    agg.pooled_f1 = (agg.pooled_precision + agg.pooled_recall) > 0.0
                        ? 2.0 * agg.pooled_precision * agg.pooled_recall /
                              (agg.pooled_precision + agg.pooled_recall)
                        : 0.0;
    return agg;
}

}  // namespace pure
