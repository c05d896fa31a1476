#include "pure/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <stdexcept>

#include "pure/errors.hpp"
#include "pure/rng.hpp"

namespace pure {
namespace {

ReportRow uncertainty_row(const UncertaintyReport& report) {
    ReportRow row;
    row.image_id = report.image_id;
    row.uncertainty = report.uncertainty;
    row.defined = report.defined;
    row.noise_count = report.noise_count;
    row.n_clusters = static_cast<int>(report.clusters.size());
    return row;
}

// Runs body(i) for every index, in parallel when requested; the first
// exception thrown by any iteration is rethrown after the loop joins.
template <typename Body>
void for_each_index(std::size_t n, bool parallel, Body&& body) {
    std::exception_ptr failure = nullptr;
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                if (!failure) failure = std::current_exception();
                break;
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void check_params(const DbscanParams& params) {
    if (!(params.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (params.min_samples < 1) throw std::invalid_argument("min_samples must be >= 1");
}

template <typename RowLike>
void sort_by_image_id(std::vector<RowLike>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const RowLike& a, const RowLike& b) { return a.image_id < b.image_id; });
}

}  // namespace

std::vector<ReportRow> quantify_images(std::span<const PredictionSet> sets,
                                       const DbscanParams& params, bool parallel) {
    check_params(params);
    std::vector<ReportRow> rows(sets.size());
    for_each_index(sets.size(), parallel,
                   [&](std::size_t i) { rows[i] = uncertainty_row(quantify(sets[i], params)); });
    sort_by_image_id(rows);
    return rows;
}

EvaluationBatch evaluate_images(std::span<const PredictionSet> sets,
                                const std::map<std::string, GroundTruthSet>& truths,
                                const DbscanParams& params, double iou_threshold,
                                bool allow_missing, bool parallel) {
    check_params(params);
    if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
        throw InvalidThreshold("iou threshold must lie in (0, 1), got " +
                               std::to_string(iou_threshold));

    std::vector<ReportRow> rows(sets.size());
    std::vector<EvaluationRecord> records(sets.size());
    std::vector<std::uint8_t> evaluated(sets.size(), 0);

    for_each_index(sets.size(), parallel, [&](std::size_t i) {
        const UncertaintyReport report = quantify(sets[i], params);
        rows[i] = uncertainty_row(report);

        const auto truth_it = truths.find(sets[i].image_id);
        if (truth_it == truths.end()) {
            if (!allow_missing)
                throw MissingGroundTruth("no ground truth for image '" + sets[i].image_id + "'");
            return;
        }

        std::vector<BoundingBox> boxes;
        for (const auto& rep : representative_boxes(report)) boxes.push_back(rep.box);
        const EvaluationRecord rec = evaluate(boxes, truth_it->second, iou_threshold);
        rows[i].avg_iou = rec.avg_iou;
        rows[i].precision = rec.precision;
        rows[i].recall = rec.recall;
        rows[i].f1 = rec.f1;
        records[i] = rec;
        evaluated[i] = 1;
    });

    std::vector<std::size_t> order(sets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows[a].image_id < rows[b].image_id; });

    EvaluationBatch batch;
    batch.rows.reserve(sets.size());
    for (const std::size_t i : order) {
        batch.rows.push_back(std::move(rows[i]));
        if (evaluated[i]) batch.records.push_back(std::move(records[i]));
    }
    return batch;
}

std::vector<ObjectPair> per_object_pairs(std::span<const PredictionSet> sets,
                                         const std::map<std::string, GroundTruthSet>& truths,
                                         const DbscanParams& params, bool allow_missing) {
    check_params(params);
    std::vector<ObjectPair> pairs;
    for (const auto& set : sets) {
        const auto truth_it = truths.find(set.image_id);
        if (truth_it == truths.end()) {
            if (!allow_missing)
                throw MissingGroundTruth("no ground truth for image '" + set.image_id + "'");
            continue;
        }
        const UncertaintyReport report = quantify(set, params);
        const std::vector<RepresentativeBox> reps = representative_boxes(report);
        std::vector<BoundingBox> boxes;
        boxes.reserve(reps.size());
        for (const auto& rep : reps) boxes.push_back(rep.box);

        const MatchResult m = match(boxes, truth_it->second);
        std::vector<double> best(reps.size(), 0.0);
        for (const auto& p : m.pairs) best[p.prediction] = p.iou;
        for (std::size_t k = 0; k < reps.size(); ++k) {
            const int cid = reps[k].cluster_id;
            pairs.push_back({report.clusters[static_cast<std::size_t>(cid)].cluster_uncertainty,
                             best[k]});
        }
    }
    return pairs;
}

SimulatedDataset simulate_dataset(const SceneSpec& spec, const NoiseModel& noise, int n_images,
                                  int t_runs, bool parallel) {
    if (n_images < 1) throw std::invalid_argument("n_images must be >= 1");

    SimulatedDataset data;
    data.truths.resize(static_cast<std::size_t>(n_images));
    data.predictions.resize(static_cast<std::size_t>(n_images));

    for_each_index(static_cast<std::size_t>(n_images), parallel, [&](std::size_t i) {
        char name[32];
        std::snprintf(name, sizeof name, "img_%06zu", i);

        SceneSpec scene_spec = spec;
        scene_spec.seed = CounterRng::derive(spec.seed, 2 * i);
        NoiseModel image_noise = noise;
        image_noise.seed = CounterRng::derive(noise.seed, 2 * i + 1);

        data.truths[i] = generate_scene(scene_spec, name);
        data.predictions[i] = simulate_runs(data.truths[i], scene_spec, image_noise, t_runs);
    });
    return data;
}

}  // namespace pure
