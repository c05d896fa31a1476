#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pure/detmetrics.hpp"
#include "pure/surface.hpp"

namespace pure {

enum class ReportFormat { kCsv, kJson };

// Experiment configuration echoed into every report so downstream analysis
// is self-describing. Absent fields are omitted on write.
struct ReportParams {
    std::optional<int> t_runs;
    std::optional<double> epsilon;
    std::optional<int> min_samples;
    std::optional<double> iou_threshold;
    std::optional<double> dropout_ratio;
    std::optional<double> corner_sigma;
    std::optional<double> miss_rate;
    std::optional<double> spurious_rate;
    std::optional<std::uint64_t> seed;

    bool operator==(const ReportParams&) const = default;
};

// One image of results. Metric fields stay empty for uncertainty-only runs;
// uncertainty stays empty when no cluster formed (defined == false).
struct ReportRow {
    std::string image_id;
    std::optional<double> uncertainty;
    bool defined = false;
    int noise_count = 0;
    int n_clusters = 0;
    std::optional<double> avg_iou;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;

    bool operator==(const ReportRow&) const = default;
};

struct ReportDocument {
    ReportParams params;
    std::vector<ReportRow> rows;

    bool operator==(const ReportDocument&) const = default;
};

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Line-delimited JSON records with keys image_id, run, x1, y1, x2, y2 and
// optional confidence, label. Records group by image_id (first-appearance
// order, within-image input order kept); per image t_runs = 1 + max run
// index, raised to t_runs_override when that is larger. Blank lines are
// skipped. Throws ParseError or InvalidBox naming the 1-based line.
std::vector<PredictionSet> parse_predictions(std::istream& in,
                                             std::optional<int> t_runs_override = {});

// Inverse of parse_predictions; emits one record per detection.
std::string write_predictions(std::span<const PredictionSet> sets);

// KITTI object labels: whitespace-separated fields, field 1 the class
// token, fields 5-8 left/top/right/bottom. "DontCare" lines are skipped;
// every kept line contributes a box and its class label.
GroundTruthSet parse_kitti_labels(std::istream& in, const std::string& image_id);

std::string write_kitti_labels(const GroundTruthSet& truths);

// CSV: `# key=value` parameter lines in fixed order, one exact header row
// (image_id,uncertainty,defined,noise_count,n_clusters,avg_iou,precision,
// recall,f1), then one line per row with empty cells for absent values.
// JSON: a single document {"params": {...}, "rows": [...]}. Both forms
// survive write -> parse -> write byte-identically.
std::string write_report(const ReportDocument& doc, ReportFormat format);

ReportDocument parse_report(std::istream& in, ReportFormat format);

}  // namespace pure
