#include "pure/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unordered_map>

#include <json.hpp>

#include "pure/errors.hpp"

namespace pure {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kCsvHeader =
    "image_id,uncertainty,defined,noise_count,n_clusters,avg_iou,precision,recall,f1";

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos;
}

double parse_double_field(const std::string& text, std::size_t lineno, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(lineno, std::string(what) + " is not a number: '" + text + "'");
    if (!std::isfinite(value))
        throw ParseError(lineno, std::string(what) + " is not finite: '" + text + "'");
    return value;
}

template <typename Int>
Int parse_int_field(const std::string& text, std::size_t lineno, const char* what) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(lineno, std::string(what) + " is not an integer: '" + text + "'");
    return value;
}

void check_box(const BoundingBox& box, std::size_t lineno) {
    if (!(std::isfinite(box.x1) && std::isfinite(box.y1) && std::isfinite(box.x2) &&
          std::isfinite(box.y2)))
        throw InvalidBox("line " + std::to_string(lineno) + ": box coordinates must be finite");
    if (!(box.x1 < box.x2))
        throw InvalidBox("line " + std::to_string(lineno) + ": x1 must be < x2 (" +
                         format_double(box.x1) + " vs " + format_double(box.x2) + ")");
    if (!(box.y1 < box.y2))
        throw InvalidBox("line " + std::to_string(lineno) + ": y1 must be < y2 (" +
                         format_double(box.y1) + " vs " + format_double(box.y2) + ")");
}

double require_number(const json& j, const char* key, std::size_t lineno) {
    if (!j.contains(key)) throw ParseError(lineno, std::string("missing key '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw ParseError(lineno, std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

void append_param_csv(std::string& out, const char* key, const std::string& value) {
    out += "# ";
    out += key;
    out += '=';
    out += value;
    out += '\n';
}

std::optional<double> optional_double_cell(const std::string& cell, std::size_t lineno,
                                           const char* what) {
    if (cell.empty()) return std::nullopt;
    return parse_double_field(cell, lineno, what);
}

void append_cell(std::string& out, const std::optional<double>& value) {
    out += ',';
    if (value) out += format_double(*value);
}

}  // namespace

std::string format_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("cannot serialize non-finite number");
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::invalid_argument("number formatting failed");
    return std::string(buf, ptr);
}

std::vector<PredictionSet> parse_predictions(std::istream& in,
                                             std::optional<int> t_runs_override) {
    std::vector<PredictionSet> sets;
    std::vector<int> max_run;
    std::unordered_map<std::string, std::size_t> index;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_cr(raw);
        if (blank(line)) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(lineno, e.what());
        }
        if (!j.is_object()) throw ParseError(lineno, "record must be a JSON object");

        if (!j.contains("image_id") || !j.at("image_id").is_string())
            throw ParseError(lineno, "key 'image_id' must be a string");
        const std::string image_id = j.at("image_id").get<std::string>();
        if (image_id.empty()) throw ParseError(lineno, "image_id must be non-empty");

        if (!j.contains("run") || !j.at("run").is_number_integer())
            throw ParseError(lineno, "key 'run' must be an integer");
        const auto run = j.at("run").get<long long>();
        if (run < 0) throw ParseError(lineno, "run index must be >= 0");

        Detection d;
        d.box.x1 = require_number(j, "x1", lineno);
        d.box.y1 = require_number(j, "y1", lineno);
        d.box.x2 = require_number(j, "x2", lineno);
        d.box.y2 = require_number(j, "y2", lineno);
        check_box(d.box, lineno);
        d.run_index = static_cast<int>(run);

        if (j.contains("confidence")) {
            if (!j.at("confidence").is_number())
                throw ParseError(lineno, "key 'confidence' must be a number");
            const double c = j.at("confidence").get<double>();
            if (!(c >= 0.0 && c <= 1.0))
                throw ParseError(lineno, "confidence must lie in [0, 1]");
            d.confidence = c;
        }
        if (j.contains("label")) {
            if (!j.at("label").is_string())
                throw ParseError(lineno, "key 'label' must be a string");
            d.class_label = j.at("label").get<std::string>();
        }

        auto [it, inserted] = index.try_emplace(image_id, sets.size());
        if (inserted) {
            PredictionSet ps;
            ps.image_id = image_id;
            sets.push_back(std::move(ps));
            max_run.push_back(-1);
        }
        const std::size_t si = it->second;
        sets[si].detections.push_back(std::move(d));
        max_run[si] = std::max(max_run[si], static_cast<int>(run));
    }

    for (std::size_t si = 0; si < sets.size(); ++si) {
        sets[si].t_runs = max_run[si] + 1;
        if (t_runs_override && *t_runs_override > sets[si].t_runs)
            sets[si].t_runs = *t_runs_override;
    }
    return sets;
}

std::string write_predictions(std::span<const PredictionSet> sets) {
    std::string out;
    for (const auto& ps : sets) {
        for (const auto& d : ps.detections) {
            ordered_json j;
            j["image_id"] = ps.image_id;
            j["run"] = d.run_index;
            j["x1"] = d.box.x1;
            j["y1"] = d.box.y1;
            j["x2"] = d.box.x2;
            j["y2"] = d.box.y2;
            if (d.confidence) j["confidence"] = *d.confidence;
            if (d.class_label) j["label"] = *d.class_label;
            out += j.dump();
            out += '\n';
        }
    }
    return out;
}

GroundTruthSet parse_kitti_labels(std::istream& in, const std::string& image_id) {
    if (image_id.empty()) throw std::invalid_argument("image_id must be non-empty");
    GroundTruthSet out;
    out.image_id = image_id;
    out.class_labels.emplace();

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_cr(raw);
        if (blank(line)) continue;

        std::istringstream tokens(line);
        std::vector<std::string> fields;
        std::string tok;
        while (tokens >> tok) fields.push_back(tok);
        if (fields.empty()) continue;

        if (fields[0] == "DontCare") continue;
        if (fields.size() < 8)
            throw ParseError(lineno, "expected at least 8 fields, got " +
                                         std::to_string(fields.size()));

        BoundingBox box;
        box.x1 = parse_double_field(fields[4], lineno, "left");
        box.y1 = parse_double_field(fields[5], lineno, "top");
        box.x2 = parse_double_field(fields[6], lineno, "right");
        box.y2 = parse_double_field(fields[7], lineno, "bottom");
        check_box(box, lineno);

        out.boxes.push_back(box);
        out.class_labels->push_back(fields[0]);
    }
    return out;
}

std::string write_kitti_labels(const GroundTruthSet& truths) {
    std::string out;
    for (std::size_t i = 0; i < truths.boxes.size(); ++i) {
        const BoundingBox& b = truths.boxes[i];
        const std::string label =
            truths.class_labels && i < truths.class_labels->size() ? (*truths.class_labels)[i]
                                                                   : std::string("Object");
        out += label;
        out += " 0 0 0 ";
        out += format_double(b.x1);
        out += ' ';
        out += format_double(b.y1);
        out += ' ';
        out += format_double(b.x2);
        out += ' ';
        out += format_double(b.y2);
        out += " 0 0 0 0 0 0 0\n";
    }
    return out;
}

std::string write_report(const ReportDocument& doc, ReportFormat format) {
    if (format == ReportFormat::kCsv) {
        std::string out;
        const ReportParams& p = doc.params;
        if (p.t_runs) append_param_csv(out, "t_runs", std::to_string(*p.t_runs));
        if (p.epsilon) append_param_csv(out, "epsilon", format_double(*p.epsilon));
        if (p.min_samples) append_param_csv(out, "min_samples", std::to_string(*p.min_samples));
        if (p.iou_threshold)
            append_param_csv(out, "iou_threshold", format_double(*p.iou_threshold));
        if (p.dropout_ratio)
            append_param_csv(out, "dropout_ratio", format_double(*p.dropout_ratio));
        if (p.corner_sigma) append_param_csv(out, "corner_sigma", format_double(*p.corner_sigma));
        if (p.miss_rate) append_param_csv(out, "miss_rate", format_double(*p.miss_rate));
        if (p.spurious_rate)
            append_param_csv(out, "spurious_rate", format_double(*p.spurious_rate));
        if (p.seed) append_param_csv(out, "seed", std::to_string(*p.seed));

        out += kCsvHeader;
        out += '\n';
        for (const auto& row : doc.rows) {
            if (row.image_id.empty() || row.image_id.find_first_of(",\n\r#") != std::string::npos)
                throw std::invalid_argument("image_id not CSV-safe: '" + row.image_id + "'");
            out += row.image_id;
            append_cell(out, row.uncertainty);
            out += row.defined ? ",true" : ",false";
            out += ',';
            out += std::to_string(row.noise_count);
            out += ',';
            out += std::to_string(row.n_clusters);
            append_cell(out, row.avg_iou);
            append_cell(out, row.precision);
            append_cell(out, row.recall);
            append_cell(out, row.f1);
            out += '\n';
        }
        return out;
    }

    json j;
    j["params"] = json::object();
    json& jp = j["params"];
    const ReportParams& p = doc.params;
    if (p.t_runs) jp["t_runs"] = *p.t_runs;
    if (p.epsilon) jp["epsilon"] = *p.epsilon;
    if (p.min_samples) jp["min_samples"] = *p.min_samples;
    if (p.iou_threshold) jp["iou_threshold"] = *p.iou_threshold;
    if (p.dropout_ratio) jp["dropout_ratio"] = *p.dropout_ratio;
    if (p.corner_sigma) jp["corner_sigma"] = *p.corner_sigma;
    if (p.miss_rate) jp["miss_rate"] = *p.miss_rate;
    if (p.spurious_rate) jp["spurious_rate"] = *p.spurious_rate;
    if (p.seed) jp["seed"] = *p.seed;

    j["rows"] = json::array();
    for (const auto& row : doc.rows) {
        json r;
        r["image_id"] = row.image_id;
        if (row.uncertainty) r["uncertainty"] = *row.uncertainty;
        r["defined"] = row.defined;
        r["noise_count"] = row.noise_count;
        r["n_clusters"] = row.n_clusters;
        if (row.avg_iou) r["avg_iou"] = *row.avg_iou;
        if (row.precision) r["precision"] = *row.precision;
        if (row.recall) r["recall"] = *row.recall;
        if (row.f1) r["f1"] = *row.f1;
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

namespace {

ReportDocument parse_report_csv(std::istream& in) {
    ReportDocument doc;
    std::string raw;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_cr(raw);
        if (!header_seen && line.rfind("# ", 0) == 0) {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(lineno, "parameter line lacks '='");
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            ReportParams& p = doc.params;
            if (key == "t_runs")
                p.t_runs = parse_int_field<int>(value, lineno, "t_runs");
            else if (key == "epsilon")
                p.epsilon = parse_double_field(value, lineno, "epsilon");
            else if (key == "min_samples")
                p.min_samples = parse_int_field<int>(value, lineno, "min_samples");
            else if (key == "iou_threshold")
                p.iou_threshold = parse_double_field(value, lineno, "iou_threshold");
            else if (key == "dropout_ratio")
                p.dropout_ratio = parse_double_field(value, lineno, "dropout_ratio");
            else if (key == "corner_sigma")
                p.corner_sigma = parse_double_field(value, lineno, "corner_sigma");
            else if (key == "miss_rate")
                p.miss_rate = parse_double_field(value, lineno, "miss_rate");
            else if (key == "spurious_rate")
                p.spurious_rate = parse_double_field(value, lineno, "spurious_rate");
            else if (key == "seed")
                p.seed = parse_int_field<std::uint64_t>(value, lineno, "seed");
            else
                throw ParseError(lineno, "unknown parameter '" + key + "'");
            continue;
        }
        if (!header_seen) {
            if (line != kCsvHeader)
                throw ParseError(lineno, "expected header '" + std::string(kCsvHeader) + "'");
            header_seen = true;
            continue;
        }
        if (blank(line)) continue;

        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != 9)
            throw ParseError(lineno, "expected 9 fields, got " + std::to_string(cells.size()));

        ReportRow row;
        row.image_id = cells[0];
        if (row.image_id.empty()) throw ParseError(lineno, "image_id must be non-empty");
        row.uncertainty = optional_double_cell(cells[1], lineno, "uncertainty");
        if (cells[2] == "true")
            row.defined = true;
        else if (cells[2] == "false")
            row.defined = false;
        else
            throw ParseError(lineno, "defined must be 'true' or 'false', got '" + cells[2] + "'");
        row.noise_count = parse_int_field<int>(cells[3], lineno, "noise_count");
        row.n_clusters = parse_int_field<int>(cells[4], lineno, "n_clusters");
        row.avg_iou = optional_double_cell(cells[5], lineno, "avg_iou");
        row.precision = optional_double_cell(cells[6], lineno, "precision");
        row.recall = optional_double_cell(cells[7], lineno, "recall");
        row.f1 = optional_double_cell(cells[8], lineno, "f1");
        doc.rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError("missing report header row");
    return doc;
}

ReportDocument parse_report_json(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object() || !j.contains("params") || !j.contains("rows"))
        throw ParseError("report must be an object with 'params' and 'rows'");

    ReportDocument doc;
    const json& jp = j.at("params");
    if (!jp.is_object()) throw ParseError("'params' must be an object");
    ReportParams& p = doc.params;
    try {
        if (jp.contains("t_runs")) p.t_runs = jp.at("t_runs").get<int>();
        if (jp.contains("epsilon")) p.epsilon = jp.at("epsilon").get<double>();
        if (jp.contains("min_samples")) p.min_samples = jp.at("min_samples").get<int>();
        if (jp.contains("iou_threshold")) p.iou_threshold = jp.at("iou_threshold").get<double>();
        if (jp.contains("dropout_ratio")) p.dropout_ratio = jp.at("dropout_ratio").get<double>();
        if (jp.contains("corner_sigma")) p.corner_sigma = jp.at("corner_sigma").get<double>();
        if (jp.contains("miss_rate")) p.miss_rate = jp.at("miss_rate").get<double>();
        if (jp.contains("spurious_rate")) p.spurious_rate = jp.at("spurious_rate").get<double>();
        if (jp.contains("seed")) p.seed = jp.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("params: ") + e.what());
    }

    const json& rows = j.at("rows");
    if (!rows.is_array()) throw ParseError("'rows' must be an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& r = rows.at(i);
        const std::string where = "row " + std::to_string(i) + ": ";
        if (!r.is_object()) throw ParseError(where + "must be an object");
        ReportRow row;
        if (!r.contains("image_id") || !r.at("image_id").is_string())
            throw ParseError(where + "'image_id' must be a string");
        row.image_id = r.at("image_id").get<std::string>();
        if (row.image_id.empty()) throw ParseError(where + "image_id must be non-empty");
        if (!r.contains("defined") || !r.at("defined").is_boolean())
            throw ParseError(where + "'defined' must be a boolean");
        row.defined = r.at("defined").get<bool>();
        if (!r.contains("noise_count") || !r.at("noise_count").is_number_integer())
            throw ParseError(where + "'noise_count' must be an integer");
        row.noise_count = r.at("noise_count").get<int>();
        if (!r.contains("n_clusters") || !r.at("n_clusters").is_number_integer())
            throw ParseError(where + "'n_clusters' must be an integer");
        row.n_clusters = r.at("n_clusters").get<int>();
        try {
            if (r.contains("uncertainty")) row.uncertainty = r.at("uncertainty").get<double>();
            if (r.contains("avg_iou")) row.avg_iou = r.at("avg_iou").get<double>();
            if (r.contains("precision")) row.precision = r.at("precision").get<double>();
            if (r.contains("recall")) row.recall = r.at("recall").get<double>();
            if (r.contains("f1")) row.f1 = r.at("f1").get<double>();
        } catch (const json::exception& e) {
            throw ParseError(where + e.what());
        }
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

}  // namespace

ReportDocument parse_report(std::istream& in, ReportFormat format) {
    return format == ReportFormat::kCsv ? parse_report_csv(in) : parse_report_json(in);
}

}  // namespace pure
