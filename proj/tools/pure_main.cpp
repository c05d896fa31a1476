#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pure/clustering.hpp"
#include "pure/detmetrics.hpp"
#include "pure/errors.hpp"
#include "pure/io.hpp"
#include "pure/pipeline.hpp"
#include "pure/simulator.hpp"
#include "pure/stats.hpp"
#include "pure/surface.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitInsufficientData = 3;

struct QuantifyOpts {
    std::vector<std::string> predictions;
    double epsilon = 100.0;
    int min_samples = 3;
    int t_runs = 20;
    bool t_runs_set = false;
    std::vector<double> noise_sigma;
    double miss_rate = 0.0;
    bool miss_rate_set = false;
    double spurious_rate = 0.0;
    bool spurious_rate_set = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string format = "csv";
    bool serial = false;

    // evaluate only
    std::string ground_truth;
    double iou_threshold = 0.5;
    bool allow_missing = false;
};

struct CorrelateOpts {
    std::string report;
    std::vector<std::string> predictions;
    std::string ground_truth;
    bool per_object = false;
    bool allow_missing = false;
    double epsilon = 100.0;
    int min_samples = 3;
    std::string out;
};

struct SimulateOpts {
    std::string out;
    int n_images = 100;
    int t_runs = 20;
    std::vector<double> noise_sigma{0.0};
    double miss_rate = 0.0;
    double spurious_rate = 0.0;
    std::uint64_t seed = 0;
    double image_width = 1280.0;
    double image_height = 720.0;
    int min_objects = 2;
    int max_objects = 6;
    double min_box_size = 40.0;
    double max_box_size = 160.0;
    bool serial = false;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pure::Error("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pure::Error("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw pure::Error("cannot write '" + path.string() + "'");
}

std::vector<pure::PredictionSet> load_predictions(const fs::path& path,
                                                  std::optional<int> t_runs_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pure::Error("cannot read '" + path.string() + "'");
    try {
        return pure::parse_predictions(in, t_runs_override);
    } catch (const pure::Error& e) {
        throw pure::Error(path.string() + ": " + e.what());
    }
}

pure::ReportFormat parse_format(const std::string& name) {
    return name == "json" ? pure::ReportFormat::kJson : pure::ReportFormat::kCsv;
}

std::string format_extension(const std::string& name) {
    return name == "json" ? ".json" : ".csv";
}

// Destination file for input k of n under --out; multiple inputs turn --out
// into a directory of report_<input-stem> files.
fs::path output_path(const QuantifyOpts& opt, std::size_t k, std::size_t n) {
    if (n == 1) return opt.out;
    const fs::path dir(opt.out);
    fs::create_directories(dir);
    const fs::path stem = fs::path(opt.predictions[k]).stem();
    return dir / ("report_" + stem.string() + format_extension(opt.format));
}

pure::ReportParams stamp_params(const QuantifyOpts& opt, std::size_t k,
                                std::span<const pure::PredictionSet> sets, bool with_threshold) {
    pure::ReportParams p;
    if (opt.t_runs_set) {
        p.t_runs = opt.t_runs;
    } else {
        int inferred = 0;
        for (const auto& s : sets) inferred = std::max(inferred, s.t_runs);
        if (inferred > 0) p.t_runs = inferred;
    }
    p.epsilon = opt.epsilon;
    p.min_samples = opt.min_samples;
    if (with_threshold) p.iou_threshold = opt.iou_threshold;
    if (!opt.noise_sigma.empty())
        p.corner_sigma = opt.noise_sigma.size() == 1 ? opt.noise_sigma[0] : opt.noise_sigma[k];
    if (opt.miss_rate_set) p.miss_rate = opt.miss_rate;
    if (opt.spurious_rate_set) p.spurious_rate = opt.spurious_rate;
    if (opt.seed_set) p.seed = opt.seed;
    return p;
}

void check_multi_input(const QuantifyOpts& opt) {
    if (opt.predictions.size() > 1 && opt.out.empty())
        throw pure::Error("multiple --predictions inputs need --out");
    if (opt.noise_sigma.size() > 1 && opt.noise_sigma.size() != opt.predictions.size())
        throw pure::Error("--noise-sigma list must have one value or one per --predictions");
}

std::map<std::string, pure::GroundTruthSet> load_ground_truth(
    const fs::path& dir, std::span<const pure::PredictionSet> sets, bool allow_missing) {
    std::map<std::string, pure::GroundTruthSet> truths;
    for (const auto& ps : sets) {
        const fs::path path = dir / (ps.image_id + ".txt");
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            if (allow_missing) continue;
            throw pure::MissingGroundTruth("no ground truth for image '" + ps.image_id +
                                           "' (expected " + path.string() + ")");
        }
        try {
            truths.emplace(ps.image_id, pure::parse_kitti_labels(in, ps.image_id));
        } catch (const pure::Error& e) {
            throw pure::Error(path.string() + ": " + e.what());
        }
    }
    return truths;
}

int cmd_quantify(const QuantifyOpts& opt) {
    check_multi_input(opt);
    const std::optional<int> override =
        opt.t_runs_set ? std::optional<int>(opt.t_runs) : std::nullopt;
    const pure::DbscanParams params{opt.epsilon, opt.min_samples};

    for (std::size_t k = 0; k < opt.predictions.size(); ++k) {
        const auto sets = load_predictions(opt.predictions[k], override);
        pure::ReportDocument doc;
        doc.params = stamp_params(opt, k, sets, false);
        doc.rows = pure::quantify_images(sets, params, !opt.serial);
        const std::string text = pure::write_report(doc, parse_format(opt.format));
        if (opt.out.empty())
            std::cout << text;
        else
            write_file(output_path(opt, k, opt.predictions.size()), text);
    }
    return 0;
}

void print_aggregates(std::ostream& os, const std::string& source,
                      const pure::AggregateMetrics& agg) {
    os << "aggregates for " << source << " (n_images=" << agg.n_images << ")\n";
    os << "  per-image mean: avg_iou=" << pure::format_double(agg.mean_avg_iou)
       << " precision=" << pure::format_double(agg.mean_precision)
       << " recall=" << pure::format_double(agg.mean_recall)
       << " f1=" << pure::format_double(agg.mean_f1) << "\n";
    os << "  pooled counts: tp=" << agg.pooled_tp << " fp=" << agg.pooled_fp
       << " fn=" << agg.pooled_fn << " precision=" << pure::format_double(agg.pooled_precision)
       << " recall=" << pure::format_double(agg.pooled_recall)
       << " f1=" << pure::format_double(agg.pooled_f1) << "\n";
}

int cmd_evaluate(const QuantifyOpts& opt) {
    check_multi_input(opt);
    if (opt.ground_truth.empty()) throw pure::Error("--ground-truth is required");
    const std::optional<int> override =
        opt.t_runs_set ? std::optional<int>(opt.t_runs) : std::nullopt;
    const pure::DbscanParams params{opt.epsilon, opt.min_samples};

    for (std::size_t k = 0; k < opt.predictions.size(); ++k) {
        const auto sets = load_predictions(opt.predictions[k], override);
        const auto truths = load_ground_truth(opt.ground_truth, sets, opt.allow_missing);
        const pure::EvaluationBatch batch = pure::evaluate_images(
            sets, truths, params, opt.iou_threshold, opt.allow_missing, !opt.serial);

        pure::ReportDocument doc;
        doc.params = stamp_params(opt, k, sets, true);
        doc.rows = batch.rows;
        const std::string text = pure::write_report(doc, parse_format(opt.format));

        const pure::AggregateMetrics agg = pure::aggregate(batch.records);
        if (opt.out.empty()) {
            std::cout << text;
            print_aggregates(std::cerr, opt.predictions[k], agg);
        } else {
            write_file(output_path(opt, k, opt.predictions.size()), text);
            print_aggregates(std::cout, opt.predictions[k], agg);
        }
    }
    return 0;
}

int cmd_correlate(const CorrelateOpts& opt) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::string what;

    if (!opt.report.empty()) {
        if (opt.per_object)
            throw pure::Error("--per-object needs --predictions and --ground-truth, not --report");
        const std::string text = read_file(opt.report);
        const std::size_t first = text.find_first_not_of(" \t\r\n");
        const pure::ReportFormat format = first != std::string::npos && text[first] == '{'
                                              ? pure::ReportFormat::kJson
                                              : pure::ReportFormat::kCsv;
        std::istringstream in(text);
        pure::ReportDocument doc;
        try {
            doc = pure::parse_report(in, format);
        } catch (const pure::Error& e) {
            throw pure::Error(opt.report + ": " + e.what());
        }
        for (const auto& row : doc.rows) {
            if (!row.defined || !row.uncertainty || !row.avg_iou) continue;
            xs.push_back(*row.uncertainty);
            ys.push_back(*row.avg_iou);
        }
        what = "per-image";
    } else {
        if (opt.predictions.empty())
            throw pure::Error("correlate needs --report or --predictions");
        if (opt.ground_truth.empty()) throw pure::Error("--ground-truth is required");
        if (!opt.per_object)
            throw pure::Error("--predictions input implies --per-object; pass it explicitly");
        const pure::DbscanParams params{opt.epsilon, opt.min_samples};
        for (const auto& path : opt.predictions) {
            const auto sets = load_predictions(path, std::nullopt);
            const auto truths =
                load_ground_truth(opt.ground_truth, sets, opt.allow_missing);
            for (const auto& pair :
                 pure::per_object_pairs(sets, truths, params, opt.allow_missing)) {
                xs.push_back(pair.uncertainty);
                ys.push_back(pair.iou);
            }
        }
        what = "per-object";
    }

    if (xs.size() < 3)
        throw pure::TooFewSamples("need at least 3 usable " + what + " pairs, got " +
                                  std::to_string(xs.size()));

    const pure::CorrelationResult res = pure::pearson(xs, ys);
    std::cout << what << " r=" << pure::format_double(res.r)
              << " p_value=" << pure::format_double(res.p_value) << " n=" << res.n << "\n";

    if (!opt.out.empty()) {
        nlohmann::json j;
        j["granularity"] = what;
        j["n"] = res.n;
        j["p_value"] = res.p_value;
        j["r"] = res.r;
        write_file(opt.out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_simulate(const SimulateOpts& opt) {
    if (opt.noise_sigma.empty()) throw pure::Error("--noise-sigma needs at least one value");

    pure::SceneSpec spec;
    spec.image_width = opt.image_width;
    spec.image_height = opt.image_height;
    spec.min_objects = opt.min_objects;
    spec.max_objects = opt.max_objects;
    spec.min_box_size = opt.min_box_size;
    spec.max_box_size = opt.max_box_size;
    spec.seed = opt.seed;

    const fs::path out_dir(opt.out);
    const fs::path gt_dir = out_dir / "ground_truth";
    std::error_code ec;
    fs::create_directories(gt_dir, ec);
    if (ec) throw pure::Error("cannot create '" + gt_dir.string() + "': " + ec.message());

    bool truths_written = false;
    for (const double sigma : opt.noise_sigma) {
        pure::NoiseModel noise;
        noise.corner_sigma = sigma;
        noise.miss_rate = opt.miss_rate;
        noise.spurious_rate = opt.spurious_rate;
        noise.seed = opt.seed;

        const pure::SimulatedDataset data =
            pure::simulate_dataset(spec, noise, opt.n_images, opt.t_runs, !opt.serial);

        if (!truths_written) {
            for (const auto& truth : data.truths) {
                const fs::path path = gt_dir / (truth.image_id + ".txt");
                write_file(path, pure::write_kitti_labels(truth));
            }
            std::cout << "wrote " << gt_dir.string() << " (" << data.truths.size()
                      << " label files)\n";
            truths_written = true;
        }
        const fs::path pred_path =
            out_dir / ("predictions_sigma_" + pure::format_double(sigma) + ".jsonl");
        write_file(pred_path, pure::write_predictions(data.predictions));
        std::cout << "wrote " << pred_path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prediction-surface uncertainty toolkit for multi-run object detections"};
    app.require_subcommand(1);

    QuantifyOpts qopt;
    CLI::App* quantify = app.add_subcommand(
        "quantify", "Cluster multi-run detections and report per-image uncertainty");
    quantify->add_option("--predictions", qopt.predictions, "prediction JSONL file (repeatable)")
        ->required();
    quantify->add_option("--eps", qopt.epsilon, "clustering radius in pixels")
        ->capture_default_str();
    quantify->add_option("--min-samples", qopt.min_samples, "core point neighbor minimum")
        ->capture_default_str();
    CLI::Option* q_truns =
        quantify->add_option("--t-runs", qopt.t_runs, "declared run count when runs can be empty");
    quantify->add_option("--noise-sigma", qopt.noise_sigma,
                         "stamp reports with the corner sigma that produced each input")
        ->delimiter(',');
    CLI::Option* q_miss = quantify->add_option("--miss-rate", qopt.miss_rate,
                                               "stamp reports with the miss rate");
    CLI::Option* q_spur = quantify->add_option("--spurious-rate", qopt.spurious_rate,
                                               "stamp reports with the spurious rate");
    CLI::Option* q_seed = quantify->add_option("--seed", qopt.seed, "stamp reports with the seed");
    quantify->add_option("--out", qopt.out, "report file (directory when inputs repeat)");
    quantify->add_option("--format", qopt.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    quantify->add_flag("--serial", qopt.serial, "disable the parallel batch path");

    QuantifyOpts eopt;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Quantify plus detection metrics against ground-truth labels");
    evaluate->add_option("--predictions", eopt.predictions, "prediction JSONL file (repeatable)")
        ->required();
    evaluate->add_option("--ground-truth", eopt.ground_truth, "directory of <image_id>.txt labels")
        ->required();
    evaluate->add_option("--eps", eopt.epsilon, "clustering radius in pixels")
        ->capture_default_str();
    evaluate->add_option("--min-samples", eopt.min_samples, "core point neighbor minimum")
        ->capture_default_str();
    evaluate->add_option("--iou-threshold", eopt.iou_threshold, "correctness threshold t")
        ->capture_default_str();
    CLI::Option* e_truns =
        evaluate->add_option("--t-runs", eopt.t_runs, "declared run count when runs can be empty");
    evaluate->add_option("--noise-sigma", eopt.noise_sigma,
                         "stamp reports with the corner sigma that produced each input")
        ->delimiter(',');
    CLI::Option* e_miss = evaluate->add_option("--miss-rate", eopt.miss_rate,
                                               "stamp reports with the miss rate");
    CLI::Option* e_spur = evaluate->add_option("--spurious-rate", eopt.spurious_rate,
                                               "stamp reports with the spurious rate");
    CLI::Option* e_seed = evaluate->add_option("--seed", eopt.seed, "stamp reports with the seed");
    evaluate->add_flag("--allow-missing", eopt.allow_missing,
                       "skip metrics for images without ground truth");
    evaluate->add_option("--out", eopt.out, "report file (directory when inputs repeat)");
    evaluate->add_option("--format", eopt.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    evaluate->add_flag("--serial", eopt.serial, "disable the parallel batch path");

    CorrelateOpts copt;
    CLI::App* correlate = app.add_subcommand(
        "correlate", "Pearson correlation between uncertainty and detection accuracy");
    correlate->add_option("--report", copt.report, "report produced by quantify or evaluate");
    correlate->add_option("--predictions", copt.predictions,
                          "prediction JSONL for per-object pairing (repeatable)");
    correlate->add_option("--ground-truth", copt.ground_truth,
                          "directory of <image_id>.txt labels");
    correlate->add_flag("--per-object", copt.per_object,
                        "pair each cluster's uncertainty with its matched IoU");
    correlate->add_flag("--allow-missing", copt.allow_missing,
                        "skip images without ground truth");
    correlate->add_option("--eps", copt.epsilon, "clustering radius in pixels")
        ->capture_default_str();
    correlate->add_option("--min-samples", copt.min_samples, "core point neighbor minimum")
        ->capture_default_str();
    correlate->add_option("--out", copt.out, "write the result as JSON");

    SimulateOpts sopt;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Generate synthetic scenes and multi-run detections");
    simulate->add_option("--out", sopt.out, "output directory")->required();
    simulate->add_option("--n-images", sopt.n_images, "number of scenes")->capture_default_str();
    simulate->add_option("--t-runs", sopt.t_runs, "runs per image")->capture_default_str();
    simulate->add_option("--noise-sigma", sopt.noise_sigma,
                         "corner jitter sigma; a comma list emits one predictions file per level")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--miss-rate", sopt.miss_rate, "per-run object omission probability")
        ->capture_default_str();
    simulate->add_option("--spurious-rate", sopt.spurious_rate,
                         "expected false boxes per run (Poisson)")
        ->capture_default_str();
    simulate->add_option("--seed", sopt.seed, "master seed")->capture_default_str();
    simulate->add_option("--image-width", sopt.image_width, "scene width in pixels")
        ->capture_default_str();
    simulate->add_option("--image-height", sopt.image_height, "scene height in pixels")
        ->capture_default_str();
    simulate->add_option("--min-objects", sopt.min_objects, "objects per scene, lower bound")
        ->capture_default_str();
    simulate->add_option("--max-objects", sopt.max_objects, "objects per scene, upper bound")
        ->capture_default_str();
    simulate->add_option("--min-box-size", sopt.min_box_size, "box side length, lower bound")
        ->capture_default_str();
    simulate->add_option("--max-box-size", sopt.max_box_size, "box side length, upper bound")
        ->capture_default_str();
    simulate->add_flag("--serial", sopt.serial, "disable the parallel batch path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    qopt.t_runs_set = q_truns->count() > 0;
    qopt.miss_rate_set = q_miss->count() > 0;
    qopt.spurious_rate_set = q_spur->count() > 0;
    qopt.seed_set = q_seed->count() > 0;
    eopt.t_runs_set = e_truns->count() > 0;
    eopt.miss_rate_set = e_miss->count() > 0;
    eopt.spurious_rate_set = e_spur->count() > 0;
    eopt.seed_set = e_seed->count() > 0;

    try {
        if (quantify->parsed()) return cmd_quantify(qopt);
        if (evaluate->parsed()) return cmd_evaluate(eopt);
        if (correlate->parsed()) return cmd_correlate(copt);
        if (simulate->parsed()) return cmd_simulate(sopt);
        std::cerr << "error: no subcommand\n";
        return kExitInputError;
    } catch (const pure::TooFewSamples& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const pure::ConstantSeries& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
