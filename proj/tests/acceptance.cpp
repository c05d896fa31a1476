// Acceptance gate: each numbered criterion prints exactly one line and the
// process exits nonzero if any criterion fails or overruns its time budget.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pure/clustering.hpp"
#include "pure/detmetrics.hpp"
#include "pure/errors.hpp"
#include "pure/geometry.hpp"
#include "pure/io.hpp"
#include "pure/pipeline.hpp"
#include "pure/rng.hpp"
#include "pure/simulator.hpp"
#include "pure/stats.hpp"
#include "pure/surface.hpp"
#include "ref.hpp"

using namespace pure;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records the first failure only; later checks are still cheap to run.
void require(Outcome& o, bool cond, const std::string& what) {
    if (o.ok && !cond) {
        o.ok = false;
        o.detail = what;
    }
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::vector<Point2> random_points(CounterRng& rng, std::size_t n, double lo, double hi) {
    std::vector<Point2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.next_uniform(lo, hi), rng.next_uniform(lo, hi)});
    return pts;
}

// ---------------------------------------------------------------- criterion 1

Outcome geometry_exactness() {
    Outcome o;
    const double v = iou({0.0, 0.0, 2.0, 2.0}, {1.0, 1.0, 3.0, 3.0});
    require(o, std::abs(v - 1.0 / 7.0) <= 1e-12,
            "iou((0,0,2,2),(1,1,3,3)) = " + fmt(v) + ", want 1/7");

    const std::vector<Point2> square = {{0, 0}, {1, 0},     {1, 1},        {0, 1},
                                        {1, 0}, {0.5, 0.5}, {0.25, 0.75}};
    const double sq_area = polygon_area(convex_hull(square));
    require(o, sq_area == 1.0, "unit-square hull area = " + fmt(sq_area));

    const std::vector<Point2> diagonal = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    require(o, polygon_area(convex_hull(diagonal)) == 0.0, "collinear hull area not 0");
    const std::vector<Point2> vertical = {{1, 2}, {1, 7}, {1, 4}};
    require(o, polygon_area(convex_hull(vertical)) == 0.0, "vertical hull area not 0");
    const std::vector<Point2> single = {{3, 4}};
    require(o, polygon_area(convex_hull(single)) == 0.0, "single-point hull area not 0");
    return o;
}

// ---------------------------------------------------------------- criterion 2

Outcome hull_oracle() {
    Outcome o;
    CounterRng rng(1201);
    for (int i = 0; i < 1000 && o.ok; ++i) {
        const std::size_t n = static_cast<std::size_t>(1 + rng.next_int(0, 63));
        const std::vector<Point2> pts = random_points(rng, n, -500.0, 1500.0);
        const double main_area = polygon_area(convex_hull(pts));
        const double oracle = std::abs(ref::shoelace_area(ref::gift_wrap_hull(pts).vertices));
        require(o, std::abs(main_area - oracle) <= 1e-9,
                "set " + std::to_string(i) + ": area " + fmt(main_area) + " vs oracle " +
                    fmt(oracle));
    }
    return o;
}

// ---------------------------------------------------------------- criterion 3

bool equivalent_clusterings(const ClusterAssignment& a, const ClusterAssignment& b,
                            std::string* why) {
    if (a.labels.size() != b.labels.size()) {
        *why = "label counts differ";
        return false;
    }
    if (a.n_clusters != b.n_clusters) {
        *why = "cluster counts differ: " + std::to_string(a.n_clusters) + " vs " +
               std::to_string(b.n_clusters);
        return false;
    }
    if (a.core != b.core) {
        *why = "core point sets differ";
        return false;
    }
    std::unordered_map<int, int> fwd;
    std::unordered_map<int, int> rev;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        const int la = a.labels[i];
        const int lb = b.labels[i];
        if ((la == kNoise) != (lb == kNoise)) {
            *why = "noise flags differ at point " + std::to_string(i);
            return false;
        }
        if (la == kNoise) continue;
        const auto [fit, fnew] = fwd.try_emplace(la, lb);
        const auto [rit, rnew] = rev.try_emplace(lb, la);
        (void)fnew;
        (void)rnew;
        if (fit->second != lb || rit->second != la) {
            *why = "labels do not rename bijectively at point " + std::to_string(i);
            return false;
        }
    }
    return true;
}

Outcome clustering_oracle() {
    Outcome o;
    CounterRng rng(1301);
    for (int i = 0; i < 500 && o.ok; ++i) {
        const std::size_t n = static_cast<std::size_t>(1 + rng.next_int(0, 199));
        const std::vector<Point2> pts = random_points(rng, n, 0.0, 1000.0);
        const DbscanParams params{rng.next_uniform(5.0, 150.0), rng.next_int(1, 5)};
        const ClusterAssignment main_run = dbscan(pts, params);
        const ClusterAssignment naive = ref::dbscan_naive(pts, params);
        std::string why;
        require(o, equivalent_clusterings(main_run, naive, &why),
                "instance " + std::to_string(i) + ": " + why);
    }
    return o;
}

// ---------------------------------------------------------------- criterion 4

Outcome zero_noise_fixpoint() {
    Outcome o;
    SceneSpec spec;
    spec.seed = 404;
    NoiseModel noise;
    noise.seed = 405;
    const SimulatedDataset data = simulate_dataset(spec, noise, 100, 20, true);

    const DbscanParams params{100.0, 3};
    const std::vector<ReportRow> rows = quantify_images(data.predictions, params, true);
    require(o, rows.size() == 100, "expected 100 rows");
    for (const ReportRow& row : rows) {
        require(o, row.defined, row.image_id + " has no clusters");
        require(o, row.uncertainty.has_value() && *row.uncertainty == 0.0,
                row.image_id + " uncertainty " +
                    (row.uncertainty ? fmt(*row.uncertainty) : std::string("absent")) +
                    ", want exact 0");
        if (!o.ok) break;
    }

    std::map<std::string, GroundTruthSet> truths;
    for (const GroundTruthSet& gt : data.truths) truths[gt.image_id] = gt;
    const EvaluationBatch batch =
        evaluate_images(data.predictions, truths, params, 0.5, false, true);
    for (const EvaluationRecord& rec : batch.records) {
        require(o, rec.precision == 1.0 && rec.recall == 1.0,
                rec.image_id + ": precision " + fmt(rec.precision) + " recall " +
                    fmt(rec.recall));
        if (!o.ok) break;
    }
    return o;
}

// ---------------------------------------------------------------- criterion 5

Outcome scaling_law() {
    Outcome o;
    CounterRng rng(1501);
    const int t_runs = 20;
    const std::vector<BoundingBox> bases = {
        {200, 150, 300, 230}, {700, 150, 800, 230}, {450, 500, 550, 580}};

    // One shared deviation table so every lambda perturbs identically.
    std::vector<std::array<double, 4>> dev(bases.size() * static_cast<std::size_t>(t_runs));
    for (auto& d : dev)
        for (double& c : d) c = rng.next_uniform(-10.0, 10.0);

    const auto build = [&](double lambda) {
        PredictionSet ps;
        ps.image_id = "scaled";
        ps.t_runs = t_runs;
        for (int r = 0; r < t_runs; ++r) {
            for (std::size_t k = 0; k < bases.size(); ++k) {
                const auto& d = dev[static_cast<std::size_t>(r) * bases.size() + k];
                Detection det;
                det.run_index = r;
                det.box = {bases[k].x1 + lambda * d[0], bases[k].y1 + lambda * d[1],
                           bases[k].x2 + lambda * d[2], bases[k].y2 + lambda * d[3]};
                ps.detections.push_back(det);
            }
        }
        return ps;
    };

    const DbscanParams params{100.0, 3};
    const UncertaintyReport base = quantify(build(1.0), params);
    require(o, base.defined && base.clusters.size() == 3, "base construction lost a cluster");
    for (const double lambda : {2.0, 3.0}) {
        const UncertaintyReport scaled = quantify(build(lambda), params);
        require(o, scaled.defined && scaled.clusters.size() == 3,
                "lambda " + fmt(lambda) + " lost a cluster");
        if (!o.ok) break;
        const double want = lambda * lambda * *base.uncertainty;
        require(o, std::abs(*scaled.uncertainty - want) <= 1e-9,
                "lambda " + fmt(lambda) + ": uncertainty " + fmt(*scaled.uncertainty) +
                    ", want " + fmt(want));
    }
    return o;
}

// ---------------------------------------------------------------- criterion 6

Outcome monotonicity_sweep() {
    Outcome o;
    const std::vector<double> sigmas = {0.0, 1.0, 2.0, 5.0, 10.0, 20.0};
    SceneSpec spec;
    spec.seed = 606;
    const DbscanParams params{100.0, 3};

    std::vector<double> mean_u;
    std::vector<double> mean_iou;
    for (const double sigma : sigmas) {
        NoiseModel noise;
        noise.corner_sigma = sigma;
        noise.seed = 607;  // shared across levels: scenes and draws stay paired
        const SimulatedDataset data = simulate_dataset(spec, noise, 200, 20, true);

        std::map<std::string, GroundTruthSet> truths;
        for (const GroundTruthSet& gt : data.truths) truths[gt.image_id] = gt;
        const EvaluationBatch batch =
            evaluate_images(data.predictions, truths, params, 0.5, false, true);

        double total_u = 0.0;
        for (const ReportRow& row : batch.rows) {
            require(o, row.defined && row.uncertainty.has_value(),
                    "sigma " + fmt(sigma) + ": " + row.image_id + " undefined");
            if (!o.ok) return o;
            total_u += *row.uncertainty;
        }
        mean_u.push_back(total_u / static_cast<double>(batch.rows.size()));
        mean_iou.push_back(aggregate(batch.records).mean_avg_iou);
    }

    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        require(o, mean_u[i] > mean_u[i - 1],
                "mean uncertainty not strictly increasing at sigma " + fmt(sigmas[i]) + " (" +
                    fmt(mean_u[i - 1]) + " -> " + fmt(mean_u[i]) + ")");
        require(o, mean_iou[i] <= mean_iou[i - 1],
                "mean avg_iou increased at sigma " + fmt(sigmas[i]) + " (" +
                    fmt(mean_iou[i - 1]) + " -> " + fmt(mean_iou[i]) + ")");
    }
    const CorrelationResult su = spearman(sigmas, mean_u);
    require(o, su.r == 1.0, "spearman(level, mean uncertainty) = " + fmt(su.r) + ", want +1");
    const CorrelationResult si = spearman(sigmas, mean_iou);
    require(o, si.r == -1.0, "spearman(level, mean avg_iou) = " + fmt(si.r) + ", want -1");
    return o;
}

// ---------------------------------------------------------------- criterion 7

Outcome correlation_claim() {
    Outcome o;
    SceneSpec base;
    CounterRng sigma_rng(701);
    const DbscanParams params{100.0, 3};

    std::vector<double> us;
    std::vector<double> ious;
    for (int i = 0; i < 300; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "img_%06d", i);
        SceneSpec spec = base;
        spec.seed = CounterRng::derive(702, static_cast<std::uint64_t>(2 * i));
        const GroundTruthSet gt = generate_scene(spec, id);

        NoiseModel noise;
        noise.corner_sigma = sigma_rng.next_uniform(0.0, 15.0);
        noise.seed = CounterRng::derive(703, static_cast<std::uint64_t>(2 * i + 1));
        const PredictionSet ps = simulate_runs(gt, spec, noise, 20);

        const UncertaintyReport report = quantify(ps, params);
        require(o, report.defined, std::string(id) + " produced no clusters");
        if (!o.ok) return o;

        std::vector<BoundingBox> boxes;
        for (const RepresentativeBox& rep : representative_boxes(report))
            boxes.push_back(rep.box);
        const EvaluationRecord rec = evaluate(boxes, gt, 0.5);
        us.push_back(*report.uncertainty);
        ious.push_back(rec.avg_iou);
    }

    const CorrelationResult res = pearson(us, ious);
    require(o, res.r < 0.0, "r = " + fmt(res.r) + ", want negative");
    require(o, res.p_value < 0.05, "p = " + fmt(res.p_value) + ", want < 0.05");
    return o;
}

// ---------------------------------------------------------------- criterion 8

Outcome stats_oracles() {
    Outcome o;
    CounterRng rng(801);

    for (int s = 0; s < 100 && o.ok; ++s) {
        const std::size_t n = static_cast<std::size_t>(3 + rng.next_int(0, 97));
        std::vector<double> xs(n);
        std::vector<double> ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = rng.next_uniform(-10.0, 10.0);
            ys[i] = rng.next_uniform(-10.0, 10.0);
            if (s % 3 == 0) ys[i] = 0.7 * xs[i] + 0.3 * ys[i];
        }
        const double main_r = pearson(xs, ys).r;
        const double oracle_r = ref::pearson_direct(xs, ys);
        require(o, std::abs(main_r - oracle_r) <= 1e-12,
                "series " + std::to_string(s) + ": r " + fmt(main_r) + " vs oracle " +
                    fmt(oracle_r));
    }

    const std::vector<double> rs = {-0.95, -0.7, -0.45, -0.2, -0.05,
                                    0.1,   0.3,  0.55,  0.8,  0.9};
    const std::vector<std::size_t> ns = {5, 30};
    for (const std::size_t n : ns) {
        for (const double r : rs) {
            const double nu = static_cast<double>(n) - 2.0;
            const double t = r * std::sqrt(nu / (1.0 - r * r));
            const double p_main = incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
            const double p_ref = ref::t_two_sided_p(t, nu);
            require(o, std::abs(p_main - p_ref) <= 1e-8,
                    "p at r=" + fmt(r) + " n=" + std::to_string(n) + ": " + fmt(p_main) +
                        " vs quadrature " + fmt(p_ref));
        }
    }

    for (int s = 0; s < 100 && o.ok; ++s) {
        const std::size_t n = static_cast<std::size_t>(2 + rng.next_int(0, 198));
        std::vector<double> values(n);
        const double fill = rng.next_uniform(-5.0, 5.0);
        for (double& v : values) v = (s % 10 == 0) ? fill : rng.next_uniform(-5.0, 5.0);
        const double main_v = prediction_variance(values);
        const double oracle_v = ref::variance_two_pass(values);
        require(o, std::abs(main_v - oracle_v) <= 1e-12,
                "vector " + std::to_string(s) + ": variance " + fmt(main_v) + " vs oracle " +
                    fmt(oracle_v));
    }
    return o;
}

// ---------------------------------------------------------------- criterion 9

ReportDocument random_document(CounterRng& rng) {
    ReportDocument doc;
    if (rng.next_unit() < 0.8) doc.params.t_runs = rng.next_int(1, 40);
    if (rng.next_unit() < 0.8) doc.params.epsilon = rng.next_uniform(1.0, 300.0);
    if (rng.next_unit() < 0.8) doc.params.min_samples = rng.next_int(1, 8);
    if (rng.next_unit() < 0.5) doc.params.iou_threshold = rng.next_uniform(0.05, 0.95);
    if (rng.next_unit() < 0.3) doc.params.dropout_ratio = rng.next_uniform(0.0, 0.9);
    if (rng.next_unit() < 0.5) doc.params.corner_sigma = rng.next_uniform(0.0, 20.0);
    if (rng.next_unit() < 0.3) doc.params.miss_rate = rng.next_uniform(0.0, 0.5);
    if (rng.next_unit() < 0.3) doc.params.spurious_rate = rng.next_uniform(0.0, 3.0);
    if (rng.next_unit() < 0.5) doc.params.seed = rng.next_u64();

    const int n_rows = rng.next_int(0, 5);
    for (int i = 0; i < n_rows; ++i) {
        ReportRow row;
        row.image_id = "img_" + std::to_string(i);
        row.defined = rng.next_unit() < 0.8;
        if (row.defined) row.uncertainty = rng.next_uniform(0.0, 5000.0);
        row.noise_count = rng.next_int(0, 30);
        row.n_clusters = row.defined ? rng.next_int(1, 8) : 0;
        if (rng.next_unit() < 0.6) {
            row.avg_iou = rng.next_uniform(0.0, 1.0);
            row.precision = rng.next_uniform(0.0, 1.0);
            row.recall = rng.next_uniform(0.0, 1.0);
            row.f1 = rng.next_uniform(0.0, 1.0);
        }
        doc.rows.push_back(row);
    }
    return doc;
}

Outcome io_round_trip() {
    Outcome o;
    CounterRng rng(901);

    for (int d = 0; d < 20 && o.ok; ++d) {
        const ReportDocument doc = random_document(rng);
        for (const ReportFormat format : {ReportFormat::kCsv, ReportFormat::kJson}) {
            const std::string first = write_report(doc, format);
            std::istringstream in(first);
            const ReportDocument back = parse_report(in, format);
            require(o, back == doc, "document " + std::to_string(d) + " changed across parse");
            const std::string second = write_report(back, format);
            require(o, second == first,
                    "document " + std::to_string(d) + " rewrite is not byte-identical");
        }
    }

    const std::string good = R"({"image_id":"img","run":0,"x1":0,"y1":0,"x2":10,"y2":10})";
    struct Fixture {
        std::string text;
        std::size_t line;
    };
    const std::vector<Fixture> fixtures = {
        {"{broken\n", 1},
        {good + "\n{broken\n", 2},
        {good + "\n" + good + "\n[1,2]\n", 3},
        {good + "\n" + good + "\n" + good + "\n" +
             R"({"image_id":"img","run":0,"x1":0,"y1":0,"x2":10})" "\n",
         4},
        {"\n" + good + "\n\n{broken\n", 4},
        {R"({"run":0,"x1":0,"y1":0,"x2":10,"y2":10})" "\n", 1},
        {good + "\n" + R"({"image_id":12,"run":0,"x1":0,"y1":0,"x2":1,"y2":1})" "\n", 2},
        {R"({"image_id":"","run":0,"x1":0,"y1":0,"x2":1,"y2":1})" "\n", 1},
        {good + "\n" + good + "\n" + R"({"image_id":"img","x1":0,"y1":0,"x2":1,"y2":1})" "\n",
         3},
        {R"({"image_id":"img","run":2.5,"x1":0,"y1":0,"x2":1,"y2":1})" "\n", 1},
        {good + "\n" + R"({"image_id":"img","run":-1,"x1":0,"y1":0,"x2":1,"y2":1})" "\n", 2},
        {R"({"image_id":"img","run":0,"x1":"a","y1":0,"x2":1,"y2":1})" "\n", 1},
        {good + "\n" + R"({"image_id":"img","run":0,"x1":0,"x2":1,"y2":1})" "\n", 2},
        {R"({"image_id":"img","run":0,"x1":0,"y1":0,"x2":1,"y2":1,"confidence":2})" "\n", 1},
        {good + "\n" +
             R"({"image_id":"img","run":0,"x1":0,"y1":0,"x2":1,"y2":1,"confidence":"hi"})" "\n",
         2},
        {R"({"image_id":"img","run":0,"x1":0,"y1":0,"x2":1,"y2":1,"label":9})" "\n", 1},
        {good + "\n" + good + "\n" +
             R"({"image_id":"img","run":0,"x1":10,"y1":0,"x2":1,"y2":1})" "\n",
         3},
        {R"({"image_id":"img","run":0,"x1":0,"y1":5,"x2":1,"y2":5})" "\n", 1},
        {good + "\n42\n", 2},
        {good + "\r\n" + R"({"image_id":"img","run":null,"x1":0,"y1":0,"x2":1,"y2":1})" "\n",
         2},
    };
    for (std::size_t k = 0; k < fixtures.size() && o.ok; ++k) {
        std::istringstream in(fixtures[k].text);
        bool threw = false;
        std::size_t reported = 0;
        try {
            parse_predictions(in);
        } catch (const ParseError& e) {
            threw = true;
            reported = e.line;
        } catch (const InvalidBox& e) {
            threw = true;
            const std::string needle = "line " + std::to_string(fixtures[k].line) + ":";
            if (std::string(e.what()).rfind(needle, 0) == 0) reported = fixtures[k].line;
        }
        require(o, threw, "fixture " + std::to_string(k) + " parsed without error");
        require(o, reported == fixtures[k].line,
                "fixture " + std::to_string(k) + " reported line " + std::to_string(reported) +
                    ", want " + std::to_string(fixtures[k].line));
    }

    const std::string kitti =
        "Car 0.00 0 1.55 100.00 150.00 300.00 280.00 1.5 1.8 4.2 1.0 1.5 20.0 0.0\n"
        "DontCare -1 -1 -10 500 510 520 530 -1 -1 -1 -1000 -1000 -1000 -10\n"
        "Pedestrian 0.5 1 -0.2 40.5 60.25 80.75 120.5 1.7 0.6 0.9 -2.0 1.6 8.0 0.1\n"
        "Cyclist 0 2 1.0 600 300 700 400 1.6 0.7 1.9 5.0 1.7 15.0 -0.3\n";
    std::istringstream kin(kitti);
    const GroundTruthSet gt = parse_kitti_labels(kin, "000042");
    require(o, gt.boxes.size() == 3, "KITTI fixture box count");
    if (o.ok) {
        require(o,
                gt.boxes[0].x1 == 100.0 && gt.boxes[0].y1 == 150.0 && gt.boxes[0].x2 == 300.0 &&
                    gt.boxes[0].y2 == 280.0,
                "KITTI box 0 fields");
        require(o,
                gt.boxes[1].x1 == 40.5 && gt.boxes[1].y1 == 60.25 && gt.boxes[1].x2 == 80.75 &&
                    gt.boxes[1].y2 == 120.5,
                "KITTI box 1 fields");
        require(o, gt.boxes[2].x1 == 600.0 && gt.boxes[2].y2 == 400.0, "KITTI box 2 fields");
        require(o,
                gt.class_labels.has_value() && gt.class_labels->size() == 3 &&
                    (*gt.class_labels)[0] == "Car" && (*gt.class_labels)[1] == "Pedestrian" &&
                    (*gt.class_labels)[2] == "Cyclist",
                "KITTI class labels");
    }
    return o;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Outcome()> fn;
        double budget_s;  // 0 means no budget
    };
    const std::vector<Entry> entries = {
        {"geometry exactness", geometry_exactness, 1.0},
        {"hull oracle agreement", hull_oracle, 10.0},
        {"clustering oracle agreement", clustering_oracle, 30.0},
        {"zero-noise fixpoint", zero_noise_fixpoint, 10.0},
        {"deviation scaling law", scaling_law, 0.0},
        {"noise monotonicity sweep", monotonicity_sweep, 120.0},
        {"uncertainty-accuracy correlation", correlation_claim, 60.0},
        {"statistics oracle agreement", stats_oracles, 0.0},
        {"serialization round-trip", io_round_trip, 0.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = entries[i].fn();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("unexpected exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && entries[i].budget_s > 0.0 && elapsed > entries[i].budget_s) {
            o.ok = false;
            o.detail = "runtime " + fmt(elapsed) + " s exceeds budget " +
                       fmt(entries[i].budget_s) + " s";
        }
        if (!o.ok) ++failures;
        std::printf("[%s] criterion %zu: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", i + 1,
                    entries[i].name, elapsed, o.ok ? "" : ": ",
                    o.ok ? "" : o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
