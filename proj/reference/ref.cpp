#include "ref.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace pure::ref {
namespace {

double dist2(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::vector<Point2> dedupe(std::span<const Point2> points) {
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    return pts;
}

std::vector<std::uint32_t> region_query(std::span<const Point2> points, std::size_t i,
                                        double eps_sq) {
    std::vector<std::uint32_t> hits;
    for (std::size_t j = 0; j < points.size(); ++j)
        if (dist2(points[i], points[j]) <= eps_sq) hits.push_back(static_cast<std::uint32_t>(j));
    return hits;
}

}  // namespace

Polygon gift_wrap_hull(std::span<const Point2> points) {
    const std::vector<Point2> pts = dedupe(points);
    const std::size_t n = pts.size();
    Polygon hull;
    if (n == 0) return hull;
    if (n <= 2) {
        hull.vertices = pts;
        return hull;
    }

    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i].x < pts[start].x || (pts[i].x == pts[start].x && pts[i].y < pts[start].y))
            start = i;

    std::size_t current = start;
    do {
        hull.vertices.push_back(pts[current]);
        std::size_t next = (current + 1) % n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == current) continue;
            const double turn = cross(pts[current], pts[next], pts[i]);
            if (turn < 0.0 ||
                (turn == 0.0 && dist2(pts[current], pts[i]) > dist2(pts[current], pts[next])))
                next = i;
        }
        current = next;
    } while (current != start && hull.vertices.size() <= n);
    return hull;
}

double shoelace_area(std::span<const Point2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    return std::abs(sum) / 2.0;
}

bool hull_contains(const Polygon& hull, const Point2& p, double eps) {
    const std::size_t n = hull.vertices.size();
    if (n == 0) return false;
    if (n == 1) return dist2(hull.vertices[0], p) <= eps * eps;
    if (n == 2) {
        // Within eps of the segment: project onto it and clamp.
        const Point2& a = hull.vertices[0];
        const Point2& b = hull.vertices[1];
        const double len2 = dist2(a, b);
        double t = len2 > 0.0 ? ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const Point2 proj{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        return dist2(proj, p) <= eps * eps;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = hull.vertices[i];
        const Point2& b = hull.vertices[(i + 1) % n];
        if (cross(a, b, p) < -eps) return false;
    }
    return true;
}

ClusterAssignment dbscan_naive(std::span<const Point2> points, const DbscanParams& params) {
    if (points.empty()) throw std::invalid_argument("dbscan_naive needs points");
    const std::size_t n = points.size();
    const double eps_sq = params.epsilon * params.epsilon;

    constexpr int kUnvisited = -2;
    ClusterAssignment out;
    out.labels.assign(n, kUnvisited);
    out.core.assign(n, 0);
    int cid = 0;

    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] != kUnvisited) continue;
        const auto neighbors = region_query(points, i, eps_sq);
        if (neighbors.size() < static_cast<std::size_t>(params.min_samples)) {
            out.labels[i] = kNoise;
            continue;
        }
        out.core[i] = 1;
        out.labels[i] = cid;
        std::deque<std::uint32_t> frontier(neighbors.begin(), neighbors.end());
        while (!frontier.empty()) {
            const std::uint32_t q = frontier.front();
            frontier.pop_front();
            if (out.labels[q] == kNoise) out.labels[q] = cid;  // border point
            if (out.labels[q] != kUnvisited) continue;
            out.labels[q] = cid;
            const auto qn = region_query(points, q, eps_sq);
            if (qn.size() >= static_cast<std::size_t>(params.min_samples)) {
                out.core[q] = 1;
                frontier.insert(frontier.end(), qn.begin(), qn.end());
            }
        }
        ++cid;
    }
    out.n_clusters = cid;
    return out;
}

double pearson_direct(std::span<const double> xs, std::span<const double> ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

double variance_two_pass(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("variance needs at least 2 values");
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double sum_sq = 0.0;
    for (const double v : values) sum_sq += (v - mean) * (v - mean);
    return sum_sq / (static_cast<double>(values.size()) - 1.0);
}

namespace {

double simpson_patch(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = (a + m) / 2.0;
    const double rm = (m + b) / 2.0;
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_patch(a, fa, m, fm, flm);
    const double right = simpson_patch(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = (a + b) / 2.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson_patch(a, fa, b, fb, fm);
    return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

double t_two_sided_p(double t, double nu) {
    const double at = std::abs(t);
    const double ln_norm = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                           0.5 * std::log(nu * std::numbers::pi);
    const auto density = [&](double s) {
        return std::exp(ln_norm - (nu + 1.0) / 2.0 * std::log1p(s * s / nu));
    };
    // Map s in [at, inf) to u in [0, 1) via s = at + u/(1-u).
    const auto integrand = [&](double u) {
        const double om = 1.0 - u;
        const double s = at + u / om;
        return density(s) / (om * om);
    };
    const double tail = adaptive_simpson(integrand, 0.0, 1.0 - 1e-12, 1e-12);
    return std::min(1.0, 2.0 * tail);
}

double beta_integral(double a, double b, double x) {
    if (!(a >= 0.5) || !(b >= 0.5))
        throw std::invalid_argument("beta_integral quadrature needs a, b >= 0.5");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // t = sin^2(theta) removes the endpoint singularities for a, b >= 0.5.
    const auto integrand = [&](double theta) {
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        return 2.0 * std::pow(s, 2.0 * a - 1.0) * std::pow(c, 2.0 * b - 1.0);
    };
    const double upper = std::asin(std::sqrt(x));
    const double partial = adaptive_simpson(integrand, 0.0, upper, 1e-12);
    const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return partial / std::exp(ln_beta);
}

MatchResult match_rescan(std::span<const BoundingBox> predictions, const GroundTruthSet& truths) {
    const std::size_t np = predictions.size();
    const std::size_t nt = truths.boxes.size();
    std::vector<std::vector<double>> ious(np, std::vector<double>(nt, 0.0));
    for (std::size_t pi = 0; pi < np; ++pi)
        for (std::size_t ti = 0; ti < nt; ++ti) ious[pi][ti] = iou(predictions[pi], truths.boxes[ti]);

    MatchResult out;
    std::vector<bool> pu(np, false), tu(nt, false);
    while (true) {
        double best = 0.0;
        std::size_t bp = np, bt = nt;
        for (std::size_t pi = 0; pi < np; ++pi) {
            if (pu[pi]) continue;
            for (std::size_t ti = 0; ti < nt; ++ti) {
                if (tu[ti]) continue;
                if (ious[pi][ti] > best) {
                    best = ious[pi][ti];
                    bp = pi;
                    bt = ti;
                }
            }
        }
        if (bp == np) break;  // no remaining couple with iou > 0
        pu[bp] = true;
        tu[bt] = true;
        out.pairs.push_back({bp, bt, best});
    }
    for (std::size_t pi = 0; pi < np; ++pi)
        if (!pu[pi]) out.unmatched_predictions.push_back(pi);
    for (std::size_t ti = 0; ti < nt; ++ti)
        if (!tu[ti]) out.unmatched_truths.push_back(ti);
    return out;
}

}  // namespace pure::ref
