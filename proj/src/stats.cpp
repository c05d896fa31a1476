#include "pure/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pure/errors.hpp"

namespace pure {
namespace {

// Continued fraction for the incomplete beta, modified Lentz iteration.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

void check_inputs(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw LengthMismatch("series lengths differ: " + std::to_string(xs.size()) + " vs " +
                             std::to_string(ys.size()));
    if (xs.size() < 3)
        throw TooFewSamples("need at least 3 paired samples, got " + std::to_string(xs.size()));
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
    check_inputs(xs, ys);
    const std::size_t n = xs.size();
    const double dn = static_cast<double>(n);

    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / dn;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / dn;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw ConstantSeries("first series is constant");
    if (syy == 0.0) throw ConstantSeries("second series is constant");

    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    CorrelationResult res;
    res.r = r;
    res.n = n;
    const double nu = dn - 2.0;
    const double one_minus_r2 = 1.0 - r * r;
    if (one_minus_r2 <= 0.0) {
        res.p_value = 0.0;
        return res;
    }
    const double t = r * std::sqrt(nu / one_minus_r2);
    // Two-sided tail of Student's t: P(|T| >= |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2).
    res.p_value = incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
    res.p_value = std::clamp(res.p_value, 0.0, 1.0);
    return res;
}

std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Tied block [i, j] shares the average of ranks i+1 .. j+1.
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys) {
    check_inputs(xs, ys);
    const std::vector<double> rx = fractional_ranks(xs);
    const std::vector<double> ry = fractional_ranks(ys);
    return pearson(rx, ry);
}

}  // namespace pure
