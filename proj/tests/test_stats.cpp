#include <cmath>
#include <vector>

#include <doctest.h>

#include "pure/errors.hpp"
#include "pure/rng.hpp"
#include "pure/stats.hpp"
#include "ref.hpp"
#include "test_util.hpp"

using namespace pure;
using testutil::close;

namespace {

std::vector<double> random_series(CounterRng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) xs.push_back(rng.next_uniform(lo, hi));
    return xs;
}

// Standardize to mean 0, norm 1.
void standardize(std::vector<double>& xs) {
    double mean = 0.0;
    for (const double v : xs) mean += v;
    mean /= static_cast<double>(xs.size());
    double norm = 0.0;
    for (double& v : xs) {
        v -= mean;
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : xs) v /= norm;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("exact linear relationships") {
    std::vector<double> xs = {1, 2, 3, 4, 5, 6};
    std::vector<double> up, down;
    for (const double x : xs) {
        up.push_back(2.0 * x + 1.0);
        down.push_back(-x);
    }
    const CorrelationResult pos = pearson(xs, up);
    CHECK(pos.r == 1.0);
    CHECK(pos.p_value == 0.0);
    CHECK(pos.n == 6);

    const CorrelationResult neg = pearson(xs, down);
    CHECK(neg.r == -1.0);
    CHECK(neg.p_value == 0.0);
}

TEST_CASE("input validation") {
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {1, 2};
    CHECK_THROWS_AS(pearson(a, b), LengthMismatch);
    const std::vector<double> short_a = {1, 2};
    const std::vector<double> short_b = {3, 4};
    CHECK_THROWS_AS(pearson(short_a, short_b), TooFewSamples);
    const std::vector<double> constant = {5, 5, 5};
    const std::vector<double> varying = {1, 2, 3};
    CHECK_THROWS_AS(pearson(constant, varying), ConstantSeries);
    CHECK_THROWS_AS(pearson(varying, constant), ConstantSeries);
    CHECK_THROWS_AS(spearman(a, b), LengthMismatch);
    CHECK_THROWS_AS(spearman(constant, varying), ConstantSeries);
}

TEST_CASE("r matches the direct-formula oracle") {
    CounterRng rng(61);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.next_int(0, 97));
        const auto xs = random_series(rng, n, -50.0, 50.0);
        auto ys = random_series(rng, n, -50.0, 50.0);
        // Occasionally correlate the series so r spans its range.
        if (i % 3 == 0)
            for (std::size_t k = 0; k < n; ++k) ys[k] = 0.7 * xs[k] + 0.3 * ys[k];
        CHECK(close(pearson(xs, ys).r, ref::pearson_direct(xs, ys), 1e-12));
    }
}

TEST_CASE("symmetry and affine invariance") {
    CounterRng rng(62);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng.next_int(0, 45));
        const auto xs = random_series(rng, n, -10.0, 10.0);
        const auto ys = random_series(rng, n, -10.0, 10.0);
        const double base = pearson(xs, ys).r;
        CHECK(pearson(ys, xs).r == base);

        const double a = rng.next_uniform(0.1, 5.0);
        const double b = rng.next_uniform(-20.0, 20.0);
        std::vector<double> scaled, flipped;
        for (const double x : xs) {
            scaled.push_back(a * x + b);
            flipped.push_back(-a * x + b);
        }
        CHECK(close(pearson(scaled, ys).r, base, 1e-12));
        CHECK(close(pearson(flipped, ys).r, -base, 1e-12));
    }
}

TEST_CASE("p-value matches t-density quadrature") {
    CounterRng rng(63);
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng.next_int(0, 60));
        const auto xs = random_series(rng, n, 0.0, 1.0);
        auto ys = random_series(rng, n, 0.0, 1.0);
        const double mix = rng.next_uniform(-0.9, 0.9);
        for (std::size_t k = 0; k < n; ++k) ys[k] = mix * xs[k] + (1.0 - std::abs(mix)) * ys[k];

        const CorrelationResult res = pearson(xs, ys);
        const double nu = static_cast<double>(n) - 2.0;
        const double t = res.r * std::sqrt(nu / (1.0 - res.r * res.r));
        CHECK(close(res.p_value, ref::t_two_sided_p(t, nu), 1e-8));
    }
}

TEST_CASE("p-value decreases as the correlation strengthens") {
    CounterRng rng(64);
    const std::size_t n = 24;
    auto xs = random_series(rng, n, -1.0, 1.0);
    auto zs = random_series(rng, n, -1.0, 1.0);
    standardize(xs);
    // Make zs orthogonal to xs, then unit norm, so mixing gives an exact
    // empirical correlation of rho.
    double dot = 0.0;
    double zmean = 0.0;
    for (const double z : zs) zmean += z;
    zmean /= static_cast<double>(n);
    for (double& z : zs) z -= zmean;
    for (std::size_t k = 0; k < n; ++k) dot += zs[k] * xs[k];
    for (std::size_t k = 0; k < n; ++k) zs[k] -= dot * xs[k];
    double znorm = 0.0;
    for (const double z : zs) znorm += z * z;
    znorm = std::sqrt(znorm);
    for (double& z : zs) z /= znorm;

    double previous_p = 1.1;
    for (const double rho : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        std::vector<double> ys(n);
        for (std::size_t k = 0; k < n; ++k)
            ys[k] = rho * xs[k] + std::sqrt(1.0 - rho * rho) * zs[k];
        const CorrelationResult res = pearson(xs, ys);
        CHECK(close(res.r, rho, 1e-9));
        CHECK(res.p_value < previous_p);
        previous_p = res.p_value;
    }
}

TEST_CASE("incomplete beta against its defining integral") {
    // 20 grid points spanning both continued-fraction branches.
    const double as[] = {0.5, 1.0, 2.5, 8.0, 30.0};
    const double bs[] = {0.5, 4.0};
    const double xs[] = {0.12, 0.77};
    int points = 0;
    for (const double a : as)
        for (const double b : bs)
            for (const double x : xs) {
                CHECK(close(incomplete_beta(a, b, x), ref::beta_integral(a, b, x), 1e-8));
                ++points;
            }
    CHECK(points == 20);
}

TEST_CASE("incomplete beta edge values and validation") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // Symmetric case has a closed form: I_{1/2}(a, a) = 1/2.
    CHECK(close(incomplete_beta(4.0, 4.0, 0.5), 0.5, 1e-12));
    // Uniform case: I_x(1, 1) = x.
    CHECK(close(incomplete_beta(1.0, 1.0, 0.25), 0.25, 1e-12));
    CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(incomplete_beta(1.0, -1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("fractional ranks with ties") {
    const std::vector<double> values = {10, 20, 20, 30};
    const std::vector<double> expected = {1.0, 2.5, 2.5, 4.0};
    CHECK(fractional_ranks(values) == expected);

    const std::vector<double> reversed = {9, 7, 5, 3};
    const std::vector<double> rexp = {4.0, 3.0, 2.0, 1.0};
    CHECK(fractional_ranks(reversed) == rexp);

    const std::vector<double> all_tied = {2, 2, 2};
    const std::vector<double> texp = {2.0, 2.0, 2.0};
    CHECK(fractional_ranks(all_tied) == texp);
}

TEST_CASE("spearman on monotone and tied data") {
    const std::vector<double> xs = {1, 2, 3, 4, 5};
    std::vector<double> convex, falling;
    for (const double x : xs) {
        convex.push_back(x * x * x);  // strictly increasing, nonlinear
        falling.push_back(100.0 - 3.0 * x);
    }
    CHECK(spearman(xs, convex).r == 1.0);
    CHECK(spearman(xs, falling).r == -1.0);

    const std::vector<double> tx = {1, 2, 2, 3};
    const std::vector<double> ty = {4, 4, 5, 6};
    // Average ranks by hand: x -> [1, 2.5, 2.5, 4], y -> [1.5, 1.5, 3, 4].
    const std::vector<double> rank_x = {1.0, 2.5, 2.5, 4.0};
    const std::vector<double> rank_y = {1.5, 1.5, 3.0, 4.0};
    CHECK(close(spearman(tx, ty).r, ref::pearson_direct(rank_x, rank_y), 1e-12));
}

TEST_CASE("near-zero correlation keeps a large p-value") {
    // Oscillations at unrelated frequencies: r is tiny, p stays large.
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(std::sin(0.37 * i));
        ys.push_back(std::cos(0.74 * i + 1.0));
    }
    const CorrelationResult res = pearson(xs, ys);
    CHECK(std::abs(res.r) < 0.3);
    CHECK(res.p_value > 0.05);
    CHECK(res.p_value <= 1.0);
}

}  // TEST_SUITE
