#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pure {

struct CorrelationResult {
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

// Sample Pearson correlation with a two-sided p-value from the Student-t
// transform t = r*sqrt((n-2)/(1-r^2)) on n-2 degrees of freedom.
// Throws LengthMismatch, TooFewSamples (n < 3), ConstantSeries.
CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys);

// Pearson correlation of fractional ranks; ties receive their average rank.
// Same preconditions and errors as pearson.
CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys);

// Average-tie fractional ranks, 1-based: values [10, 20, 20, 30] rank as
// [1, 2.5, 2.5, 4].
std::vector<double> fractional_ranks(std::span<const double> values);

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
// via continued fraction with the symmetry switch at x > (a+1)/(a+b+2).
double incomplete_beta(double a, double b, double x);

}  // namespace pure
