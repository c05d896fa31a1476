#pragma once

// Independent reference implementations used as test oracles and benchmark
// baselines. Each favors obviousness over speed and shares no code with the
// main algorithms beyond the domain types.

#include <functional>
#include <span>
#include <vector>

#include "pure/clustering.hpp"
#include "pure/detmetrics.hpp"
#include "pure/geometry.hpp"

namespace pure::ref {

// Jarvis march (gift wrapping), clockwise, farthest-point tie-break on
// collinear candidates.
Polygon gift_wrap_hull(std::span<const Point2> points);

// Plain shoelace sum, no shared code with the main area routine.
double shoelace_area(std::span<const Point2> vertices);

// All input points lie inside or on a convex hull, within eps.
bool hull_contains(const Polygon& hull, const Point2& p, double eps);

// Textbook DBSCAN: visited set plus frontier queue, O(n^2) region queries.
// Same neighborhood contract as the main implementation (squared distance
// <= epsilon^2, self-inclusive).
ClusterAssignment dbscan_naive(std::span<const Point2> points, const DbscanParams& params);

// Pearson r by the raw-sums formula, no centering.
double pearson_direct(std::span<const double> xs, std::span<const double> ys);

// Sample variance via explicit mean-then-deviations passes.
double variance_two_pass(std::span<const double> values);

// Recursive adaptive Simpson quadrature on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// Two-sided Student-t tail P(|T| >= |t|) on nu degrees of freedom by
// quadrature of the density over a compactified half-line.
double t_two_sided_p(double t, double nu);

// Regularized incomplete beta by quadrature of its defining integral under
// t = sin^2(theta), valid for a, b >= 0.5.
double beta_integral(double a, double b, double x);

// Greedy IoU matching by repeated full scans over the remaining couples.
MatchResult match_rescan(std::span<const BoundingBox> predictions, const GroundTruthSet& truths);

}  // namespace pure::ref
