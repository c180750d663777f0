#pragma once

// Regime boundaries on a two-axis sweep: edge midpoints where the label
// changes, grouped by regime pair, with a total-least-squares line per group.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridtherm/sweep.hpp"

namespace hybridtherm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// a x + b y = c with a^2 + b^2 = 1.
struct Line {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    [[nodiscard]] double distance(const Point2& p) const;
    [[nodiscard]] static Line through(double a, double b, double c);  ///< normalizes
};

struct Boundary {
    std::pair<std::string, std::string> regimes;  ///< lexicographically ordered
    std::vector<Point2> points;                  ///< edge midpoints, in grid order
    std::optional<Line> fit;                     ///< present with >= 2 distinct points
    double max_fit_residual = 0.0;
};

/// Total least-squares line through the points; empty for fewer than two
/// distinct points.
[[nodiscard]] std::optional<Line> fit_line(const std::vector<Point2>& points);

/// Boundaries between successfully classified neighbours. Requires a
/// two-axis result; ordered by regime pair.
[[nodiscard]] std::vector<Boundary> extract_boundaries(const SweepResult& result);

/// The line a boundary should follow under tight coupling, for a sweep over
/// (mu_c, mu_h) in that order. It depends only on which tasks switch across
/// the boundary: work alone (mu_c = mu_h), refrigeration alone (mu_c = eps_S),
/// pumping alone (mu_h = eps_S + U), or all three together (the
/// reversibility line). IDLE cells lie on the reversibility line. Other
/// combinations have no single line.
[[nodiscard]] std::optional<Line> expected_boundary(const DotParams& params, const std::string& regime_a,
                                                    const std::string& regime_b);

}  // namespace hybridtherm
