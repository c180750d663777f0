#include "hybridtherm/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

namespace {

/// Task letters of a canonical regime name; IDLE and DISSIPATIVE have none.
std::optional<std::set<char>> task_letters(const std::string& regime) {
    if (regime == "IDLE" || regime == "DISSIPATIVE") return std::set<char>{};
    if (regime.empty() || regime.find_first_not_of("ERP") != std::string::npos) return std::nullopt;
    return std::set<char>(regime.begin(), regime.end());
}

}  // namespace

double Line::distance(const Point2& p) const { return std::abs(a * p.x + b * p.y - c); }

Line Line::through(double a, double b, double c) {
    const double norm = std::hypot(a, b);
    if (norm == 0.0) throw ValidationError("degenerate line");
    return {a / norm, b / norm, c / norm};
}

std::optional<Line> fit_line(const std::vector<Point2>& points) {
    if (points.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        syy += (p.y - my) * (p.y - my);
        sxy += (p.x - mx) * (p.y - my);
    }
    if (sxx + syy == 0.0) return std::nullopt;
    // The normal is the eigenvector of the scatter matrix with the smaller
    // eigenvalue; theta is the direction of the larger one.
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const double a = -std::sin(theta);
    const double b = std::cos(theta);
    return Line{a, b, a * mx + b * my};
}

std::vector<Boundary> extract_boundaries(const SweepResult& result) {
    if (result.spec.axes.size() != 2) throw ValidationError("boundaries need a two-axis sweep");
    const std::size_t rows = result.rows();
    const std::size_t cols = result.cols();
    std::map<std::pair<std::string, std::string>, std::vector<Point2>> groups;

    auto consider = [&](const SweepRecord& p, const SweepRecord& q) {
        if (!p.ok() || !q.ok() || p.regime == q.regime) return;
        auto key = std::minmax(p.regime, q.regime);
        groups[{key.first, key.second}].push_back(
            {0.5 * (p.axis[0] + q.axis[0]), 0.5 * (p.axis[1] + q.axis[1])});
    };
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (j + 1 < cols) consider(result.at(i, j), result.at(i, j + 1));
            if (i + 1 < rows) consider(result.at(i, j), result.at(i + 1, j));
        }
    }

    std::vector<Boundary> out;
    for (auto& [key, points] : groups) {
        Boundary b;
        b.regimes = key;
        b.points = std::move(points);
        b.fit = fit_line(b.points);
        if (b.fit) {
            for (const auto& p : b.points) b.max_fit_residual = std::max(b.max_fit_residual, b.fit->distance(p));
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::optional<Line> expected_boundary(const DotParams& p, const std::string& regime_a,
                                      const std::string& regime_b) {
    // Under tight coupling every current vanishes only on the reversibility
    // line, so that is where IDLE cells sit.
    const bool idle = regime_a == "IDLE" || regime_b == "IDLE";
    const auto a = task_letters(regime_a);
    const auto b = task_letters(regime_b);
    if (!a || !b) return std::nullopt;
    std::set<char> toggled;
    std::set_symmetric_difference(a->begin(), a->end(), b->begin(), b->end(),
                                  std::inserter(toggled, toggled.begin()));
    if (!idle && toggled == std::set<char>{'E'}) return Line::through(1.0, -1.0, 0.0);
    if (!idle && toggled == std::set<char>{'R'}) return Line::through(1.0, 0.0, p.eps_S);
    if (!idle && toggled == std::set<char>{'P'}) return Line::through(0.0, 1.0, p.eps_S + p.U);
    if (idle || toggled == std::set<char>{'E', 'R', 'P'}) {
        // Zero set of the cycle affinity, written in (mu_c, mu_h).
        return Line::through(1.0 / p.T_c, -1.0 / p.T_h, p.eps_S / p.T_c - (p.eps_S + p.U) / p.T_h + p.U / p.T_g);
    }
    return std::nullopt;
}

}  // namespace hybridtherm
