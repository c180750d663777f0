#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hybridtherm/boundaries.hpp"
#include "hybridtherm/csv.hpp"
#include "hybridtherm/error.hpp"
#include "hybridtherm/sweep.hpp"
#include "../support/generators.hpp"

using namespace hybridtherm;

namespace {

SweepSpec map_spec(std::size_t points) {
    SweepSpec s;
    s.base = gen::filter_params();
    s.axes = {{AxisKind::MuC, -50, 150, points}, {AxisKind::MuH, -50, 150, points}};
    s.reference = {SweepReferenceKind::Fixed, 25};
    return s;
}

std::string csv_of(const SweepResult& r) {
    std::ostringstream out;
    write_csv(out, r.records);
    return out.str();
}

}  // namespace

TEST(Axis, EndpointsAreExact) {
    const Axis a{AxisKind::TG, 0.1, 0.7, 7};
    EXPECT_EQ(a.value(0), 0.1);
    EXPECT_EQ(a.value(6), 0.7);
    EXPECT_DOUBLE_EQ(a.spacing(), 0.1);
}

TEST(SweepSpec, Validation) {
    auto s = map_spec(3);
    s.axes.push_back(s.axes[0]);
    EXPECT_THROW(validate(s), ValidationError);
    s = map_spec(3);
    s.axes[0].points = 0;
    EXPECT_THROW(validate(s), ValidationError);
    s = map_spec(3);
    s.axes[1].kind = AxisKind::MuC;
    EXPECT_THROW(validate(s), ValidationError);
}

TEST(PointParams, DeltaMuRules) {
    SweepSpec s;
    s.base = gen::filter_params(10, 4);
    s.axes = {{AxisKind::DeltaMu, -2, 2, 3}};
    const double v[] = {2.0};
    s.delta_mu_rule = DeltaMuRule::HoldMuH;
    auto p = point_params(s, v);
    EXPECT_EQ(p.mu_h, 4);
    EXPECT_EQ(p.mu_c, 6);
    s.delta_mu_rule = DeltaMuRule::HoldMuC;
    p = point_params(s, v);
    EXPECT_EQ(p.mu_c, 10);
    EXPECT_EQ(p.mu_h, 8);
    s.delta_mu_rule = DeltaMuRule::Symmetric;
    p = point_params(s, v);
    EXPECT_EQ(p.mu_c - p.mu_h, 2);
    EXPECT_EQ(p.mu_c + p.mu_h, 14);
}

TEST(RunSweep, RowMajorOrder) {
    const auto r = run_sweep(map_spec(5));
    ASSERT_EQ(r.rows(), 5u);
    ASSERT_EQ(r.cols(), 5u);
    EXPECT_EQ(r.at(1, 3).axis[0], 0.0);
    EXPECT_EQ(r.at(1, 3).axis[1], 100.0);
    EXPECT_EQ(&r.at(1, 3), &r.records[8]);
}

TEST(RunSweep, ThreadCountDoesNotChangeOutput) {
    const auto spec = map_spec(31);
    const auto serial = csv_of(run_sweep(spec, 1));
    EXPECT_EQ(serial, csv_of(run_sweep(spec, 3)));
    EXPECT_EQ(serial, csv_of(run_sweep(spec, 8)));
}

TEST(RunSweep, EquilibriumGridIsIdle) {
    SweepSpec s;
    s.base = gen::filter_params(0, 0);
    s.base.T_c = s.base.T_h = s.base.T_g = 25;
    s.axes = {{AxisKind::MuC, 0, 0, 2}, {AxisKind::MuH, 0, 0, 2}};
    const auto r = run_sweep(s, 2);
    EXPECT_EQ(region_area(r, "IDLE"), 4u);
}

TEST(RunSweep, FailedPointsAreRecorded) {
    SweepSpec s;
    s.base = gen::filter_params();
    s.base.rate_overrides[{Terminal::G, 0}] = 0.0;
    s.base.rate_overrides[{Terminal::G, 1}] = 0.0;
    s.axes = {{AxisKind::MuC, 0, 10, 2}};
    const auto r = run_sweep(s);
    ASSERT_EQ(r.records.size(), 2u);
    for (const auto& rec : r.records) {
        EXPECT_FALSE(rec.ok());
        EXPECT_NE(rec.error.find("NO_UNIQUE_STEADY_STATE"), std::string::npos) << rec.error;
    }
}

TEST(RunSweep, EfficiencyComponentsSum) {
    const auto r = run_sweep(map_spec(21), 4);
    for (const auto& rec : r.records) {
        if (!rec.eta) continue;
        const double sum = rec.eta_E.value_or(0) + rec.eta_R.value_or(0) + rec.eta_P.value_or(0);
        EXPECT_NEAR(sum, *rec.eta, 1e-12 * std::max(1.0, *rec.eta));
        EXPECT_LE(*rec.eta, 1 + 1e-12);
    }
}

TEST(FitLine, RecoversLine) {
    std::vector<Point2> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({double(i), 2.0 * i + 1});
    const auto l = fit_line(pts);
    ASSERT_TRUE(l);
    for (const auto& p : pts) EXPECT_NEAR(l->distance(p), 0.0, 1e-12);
    EXPECT_FALSE(fit_line({{1, 1}, {1, 1}}));
}

TEST(Boundaries, FollowExpectedLines) {
    const auto spec = map_spec(101);
    const auto r = run_sweep(spec, 0);
    const auto bounds = extract_boundaries(r);
    int checked = 0;
    for (const auto& b : bounds) {
        const auto line = expected_boundary(spec.base, b.regimes.first, b.regimes.second);
        if (!line || b.points.size() < 5) continue;
        double worst = 0;
        for (const auto& p : b.points) worst = std::max(worst, line->distance(p));
        EXPECT_LE(worst, 2 * spec.axes[0].spacing()) << b.regimes.first << "/" << b.regimes.second;
        ++checked;
    }
    EXPECT_GE(checked, 4);
}

TEST(Boundaries, ExpectedLines) {
    const auto p = gen::filter_params();
    auto l = expected_boundary(p, "E", "ER");
    ASSERT_TRUE(l);
    EXPECT_NEAR(l->distance({0, 37}), 0.0, 1e-12);
    l = expected_boundary(p, "ER", "R");
    ASSERT_TRUE(l);
    EXPECT_NEAR(l->distance({12, 12}), 0.0, 1e-12);
    l = expected_boundary(p, "IDLE", "P");
    ASSERT_TRUE(l);
    EXPECT_NEAR(l->distance({20, 12}), 0.0, 1e-12);
    EXPECT_FALSE(expected_boundary(p, "R", "P"));
}
