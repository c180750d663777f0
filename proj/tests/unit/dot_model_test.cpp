#include <gtest/gtest.h>

#include <cmath>

#include "hybridtherm/dot_model.hpp"
#include "hybridtherm/error.hpp"
#include "hybridtherm/regime.hpp"
#include "../support/generators.hpp"

using namespace hybridtherm;
using hybridtherm::gen::filter_params;

namespace {

DotParams slow_gate_params() {
    DotParams p;
    p.eps_S = 0;
    p.eps_G = -80;
    p.U = 90;
    p.mu_c = 25;
    p.mu_h = 15;
    p.T_c = 20;
    p.T_h = 30;
    p.T_g = 24;
    p.Gamma = 0.01;
    return p;
}

}  // namespace

TEST(Fermi, Anchors) {
    EXPECT_EQ(fermi(3.0, 3.0, 7.0), 0.5);
    EXPECT_NEAR(fermi(5.0, 3.0, 2.0), 0.2689414213699951, 1e-16);
    EXPECT_EQ(fermi(1.0, 0.0, 0.0), 0.0);
    EXPECT_EQ(fermi(-1.0, 0.0, 0.0), 1.0);
    EXPECT_EQ(fermi(0.0, 0.0, 0.0), 0.5);
}

TEST(Fermi, FarTailsDoNotOverflow) {
    EXPECT_GT(fermi(1e4, 0.0, 1.0), 0.0 - 1e-300);
    EXPECT_EQ(fermi(-1e4, 0.0, 1.0), 1.0);
    EXPECT_NEAR(fermi(40.0, 0.0, 1.0), std::exp(-40.0), 1e-30);
}

TEST(TransitionRates, FilterClosesLeakChannels) {
    const auto r = transition_rates(filter_params());
    for (auto k : {channel_index(Terminal::C, 1), channel_index(Terminal::H, 0)}) {
        EXPECT_EQ(r[k].in, 0.0);
        EXPECT_EQ(r[k].out, 0.0);
    }
}

TEST(TransitionRates, HotChannelAtNinety) {
    const auto r = transition_rates(filter_params());
    EXPECT_NEAR(r[channel_index(Terminal::H, 1)].in, 0.0758581800212435, 1e-15);
}

TEST(TransitionRates, OverridesTakePrecedence) {
    auto p = filter_params();
    p.gamma_leak = 0.3;
    p.rate_overrides[{Terminal::G, 1}] = 2.0;
    const auto r = transition_rates(p);
    EXPECT_EQ(r[channel_index(Terminal::G, 1)].base, 2.0);
    EXPECT_EQ(r[channel_index(Terminal::C, 1)].base, 0.3);
    p.rate_overrides[{Terminal::C, 0}] = -1.0;
    EXPECT_THROW((void)transition_rates(p), ValidationError);
}

TEST(TransitionRates, RejectsBadParams) {
    auto p = filter_params();
    p.T_h = -1;
    EXPECT_THROW((void)transition_rates(p), ValidationError);
    p = filter_params();
    p.gamma_leak = -0.1;
    EXPECT_THROW((void)transition_rates(p), ValidationError);
}

TEST(DotProperty, RatesSumAndDetailedBalance) {
    gen::Gen g(31);
    for (int i = 0; i < 2000; ++i) {
        const auto p = g.dot();
        for (const auto& ch : transition_rates(p)) {
            ASSERT_NEAR(ch.in + ch.out, ch.base, 1e-15 * std::max(1.0, ch.base));
            if (ch.base > 0 && ch.out > 1e-300 && ch.in > 1e-300) {
                const double x = (ch.energy - ch.mu) / ch.temperature;
                ASSERT_NEAR(std::log(ch.in / ch.out), -x, 1e-12 * std::max(1.0, std::abs(x)));
            }
        }
    }
}

TEST(SteadyState, EquilibriumIsGibbs) {
    auto p = filter_params(0, 0);
    p.T_c = p.T_h = p.T_g = 17;
    p.eps_S = 3;
    p.eps_G = -4;
    p.U = 11;
    const auto s = steady_state(p);
    std::vector<GibbsState> states(4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) states[state_index(a, b)] = {state_energy(p, a, b), {}};
    }
    const auto g = gge_distribution(states, Reservoir{"r", 17, {}});
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(s.distribution[k], g[k], 1e-15);
    EXPECT_NEAR(s.particle_current(), 0.0, 1e-16);
}

TEST(SteadyState, VanishesOnReversibilityLine) {
    // mu_c / 20 - mu_h / 30 = 0.6 for eps_S = 0, U = 90, T_g = 25.
    for (double mu_c : {0.0, 12.0, -30.0, 60.0}) {
        const double mu_h = 1.5 * mu_c - 18.0;
        auto p = filter_params(mu_c, mu_h);
        EXPECT_NEAR(reversibility_residual(p), 0.0, 1e-14);
        const auto s = steady_state(p);
        EXPECT_LT(std::abs(s.particle_current()), 1e-15);
        for (double q : s.flows.heat) EXPECT_LT(std::abs(q), 1e-13);
        EXPECT_LT(std::abs(s.flows.entropy_production), 1e-15);
    }
}

TEST(SteadyState, PrintedReversibilityPointIsNotReversible) {
    // (0, 18) satisfies the printed line, whose mu terms have the opposite
    // sign to the cycle affinity of the rates.
    const auto s = steady_state(filter_params(0, 18));
    EXPECT_GT(std::abs(s.particle_current()), 1e-3);
    EXPECT_NEAR(reversibility_residual(filter_params(0, 18)), -1.2, 1e-12);
}

TEST(SteadyState, LeakageBreaksTightCoupling) {
    auto p = filter_params(25, 15);
    p.gamma_leak = 1.0;
    const auto s = steady_state(p);
    EXPECT_FALSE(s.tight_coupled);
    EXPECT_GT(std::abs(s.heat(Terminal::C) - (p.eps_S - p.mu_c) * s.particle_current()), 1e-6);
    EXPECT_TRUE(steady_state(filter_params()).tight_coupled);
}

TEST(SteadyState, DisconnectedGraphIsRejected) {
    auto p = filter_params();
    p.rate_overrides[{Terminal::G, 0}] = 0.0;
    p.rate_overrides[{Terminal::G, 1}] = 0.0;
    try {
        (void)steady_state(p);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.kind(), NumericalFailure::NoUniqueSteadyState);
    }
}

TEST(SteadyState, GateCarriesNoConductorCharge) {
    const auto s = steady_state(filter_params());
    EXPECT_TRUE(s.account.entries[2].quantities.empty());
    EXPECT_NEAR(s.particle_current() + s.account.entries[1].quantities.at(particle_number()), 0.0, 1e-17);
}

TEST(CurrentsFromDistribution, EquilibriumDistributionCarriesNothing) {
    auto p = filter_params(0, 0);
    p.T_c = p.T_h = p.T_g = 30;
    p.gamma_leak = 0.4;
    const auto s = steady_state(p);
    const auto a = currents_from_distribution(p, s.distribution);
    for (const auto& e : a.entries) EXPECT_NEAR(e.energy, 0.0, 1e-15);
}

TEST(CurrentsFromDistribution, MatchesSteadyStateAccount) {
    const auto p = filter_params(40, -20);
    const auto s = steady_state(p);
    const auto a = currents_from_distribution(p, s.distribution);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a.entries[i].energy, s.account.entries[i].energy, 1e-14);
}

TEST(DotProperty, ConservationAndTightRatios) {
    gen::Gen g(32);
    for (int i = 0; i < 3000; ++i) {
        const bool tight = g.coin();
        const auto p = g.dot(tight);
        const auto s = steady_state(p);
        double energy = 0;
        for (const auto& e : s.account.entries) energy += e.energy;
        ASSERT_LT(std::abs(energy), 1e-12);
        const double n = s.particle_current();
        ASSERT_LT(std::abs(n + s.account.entries[1].quantities.at(particle_number())), 1e-12);
        double total = 0;
        for (double x : s.distribution) {
            ASSERT_GE(x, 0.0);
            total += x;
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
        if (!tight) continue;
        ASSERT_NEAR(s.heat(Terminal::C), (p.eps_S - p.mu_c) * n, 1e-12);
        ASSERT_NEAR(s.heat(Terminal::H), -(p.eps_S + p.U - p.mu_h) * n, 1e-12);
        ASSERT_NEAR(s.heat(Terminal::G), p.U * n, 1e-12);
        ASSERT_NEAR(s.work(), -(p.mu_c - p.mu_h) * n, 1e-12);
    }
}

TEST(DotProperty, AnalyticalCurrentMatchesLinearSolve) {
    gen::Gen g(33);
    for (int i = 0; i < 1000; ++i) {
        const auto p = g.dot(true);
        const double numeric = steady_state(p).particle_current();
        const double closed = analytical_particle_current(p);
        ASSERT_LE(std::abs(numeric - closed), 1e-10 * std::max(std::abs(numeric), std::abs(closed))) << i;
        ASSERT_EQ(std::signbit(closed), std::signbit(reversibility_residual(p))) << i;
    }
}

TEST(AnalyticalCurrent, RequiresTightCoupling) {
    auto p = filter_params();
    p.gamma_leak = 0.01;
    EXPECT_THROW((void)analytical_particle_current(p), ValidationError);
}

TEST(AnalyticalCurrent, OperatingPoint) {
    const auto p = filter_params(25, 15);
    EXPECT_NEAR(analytical_particle_current(p) / steady_state(p).particle_current(), 1.0, 1e-12);
}

TEST(AnalyticalCurrent, NormalizationIsTreeSum) {
    // For a cycle of four states every spanning tree drops one edge; with all
    // rates equal to r each of the 16 (root, tree) terms is r^3.
    auto p = filter_params(0, 0);
    p.T_c = p.T_h = p.T_g = 1e6;
    p.Gamma = 2.0;
    EXPECT_NEAR(analytical_normalization(p), 16.0, 1e-4);
}

TEST(ReversibilityResidual, CollapsesWithoutInteraction) {
    auto p = filter_params(4, 6);
    p.U = 0;
    p.T_c = p.T_h = 10;
    EXPECT_NEAR(reversibility_residual(p), p.mu_c / 10 - p.mu_h / 10, 1e-15);
}

TEST(TgStar, ClosedFormAnchors) {
    EXPECT_EQ(tg_star(slow_gate_params()), 24.0);
    auto c = slow_gate_params();
    c.U = 40;
    c.eps_G = -50;
    c.mu_c = 27;
    c.mu_h = 30;
    EXPECT_NEAR(tg_star(c), 40.0 / (10.0 / 30.0 + 27.0 / 20.0), 1e-12);
    EXPECT_NEAR(tg_star(c), 23.7624, 1e-4);
}

TEST(TgStar, ResidualVanishesThere) {
    gen::Gen g(34);
    for (int i = 0; i < 200; ++i) {
        auto p = g.dot(true);
        double t = 0;
        try {
            t = tg_star(p);
        } catch (const NumericalError&) {
            continue;
        }
        p.T_g = t;
        ASSERT_NEAR(reversibility_residual(p), 0.0, 1e-12 * std::max(1.0, p.U / t));
    }
}

TEST(TgStar, NoCrossing) {
    auto p = slow_gate_params();
    // Denominator (U - mu_h)/T_h + mu_c/T_c = 0.
    p.mu_c = -20;
    p.mu_h = 60;
    try {
        (void)tg_star(p);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.kind(), NumericalFailure::NoCrossing);
    }
}

TEST(TgStar, BisectionBracketsTheClosedForm) {
    const auto [lo, hi] = bracket_gate_reversal(slow_gate_params(), 20, 30);
    EXPECT_LE(lo, 24.0);
    EXPECT_GE(hi, 24.0);
    EXPECT_LT(hi - lo, 1e-8);
}

TEST(EStar, Anchors) {
    DotParams p;
    p.T_c = 20;
    p.T_h = 25;
    p.T_g = 30;
    p.U = 90;
    EXPECT_NEAR(e_star(p, 0.0), 60.0, 1e-12);
    p.U = 0;
    EXPECT_EQ(e_star(p, 0.0), 0.0);
    p.U = 90;
    p.T_g = 25;
    EXPECT_EQ(e_star(p, 0.0), 0.0);
    p.T_h = 20;
    EXPECT_THROW((void)e_star(p, 0.0), ValidationError);
}

TEST(EStar, BoundsTheTripleRegime) {
    // eps_S - mu_c just below E* is ERP and just above it is not, with
    // mu_h = 0 fixed and delta_mu = -2.
    DotParams p;
    p.T_c = 20;
    p.T_h = 25;
    p.T_g = 30;
    p.U = 90;
    p.eps_G = -45;
    const double dmu = -2.0;
    const double e = e_star(p, dmu);
    const ReferenceFrame frame{22.5, {}};
    auto regime_at = [&](double gap) {
        p.mu_h = 0;
        p.mu_c = dmu;
        p.eps_S = p.mu_c + gap;
        const auto s = steady_state(p, frame);
        return classify_regime(s.flows, s.reservoirs, frame).str();
    };
    EXPECT_EQ(regime_at(e * (1 - 1e-6)), "ERP");
    EXPECT_NE(regime_at(e * (1 + 1e-6)), "ERP");
}
