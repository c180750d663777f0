#pragma once

// Three-terminal machine built from two capacitively coupled single-level
// quantum dots in the sequential-tunnelling regime. The conductor dot (level
// eps_S) is tunnel coupled to reservoirs c and h; the gate dot (level eps_G)
// to reservoir g. Occupying one dot raises the other's level by U.
//
// Channel (j, n) is tunnelling between terminal j and its dot while the other
// dot holds n electrons. The default rate table filters the conductor:
// Gamma_c0 = Gamma_h1 = Gamma_g0 = Gamma_g1 = Gamma, Gamma_c1 = Gamma_h0 = gamma_leak.

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "hybridtherm/thermo.hpp"

namespace hybridtherm {

enum class Terminal { C = 0, H = 1, G = 2 };

[[nodiscard]] const char* to_string(Terminal t) noexcept;

/// Label of the conductor particle number carried by reservoirs c and h.
[[nodiscard]] const QuantityId& particle_number();

struct ChannelKey {
    Terminal terminal = Terminal::C;
    int other_occupation = 0;  ///< 0 or 1

    auto operator<=>(const ChannelKey&) const = default;
};

struct DotParams {
    double eps_S = 0.0;
    double eps_G = 0.0;
    double U = 0.0;
    double mu_c = 0.0;
    double mu_h = 0.0;  ///< mu_g is fixed to zero
    double T_c = 1.0;
    double T_h = 1.0;
    double T_g = 1.0;
    double Gamma = 1.0;
    double gamma_leak = 0.0;
    /// Base rate Gamma_{jn} per channel; takes precedence over the defaults.
    std::map<ChannelKey, double> rate_overrides;
};

void validate(const DotParams& params);

/// Four charge states, indexed in the order P00, P10, P01, P11 (n_S, n_G).
inline constexpr std::size_t kStateCount = 4;
[[nodiscard]] constexpr std::size_t state_index(int n_s, int n_g) { return n_s == 0 ? (n_g == 0 ? 0 : 2) : (n_g == 0 ? 1 : 3); }
[[nodiscard]] double state_energy(const DotParams& params, int n_s, int n_g);

using StateDistribution = std::array<double, kStateCount>;

struct ChannelRates {
    ChannelKey key;
    double base = 0.0;    ///< Gamma_{jn}
    double in = 0.0;      ///< Gamma_{jn}^+, electron enters the dot from j
    double out = 0.0;     ///< Gamma_{jn}^-, electron leaves the dot to j
    double energy = 0.0;  ///< level at which the transition happens
    double mu = 0.0;
    double temperature = 1.0;
};

/// Channels ordered c0, c1, h0, h1, g0, g1.
using RateTable = std::array<ChannelRates, 6>;

[[nodiscard]] constexpr std::size_t channel_index(Terminal t, int n) {
    return static_cast<std::size_t>(t) * 2 + static_cast<std::size_t>(n);
}

/// Fermi occupation 1 / (1 + exp((E - mu) / T)). T == 0 gives the step with
/// f = 1/2 at E == mu.
[[nodiscard]] double fermi(double energy, double mu, double temperature);

[[nodiscard]] RateTable transition_rates(const DotParams& params);

/// Reservoirs c, h, g. c and h carry the particle-number potential; g is a
/// pure heat bath from the account's point of view (mu_g = 0).
[[nodiscard]] std::vector<Reservoir> dot_reservoirs(const DotParams& params);

/// Default frame with T_r = T_g.
[[nodiscard]] ReferenceFrame gate_frame(const DotParams& params);

struct SteadyStateResult {
    StateDistribution distribution{};
    std::vector<Reservoir> reservoirs;
    CurrentAccount account;
    DerivedFlows flows;
    /// Net electron flux into the dot per channel (same order as RateTable).
    std::array<double, 6> channel_flux{};
    bool tight_coupled = false;

    [[nodiscard]] double particle_current() const;  ///< N_c
    [[nodiscard]] double heat(Terminal t) const;
    [[nodiscard]] double work() const;
};

/// Master-equation steady state of the four-state machine; flows are
/// evaluated against `frame`.
[[nodiscard]] SteadyStateResult steady_state(const DotParams& params, const ReferenceFrame& frame);
[[nodiscard]] SteadyStateResult steady_state(const DotParams& params);

/// Per-reservoir currents implied by an arbitrary distribution.
[[nodiscard]] CurrentAccount currents_from_distribution(const DotParams& params,
                                                        const StateDistribution& distribution);

/// Closed-form N_c for a tight-coupled rate table (Gamma_c1 = Gamma_h0 = 0).
[[nodiscard]] double analytical_particle_current(const DotParams& params);

/// Normalization A of the closed-form current: the sum over the four states
/// of their spanning-tree weights on the tunnelling cycle.
[[nodiscard]] double analytical_normalization(const DotParams& params);

/// Cycle affinity (eps_S + U - mu_h)/T_h - (eps_S - mu_c)/T_c - U/T_g. Zero on
/// the reversibility locus; its sign is the sign of N_c under tight coupling.
[[nodiscard]] double reversibility_residual(const DotParams& params);

/// Gate temperature at which the affinity vanishes. Throws
/// NumericalError(NoCrossing) when there is no positive crossing.
[[nodiscard]] double tg_star(const DotParams& params);

/// Upper bound on eps_S - mu_c for simultaneous work, cooling and pumping at a
/// given delta_mu = mu_c - mu_h.
[[nodiscard]] double e_star(const DotParams& params, double delta_mu);

/// Bisects the sign of N_c(T_g) on [lo, hi] with relative tolerance
/// `rel_tol`; returns the final bracket.
[[nodiscard]] std::pair<double, double> bracket_gate_reversal(const DotParams& params, double lo, double hi,
                                                              double rel_tol = 1e-10);

}  // namespace hybridtherm
