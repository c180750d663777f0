#pragma once

// Continuous-time Monte Carlo over the four charge states of the coupled-dot
// machine. Used as an independent check of the master-equation currents.
//
// Random numbers come from std::mt19937_64, whose output sequence is fixed by
// the C++ standard, turned into doubles with the top 53 bits. No standard
// distribution objects are used, so a seed gives the same trajectory on every
// platform.

#include <array>
#include <cstddef>
#include <cstdint>

#include "hybridtherm/dot_model.hpp"

namespace hybridtherm {

struct TrajectoryConfig {
    DotParams params;
    double total_time = 1e7;  ///< in units of 1/Gamma
    std::uint64_t seed = 1;
    double burn_in_fraction = 0.1;
    std::size_t blocks = 40;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< standard error of the mean across blocks
};

struct TrajectoryEstimate {
    std::array<Estimate, 3> energy;     ///< E_c, E_h, E_g
    std::array<Estimate, 2> particles;  ///< N_c, N_h
    std::array<Estimate, 3> heat;       ///< Q_c, Q_h, Q_g
    Estimate work;
    Estimate entropy_production;
    StateDistribution occupations{};  ///< time fractions after burn-in
    std::array<double, kStateCount> occupation_error{};

    /// Jumps per channel over the whole run (same order as RateTable).
    std::array<std::uint64_t, 6> jumps_in{};
    std::array<std::uint64_t, 6> jumps_out{};
    std::size_t initial_state = 0;
    std::size_t final_state = 0;
    std::uint64_t events = 0;
    std::size_t blocks = 0;
    double sampled_time = 0.0;

    /// Energy the whole trajectory drew from reservoir `t`, from the integer
    /// jump counts.
    [[nodiscard]] double energy_drawn(const RateTable& rates, Terminal t) const;
};

/// Minimum events per block, measured against the slowest exit rate.
inline constexpr double kMinBlockEvents = 10.0;
inline constexpr std::size_t kMinBlocks = 20;

/// Throws ValidationError for a bad config, NumericalError(InsufficientBlocks)
/// when a block would be shorter than kMinBlockEvents / (slowest exit rate),
/// and NumericalError(AbsorbingState) / (NoUniqueSteadyState) for graphs the
/// walk cannot explore.
[[nodiscard]] TrajectoryEstimate simulate(const TrajectoryConfig& config);

}  // namespace hybridtherm
