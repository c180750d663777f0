#pragma once

// Invariant suites behind `hybridtherm verify`.

#include <random>
#include <string>
#include <vector>

#include "config.hpp"

namespace hybridtherm::app {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Random DotParams in the ranges used by the law suites: temperatures in
/// [5, 50], potentials and levels in [-100, 100], U in [0, 120], leakage in
/// [0, Gamma] (zero when `tight`).
[[nodiscard]] DotParams random_dot_params(std::mt19937_64& rng, bool tight);

[[nodiscard]] CheckResult check_first_law(const VerifyOptions& options);
[[nodiscard]] CheckResult check_second_law(const VerifyOptions& options);
[[nodiscard]] CheckResult check_efficiency_bound(const VerifyOptions& options);
[[nodiscard]] CheckResult check_free_energy_identity(const VerifyOptions& options);
[[nodiscard]] CheckResult check_task_bound(const VerifyOptions& options);
[[nodiscard]] CheckResult check_tight_coupling(const VerifyOptions& options);
[[nodiscard]] CheckResult check_analytical_current(const VerifyOptions& options);
[[nodiscard]] CheckResult check_equilibrium_gibbs(const VerifyOptions& options);
[[nodiscard]] CheckResult check_limiting_forms();
[[nodiscard]] CheckResult check_formula_consistency(const VerifyOptions& options);
[[nodiscard]] CheckResult check_leakage_map(const VerifyOptions& options, unsigned threads);
/// First law on a hand-built account that leaks 0.5 units of energy.
[[nodiscard]] CheckResult check_energy_leak_fixture();

[[nodiscard]] std::vector<CheckResult> run_verification(const VerifyOptions& options, unsigned threads);

}  // namespace hybridtherm::app
