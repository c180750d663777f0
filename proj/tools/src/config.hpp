#pragma once

// Run configuration: a JSON file validated against a fixed schema. Unknown
// keys are rejected and every error names the key and its line.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridtherm/gillespie.hpp"
#include "hybridtherm/sweep.hpp"
#include "hybridtherm/two_terminal.hpp"

namespace hybridtherm::app {

struct OracleOptions {
    double total_time = 1e7;
    double burn_in_fraction = 0.1;
    std::size_t blocks = 40;
    std::uint64_t seed = 1;
};

struct VerifyOptions {
    std::size_t draws = 10000;
    std::size_t analytical_draws = 1000;
    std::size_t equilibrium_draws = 100;
    std::size_t leakage_map_points = 41;
    std::uint64_t seed = 1;
    /// Adds a fixture whose account does not conserve energy; the first-law
    /// check must then fail.
    bool inject_energy_leak = false;
};

struct RunConfig {
    std::optional<DotParams> machine;
    std::optional<TwoTerminalParams> two_terminal;
    SweepReference reference;
    std::vector<Axis> axes;
    DeltaMuRule delta_mu_rule = DeltaMuRule::HoldMuH;
    OracleOptions oracle;
    VerifyOptions verify;
    bool plot_script = false;
};

/// Maps dotted key paths ("machine.T_c", "sweep.axes[1].points") to the line
/// they appear on.
class KeyLines {
public:
    explicit KeyLines(const std::string& text);
    [[nodiscard]] int line_of(const std::string& path) const;

private:
    std::map<std::string, int> lines_;
};

/// Parses and validates. Throws ValidationError with "file:line: key: message".
[[nodiscard]] RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// The configuration with defaults filled in, for the dataset sidecar.
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

[[nodiscard]] SweepSpec sweep_spec(const RunConfig& config);

}  // namespace hybridtherm::app
