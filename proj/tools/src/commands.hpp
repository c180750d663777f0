#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "hybridtherm/error.hpp"

namespace hybridtherm::app {

enum ExitCode : int { kSuccess = 0, kValidation = 1, kNumerical = 2, kVerification = 3 };

class IoError : public Error {
public:
    using Error::Error;
};

struct CommandOptions {
    std::string command;  ///< steady, map, sweep, verify, oracle
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

/// --threads, else HYBRIDTHERM_THREADS, else the hardware count.
[[nodiscard]] unsigned resolve_threads(std::optional<unsigned> requested, const char* env_value);

/// Sidecar and plot-script paths next to a dataset.
[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& out);
[[nodiscard]] std::filesystem::path plot_script_path(const std::filesystem::path& out);

/// Runs one command; errors are printed to `err` and mapped to exit codes.
[[nodiscard]] int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace hybridtherm::app
