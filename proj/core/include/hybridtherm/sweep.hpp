#pragma once

// Grid and transect evaluation of the coupled-dot machine.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridtherm/dot_model.hpp"
#include "hybridtherm/regime.hpp"

namespace hybridtherm {

enum class AxisKind { MuC, MuH, TG, DeltaMu };

/// Which potential moves when sweeping delta_mu = mu_c - mu_h.
enum class DeltaMuRule {
    HoldMuH,    ///< mu_c = mu_h + delta_mu
    HoldMuC,    ///< mu_h = mu_c - delta_mu
    Symmetric,  ///< both move about the base midpoint
};

struct Axis {
    AxisKind kind = AxisKind::MuC;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t points = 2;

    /// Grid value i; the last point is exactly `hi`.
    [[nodiscard]] double value(std::size_t i) const;
    [[nodiscard]] double spacing() const;
};

[[nodiscard]] std::string to_string(AxisKind kind);

enum class SweepReferenceKind {
    Fixed,               ///< T_r as given
    Gate,                ///< T_r = T_g at each point
    ColdestEntropySink,  ///< per point, see reference_policy
};

struct SweepReference {
    SweepReferenceKind kind = SweepReferenceKind::Gate;
    double temperature = 1.0;  ///< used by Fixed
};

struct SweepSpec {
    DotParams base;
    std::vector<Axis> axes;  ///< one or two
    DeltaMuRule delta_mu_rule = DeltaMuRule::HoldMuH;
    SweepReference reference;
    RegimeDictionary dictionary;
};

void validate(const SweepSpec& spec);

/// Base parameters with the axis values applied.
[[nodiscard]] DotParams point_params(const SweepSpec& spec, std::span<const double> values);

struct SweepRecord {
    std::array<double, 2> axis{};
    std::size_t axis_count = 1;
    double N_c = 0.0;
    double Q_c = 0.0;
    double Q_h = 0.0;
    double Q_g = 0.0;
    double W = 0.0;
    double S_tot = 0.0;
    double T_r = 0.0;
    std::string regime;  ///< empty when the point failed before classification
    std::optional<double> eta;
    std::optional<double> eta_E;
    std::optional<double> eta_R;
    std::optional<double> eta_P;
    std::string error;  ///< empty on success

    [[nodiscard]] bool ok() const { return error.empty(); }
};

struct SweepResult {
    SweepSpec spec;
    /// Row-major: the first axis is the slow index.
    std::vector<SweepRecord> records;

    [[nodiscard]] std::size_t rows() const;
    [[nodiscard]] std::size_t cols() const;
    [[nodiscard]] const SweepRecord& at(std::size_t i, std::size_t j) const;
};

/// Evaluates one grid point. Failures end up in record.error.
[[nodiscard]] SweepRecord evaluate_point(const SweepSpec& spec, std::span<const double> values);

/// Evaluates the grid on `threads` workers (0 picks the hardware count). The
/// records do not depend on the thread count.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// Number of records whose regime label is `regime`.
[[nodiscard]] std::size_t region_area(const SweepResult& result, const std::string& regime);

}  // namespace hybridtherm
