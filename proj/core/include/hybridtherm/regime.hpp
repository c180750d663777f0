#pragma once

// Useful-task bookkeeping on top of DerivedFlows: regime classification,
// hybrid efficiency and its per-task decomposition, the task-count bound, the
// closed-form regime efficiencies, and reference-temperature policies.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridtherm/thermo.hpp"

namespace hybridtherm {

enum class TaskKind { WorkProduction, Refrigeration, HeatPumping };

/// A useful task. `target` is the quantity label for work production and the
/// reservoir id otherwise.
struct Task {
    TaskKind kind = TaskKind::WorkProduction;
    std::string target;

    auto operator<=>(const Task&) const = default;
};

[[nodiscard]] std::string to_string(const Task& task);

enum class RegimeName { Idle, E, R, P, ER, EP, RP, ERP, Dissipative, Other };

/// Which reservoirs the R and P letters refer to. Refrigeration of any other
/// reservoir, or heating any other reservoir, maps to OTHER.
struct RegimeDictionary {
    std::string cold = "c";
    std::string hot = "h";
};

struct RegimeLabel {
    std::vector<Task> useful_tasks;  ///< sorted
    RegimeName name = RegimeName::Idle;

    /// "E", "RP", "IDLE", "DISSIPATIVE", or "OTHER(E|R:g)" for sets outside
    /// the dictionary. Never contains a comma.
    [[nodiscard]] std::string str() const;
};

[[nodiscard]] std::string to_string(RegimeName name);

enum class EfficiencyStatus {
    Ok,
    /// Numerator and denominator both inside the dead band (0/0).
    Undefined,
    /// Useful output with no wasteful input; impossible under the second law.
    SecondLawViolation,
};

struct EfficiencyReport {
    std::optional<double> eta_total;  ///< empty unless status == Ok
    std::map<Task, double> components;
    RegimeLabel regime;
    bool reversible = false;
    EfficiencyStatus status = EfficiencyStatus::Ok;
    double numerator = 0.0;
    double denominator = 0.0;

    /// Sum of components of a given kind; empty when there are none.
    [[nodiscard]] std::optional<double> component_sum(TaskKind kind) const;
};

/// True when |T - T_r| is inside the relative temperature dead band.
[[nodiscard]] bool at_reference_temperature(double temperature, const ReferenceFrame& frame);

[[nodiscard]] RegimeLabel classify_regime(const DerivedFlows& flows,
                                          std::span<const Reservoir> reservoirs,
                                          const ReferenceFrame& frame,
                                          const RegimeDictionary& dictionary = {});

/// Useful terms over wasteful terms of the free-energy balance.
[[nodiscard]] EfficiencyReport hybrid_efficiency(const DerivedFlows& flows,
                                                 std::span<const Reservoir> reservoirs,
                                                 const ReferenceFrame& frame,
                                                 const RegimeDictionary& dictionary = {});

struct TaskBound {
    int value = 0;
    bool clamped = false;  ///< raw count was negative
};

/// Reservoirs away from T_r plus extra conserved quantities, minus one.
[[nodiscard]] TaskBound max_tasks(std::span<const Reservoir> reservoirs, const ReferenceFrame& frame,
                                  int n_extra_quantities);

/// Closed-form efficiency of a named regime for the c/h(/g) machine with a
/// single work channel. Every reservoir other than c and h must sit at T_r
/// except for ERP, where the third reservoir supplies the resource. Throws
/// ValidationError naming the violated sign when the flows do not match.
[[nodiscard]] double regime_efficiency_formula(RegimeName regime, const DerivedFlows& flows,
                                               std::span<const Reservoir> reservoirs,
                                               const ReferenceFrame& frame,
                                               const RegimeDictionary& dictionary = {});

enum class ReferencePolicyKind { Fixed, ColdestEntropySink };

struct ReferencePolicy {
    ReferencePolicyKind kind = ReferencePolicyKind::Fixed;
    ReferenceFrame frame;  ///< returned as-is for Fixed; supplies potentials otherwise
};

/// Fixed returns the supplied frame. ColdestEntropySink sets T_r to the
/// lowest temperature among reservoirs with Q_i < -deadband and throws
/// NumericalError(NoEntropySink) when there is none.
[[nodiscard]] ReferenceFrame reference_policy(const DerivedFlows& flows,
                                              std::span<const Reservoir> reservoirs,
                                              const ReferencePolicy& policy);

}  // namespace hybridtherm
