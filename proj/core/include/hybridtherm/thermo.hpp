#pragma once

// Reservoir and current algebra for machines exchanging energy plus any number
// of additional conserved quantities with reservoirs in generalized Gibbs
// states. Units: k_B = 1, every temperature and potential in one energy unit.
// Currents are positive when they flow out of a reservoir into the machine.

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hybridtherm {

/// Label of a conserved quantity other than energy (e.g. "N").
struct QuantityId {
    std::string label;

    auto operator<=>(const QuantityId&) const = default;
};

using PotentialMap = std::map<QuantityId, double>;

struct Reservoir {
    std::string id;
    double temperature = 1.0;
    /// Potential per exchanged quantity; empty for a pure heat bath.
    PotentialMap potentials;
};

struct ReferenceFrame {
    double temperature = 1.0;
    /// Missing entries are treated as zero.
    PotentialMap potentials;

    [[nodiscard]] double potential(const QuantityId& q) const;
};

/// Currents out of one reservoir.
struct ReservoirCurrents {
    double energy = 0.0;
    std::map<QuantityId, double> quantities;
};

/// One entry per reservoir, in the same order as the reservoir list it is
/// evaluated against.
struct CurrentAccount {
    std::vector<ReservoirCurrents> entries;
};

struct DerivedFlows {
    std::vector<double> heat;           ///< Q_i per reservoir
    std::map<QuantityId, double> work;  ///< W^alpha per quantity
    std::vector<double> entropy;        ///< S_i = -Q_i / T_i
    double entropy_production = 0.0;    ///< S_tot
    std::vector<double> free_energy;    ///< F_i relative to the frame
    double free_energy_total = 0.0;     ///< F_tot
    double first_law_residual = 0.0;    ///< sum_alpha W^alpha - sum_i Q_i

    [[nodiscard]] double total_work() const;
};

/// Current dead band (absolute) used for sign decisions.
inline constexpr double kCurrentDeadband = 1e-12;
/// Temperature dead band, relative to the reference temperature.
inline constexpr double kTemperatureDeadband = 1e-9;

void validate(const Reservoir& reservoir);
void validate(const ReferenceFrame& frame);

/// exp(-(energy - sum_alpha mu^alpha a^alpha) / T), unnormalized.
[[nodiscard]] double gge_weight(double energy, const std::map<QuantityId, double>& quantity_values,
                                const Reservoir& reservoir);

/// A microstate for gge_distribution.
struct GibbsState {
    double energy = 0.0;
    std::map<QuantityId, double> quantity_values;
};

/// Normalized generalized Gibbs probabilities over a finite state list.
[[nodiscard]] std::vector<double> gge_distribution(std::span<const GibbsState> states,
                                                   const Reservoir& reservoir);

/// Q = E - sum_alpha mu^alpha A^alpha. Throws if a nonzero quantity current
/// has no potential in the reservoir.
[[nodiscard]] double heat_current(const ReservoirCurrents& entry, const Reservoir& reservoir);

/// W^alpha = -sum_i mu_i^alpha A_i^alpha for every quantity appearing anywhere.
[[nodiscard]] std::map<QuantityId, double> work_outputs(const CurrentAccount& account,
                                                        std::span<const Reservoir> reservoirs);

/// F_i = sum_alpha (mu_r^alpha - mu_i^alpha) A_i^alpha - (1 - T_r / T_i) Q_i.
[[nodiscard]] double free_energy_current(const ReservoirCurrents& entry, const Reservoir& reservoir,
                                         const ReferenceFrame& frame);

/// Evaluates every derived flow for an account. The account must have one
/// entry per reservoir.
[[nodiscard]] DerivedFlows derive_flows(const CurrentAccount& account,
                                        std::span<const Reservoir> reservoirs,
                                        const ReferenceFrame& frame);

/// sum_alpha W^alpha - sum_i Q_i. Equals -sum_i E_i for a consistent account.
[[nodiscard]] double first_law_residual(const DerivedFlows& flows);

/// S_tot = -sum_i Q_i / T_i.
[[nodiscard]] double entropy_production(const DerivedFlows& flows,
                                        std::span<const Reservoir> reservoirs);

}  // namespace hybridtherm
