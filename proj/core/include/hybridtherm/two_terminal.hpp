#pragma once

// Single-level dot between reservoirs c and h. All transitions happen at
// eps_S, so heat and work are tied to one particle current.

#include "hybridtherm/dot_model.hpp"

namespace hybridtherm {

struct TwoTerminalParams {
    double eps_S = 0.0;
    double mu_c = 0.0;
    double mu_h = 0.0;
    double T_c = 1.0;
    double T_h = 1.0;
    double Gamma_c = 1.0;
    double Gamma_h = 1.0;
};

void validate(const TwoTerminalParams& params);

/// Reservoirs c and h carrying particle number.
[[nodiscard]] std::vector<Reservoir> two_terminal_reservoirs(const TwoTerminalParams& params);

/// Closed-form currents N = Gamma_c Gamma_h / (Gamma_c + Gamma_h) [f_c - f_h].
/// The distribution holds P(empty) and P(occupied) in slots 0 and 1.
[[nodiscard]] SteadyStateResult two_terminal_steady(const TwoTerminalParams& params,
                                                    const ReferenceFrame& frame);

/// The same machine written as a DotParams with U = 0 and a gate that no
/// longer couples: Gamma_c0 = Gamma_c1 = Gamma_c and Gamma_h0 = Gamma_h1 = Gamma_h.
[[nodiscard]] DotParams decoupled_dot_params(const TwoTerminalParams& params, double T_g = 1.0);

}  // namespace hybridtherm
