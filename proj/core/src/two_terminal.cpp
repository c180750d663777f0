#include "hybridtherm/two_terminal.hpp"

#include <cmath>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

void validate(const TwoTerminalParams& p) {
    for (double x : {p.eps_S, p.mu_c, p.mu_h, p.T_c, p.T_h, p.Gamma_c, p.Gamma_h}) {
        if (!std::isfinite(x)) throw ValidationError("two-terminal parameters must be finite");
    }
    if (!(p.T_c > 0.0)) throw ValidationError("T_c must be > 0");
    if (!(p.T_h > 0.0)) throw ValidationError("T_h must be > 0");
    if (!(p.Gamma_c > 0.0)) throw ValidationError("Gamma_c must be > 0");
    if (!(p.Gamma_h > 0.0)) throw ValidationError("Gamma_h must be > 0");
}

std::vector<Reservoir> two_terminal_reservoirs(const TwoTerminalParams& p) {
    return {
        Reservoir{"c", p.T_c, {{particle_number(), p.mu_c}}},
        Reservoir{"h", p.T_h, {{particle_number(), p.mu_h}}},
    };
}

SteadyStateResult two_terminal_steady(const TwoTerminalParams& p, const ReferenceFrame& frame) {
    validate(p);
    const double fc = fermi(p.eps_S, p.mu_c, p.T_c);
    const double fh = fermi(p.eps_S, p.mu_h, p.T_h);
    const double total = p.Gamma_c + p.Gamma_h;
    const double n = p.Gamma_c * p.Gamma_h / total * (fc - fh);

    SteadyStateResult result;
    const double occupied = (p.Gamma_c * fc + p.Gamma_h * fh) / total;
    result.distribution = {1.0 - occupied, occupied, 0.0, 0.0};
    result.account.entries.resize(2);
    result.account.entries[0].energy = p.eps_S * n;
    result.account.entries[0].quantities[particle_number()] = n;
    result.account.entries[1].energy = -p.eps_S * n;
    result.account.entries[1].quantities[particle_number()] = -n;
    result.reservoirs = two_terminal_reservoirs(p);
    result.flows = derive_flows(result.account, result.reservoirs, frame);
    result.channel_flux[channel_index(Terminal::C, 0)] = n;
    result.channel_flux[channel_index(Terminal::H, 0)] = -n;
    result.tight_coupled = true;
    return result;
}

DotParams decoupled_dot_params(const TwoTerminalParams& p, double T_g) {
    DotParams d;
    d.eps_S = p.eps_S;
    d.eps_G = 0.0;
    d.U = 0.0;
    d.mu_c = p.mu_c;
    d.mu_h = p.mu_h;
    d.T_c = p.T_c;
    d.T_h = p.T_h;
    d.T_g = T_g;
    d.Gamma = 1.0;
    d.gamma_leak = 0.0;
    d.rate_overrides = {
        {{Terminal::C, 0}, p.Gamma_c},
        {{Terminal::C, 1}, p.Gamma_c},
        {{Terminal::H, 0}, p.Gamma_h},
        {{Terminal::H, 1}, p.Gamma_h},
    };
    return d;
}

}  // namespace hybridtherm
