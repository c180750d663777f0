#include "hybridtherm/dot_model.hpp"

#include <algorithm>
#include <cmath>

#include "hybridtherm/error.hpp"
#include "hybridtherm/roots.hpp"
#include "stationary.hpp"

namespace hybridtherm {

using detail::wide;

namespace {

constexpr double kSolverResidualLimit = 1e-10;
constexpr double kNegativeProbabilityLimit = 1e-10;

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

/// log f(E) = -log(1 + exp(x)) with x = (E - mu) / T, evaluated without overflow.
double log_fermi(double x) { return -(std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)))); }

/// (source, target) state indices of a channel: the electron enters the
/// dot attached to the channel's terminal.
std::pair<std::size_t, std::size_t> channel_states(const ChannelKey& key) {
    const int n = key.other_occupation;
    if (key.terminal == Terminal::G) return {state_index(n, 0), state_index(n, 1)};
    return {state_index(0, n), state_index(1, n)};
}

struct WideCurrents {
    std::array<wide, 6> flux{};
};

WideCurrents channel_fluxes(const RateTable& rates, const std::array<wide, kStateCount>& p) {
    WideCurrents out;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const auto [s, t] = channel_states(rates[k].key);
        out.flux[k] = static_cast<wide>(rates[k].in) * p[s] - static_cast<wide>(rates[k].out) * p[t];
    }
    return out;
}

CurrentAccount account_from_fluxes(const RateTable& rates, const WideCurrents& currents) {
    CurrentAccount account;
    account.entries.resize(3);
    for (Terminal t : {Terminal::C, Terminal::H, Terminal::G}) {
        wide energy = 0, particles = 0;
        for (int n = 0; n < 2; ++n) {
            const std::size_t k = channel_index(t, n);
            energy += static_cast<wide>(rates[k].energy) * currents.flux[k];
            particles += currents.flux[k];
        }
        auto& entry = account.entries[static_cast<std::size_t>(t)];
        entry.energy = static_cast<double>(energy);
        if (t != Terminal::G) entry.quantities[particle_number()] = static_cast<double>(particles);
    }
    return account;
}

bool is_tight(const RateTable& rates) {
    return rates[channel_index(Terminal::C, 1)].base == 0.0 && rates[channel_index(Terminal::H, 0)].base == 0.0;
}

}  // namespace

const char* to_string(Terminal t) noexcept {
    switch (t) {
        case Terminal::C: return "c";
        case Terminal::H: return "h";
        case Terminal::G: return "g";
    }
    return "?";
}

const QuantityId& particle_number() {
    static const QuantityId id{"N"};
    return id;
}

void validate(const DotParams& p) {
    require(finite_all({p.eps_S, p.eps_G, p.U, p.mu_c, p.mu_h, p.T_c, p.T_h, p.T_g, p.Gamma, p.gamma_leak}),
            "dot parameters must be finite");
    require(p.U >= 0.0, "U must be >= 0");
    require(p.T_c > 0.0, "T_c must be > 0");
    require(p.T_h > 0.0, "T_h must be > 0");
    require(p.T_g > 0.0, "T_g must be > 0");
    require(p.Gamma > 0.0, "Gamma must be > 0");
    require(p.gamma_leak >= 0.0, "gamma_leak must be >= 0");
    for (const auto& [key, rate] : p.rate_overrides) {
        require(key.other_occupation == 0 || key.other_occupation == 1, "override occupation must be 0 or 1");
        require(std::isfinite(rate) && rate >= 0.0,
                std::string("override rate for channel ") + to_string(key.terminal) +
                    std::to_string(key.other_occupation) + " must be >= 0");
    }
}

double state_energy(const DotParams& p, int n_s, int n_g) {
    return n_s * p.eps_S + n_g * p.eps_G + n_s * n_g * p.U;
}

double fermi(double energy, double mu, double temperature) {
    if (temperature == 0.0) {
        if (energy == mu) return 0.5;
        return energy < mu ? 1.0 : 0.0;
    }
    const double x = (energy - mu) / temperature;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

RateTable transition_rates(const DotParams& p) {
    validate(p);
    RateTable table{};
    for (Terminal t : {Terminal::C, Terminal::H, Terminal::G}) {
        for (int n = 0; n < 2; ++n) {
            ChannelRates& ch = table[channel_index(t, n)];
            ch.key = {t, n};
            switch (t) {
                case Terminal::C:
                    ch.base = n == 0 ? p.Gamma : p.gamma_leak;
                    ch.mu = p.mu_c;
                    ch.temperature = p.T_c;
                    ch.energy = p.eps_S + n * p.U;
                    break;
                case Terminal::H:
                    ch.base = n == 1 ? p.Gamma : p.gamma_leak;
                    ch.mu = p.mu_h;
                    ch.temperature = p.T_h;
                    ch.energy = p.eps_S + n * p.U;
                    break;
                case Terminal::G:
                    ch.base = p.Gamma;
                    ch.mu = 0.0;
                    ch.temperature = p.T_g;
                    ch.energy = p.eps_G + n * p.U;
                    break;
            }
            if (auto it = p.rate_overrides.find(ch.key); it != p.rate_overrides.end()) ch.base = it->second;
            // 1 - f evaluated as f at the mirrored energy keeps both rates accurate.
            ch.in = ch.base * fermi(ch.energy, ch.mu, ch.temperature);
            ch.out = ch.base * fermi(2.0 * ch.mu - ch.energy, ch.mu, ch.temperature);
        }
    }
    return table;
}

std::vector<Reservoir> dot_reservoirs(const DotParams& p) {
    return {
        Reservoir{"c", p.T_c, {{particle_number(), p.mu_c}}},
        Reservoir{"h", p.T_h, {{particle_number(), p.mu_h}}},
        Reservoir{"g", p.T_g, {}},
    };
}

ReferenceFrame gate_frame(const DotParams& p) { return ReferenceFrame{p.T_g, {}}; }

double SteadyStateResult::particle_current() const {
    return account.entries[0].quantities.at(particle_number());
}

double SteadyStateResult::heat(Terminal t) const { return flows.heat[static_cast<std::size_t>(t)]; }

double SteadyStateResult::work() const { return flows.total_work(); }

SteadyStateResult steady_state(const DotParams& params) { return steady_state(params, gate_frame(params)); }

SteadyStateResult steady_state(const DotParams& params, const ReferenceFrame& frame) {
    const RateTable rates = transition_rates(params);

    detail::Matrix<kStateCount> generator{};
    for (const auto& ch : rates) {
        const auto [s, t] = channel_states(ch.key);
        generator[t][s] += ch.in;
        generator[s][s] -= ch.in;
        generator[s][t] += ch.out;
        generator[t][t] -= ch.out;
    }
    if (!detail::strongly_connected(generator)) {
        throw NumericalError(NumericalFailure::NoUniqueSteadyState, "transition graph is not strongly connected");
    }

    auto solution = detail::solve_stationary(generator);
    if (!(solution.relative_residual <= kSolverResidualLimit)) {
        throw NumericalError(NumericalFailure::SolverResidual,
                             "relative residual " + std::to_string(solution.relative_residual));
    }
    wide total = 0;
    for (auto& x : solution.p) {
        if (x < -kNegativeProbabilityLimit) {
            throw NumericalError(NumericalFailure::NegativeProbability,
                                 "probability " + std::to_string(static_cast<double>(x)));
        }
        if (x < 0) x = 0;
        total += x;
    }
    for (auto& x : solution.p) x /= total;

    SteadyStateResult result;
    for (std::size_t s = 0; s < kStateCount; ++s) {
        result.distribution[s] = std::clamp(static_cast<double>(solution.p[s]), 0.0, 1.0);
    }
    const WideCurrents currents = channel_fluxes(rates, solution.p);
    for (std::size_t k = 0; k < currents.flux.size(); ++k) {
        result.channel_flux[k] = static_cast<double>(currents.flux[k]);
    }
    result.account = account_from_fluxes(rates, currents);
    result.reservoirs = dot_reservoirs(params);
    result.flows = derive_flows(result.account, result.reservoirs, frame);
    result.tight_coupled = is_tight(rates);
    return result;
}

CurrentAccount currents_from_distribution(const DotParams& params, const StateDistribution& distribution) {
    const RateTable rates = transition_rates(params);
    std::array<wide, kStateCount> p{};
    for (std::size_t s = 0; s < kStateCount; ++s) p[s] = distribution[s];
    return account_from_fluxes(rates, channel_fluxes(rates, p));
}

double analytical_normalization(const DotParams& params) {
    const RateTable r = transition_rates(params);
    // Cycle 00 -> 10 -> 11 -> 01 -> 00; forward[i] is the rate from node i to
    // node i+1, backward[i] the rate from node i+1 back to node i.
    const auto& c0 = r[channel_index(Terminal::C, 0)];
    const auto& h0 = r[channel_index(Terminal::H, 0)];
    const auto& c1 = r[channel_index(Terminal::C, 1)];
    const auto& h1 = r[channel_index(Terminal::H, 1)];
    const auto& g0 = r[channel_index(Terminal::G, 0)];
    const auto& g1 = r[channel_index(Terminal::G, 1)];
    const std::array<double, 4> forward{c0.in + h0.in, g1.in, c1.out + h1.out, g0.out};
    const std::array<double, 4> backward{c0.out + h0.out, g1.out, c1.in + h1.in, g0.in};

    // Markov chain tree theorem: the weight of root k is the sum over the four
    // spanning paths (one cycle edge removed) of the rates directed toward k.
    double total = 0.0;
    for (std::size_t root = 0; root < 4; ++root) {
        for (std::size_t removed = 0; removed < 4; ++removed) {
            // Path order: removed+1, removed+2, ..., removed (mod 4).
            double product = 1.0;
            std::size_t root_pos = (root + 4 - (removed + 1) % 4) % 4;
            for (std::size_t pos = 0; pos < 3; ++pos) {
                const std::size_t node = (removed + 1 + pos) % 4;
                product *= pos < root_pos ? forward[node] : backward[node];
            }
            total += product;
        }
    }
    return total;
}

double analytical_particle_current(const DotParams& params) {
    const RateTable r = transition_rates(params);
    if (!is_tight(r)) {
        throw ValidationError("closed-form current requires Gamma_c1 = Gamma_h0 = 0 (no leakage)");
    }
    const double gc0 = r[channel_index(Terminal::C, 0)].base;
    const double gh1 = r[channel_index(Terminal::H, 1)].base;
    const double gg0 = r[channel_index(Terminal::G, 0)].base;
    const double gg1 = r[channel_index(Terminal::G, 1)].base;
    const double a_norm = analytical_normalization(params);

    const auto& p = params;
    // exp(eps_G/T_g) [exp(a) - exp(b)] f_c(eps_S) f_h(eps_S+U) f_g(eps_G) f_g(eps_G+U),
    // with exp(a) - exp(b) = exp(b) expm1(a - b), evaluated in log space.
    const double a = (p.eps_S + p.U - p.mu_h) / p.T_h;
    const double b = (p.eps_S - p.mu_c) / p.T_c + p.U / p.T_g;
    const double diff = std::expm1(a - b);
    if (diff == 0.0) return 0.0;
    const double log_magnitude = p.eps_G / p.T_g + b + std::log(std::abs(diff)) +
                                 log_fermi((p.eps_S - p.mu_c) / p.T_c) +
                                 log_fermi((p.eps_S + p.U - p.mu_h) / p.T_h) + log_fermi(p.eps_G / p.T_g) +
                                 log_fermi((p.eps_G + p.U) / p.T_g);
    const double rates = gc0 * gh1 * gg0 * gg1;
    return std::copysign(rates * std::exp(log_magnitude) / a_norm, diff);
}

double reversibility_residual(const DotParams& p) {
    validate(p);
    return (p.eps_S + p.U - p.mu_h) / p.T_h - (p.eps_S - p.mu_c) / p.T_c - p.U / p.T_g;
}

double tg_star(const DotParams& p) {
    validate(p);
    const double denominator = (p.eps_S + p.U - p.mu_h) / p.T_h - (p.eps_S - p.mu_c) / p.T_c;
    if (std::abs(denominator) < 1e-12) {
        throw NumericalError(NumericalFailure::NoCrossing, "T_g* at infinity");
    }
    const double t = p.U / denominator;
    if (!(t > 0.0)) {
        throw NumericalError(NumericalFailure::NoCrossing, "no positive gate temperature reverses the current");
    }
    return t;
}

double e_star(const DotParams& p, double delta_mu) {
    validate(p);
    if (p.T_h == p.T_c) throw ValidationError("E* requires T_h != T_c");
    return (p.U * (1.0 - p.T_h / p.T_g) + delta_mu) / (p.T_h / p.T_c - 1.0);
}

std::pair<double, double> bracket_gate_reversal(const DotParams& params, double lo, double hi, double rel_tol) {
    auto current = [&](double tg) {
        DotParams q = params;
        q.T_g = tg;
        return steady_state(q).particle_current();
    };
    return bisect_sign_change(current, lo, hi, rel_tol);
}

}  // namespace hybridtherm
