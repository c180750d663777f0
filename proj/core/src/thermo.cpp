#include "hybridtherm/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw ValidationError(std::string(what) + " must be finite");
    }
}

double gge_exponent(double energy, const std::map<QuantityId, double>& quantity_values,
                    const Reservoir& reservoir) {
    require_finite(energy, "energy");
    double shifted = energy;
    for (const auto& [q, value] : quantity_values) {
        require_finite(value, "quantity value");
        auto it = reservoir.potentials.find(q);
        if (it == reservoir.potentials.end()) {
            if (value != 0.0) {
                throw ValidationError("reservoir '" + reservoir.id + "' has no potential for quantity '" +
                                      q.label + "'");
            }
            continue;
        }
        shifted -= it->second * value;
    }
    return -shifted / reservoir.temperature;
}

}  // namespace

const char* to_string(NumericalFailure kind) noexcept {
    switch (kind) {
        case NumericalFailure::NoUniqueSteadyState: return "NO_UNIQUE_STEADY_STATE";
        case NumericalFailure::SolverResidual: return "SOLVER_RESIDUAL";
        case NumericalFailure::NegativeProbability: return "NEGATIVE_PROBABILITY";
        case NumericalFailure::NoCrossing: return "NO_CROSSING";
        case NumericalFailure::NoEntropySink: return "NO_ENTROPY_SINK";
        case NumericalFailure::AbsorbingState: return "ABSORBING_STATE";
        case NumericalFailure::InsufficientBlocks: return "INSUFFICIENT_BLOCKS";
    }
    return "UNKNOWN";
}

double ReferenceFrame::potential(const QuantityId& q) const {
    auto it = potentials.find(q);
    return it == potentials.end() ? 0.0 : it->second;
}

double DerivedFlows::total_work() const {
    double total = 0.0;
    for (const auto& [q, w] : work) total += w;
    return total;
}

void validate(const Reservoir& reservoir) {
    if (!(reservoir.temperature > 0.0) || !std::isfinite(reservoir.temperature)) {
        throw ValidationError("reservoir '" + reservoir.id + "': temperature must be positive and finite");
    }
    for (const auto& [q, mu] : reservoir.potentials) {
        require_finite(mu, "potential");
    }
}

void validate(const ReferenceFrame& frame) {
    if (!(frame.temperature > 0.0) || !std::isfinite(frame.temperature)) {
        throw ValidationError("reference temperature must be positive and finite");
    }
    for (const auto& [q, mu] : frame.potentials) {
        require_finite(mu, "reference potential");
    }
}

double gge_weight(double energy, const std::map<QuantityId, double>& quantity_values,
                  const Reservoir& reservoir) {
    validate(reservoir);
    return std::exp(gge_exponent(energy, quantity_values, reservoir));
}

std::vector<double> gge_distribution(std::span<const GibbsState> states, const Reservoir& reservoir) {
    validate(reservoir);
    if (states.empty()) {
        throw ValidationError("gge_distribution needs at least one state");
    }
    std::vector<double> exponents;
    exponents.reserve(states.size());
    for (const auto& s : states) {
        exponents.push_back(gge_exponent(s.energy, s.quantity_values, reservoir));
    }
    // Shift by the largest exponent so the weights neither overflow nor all underflow.
    const double top = *std::max_element(exponents.begin(), exponents.end());
    std::vector<double> p;
    p.reserve(states.size());
    for (double x : exponents) p.push_back(std::exp(x - top));
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= z;
    return p;
}

double heat_current(const ReservoirCurrents& entry, const Reservoir& reservoir) {
    double q = entry.energy;
    for (const auto& [id, rate] : entry.quantities) {
        auto it = reservoir.potentials.find(id);
        if (it == reservoir.potentials.end()) {
            if (rate != 0.0) {
                throw ValidationError("reservoir '" + reservoir.id + "' carries a '" + id.label +
                                      "' current but has no potential for it");
            }
            continue;
        }
        q -= it->second * rate;
    }
    return q;
}

std::map<QuantityId, double> work_outputs(const CurrentAccount& account,
                                          std::span<const Reservoir> reservoirs) {
    if (account.entries.size() != reservoirs.size()) {
        throw ValidationError("current account and reservoir list differ in length");
    }
    std::map<QuantityId, double> work;
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        for (const auto& [id, rate] : account.entries[i].quantities) {
            auto it = reservoirs[i].potentials.find(id);
            if (it == reservoirs[i].potentials.end()) {
                if (rate != 0.0) {
                    throw ValidationError("reservoir '" + reservoirs[i].id + "' carries a '" + id.label +
                                          "' current but has no potential for it");
                }
                continue;
            }
            work[id] -= it->second * rate;
        }
    }
    return work;
}

double free_energy_current(const ReservoirCurrents& entry, const Reservoir& reservoir,
                           const ReferenceFrame& frame) {
    double f = 0.0;
    for (const auto& [id, rate] : entry.quantities) {
        auto it = reservoir.potentials.find(id);
        const double mu = it == reservoir.potentials.end() ? 0.0 : it->second;
        f += (frame.potential(id) - mu) * rate;
    }
    f -= (1.0 - frame.temperature / reservoir.temperature) * heat_current(entry, reservoir);
    return f;
}

DerivedFlows derive_flows(const CurrentAccount& account, std::span<const Reservoir> reservoirs,
                          const ReferenceFrame& frame) {
    validate(frame);
    if (account.entries.size() != reservoirs.size()) {
        throw ValidationError("current account and reservoir list differ in length");
    }
    DerivedFlows flows;
    const std::size_t n = reservoirs.size();
    flows.heat.resize(n);
    flows.entropy.resize(n);
    flows.free_energy.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        validate(reservoirs[i]);
        const auto& entry = account.entries[i];
        flows.heat[i] = heat_current(entry, reservoirs[i]);
        flows.entropy[i] = -flows.heat[i] / reservoirs[i].temperature;
        flows.free_energy[i] = free_energy_current(entry, reservoirs[i], frame);
    }
    flows.work = work_outputs(account, reservoirs);
    flows.entropy_production = entropy_production(flows, reservoirs);
    flows.free_energy_total = std::accumulate(flows.free_energy.begin(), flows.free_energy.end(), 0.0);
    flows.first_law_residual = first_law_residual(flows);
    return flows;
}

double first_law_residual(const DerivedFlows& flows) {
    return flows.total_work() - std::accumulate(flows.heat.begin(), flows.heat.end(), 0.0);
}

double entropy_production(const DerivedFlows& flows, std::span<const Reservoir> reservoirs) {
    if (flows.heat.size() != reservoirs.size()) {
        throw ValidationError("flows and reservoir list differ in length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        s -= flows.heat[i] / reservoirs[i].temperature;
    }
    return s;
}

}  // namespace hybridtherm
