#include "hybridtherm/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

namespace {

RegimeName name_for_tasks(const std::vector<Task>& tasks, const RegimeDictionary& dictionary) {
    bool e = false, r = false, p = false;
    for (const auto& t : tasks) {
        switch (t.kind) {
            case TaskKind::WorkProduction: e = true; break;
            case TaskKind::Refrigeration:
                if (t.target != dictionary.cold) return RegimeName::Other;
                r = true;
                break;
            case TaskKind::HeatPumping:
                if (t.target != dictionary.hot) return RegimeName::Other;
                p = true;
                break;
        }
    }
    if (e && r && p) return RegimeName::ERP;
    if (e && r) return RegimeName::ER;
    if (e && p) return RegimeName::EP;
    if (r && p) return RegimeName::RP;
    if (e) return RegimeName::E;
    if (r) return RegimeName::R;
    return RegimeName::P;
}

bool all_quiet(const DerivedFlows& flows) {
    auto quiet = [](double x) { return std::abs(x) < kCurrentDeadband; };
    return std::all_of(flows.heat.begin(), flows.heat.end(), quiet) &&
           std::all_of(flows.work.begin(), flows.work.end(), [&](const auto& kv) { return quiet(kv.second); });
}

std::size_t index_of(std::span<const Reservoir> reservoirs, const std::string& id) {
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        if (reservoirs[i].id == id) return i;
    }
    throw ValidationError("no reservoir with id '" + id + "'");
}

void need_positive(double x, const char* name) {
    if (!(x > kCurrentDeadband)) {
        throw ValidationError(std::string("sign pattern mismatch: ") + name + " must be > 0");
    }
}

void need_negative(double x, const char* name) {
    if (!(x < -kCurrentDeadband)) {
        throw ValidationError(std::string("sign pattern mismatch: ") + name + " must be < 0");
    }
}

void need_not_positive(double x, const char* name) {
    if (x > kCurrentDeadband) {
        throw ValidationError(std::string("sign pattern mismatch: ") + name + " must be <= 0");
    }
}

void need_not_negative(double x, const char* name) {
    if (x < -kCurrentDeadband) {
        throw ValidationError(std::string("sign pattern mismatch: ") + name + " must be >= 0");
    }
}

}  // namespace

std::string to_string(const Task& task) {
    switch (task.kind) {
        case TaskKind::WorkProduction: return "E:" + task.target;
        case TaskKind::Refrigeration: return "R:" + task.target;
        case TaskKind::HeatPumping: return "P:" + task.target;
    }
    return "?";
}

std::string to_string(RegimeName name) {
    switch (name) {
        case RegimeName::Idle: return "IDLE";
        case RegimeName::E: return "E";
        case RegimeName::R: return "R";
        case RegimeName::P: return "P";
        case RegimeName::ER: return "ER";
        case RegimeName::EP: return "EP";
        case RegimeName::RP: return "RP";
        case RegimeName::ERP: return "ERP";
        case RegimeName::Dissipative: return "DISSIPATIVE";
        case RegimeName::Other: return "OTHER";
    }
    return "?";
}

std::string RegimeLabel::str() const {
    if (name != RegimeName::Other) return to_string(name);
    std::string s = "OTHER(";
    for (std::size_t i = 0; i < useful_tasks.size(); ++i) {
        if (i) s += '|';
        s += to_string(useful_tasks[i]);
    }
    return s + ')';
}

std::optional<double> EfficiencyReport::component_sum(TaskKind kind) const {
    std::optional<double> sum;
    for (const auto& [task, value] : components) {
        if (task.kind == kind) sum = sum.value_or(0.0) + value;
    }
    return sum;
}

bool at_reference_temperature(double temperature, const ReferenceFrame& frame) {
    return std::abs(temperature - frame.temperature) < kTemperatureDeadband * frame.temperature;
}

RegimeLabel classify_regime(const DerivedFlows& flows, std::span<const Reservoir> reservoirs,
                            const ReferenceFrame& frame, const RegimeDictionary& dictionary) {
    if (flows.heat.size() != reservoirs.size()) {
        throw ValidationError("flows and reservoir list differ in length");
    }
    RegimeLabel label;
    for (const auto& [q, w] : flows.work) {
        if (w > kCurrentDeadband) label.useful_tasks.push_back({TaskKind::WorkProduction, q.label});
    }
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        const double t = reservoirs[i].temperature;
        if (at_reference_temperature(t, frame)) continue;
        const double q = flows.heat[i];
        if (t < frame.temperature && q > kCurrentDeadband) {
            label.useful_tasks.push_back({TaskKind::Refrigeration, reservoirs[i].id});
        } else if (t > frame.temperature && q < -kCurrentDeadband) {
            label.useful_tasks.push_back({TaskKind::HeatPumping, reservoirs[i].id});
        }
    }
    std::sort(label.useful_tasks.begin(), label.useful_tasks.end());
    if (label.useful_tasks.empty()) {
        label.name = all_quiet(flows) ? RegimeName::Idle : RegimeName::Dissipative;
    } else {
        label.name = name_for_tasks(label.useful_tasks, dictionary);
    }
    return label;
}

EfficiencyReport hybrid_efficiency(const DerivedFlows& flows, std::span<const Reservoir> reservoirs,
                                   const ReferenceFrame& frame, const RegimeDictionary& dictionary) {
    validate(frame);
    EfficiencyReport report;
    report.regime = classify_regime(flows, reservoirs, frame, dictionary);

    std::vector<std::pair<Task, double>> terms;
    for (const auto& [q, w] : flows.work) {
        terms.push_back({{TaskKind::WorkProduction, q.label}, w});
    }
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        const double t = reservoirs[i].temperature;
        if (at_reference_temperature(t, frame)) continue;
        const TaskKind kind = t < frame.temperature ? TaskKind::Refrigeration : TaskKind::HeatPumping;
        terms.push_back({{kind, reservoirs[i].id}, flows.heat[i] * (frame.temperature / t - 1.0)});
    }

    double numerator = 0.0, denominator = 0.0;
    for (const auto& [task, value] : terms) {
        if (std::abs(value) < kCurrentDeadband) continue;
        if (value > 0.0) {
            numerator += value;
        } else {
            denominator -= value;
        }
    }
    report.numerator = numerator;
    report.denominator = denominator;
    report.reversible = std::abs(flows.entropy_production) <= kCurrentDeadband;

    if (numerator < kCurrentDeadband && denominator < kCurrentDeadband) {
        report.status = EfficiencyStatus::Undefined;
        return report;
    }
    if (denominator < kCurrentDeadband) {
        report.status = EfficiencyStatus::SecondLawViolation;
        return report;
    }
    report.eta_total = numerator / denominator;
    for (const auto& [task, value] : terms) {
        if (value >= kCurrentDeadband) report.components[task] += value / denominator;
    }
    return report;
}

TaskBound max_tasks(std::span<const Reservoir> reservoirs, const ReferenceFrame& frame,
                    int n_extra_quantities) {
    const auto away = std::count_if(reservoirs.begin(), reservoirs.end(), [&](const Reservoir& r) {
        return !at_reference_temperature(r.temperature, frame);
    });
    const int raw = static_cast<int>(away) + n_extra_quantities - 1;
    return raw < 0 ? TaskBound{0, true} : TaskBound{raw, false};
}

double regime_efficiency_formula(RegimeName regime, const DerivedFlows& flows,
                                 std::span<const Reservoir> reservoirs, const ReferenceFrame& frame,
                                 const RegimeDictionary& dictionary) {
    validate(frame);
    const std::size_t ic = index_of(reservoirs, dictionary.cold);
    const std::size_t ih = index_of(reservoirs, dictionary.hot);
    const double tc = reservoirs[ic].temperature;
    const double th = reservoirs[ih].temperature;
    const double tr = frame.temperature;
    if (!(tc < th) || tr < tc || tr > th) {
        throw ValidationError("closed forms require T_c <= T_r <= T_h with T_c < T_h");
    }

    // The single extra reservoir that may supply the resource in ERP.
    std::optional<std::size_t> ig;
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        if (i == ic || i == ih) continue;
        if (regime == RegimeName::ERP) {
            if (ig) throw ValidationError("ERP closed form expects exactly three reservoirs");
            ig = i;
        } else if (!at_reference_temperature(reservoirs[i].temperature, frame)) {
            throw ValidationError("closed form assumes reservoir '" + reservoirs[i].id +
                                  "' sits at the reference temperature");
        }
    }

    const double w = flows.total_work();
    const double qc = flows.heat[ic];
    const double qh = flows.heat[ih];
    const double cold_factor = tr / tc - 1.0;  // weight of heat drawn from c
    const double hot_factor = 1.0 - tr / th;   // weight of heat dumped into h

    switch (regime) {
        case RegimeName::E:
            need_positive(w, "W");
            need_not_positive(qc, "Q_c");
            need_not_negative(qh, "Q_h");
            return w / (qh * hot_factor + std::abs(qc) * cold_factor);
        case RegimeName::P:
            need_negative(qh, "Q_h");
            need_not_positive(qc, "Q_c");
            need_not_positive(w, "W");
            return std::abs(qh) * hot_factor / (std::abs(qc) * cold_factor + std::abs(w));
        case RegimeName::RP:
            need_positive(qc, "Q_c");
            need_negative(qh, "Q_h");
            need_not_positive(w, "W");
            return (qc * cold_factor + std::abs(qh) * hot_factor) / std::abs(w);
        case RegimeName::R: {
            need_positive(qc, "Q_c");
            need_not_negative(qh, "Q_h");
            need_not_positive(w, "W");
            if (!(tr > tc)) throw ValidationError("refrigerator closed form requires T_r > T_c");
            const double cop_absorption = hot_factor / cold_factor;
            return qc / (cop_absorption * qh + tc / (tr - tc) * std::abs(w));
        }
        case RegimeName::ER:
            need_positive(w, "W");
            need_positive(qc, "Q_c");
            need_not_negative(qh, "Q_h");
            return (w + qc * cold_factor) / (qh * hot_factor);
        case RegimeName::EP:
            need_positive(w, "W");
            need_negative(qh, "Q_h");
            need_not_positive(qc, "Q_c");
            return (w + std::abs(qh) * hot_factor) / (std::abs(qc) * cold_factor);
        case RegimeName::ERP: {
            if (!ig) throw ValidationError("ERP closed form needs a third reservoir");
            need_positive(w, "W");
            need_positive(qc, "Q_c");
            need_negative(qh, "Q_h");
            const double gate_term = flows.heat[*ig] * (tr / reservoirs[*ig].temperature - 1.0);
            need_negative(gate_term, "Q_g (T_r/T_g - 1)");
            return (w + qc * cold_factor + std::abs(qh) * hot_factor) / -gate_term;
        }
        default:
            throw ValidationError("no closed-form efficiency for regime " + to_string(regime));
    }
}

ReferenceFrame reference_policy(const DerivedFlows& flows, std::span<const Reservoir> reservoirs,
                                const ReferencePolicy& policy) {
    if (policy.kind == ReferencePolicyKind::Fixed) {
        validate(policy.frame);
        return policy.frame;
    }
    if (flows.heat.size() != reservoirs.size()) {
        throw ValidationError("flows and reservoir list differ in length");
    }
    double coldest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < reservoirs.size(); ++i) {
        if (flows.heat[i] < -kCurrentDeadband) coldest = std::min(coldest, reservoirs[i].temperature);
    }
    if (!std::isfinite(coldest)) {
        throw NumericalError(NumericalFailure::NoEntropySink, "no reservoir receives heat");
    }
    ReferenceFrame frame = policy.frame;
    frame.temperature = coldest;
    return frame;
}

}  // namespace hybridtherm
