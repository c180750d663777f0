#include "hybridtherm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

double Axis::value(std::size_t i) const {
    if (i + 1 == points) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

double Axis::spacing() const { return (hi - lo) / static_cast<double>(points - 1); }

std::string to_string(AxisKind kind) {
    switch (kind) {
        case AxisKind::MuC: return "mu_c";
        case AxisKind::MuH: return "mu_h";
        case AxisKind::TG: return "T_g";
        case AxisKind::DeltaMu: return "delta_mu";
    }
    return "?";
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    if (spec.axes.empty() || spec.axes.size() > 2) throw ValidationError("a sweep needs one or two axes");
    for (const auto& a : spec.axes) {
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw ValidationError("axis range must be finite");
        if (a.points < 2) throw ValidationError("axis " + to_string(a.kind) + " needs at least 2 points");
        if (a.kind == AxisKind::TG && !(a.lo > 0.0 && a.hi > 0.0)) {
            throw ValidationError("T_g axis must stay above 0");
        }
    }
    if (spec.axes.size() == 2 && spec.axes[0].kind == spec.axes[1].kind) {
        throw ValidationError("the two axes must differ");
    }
    if (spec.reference.kind == SweepReferenceKind::Fixed &&
        !(std::isfinite(spec.reference.temperature) && spec.reference.temperature > 0.0)) {
        throw ValidationError("reference temperature must be > 0");
    }
}

DotParams point_params(const SweepSpec& spec, std::span<const double> values) {
    DotParams p = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const double v = values[a];
        switch (spec.axes[a].kind) {
            case AxisKind::MuC: p.mu_c = v; break;
            case AxisKind::MuH: p.mu_h = v; break;
            case AxisKind::TG: p.T_g = v; break;
            case AxisKind::DeltaMu:
                switch (spec.delta_mu_rule) {
                    case DeltaMuRule::HoldMuH: p.mu_c = p.mu_h + v; break;
                    case DeltaMuRule::HoldMuC: p.mu_h = p.mu_c - v; break;
                    case DeltaMuRule::Symmetric: {
                        const double mid = 0.5 * (spec.base.mu_c + spec.base.mu_h);
                        p.mu_c = mid + 0.5 * v;
                        p.mu_h = mid - 0.5 * v;
                        break;
                    }
                }
                break;
        }
    }
    return p;
}

SweepRecord evaluate_point(const SweepSpec& spec, std::span<const double> values) {
    SweepRecord rec;
    rec.axis_count = spec.axes.size();
    for (std::size_t a = 0; a < rec.axis_count; ++a) rec.axis[a] = values[a];
    try {
        const DotParams p = point_params(spec, values);
        const SteadyStateResult ss = steady_state(p);
        rec.N_c = ss.particle_current();
        rec.Q_c = ss.heat(Terminal::C);
        rec.Q_h = ss.heat(Terminal::H);
        rec.Q_g = ss.heat(Terminal::G);
        rec.W = ss.work();
        rec.S_tot = ss.flows.entropy_production;

        ReferenceFrame frame = gate_frame(p);
        switch (spec.reference.kind) {
            case SweepReferenceKind::Gate: break;
            case SweepReferenceKind::Fixed: frame.temperature = spec.reference.temperature; break;
            case SweepReferenceKind::ColdestEntropySink:
                frame = reference_policy(ss.flows, ss.reservoirs,
                                         {ReferencePolicyKind::ColdestEntropySink, frame});
                break;
        }
        rec.T_r = frame.temperature;
        const DerivedFlows flows = derive_flows(ss.account, ss.reservoirs, frame);
        const EfficiencyReport report = hybrid_efficiency(flows, ss.reservoirs, frame, spec.dictionary);
        rec.regime = report.regime.str();
        rec.eta = report.eta_total;
        if (report.status == EfficiencyStatus::SecondLawViolation) {
            rec.error = "second_law_violation";
        }
        if (report.eta_total) {
            rec.eta_E = report.component_sum(TaskKind::WorkProduction);
            rec.eta_R = report.component_sum(TaskKind::Refrigeration);
            rec.eta_P = report.component_sum(TaskKind::HeatPumping);
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

std::size_t SweepResult::rows() const { return spec.axes.at(0).points; }

std::size_t SweepResult::cols() const { return spec.axes.size() > 1 ? spec.axes[1].points : 1; }

const SweepRecord& SweepResult::at(std::size_t i, std::size_t j) const { return records.at(i * cols() + j); }

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
    validate(spec);
    SweepResult result;
    result.spec = spec;
    const std::size_t rows = spec.axes[0].points;
    const std::size_t cols = spec.axes.size() > 1 ? spec.axes[1].points : 1;
    const std::size_t total = rows * cols;
    result.records.resize(total);

    auto evaluate = [&](std::size_t index) {
        std::array<double, 2> values{spec.axes[0].value(index / cols), 0.0};
        if (spec.axes.size() > 1) values[1] = spec.axes[1].value(index % cols);
        result.records[index] = evaluate_point(spec, std::span<const double>(values.data(), spec.axes.size()));
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    if (threads <= 1) {
        for (std::size_t i = 0; i < total; ++i) evaluate(i);
        return result;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) evaluate(i);
        });
    }
    pool.clear();
    return result;
}

std::size_t region_area(const SweepResult& result, const std::string& regime) {
    std::size_t n = 0;
    for (const auto& r : result.records) {
        if (r.regime == regime) ++n;
    }
    return n;
}

}  // namespace hybridtherm
