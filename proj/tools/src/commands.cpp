#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "hybridtherm/boundaries.hpp"
#include "hybridtherm/csv.hpp"
#include "hybridtherm/version.hpp"
#include "verification.hpp"

namespace hybridtherm::app {

using nlohmann::json;

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << contents;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

const char* status_name(EfficiencyStatus s) {
    switch (s) {
        case EfficiencyStatus::Ok: return "ok";
        case EfficiencyStatus::Undefined: return "undefined";
        case EfficiencyStatus::SecondLawViolation: return "second_law_violation";
    }
    return "?";
}

json sidecar(const std::string& command, const RunConfig& cfg) {
    return {{"library", "hybridtherm"}, {"version", kVersion}, {"command", command}, {"config", to_json(cfg)}};
}

ReferenceFrame choose_frame(const RunConfig& cfg, const SteadyStateResult& s, double gate_temperature) {
    ReferenceFrame frame{gate_temperature, {}};
    switch (cfg.reference.kind) {
        case SweepReferenceKind::Gate:
            if (!cfg.machine) throw ValidationError("reference.policy: \"gate\" needs a machine with a gate");
            return frame;
        case SweepReferenceKind::Fixed: frame.temperature = cfg.reference.temperature; return frame;
        case SweepReferenceKind::ColdestEntropySink:
            return reference_policy(s.flows, s.reservoirs, {ReferencePolicyKind::ColdestEntropySink, frame});
    }
    return frame;
}

int cmd_steady(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    SteadyStateResult s;
    if (cfg.machine) {
        s = steady_state(*cfg.machine);
    } else if (cfg.two_terminal) {
        s = two_terminal_steady(*cfg.two_terminal, ReferenceFrame{cfg.two_terminal->T_c, {}});
    } else {
        throw ValidationError("steady needs a machine or two_terminal section");
    }
    const ReferenceFrame frame = choose_frame(cfg, s, cfg.machine ? cfg.machine->T_g : 0.0);
    s.flows = derive_flows(s.account, s.reservoirs, frame);
    const EfficiencyReport report = hybrid_efficiency(s.flows, s.reservoirs, frame);

    json currents = json::object();
    for (std::size_t i = 0; i < s.reservoirs.size(); ++i) {
        const auto& id = s.reservoirs[i].id;
        currents["E_" + id] = s.account.entries[i].energy;
        currents["Q_" + id] = s.flows.heat[i];
        currents["F_" + id] = s.flows.free_energy[i];
        if (auto it = s.account.entries[i].quantities.find(particle_number());
            it != s.account.entries[i].quantities.end()) {
            currents["N_" + id] = it->second;
        }
    }
    currents["W"] = s.flows.total_work();
    currents["S_tot"] = s.flows.entropy_production;
    currents["F_tot"] = s.flows.free_energy_total;
    json components = json::object();
    for (const auto& [task, value] : report.components) components[to_string(task)] = value;

    json doc = {
        {"library", "hybridtherm"},
        {"version", kVersion},
        {"machine", cfg.machine ? "coupled_dots" : "two_terminal"},
        {"config", to_json(cfg)},
        {"T_r", frame.temperature},
        {"distribution", s.distribution},
        {"tight_coupled", s.tight_coupled},
        {"currents", currents},
        {"regime", report.regime.str()},
        {"eta", optional_number(report.eta_total)},
        {"eta_status", status_name(report.status)},
        {"components", components},
        {"reversible", report.reversible},
    };
    write_file(opt.out, doc.dump(2) + "\n");
    out << "regime " << report.regime.str() << ", eta "
        << (report.eta_total ? format_double(*report.eta_total) : std::string("UNDEFINED")) << ", T_r "
        << format_double(frame.temperature) << "\n";
    return kSuccess;
}

std::string plot_script(const std::filesystem::path& csv, bool map) {
    std::ostringstream g;
    g << "set datafile separator ','\n";
    if (map) {
        g << "set xlabel 'axis1'\nset ylabel 'axis2'\nset title 'power W'\n"
          << "plot '" << csv.filename().string() << "' every ::1 using 1:2:7 with image notitle\n";
    } else {
        g << "set xlabel 'axis1'\nset key outside\n"
          << "plot '" << csv.filename().string() << "' every ::1 using 1:4 with lines title 'Q_c', \\\n"
          << "     '' every ::1 using 1:5 with lines title 'Q_h', \\\n"
          << "     '' every ::1 using 1:6 with lines title 'Q_g', \\\n"
          << "     '' every ::1 using 1:7 with lines title 'W'\n";
    }
    return g.str();
}

int cmd_grid(const RunConfig& cfg, const CommandOptions& opt, unsigned threads, std::ostream& out) {
    const bool map = opt.command == "map";
    const SweepSpec spec = sweep_spec(cfg);
    if (map && spec.axes.size() != 2) throw ValidationError("sweep.axes: map needs two axes");
    if (!map && spec.axes.size() != 1) throw ValidationError("sweep.axes: sweep needs one axis");
    const SweepResult result = run_sweep(spec, threads);

    std::ostringstream csv;
    write_csv(csv, result.records);
    write_file(opt.out, csv.str());

    json meta = sidecar(opt.command, cfg);
    meta["rows"] = result.records.size();
    std::map<std::string, std::size_t> counts;
    std::size_t failed = 0;
    for (const auto& r : result.records) {
        if (!r.regime.empty()) ++counts[r.regime];
        if (!r.ok()) ++failed;
    }
    meta["regime_counts"] = counts;
    meta["failed_points"] = failed;
    if (map) {
        json lines = json::array();
        for (const auto& b : extract_boundaries(result)) {
            json entry = {{"regimes", {b.regimes.first, b.regimes.second}}, {"points", b.points.size()}};
            if (b.fit) entry["line"] = {{"a", b.fit->a}, {"b", b.fit->b}, {"c", b.fit->c}};
            entry["max_residual"] = b.max_fit_residual;
            lines.push_back(entry);
        }
        meta["boundaries"] = lines;
    }
    write_file(sidecar_path(opt.out), meta.dump(2) + "\n");
    if (cfg.plot_script) write_file(plot_script_path(opt.out), plot_script(opt.out, map));
    out << result.records.size() << " points written to " << opt.out.string();
    if (failed) out << " (" << failed << " failed)";
    out << "\n";
    return kSuccess;
}

int cmd_verify(RunConfig cfg, const CommandOptions& opt, unsigned threads, std::ostream& out) {
    if (opt.seed) cfg.verify.seed = *opt.seed;
    const auto results = run_verification(cfg.verify, threads);
    std::ostringstream report;
    bool all = true;
    for (const auto& r : results) {
        report << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        all = all && r.passed;
    }
    write_file(opt.out, report.str());
    out << report.str();
    return all ? kSuccess : kVerification;
}

int cmd_oracle(RunConfig cfg, const CommandOptions& opt, std::ostream& out) {
    if (!cfg.machine) throw ValidationError("oracle needs a machine section");
    if (opt.seed) cfg.oracle.seed = *opt.seed;
    TrajectoryConfig tc;
    tc.params = *cfg.machine;
    tc.total_time = cfg.oracle.total_time;
    tc.seed = cfg.oracle.seed;
    tc.burn_in_fraction = cfg.oracle.burn_in_fraction;
    tc.blocks = cfg.oracle.blocks;
    const TrajectoryEstimate est = simulate(tc);
    const SteadyStateResult ss = steady_state(tc.params);

    struct Row {
        const char* name;
        Estimate sim;
        double exact;
    };
    const std::vector<Row> rows{
        {"N_c", est.particles[0], ss.particle_current()},
        {"N_h", est.particles[1], ss.account.entries[1].quantities.at(particle_number())},
        {"E_c", est.energy[0], ss.account.entries[0].energy},
        {"E_h", est.energy[1], ss.account.entries[1].energy},
        {"E_g", est.energy[2], ss.account.entries[2].energy},
        {"Q_c", est.heat[0], ss.heat(Terminal::C)},
        {"Q_h", est.heat[1], ss.heat(Terminal::H)},
        {"Q_g", est.heat[2], ss.heat(Terminal::G)},
        {"W", est.work, ss.work()},
        {"S_tot", est.entropy_production, ss.flows.entropy_production},
    };
    bool all = true;
    json checks = json::array();
    for (const auto& r : rows) {
        const double diff = r.sim.mean - r.exact;
        const double z = diff == 0.0 ? 0.0 : diff / r.sim.std_error;
        const bool pass = std::abs(z) < 3.0;
        all = all && pass;
        checks.push_back({{"name", r.name},
                          {"simulated", r.sim.mean},
                          {"std_error", r.sim.std_error},
                          {"master_equation", r.exact},
                          {"z", std::isfinite(z) ? json(z) : json(nullptr)},
                          {"pass", pass}});
        out << (pass ? "PASS " : "FAIL ") << r.name << " z=" << format_double(z) << "\n";
    }
    json doc = sidecar("oracle", cfg);
    doc["seed"] = tc.seed;
    doc["events"] = est.events;
    doc["sampled_time"] = est.sampled_time;
    doc["occupations"] = est.occupations;
    doc["checks"] = checks;
    doc["passed"] = all;
    write_file(opt.out, doc.dump(2) + "\n");
    return all ? kSuccess : kVerification;
}

}  // namespace

unsigned resolve_threads(std::optional<unsigned> requested, const char* env_value) {
    if (requested) return *requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : *requested;
    if (env_value && *env_value) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env_value, &end, 10);
        if (*end != '\0' || n == 0 || n > 4096) {
            throw ValidationError(std::string("HYBRIDTHERM_THREADS: expected a positive integer, got '") + env_value + "'");
        }
        return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
    auto p = out;
    return p.replace_extension(".meta.json");
}

std::filesystem::path plot_script_path(const std::filesystem::path& out) {
    auto p = out;
    return p.replace_extension(".gp");
}

int run_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const unsigned threads = resolve_threads(opt.threads, std::getenv("HYBRIDTHERM_THREADS"));
        const RunConfig cfg = load_config(opt.config);
        if (opt.command == "steady") return cmd_steady(cfg, opt, out);
        if (opt.command == "map" || opt.command == "sweep") return cmd_grid(cfg, opt, threads, out);
        if (opt.command == "verify") return cmd_verify(cfg, opt, threads, out);
        if (opt.command == "oracle") return cmd_oracle(cfg, opt, out);
        throw ValidationError("unknown command '" + opt.command + "'");
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace hybridtherm::app
