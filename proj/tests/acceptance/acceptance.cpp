// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "verification.hpp"
#include "hybridtherm/boundaries.hpp"
#include "hybridtherm/csv.hpp"
#include "hybridtherm/dot_model.hpp"
#include "hybridtherm/error.hpp"
#include "hybridtherm/gillespie.hpp"
#include "hybridtherm/regime.hpp"
#include "hybridtherm/sweep.hpp"
#include "hybridtherm/two_terminal.hpp"

using namespace hybridtherm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double x) { return format_double(x); }

ReferenceFrame frame_at(double t) { return ReferenceFrame{t, {}}; }

DotParams filter_machine(double mu_c, double mu_h) {
    return DotParams{0.0, -50.0, 90.0, mu_c, mu_h, 20.0, 30.0, 25.0, 1.0, 0.0, {}};
}

DotParams slow_machine(double U, double eps_G, double mu_c, double mu_h) {
    return DotParams{0.0, eps_G, U, mu_c, mu_h, 20.0, 30.0, 25.0, 0.01, 0.0, {}};
}

SweepSpec mu_map(double gamma_leak, std::size_t points) {
    SweepSpec spec;
    spec.base = filter_machine(0, 0);
    spec.base.gamma_leak = gamma_leak;
    spec.axes = {{AxisKind::MuC, -50.0, 150.0, points}, {AxisKind::MuH, -50.0, 150.0, points}};
    spec.reference = {SweepReferenceKind::Fixed, 25.0};
    return spec;
}

Outcome reversibility_anchor() {
    auto flows_at = [](double mu_c, double mu_h) {
        const auto s = steady_state(filter_machine(mu_c, mu_h), frame_at(25.0));
        const double largest = std::max({std::abs(s.particle_current()), std::abs(s.heat(Terminal::C)),
                                         std::abs(s.heat(Terminal::H)), std::abs(s.heat(Terminal::G)),
                                         std::abs(s.work())});
        return std::pair{largest, s.flows.entropy_production};
    };
    const auto [flow, entropy] = flows_at(0.0, 18.0);
    const bool ok = flow < 1e-10 && entropy < 1e-12;
    const auto [flow_m, entropy_m] = flows_at(0.0, -18.0);
    return {ok, "at (0, 18): max |flow| " + fmt(flow) + ", S_tot " + fmt(entropy) +
                    ", affinity " + fmt(reversibility_residual(filter_machine(0, 18))) + "; at (0, -18): max |flow| " +
                    fmt(flow_m) + ", S_tot " + fmt(entropy_m)};
}

Outcome tg_star_anchor() {
    std::ostringstream d;
    bool ok = true;

    const DotParams a = slow_machine(90, -80, 25, 15);
    const double ta = tg_star(a);
    const auto [lo, hi] = bracket_gate_reversal(a, 20.0, 30.0, 1e-12);
    ok = ok && ta == 24.0 && lo >= 24.0 - 1e-8 && hi <= 24.0 + 1e-8;
    d << "U = 90: T_g* " << fmt(ta) << " bracket [" << fmt(lo) << ", " << fmt(hi) << "]";

    const DotParams c = slow_machine(40, -50, 27, 30);
    const double tc = tg_star(c);
    const double closed = 40.0 / (10.0 / 30.0 + 27.0 / 20.0);
    const auto [clo, chi] = bracket_gate_reversal(c, 20.0, 30.0, 1e-12);
    ok = ok && std::abs(tc - closed) < 1e-4 && std::abs(tc - 23.7624) < 1e-4 && clo <= tc + 1e-8 && chi >= tc - 1e-8;
    d << "; U = 40: T_g* " << fmt(tc) << " bracket [" << fmt(clo) << ", " << fmt(chi) << "]";

    double worst = 2.0;
    for (const DotParams& base : {a, c}) {
        const double star = tg_star(base);
        for (double side : {-1.0, 1.0}) {
            DotParams p = base;
            p.T_g = star * (1.0 + side * 1e-4);
            const auto frame = gate_frame(p);
            const auto s = steady_state(p, frame);
            const auto report = hybrid_efficiency(s.flows, s.reservoirs, frame);
            worst = std::min(worst, report.eta_total.value_or(0.0));
        }
    }
    ok = ok && worst > 0.999;
    d << "; min eta at 1e-4 offsets " << fmt(worst);
    return {ok, d.str()};
}

Outcome combine(const std::vector<app::CheckResult>& checks, double seconds, double limit) {
    bool ok = seconds < limit;
    std::string detail;
    for (const auto& c : checks) {
        ok = ok && c.passed;
        detail += (c.passed ? "" : "[failed] ") + c.name + ": " + c.detail + "; ";
    }
    return {ok, detail + "runtime " + fmt(std::round(seconds * 100) / 100) + " s"};
}

template <class F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome law_suite() {
    app::VerifyOptions o;
    o.draws = 10000;
    std::vector<app::CheckResult> checks;
    const double t = timed([&] {
        checks = {app::check_first_law(o), app::check_second_law(o), app::check_efficiency_bound(o),
                  app::check_free_energy_identity(o), app::check_task_bound(o)};
    });
    return combine(checks, t, 60.0);
}

Outcome tight_coupling_suite() {
    app::VerifyOptions o;
    o.draws = 10000;
    o.analytical_draws = 1000;
    std::vector<app::CheckResult> checks;
    const double t = timed([&] { checks = {app::check_tight_coupling(o), app::check_analytical_current(o)}; });
    return combine(checks, t, 60.0);
}

Outcome equilibrium_oracle() {
    app::VerifyOptions o;
    o.equilibrium_draws = 100;
    std::vector<app::CheckResult> checks;
    const double t = timed([&] { checks = {app::check_equilibrium_gibbs(o)}; });
    return combine(checks, t, 60.0);
}

Outcome regime_map() {
    SweepResult result;
    const double t = timed([&] { result = run_sweep(mu_map(0.0, 201), 0); });
    const double spacing = result.spec.axes[0].spacing();
    bool ok = t < 120.0;
    std::ostringstream d;

    std::string missing;
    for (const char* r : {"E", "ER", "R", "RP", "P", "EP"}) {
        if (region_area(result, r) == 0) missing += std::string(" ") + r;
    }
    ok = ok && missing.empty();
    d << (missing.empty() ? "all six regimes present" : "missing:" + missing);

    const DotParams& p = result.spec.base;
    const std::vector<std::pair<std::string, Line>> targets{
        {"mu_c=mu_h", Line::through(1, -1, 0)},
        {"mu_c=0", Line::through(1, 0, p.eps_S)},
        {"mu_h=90", Line::through(0, 1, p.eps_S + p.U)},
        {"reversibility", Line::through(1 / p.T_c, -1 / p.T_h, p.eps_S / p.T_c - (p.eps_S + p.U) / p.T_h + p.U / p.T_g)},
    };
    const auto bounds = extract_boundaries(result);
    for (const auto& [name, target] : targets) {
        std::size_t groups = 0;
        double worst = 0.0;
        for (const auto& b : bounds) {
            const auto expected = expected_boundary(p, b.regimes.first, b.regimes.second);
            if (!expected || !b.fit || std::abs(expected->a * target.a + expected->b * target.b) < 1 - 1e-12 ||
                std::abs(expected->distance({0, 0}) - target.distance({0, 0})) > 1e-9) {
                continue;
            }
            // Distance from the expected line of the fitted line over the
            // extent of the boundary.
            const Line& f = *b.fit;
            for (const auto& q : b.points) {
                const double r = f.a * q.x + f.b * q.y - f.c;
                worst = std::max(worst, target.distance({q.x - r * f.a, q.y - r * f.b}));
            }
            ++groups;
        }
        ok = ok && groups > 0 && worst <= spacing;
        d << "; " << name << ": " << groups << " boundaries, max offset " << fmt(worst);
    }
    d << "; runtime " << fmt(std::round(t * 100) / 100) << " s";
    return {ok, d.str()};
}

Outcome leakage_degradation() {
    const std::vector<double> gammas{0.0, 0.01, 0.1, 1.0};
    std::vector<std::size_t> er, ep;
    std::set<std::string> last;
    for (double g : gammas) {
        const auto r = run_sweep(mu_map(g, 201), 0);
        er.push_back(region_area(r, "ER"));
        ep.push_back(region_area(r, "EP"));
        last.clear();
        for (const auto& rec : r.records) last.insert(rec.ok() ? rec.regime : "error");
    }
    bool ok = er.back() == 0 && ep.back() == 0;
    for (std::size_t i = 1; i < gammas.size(); ++i) ok = ok && er[i] <= er[i - 1] && ep[i] <= ep[i - 1];
    const std::set<std::string> allowed{"E", "P", "RP", "DISSIPATIVE"};
    std::ostringstream d;
    d << "ER/EP counts";
    for (std::size_t i = 0; i < gammas.size(); ++i) d << " " << er[i] << "/" << ep[i];
    d << "; labels at gamma = Gamma:";
    for (const auto& s : last) {
        ok = ok && allowed.count(s);
        d << " " << s;
    }
    return {ok, d.str()};
}

Outcome erp_window() {
    SweepSpec spec;
    spec.base = DotParams{5.0, -45.0, 90.0, 0.0, 0.0, 20.0, 25.0, 30.0, 1.0, 0.0, {}};
    spec.axes = {{AxisKind::DeltaMu, -30.0, 10.0, 4001}};
    spec.delta_mu_rule = DeltaMuRule::HoldMuH;
    spec.reference = {SweepReferenceKind::Fixed, 22.5};
    const auto r = run_sweep(spec, 0);
    const double h = spec.axes[0].spacing();

    double lo = INFINITY, hi = -INFINITY, eta_min = INFINITY, eta_max = -INFINITY;
    bool signs = true;
    for (const auto& rec : r.records) {
        if (rec.regime != "ERP") continue;
        lo = std::min(lo, rec.axis[0]);
        hi = std::max(hi, rec.axis[0]);
        signs = signs && rec.W > 0 && rec.Q_c > 0 && rec.Q_h < 0;
        eta_min = std::min(eta_min, rec.eta_P.value_or(NAN));
        eta_max = std::max(eta_max, rec.eta_P.value_or(NAN));
    }
    if (!(lo <= hi)) return {false, "no ERP point on the transect"};

    // Lower edge: eps_S - mu_c = E*(delta_mu) with mu_c = delta_mu.
    auto gap = [&](double dmu) { return (spec.base.eps_S - dmu) - e_star(spec.base, dmu); };
    double a = -30.0, b = 0.0;
    for (int i = 0; i < 200 && gap(a) * gap(b) < 0; ++i) {
        const double m = 0.5 * (a + b);
        (gap(a) * gap(m) <= 0 ? b : a) = m;
    }
    const double edge = 0.5 * (a + b);
    DotParams anchor = spec.base;
    anchor.T_c = 20, anchor.T_h = 25, anchor.T_g = 30, anchor.U = 90;
    const double e0 = e_star(anchor, 0.0);

    const bool ok = hi < 0.0 && hi >= -h - 1e-12 && std::abs(lo - edge) <= h + 1e-12 && signs &&
                    std::abs(eta_max - eta_min) < 1e-10 && std::abs(e0 - 60.0) < 1e-12;
    std::ostringstream d;
    d << "ERP on [" << fmt(lo) << ", " << fmt(hi) << "], E* edge " << fmt(edge) << ", E*(0) " << fmt(e0)
      << ", eta_P spread " << fmt(eta_max - eta_min) << " at " << fmt(eta_min)
      << (signs ? "" : ", sign pattern violated");
    return {ok, d.str()};
}

Outcome two_terminal_suite() {
    std::mt19937_64 rng(9);
    auto u = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        TwoTerminalParams p{u(-100, 100), u(-100, 100), u(-100, 100), u(5, 50), u(5, 50), u(0.1, 2), u(0.1, 2)};
        const auto frame = frame_at(u(5, 50));
        const auto a = two_terminal_steady(p, frame);
        const auto b = steady_state(decoupled_dot_params(p, u(5, 50)), frame);
        const double scale = std::max(1.0, std::abs(a.flows.heat[0]));
        worst = std::max({worst, std::abs(a.particle_current() - b.particle_current()),
                          std::abs(a.flows.heat[0] - b.flows.heat[0]) / scale,
                          std::abs(a.flows.heat[1] - b.flows.heat[1]) / scale, std::abs(b.flows.heat[2])});
    }

    std::map<std::string, std::size_t> inventory;
    const Axis axis{AxisKind::MuC, -50.0, 150.0, 201};
    for (std::size_t i = 0; i < axis.points; ++i) {
        for (std::size_t j = 0; j < axis.points; ++j) {
            const TwoTerminalParams p{50.0, axis.value(i), axis.value(j), 20.0, 30.0, 1.0, 1.0};
            const auto frame = frame_at(25.0);
            const auto s = two_terminal_steady(p, frame);
            ++inventory[classify_regime(s.flows, s.reservoirs, frame).str()];
        }
    }
    const std::set<std::string> allowed{"E", "P", "RP", "DISSIPATIVE", "IDLE"};
    bool labels_ok = true;
    std::ostringstream d;
    d << "max deviation from decoupled limit " << fmt(worst) << "; inventory:";
    for (const auto& [name, n] : inventory) {
        labels_ok = labels_ok && allowed.count(name);
        d << " " << name << "=" << n;
    }
    for (const char* r : {"E", "P", "RP"}) labels_ok = labels_ok && inventory.count(r);
    const std::size_t idle = inventory.count("IDLE") ? inventory["IDLE"] : 0;
    labels_ok = labels_ok && idle <= axis.points;
    return {worst < 1e-10 && labels_ok, d.str()};
}

Outcome stochastic_oracle() {
    const DotParams p = filter_machine(25, 15);
    const auto exact = steady_state(p);
    const std::vector<double> reference{exact.particle_current(),
                                        exact.account.entries[1].quantities.at(particle_number()),
                                        exact.account.entries[0].energy,
                                        exact.account.entries[1].energy,
                                        exact.account.entries[2].energy,
                                        exact.heat(Terminal::C),
                                        exact.heat(Terminal::H),
                                        exact.heat(Terminal::G),
                                        exact.work(),
                                        exact.flows.entropy_production};
    constexpr std::size_t kSeeds = 50;
    std::vector<int> pass(kSeeds, 0);
    std::vector<double> worst_z(kSeeds, 0.0);
    std::atomic<std::size_t> next{0};
    const double t = timed([&] {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < std::max(1u, std::thread::hardware_concurrency()); ++w) {
            pool.emplace_back([&] {
                for (std::size_t k; (k = next++) < kSeeds;) {
                    TrajectoryConfig c;
                    c.params = p;
                    c.total_time = 1e7;
                    c.seed = 1000 + k;
                    const auto est = simulate(c);
                    const std::vector<Estimate> sim{est.particles[0], est.particles[1], est.energy[0], est.energy[1],
                                                    est.energy[2],    est.heat[0],      est.heat[1],   est.heat[2],
                                                    est.work,         est.entropy_production};
                    double z = 0.0;
                    for (std::size_t i = 0; i < sim.size(); ++i) {
                        z = std::max(z, std::abs(sim[i].mean - reference[i]) / sim[i].std_error);
                    }
                    worst_z[k] = z;
                    pass[k] = z < 3.0;
                }
            });
        }
    });
    const int passes = std::count(pass.begin(), pass.end(), 1);
    std::ostringstream d;
    d << passes << "/" << kSeeds << " seeds within 3 standard errors (first seed max |z| " << fmt(worst_z[0])
      << "); runtime " << fmt(std::round(t * 100) / 100) << " s";
    return {pass[0] && passes >= 47 && t < 300.0, d.str()};
}

Outcome reference_policy_check() {
    const ReferencePolicy policy{ReferencePolicyKind::ColdestEntropySink, {}};
    std::ostringstream d;

    // Engine: the coldest sink is c, so the efficiency is W / (eta_C Q_h).
    const TwoTerminalParams tt{50.0, 10.0, 0.0, 20.0, 30.0, 1.0, 1.0};
    const auto pre = two_terminal_steady(tt, frame_at(25.0));
    const auto frame_e = reference_policy(pre.flows, pre.reservoirs, policy);
    const auto e = two_terminal_steady(tt, frame_e);
    const auto report_e = hybrid_efficiency(e.flows, e.reservoirs, frame_e);
    const double carnot = 1.0 - tt.T_c / tt.T_h;
    const double standard = e.flows.total_work() / e.flows.heat[1];
    const double dev_e = std::abs(report_e.eta_total.value_or(NAN) - standard / carnot);
    d << "E: T_r " << fmt(frame_e.temperature) << ", eta " << fmt(report_e.eta_total.value_or(NAN))
      << ", W/(eta_C Q_h) " << fmt(standard / carnot);

    // Refrigerator: the gate is the coldest sink, so T_r = T_g.
    const DotParams p = filter_machine(10, 50);
    const auto pre_r = steady_state(p);
    const auto frame_r = reference_policy(pre_r.flows, pre_r.reservoirs, policy);
    const auto r = steady_state(p, frame_r);
    const auto report_r = hybrid_efficiency(r.flows, r.reservoirs, frame_r);
    const double closed = regime_efficiency_formula(RegimeName::R, r.flows, r.reservoirs, frame_r);
    const double dev_r = std::abs(report_r.eta_total.value_or(NAN) - closed);
    d << "; R: regime " << report_r.regime.str() << ", T_r " << fmt(frame_r.temperature) << ", eta "
      << fmt(report_r.eta_total.value_or(NAN)) << ", closed form " << fmt(closed);

    const bool ok = report_e.regime.name == RegimeName::E && frame_e.temperature == tt.T_c && dev_e < 1e-12 &&
                    report_r.regime.name == RegimeName::R && frame_r.temperature == p.T_g && dev_r < 1e-12;
    return {ok, d.str()};
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "hybridtherm_acceptance";
    fs::create_directories(dir);
    const fs::path config = fs::path(HYBRIDTHERM_CONFIG_DIR) / "map_mu.json";
    auto run = [&](unsigned threads, const std::string& name) {
        app::CommandOptions o{"map", config, dir / name, std::nullopt, threads};
        std::ostringstream out, err;
        const int code = app::run_command(o, out, err);
        std::ifstream in(dir / name, std::ios::binary);
        std::ostringstream bytes;
        bytes << in.rdbuf();
        return std::pair{code, bytes.str()};
    };
    const auto a = run(1, "serial.csv");
    const auto b = run(8, "parallel.csv");
    const auto c = run(1, "serial_again.csv");
    const bool ok = a.first == 0 && b.first == 0 && c.first == 0 && !a.second.empty() && a.second == b.second &&
                    a.second == c.second;
    return {ok, std::to_string(a.second.size()) + " bytes, serial vs 8 threads " +
                    (a.second == b.second ? "identical" : "different") + ", repeat " +
                    (a.second == c.second ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"reversibility_anchor", reversibility_anchor},
        {"tg_star_anchor", tg_star_anchor},
        {"law_suite", law_suite},
        {"tight_coupling_suite", tight_coupling_suite},
        {"equilibrium_oracle", equilibrium_oracle},
        {"regime_map", regime_map},
        {"leakage_degradation", leakage_degradation},
        {"erp_window", erp_window},
        {"two_terminal_suite", two_terminal_suite},
        {"stochastic_oracle", stochastic_oracle},
        {"reference_policy", reference_policy_check},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.passed;
        std::cout << (o.passed ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
