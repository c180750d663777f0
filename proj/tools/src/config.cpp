#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "hybridtherm/error.hpp"

namespace hybridtherm::app {

using nlohmann::json;

KeyLines::KeyLines(const std::string& text) {
    struct Frame {
        bool object = false;
        std::string path;
        std::size_t index = 0;
        std::string key;
    };
    std::vector<Frame> stack;
    int line = 1;
    auto child_path = [&]() -> std::string {
        if (stack.empty()) return "";
        const Frame& f = stack.back();
        if (f.object) return f.path.empty() ? f.key : f.path + "." + f.key;
        return f.path + "[" + std::to_string(f.index) + "]";
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
        } else if (c == '"') {
            const int start_line = line;
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\') ++i;
                if (i < text.size()) s += text[i];
            }
            std::size_t j = i + 1;
            while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            if (!stack.empty() && stack.back().object && j < text.size() && text[j] == ':') {
                stack.back().key = s;
                lines_.emplace(child_path(), start_line);
            }
        } else if (c == '{' || c == '[') {
            std::string path = child_path();
            lines_.emplace(path, line);
            stack.push_back({c == '{', std::move(path), 0, {}});
        } else if (c == '}' || c == ']') {
            if (!stack.empty()) stack.pop_back();
        } else if (c == ',' && !stack.empty() && !stack.back().object) {
            ++stack.back().index;
        }
    }
}

int KeyLines::line_of(const std::string& path) const {
    // Fall back to the closest enclosing key that was seen.
    std::string p = path;
    while (true) {
        if (auto it = lines_.find(p); it != lines_.end()) return it->second;
        const auto cut = p.find_last_of(".[");
        if (cut == std::string::npos) return p.empty() ? 1 : line_of("");
        p.resize(cut);
    }
}

namespace {

class Reader {
public:
    Reader(const KeyLines& lines, std::string source) : lines_(lines), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        throw ValidationError(source_ + ":" + std::to_string(lines_.line_of(path)) + ": " +
                              (path.empty() ? std::string("<root>") : path) + ": " + message);
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    void object(const json& j, const std::string& path, const std::set<std::string>& allowed) const {
        if (!j.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : j.items()) {
            if (!allowed.count(key)) fail(join(path, key), "unknown key");
        }
    }

    std::optional<double> number(const json& obj, const std::string& path, const std::string& key) const {
        if (!obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        if (!v.is_number()) fail(join(path, key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(join(path, key), "must be finite");
        return x;
    }

    double required(const json& obj, const std::string& path, const std::string& key) const {
        auto x = number(obj, path, key);
        if (!x) fail(join(path, key), "missing required key");
        return *x;
    }

    double positive(const json& obj, const std::string& path, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const {
        auto x = number(obj, path, key);
        if (!x && !fallback) fail(join(path, key), "missing required key");
        const double v = x.value_or(*fallback);
        if (!(v > 0.0)) fail(join(path, key), "must be > 0");
        return v;
    }

    std::uint64_t integer(const json& obj, const std::string& path, const std::string& key, std::uint64_t fallback,
                          std::uint64_t minimum) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number_unsigned()) fail(join(path, key), "expected a non-negative integer");
        const auto x = v.get<std::uint64_t>();
        if (x < minimum) fail(join(path, key), "must be >= " + std::to_string(minimum));
        return x;
    }

    bool boolean(const json& obj, const std::string& path, const std::string& key, bool fallback) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_boolean()) fail(join(path, key), "expected true or false");
        return v.get<bool>();
    }

    std::string choice(const json& obj, const std::string& path, const std::string& key,
                       const std::set<std::string>& options, const std::string& fallback) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_string() || !options.count(v.get<std::string>())) {
            std::string list;
            for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
            fail(join(path, key), "expected one of " + list);
        }
        return v.get<std::string>();
    }

private:
    const KeyLines& lines_;
    std::string source_;
};

DotParams read_machine(const Reader& r, const json& j) {
    const std::string path = "machine";
    r.object(j, path, {"eps_S", "eps_G", "U", "mu_c", "mu_h", "T_c", "T_h", "T_g", "Gamma", "gamma_leak",
                       "rate_overrides"});
    DotParams p;
    p.eps_S = r.required(j, path, "eps_S");
    p.eps_G = r.number(j, path, "eps_G").value_or(0.0);
    p.U = r.required(j, path, "U");
    if (p.U < 0.0) r.fail("machine.U", "must be >= 0");
    p.mu_c = r.required(j, path, "mu_c");
    p.mu_h = r.required(j, path, "mu_h");
    p.T_c = r.positive(j, path, "T_c");
    p.T_h = r.positive(j, path, "T_h");
    p.T_g = r.positive(j, path, "T_g");
    p.Gamma = r.positive(j, path, "Gamma", 1.0);
    p.gamma_leak = r.number(j, path, "gamma_leak").value_or(0.0);
    if (p.gamma_leak < 0.0) r.fail("machine.gamma_leak", "must be >= 0");
    if (j.contains("rate_overrides")) {
        const std::string sub = "machine.rate_overrides";
        const json& o = j.at("rate_overrides");
        r.object(o, sub, {"c0", "c1", "h0", "h1", "g0", "g1"});
        for (const auto& [key, value] : o.items()) {
            const double rate = *r.number(o, sub, key);
            if (rate < 0.0) r.fail(sub + "." + key, "must be >= 0");
            const Terminal t = key[0] == 'c' ? Terminal::C : key[0] == 'h' ? Terminal::H : Terminal::G;
            p.rate_overrides[{t, key[1] - '0'}] = rate;
        }
    }
    return p;
}

TwoTerminalParams read_two_terminal(const Reader& r, const json& j) {
    const std::string path = "two_terminal";
    r.object(j, path, {"eps_S", "mu_c", "mu_h", "T_c", "T_h", "Gamma_c", "Gamma_h"});
    TwoTerminalParams p;
    p.eps_S = r.required(j, path, "eps_S");
    p.mu_c = r.required(j, path, "mu_c");
    p.mu_h = r.required(j, path, "mu_h");
    p.T_c = r.positive(j, path, "T_c");
    p.T_h = r.positive(j, path, "T_h");
    p.Gamma_c = r.positive(j, path, "Gamma_c", 1.0);
    p.Gamma_h = r.positive(j, path, "Gamma_h", 1.0);
    return p;
}

const std::map<std::string, SweepReferenceKind> kPolicies = {
    {"fixed", SweepReferenceKind::Fixed},
    {"gate", SweepReferenceKind::Gate},
    {"coldest_entropy_sink", SweepReferenceKind::ColdestEntropySink},
};
const std::map<std::string, AxisKind> kAxes = {
    {"mu_c", AxisKind::MuC}, {"mu_h", AxisKind::MuH}, {"T_g", AxisKind::TG}, {"delta_mu", AxisKind::DeltaMu}};
const std::map<std::string, DeltaMuRule> kRules = {
    {"hold_mu_h", DeltaMuRule::HoldMuH}, {"hold_mu_c", DeltaMuRule::HoldMuC}, {"symmetric", DeltaMuRule::Symmetric}};

template <class Map>
std::set<std::string> names(const Map& m) {
    std::set<std::string> s;
    for (const auto& [k, v] : m) s.insert(k);
    return s;
}

template <class Map, class Value>
std::string name_of(const Map& m, Value v) {
    for (const auto& [k, x] : m) {
        if (x == v) return k;
    }
    return "?";
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ValidationError(source + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    const KeyLines lines(text);
    const Reader r(lines, source);
    r.object(root, "", {"machine", "two_terminal", "reference", "sweep", "oracle", "verify", "output"});

    RunConfig cfg;
    if (root.contains("machine")) cfg.machine = read_machine(r, root.at("machine"));
    if (root.contains("two_terminal")) cfg.two_terminal = read_two_terminal(r, root.at("two_terminal"));
    if (cfg.machine && cfg.two_terminal) r.fail("two_terminal", "give either machine or two_terminal, not both");

    if (root.contains("reference")) {
        const json& j = root.at("reference");
        r.object(j, "reference", {"policy", "T_r"});
        cfg.reference.kind = kPolicies.at(r.choice(j, "reference", "policy", names(kPolicies), "gate"));
        if (cfg.reference.kind == SweepReferenceKind::Fixed) {
            cfg.reference.temperature = r.positive(j, "reference", "T_r");
        } else if (j.contains("T_r")) {
            r.fail("reference.T_r", "only allowed with policy \"fixed\"");
        }
    }

    if (root.contains("sweep")) {
        const json& j = root.at("sweep");
        r.object(j, "sweep", {"axes", "delta_mu_rule"});
        cfg.delta_mu_rule = kRules.at(r.choice(j, "sweep", "delta_mu_rule", names(kRules), "hold_mu_h"));
        if (!j.contains("axes") || !j.at("axes").is_array()) r.fail("sweep.axes", "expected an array of axes");
        const json& axes = j.at("axes");
        if (axes.empty() || axes.size() > 2) r.fail("sweep.axes", "expected one or two axes");
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const std::string path = "sweep.axes[" + std::to_string(i) + "]";
            const json& a = axes[i];
            r.object(a, path, {"name", "from", "to", "points"});
            if (!a.contains("name")) r.fail(path + ".name", "missing required key");
            Axis axis;
            axis.kind = kAxes.at(r.choice(a, path, "name", names(kAxes), ""));
            axis.lo = r.required(a, path, "from");
            axis.hi = r.required(a, path, "to");
            axis.points = r.integer(a, path, "points", 0, 2);
            if (axis.points == 0) r.fail(path + ".points", "missing required key");
            if (axis.kind == AxisKind::TG && !(axis.lo > 0.0 && axis.hi > 0.0)) {
                r.fail(path, "T_g range must stay above 0");
            }
            if (i == 1 && axis.kind == cfg.axes[0].kind) r.fail(path + ".name", "axes must differ");
            cfg.axes.push_back(axis);
        }
    }

    if (root.contains("oracle")) {
        const json& j = root.at("oracle");
        r.object(j, "oracle", {"total_time", "burn_in_fraction", "blocks", "seed"});
        cfg.oracle.total_time = r.positive(j, "oracle", "total_time", cfg.oracle.total_time);
        cfg.oracle.burn_in_fraction = r.number(j, "oracle", "burn_in_fraction").value_or(cfg.oracle.burn_in_fraction);
        if (!(cfg.oracle.burn_in_fraction >= 0.0 && cfg.oracle.burn_in_fraction < 1.0)) {
            r.fail("oracle.burn_in_fraction", "must be in [0, 1)");
        }
        cfg.oracle.blocks = r.integer(j, "oracle", "blocks", cfg.oracle.blocks, kMinBlocks);
        cfg.oracle.seed = r.integer(j, "oracle", "seed", cfg.oracle.seed, 0);
    }

    if (root.contains("verify")) {
        const json& j = root.at("verify");
        r.object(j, "verify",
                 {"draws", "analytical_draws", "equilibrium_draws", "leakage_map_points", "seed", "inject_energy_leak"});
        auto& v = cfg.verify;
        v.draws = r.integer(j, "verify", "draws", v.draws, 1);
        v.analytical_draws = r.integer(j, "verify", "analytical_draws", v.analytical_draws, 1);
        v.equilibrium_draws = r.integer(j, "verify", "equilibrium_draws", v.equilibrium_draws, 1);
        v.leakage_map_points = r.integer(j, "verify", "leakage_map_points", v.leakage_map_points, 2);
        v.seed = r.integer(j, "verify", "seed", v.seed, 0);
        v.inject_energy_leak = r.boolean(j, "verify", "inject_energy_leak", false);
    }

    if (root.contains("output")) {
        const json& j = root.at("output");
        r.object(j, "output", {"plot_script"});
        cfg.plot_script = r.boolean(j, "output", "plot_script", false);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.filename().string());
}

json to_json(const RunConfig& c) {
    json j = json::object();
    if (c.machine) {
        const auto& p = *c.machine;
        json m = {{"eps_S", p.eps_S}, {"eps_G", p.eps_G}, {"U", p.U},       {"mu_c", p.mu_c},
                  {"mu_h", p.mu_h},   {"T_c", p.T_c},     {"T_h", p.T_h},   {"T_g", p.T_g},
                  {"Gamma", p.Gamma}, {"gamma_leak", p.gamma_leak}};
        if (!p.rate_overrides.empty()) {
            json o = json::object();
            for (const auto& [key, rate] : p.rate_overrides) {
                o[std::string(to_string(key.terminal)) + std::to_string(key.other_occupation)] = rate;
            }
            m["rate_overrides"] = o;
        }
        j["machine"] = m;
    }
    if (c.two_terminal) {
        const auto& p = *c.two_terminal;
        j["two_terminal"] = {{"eps_S", p.eps_S}, {"mu_c", p.mu_c},       {"mu_h", p.mu_h},      {"T_c", p.T_c},
                             {"T_h", p.T_h},     {"Gamma_c", p.Gamma_c}, {"Gamma_h", p.Gamma_h}};
    }
    json ref = {{"policy", name_of(kPolicies, c.reference.kind)}};
    if (c.reference.kind == SweepReferenceKind::Fixed) ref["T_r"] = c.reference.temperature;
    j["reference"] = ref;
    if (!c.axes.empty()) {
        json axes = json::array();
        for (const auto& a : c.axes) {
            axes.push_back({{"name", name_of(kAxes, a.kind)}, {"from", a.lo}, {"to", a.hi}, {"points", a.points}});
        }
        j["sweep"] = {{"axes", axes}, {"delta_mu_rule", name_of(kRules, c.delta_mu_rule)}};
    }
    j["oracle"] = {{"total_time", c.oracle.total_time},
                   {"burn_in_fraction", c.oracle.burn_in_fraction},
                   {"blocks", c.oracle.blocks},
                   {"seed", c.oracle.seed}};
    j["verify"] = {{"draws", c.verify.draws},
                   {"analytical_draws", c.verify.analytical_draws},
                   {"equilibrium_draws", c.verify.equilibrium_draws},
                   {"leakage_map_points", c.verify.leakage_map_points},
                   {"seed", c.verify.seed},
                   {"inject_energy_leak", c.verify.inject_energy_leak}};
    j["output"] = {{"plot_script", c.plot_script}};
    return j;
}

SweepSpec sweep_spec(const RunConfig& c) {
    if (!c.machine) throw ValidationError("machine: a sweep needs a machine section");
    if (c.axes.empty()) throw ValidationError("sweep: missing sweep section");
    SweepSpec s;
    s.base = *c.machine;
    s.axes = c.axes;
    s.delta_mu_rule = c.delta_mu_rule;
    s.reference = c.reference;
    return s;
}

}  // namespace hybridtherm::app
