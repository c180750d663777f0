#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hybridtherm/version.hpp"

int main(int argc, char** argv) {
    CLI::App cli{"Steady-state thermodynamics of hybrid thermal machines"};
    cli.set_version_flag("--version", hybridtherm::kVersion);
    cli.require_subcommand(1);

    hybridtherm::app::CommandOptions opt;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    const std::pair<const char*, const char*> commands[] = {
        {"steady", "steady state at one operating point (JSON report)"},
        {"map", "regime map over two axes (CSV)"},
        {"sweep", "transect over one axis (CSV)"},
        {"verify", "invariant suites, one PASS/FAIL line each"},
        {"oracle", "stochastic trajectory against the master equation"},
    };
    for (const auto& [name, description] : commands) {
        auto* sub = cli.add_subcommand(name, description);
        sub->add_option("--config", opt.config, "configuration file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output path")->required();
        sub->add_option("--seed", seed, "random seed for verify and oracle");
        sub->add_option("--threads", threads, "worker threads (0 = all cores)");
    }
    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : hybridtherm::app::kValidation;
    }
    auto* sub = cli.get_subcommands().front();
    opt.command = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--threads")) opt.threads = threads;
    return hybridtherm::app::run_command(opt, std::cout, std::cerr);
}
