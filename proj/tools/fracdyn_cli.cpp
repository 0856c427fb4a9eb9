// fracdyn <kind> --config FILE [--out DIR] [--seed N] [--threads N]
//
// Exit codes: 0 success, 1 invalid config or arguments, 2 numerical failure
// (including a finished run outside tolerance), 3 i/o error.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracdyn/config.hpp"
#include "fracdyn/experiment.hpp"
#include "fracdyn/types.hpp"

int main(int argc, char** argv)
{
    using namespace fracdyn;

    CLI::App app{"Fractional field dynamics experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", experiment::kLibraryVersion);

    struct Options {
        std::string config;
        std::string out = "out";
        std::optional<std::uint64_t> seed;
        std::optional<std::uint64_t> threads;
    } opt;

    for (const auto& kind : config::experiment_kinds()) {
        auto* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
        sub->add_option("--config", opt.config, "INI file")->required();
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", opt.seed, "override experiment.seed");
        sub->add_option("--threads", opt.threads, "override experiment.threads");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : experiment::validation_error;
    }

    const std::string kind = app.get_subcommands().front()->get_name();
    config::ExperimentConfig cfg;
    try {
        cfg = config::load_ini(opt.config, kind);
        if (cfg.kind != kind) {
            throw ValidationError("config declares kind '" + cfg.kind + "' but '" + kind + "' was requested", "kind");
        }
        if (opt.seed) cfg.seed = *opt.seed;
        if (opt.threads) cfg.threads = *opt.threads;
        config::validate(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "validation error";
        if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
        std::cerr << ": " << e.what() << '\n';
        return experiment::validation_error;
    }

    const int rc = experiment::run_and_report(cfg, opt.out, std::cerr);
    if (rc == experiment::ok) std::cout << kind << ": ok, output in " << opt.out << '\n';
    return rc;
}
