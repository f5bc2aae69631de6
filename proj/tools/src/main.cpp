#include <string>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

struct SubArgs {
    std::string config;
    torusrev::cli::CommandContext ctx;
    std::uint64_t seed = 0;  // reserved: no randomness in any computation path
};

void add_common(CLI::App* sub, SubArgs& args) {
    sub->add_option("--config", args.config, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", args.ctx.out_dir, "output directory")
        ->default_val(".");
    sub->add_option("--threads", args.ctx.threads,
                    "worker threads, 0 = hardware count")
        ->default_val(0);
    sub->add_option("--seed", args.seed, "reserved; accepted and ignored");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "free wave-packet evolution on the flat torus: evolve states, raster "
        "phase-space densities, and sweep semiclassical limits"};
    app.require_subcommand(1);

    using Cmd = int (*)(const torusrev::cli::ExperimentConfig&,
                        const torusrev::cli::CommandContext&);
    struct Entry {
        const char* name;
        const char* help;
        Cmd fn;
    };
    const Entry entries[] = {
        {"evolve", "write the evolved state and its position density",
         torusrev::cli::cmd_evolve},
        {"husimi", "raster the Husimi density over a phase-space grid",
         torusrev::cli::cmd_husimi},
        {"converge", "sweep hbar and tabulate pairing vs. limit",
         torusrev::cli::cmd_converge},
        {"limit-eval", "evaluate the predicted limit measure and pairings",
         torusrev::cli::cmd_limit_eval},
        {"revival-scan", "scan the autocorrelation over one revival period",
         torusrev::cli::cmd_revival_scan},
    };

    SubArgs args[std::size(entries)];
    CLI::App* subs[std::size(entries)];
    for (size_t i = 0; i < std::size(entries); ++i) {
        subs[i] = app.add_subcommand(entries[i].name, entries[i].help);
        add_common(subs[i], args[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (size_t i = 0; i < std::size(entries); ++i)
        if (subs[i]->parsed())
            return torusrev::cli::run_guarded(entries[i].fn, args[i].config,
                                              args[i].ctx);
    return 2;
}
