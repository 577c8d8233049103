// Command-line front end: henonlab <solve|sweep|limit|reduce-check|fit>
//   --config FILE   JSON run configuration (required)
//   --out DIR       output directory override
//   --seed N        RNG seed override (random starts; recorded in provenance)
//   --allow-partial exit 0 even when some requested results fail
//   --threads N     OpenMP thread count

#include <cstdint>
#include <string>

#include "CLI11.hpp"

#include "henonlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Meridian-grid ground states for weighted Lane-Emden problems"};
    app.require_subcommand(1);

    henonlab::runner::CliOptions opts;
    std::string seed_str;

    const char* names[] = {"solve", "sweep", "limit", "reduce-check", "fit"};
    const char* descs[] = {
        "ground state for one (case, alpha)",
        "alpha sweep with rate fits and plot data",
        "half-space limit constant with truncation control",
        "dimension-reduction correspondence residuals",
        "re-fit rate laws from an existing sweep CSV"};
    for (int k = 0; k < 5; ++k) {
        CLI::App* sub = app.add_subcommand(names[k], descs[k]);
        sub->add_option("--config", opts.config_path, "JSON config file")
            ->required();
        sub->add_option("--out", opts.out_dir, "output directory override");
        sub->add_option("--seed", seed_str, "RNG seed override");
        sub->add_flag("--allow-partial", opts.allow_partial,
                      "keep exit code 0 on partial results");
        sub->add_option("--threads", opts.threads, "OpenMP thread count")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends: print and exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e); // print the usage message, then keep the exit contract
        return henonlab::runner::kExitConfig;
    }

    if (!seed_str.empty()) {
        try {
            opts.seed = std::stoull(seed_str);
            opts.has_seed = true;
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: --seed wants an unsigned integer\n");
            return henonlab::runner::kExitConfig;
        }
    }

    return henonlab::runner::run_command(app.get_subcommands()[0]->get_name(),
                                         opts);
}
