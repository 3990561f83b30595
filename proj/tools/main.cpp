#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entroflow/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"entroflow: lattice spin dynamics and entropy diagnostics"};
    app.require_subcommand(1);

    entroflow::HarnessOptions opts;
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", opts.threads, "worker pool size")
            ->check(CLI::PositiveNumber);
    };

    auto* run = app.add_subcommand("run", "execute one experiment config");
    run->add_option("config", config_path, "JSON experiment config")->required();
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "execute a parameter grid of runs");
    sweep->add_option("config", config_path, "JSON experiment config with a sweep.grid")
        ->required();
    add_common(sweep);

    auto* oracle = app.add_subcommand("oracle", "print closed-form reference values");
    std::vector<std::string> oracle_args;
    oracle->add_option("args", oracle_args, "subcommand and arguments");

    CLI11_PARSE(app, argc, argv);

    if (seed_set) opts.seed = seed;
    if (run->parsed()) return entroflow::cmd_run(config_path, opts);
    if (sweep->parsed()) return entroflow::cmd_sweep(config_path, opts);
    return entroflow::cmd_oracle(oracle_args);
}
