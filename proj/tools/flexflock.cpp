// flexflock command-line front end.
//
//   flexflock run      --config <file> [--out DIR] [--dt X] [--T X] [--seed N]
//   flexflock compare  --config <file> [--out DIR] [--threshold X] [...]
//   flexflock plotdata --trace <dir> [--out DIR]
//   flexflock validate --config <file>
//
// FLEXFLOCK_LOG=1 enables progress logging on stderr.

#include <CLI11.hpp>

#include "flexflock/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"flexflock: adaptive-spacing flocking simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string trace_dir;
    std::string out_dir;
    double dt = 0.0, T = 0.0, threshold = 0.01;
    std::uint64_t seed = 0;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides config out_dir)");
        cmd->add_option("--dt", dt, "integration step override");
        cmd->add_option("--T", T, "simulation horizon override");
        cmd->add_option("--seed", seed, "pose-generator seed override");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario and export CSV traces");
    add_overrides(run_cmd);

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "flexible vs fixed-spacing baseline from the same start");
    add_overrides(compare_cmd);
    compare_cmd->add_option("--threshold", threshold, "energy threshold for time-to statistics");

    CLI::App* plot_cmd = app.add_subcommand("plotdata", "emit per-figure plain-text data files");
    plot_cmd->add_option("--trace", trace_dir, "directory containing trace.csv/metrics.csv")
        ->required();
    plot_cmd->add_option("--out", out_dir, "output directory for .dat files");

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario config");
    validate_cmd->add_option("--config", config_path, "scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    auto overrides = [&](const CLI::App* cmd) {
        flexflock::RunOverrides ov;
        if (cmd->count("--dt")) ov.dt = dt;
        if (cmd->count("--T")) ov.T = T;
        if (cmd->count("--seed")) ov.seed = seed;
        if (cmd->count("--out")) ov.out_dir = out_dir;
        return ov;
    };

    if (run_cmd->parsed()) return flexflock::cmd_run(config_path, overrides(run_cmd));
    if (compare_cmd->parsed())
        return flexflock::cmd_compare(config_path, overrides(compare_cmd), threshold);
    if (plot_cmd->parsed())
        return flexflock::cmd_plotdata(trace_dir, out_dir.empty() ? trace_dir : out_dir);
    if (validate_cmd->parsed()) return flexflock::cmd_validate(config_path);
    return 2;
}
