#include <CLI11.hpp>

#include "replayguard/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Link-layer replay protection experiment toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute the run or sweep in a JSON config");
    run_cmd->add_option("path", config_path, "experiment config file")->required();

    replayguard::CalcRequest req;
    CLI::App* calc_cmd = app.add_subcommand("calc", "Analytic calculators");
    calc_cmd->add_option("kind", req.kind, "eq4 | fp_exact | fp_approx | state_bytes")
        ->required();
    calc_cmd->add_option("--B", req.bytes_per_counter, "bytes per counter (eq4)");
    calc_cmd->add_option("--n", req.node_count, "node count (eq4)");
    calc_cmd->add_option("--m", req.filter_bits, "filter bits");
    calc_cmd->add_option("--k", req.hash_count, "hash count");
    calc_cmd->add_option("--p", req.insertions, "inserted element count");
    calc_cmd->add_option("--scheme", req.scheme,
                         "counter | hash_window | bloom_single | bloom_multi");
    calc_cmd->add_option("--neighbors", req.neighbors, "neighbor count (state_bytes)");
    calc_cmd->add_option("--window", req.window, "window size W");

    std::string fig_out;
    CLI::App* fig_cmd =
        app.add_subcommand("fig19", "False-positive rate vs hash count, CSV output");
    fig_cmd->add_option("out", fig_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run_cmd->parsed()) return replayguard::cmd_run(config_path);
    if (calc_cmd->parsed()) return replayguard::cmd_calc(req);
    if (fig_cmd->parsed()) return replayguard::cmd_fig19(fig_out);
    return 0;
}
