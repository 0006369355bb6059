#include <iostream>

#include <CLI11.hpp>

#include "pbs/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"PBS block auction simulator and analytics"};
    app.require_subcommand(1);

    std::string config_path, out_dir, dataset_dir, report, block_id;

    auto* simulate = app.add_subcommand("simulate", "run a scenario and write a dataset");
    simulate->add_option("--config", config_path, "scenario config file")->required();
    simulate->add_option("--out", out_dir, "output dataset directory")->required();

    auto* analyze = app.add_subcommand("analyze", "emit report CSVs from a dataset");
    analyze->add_option("dataset", dataset_dir, "dataset directory")->required();
    analyze->add_option("--report", report, "report name")->required();
    analyze->add_option("--out", out_dir, "output directory")->required();

    auto* replay = app.add_subcommand("replay", "replay one block");
    replay->add_option("dataset", dataset_dir, "dataset directory")->required();
    replay->add_option("--block", block_id, "block_id")->required();

    auto* validate = app.add_subcommand("validate", "check dataset invariants");
    validate->add_option("dataset", dataset_dir, "dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (simulate->parsed()) return pbs::cmd_simulate(config_path, out_dir, std::cerr);
    if (analyze->parsed()) return pbs::cmd_analyze(dataset_dir, report, out_dir, std::cerr);
    if (replay->parsed()) return pbs::cmd_replay(dataset_dir, block_id, std::cout, std::cerr);
    if (validate->parsed()) return pbs::cmd_validate(dataset_dir, std::cout, std::cerr);
    return 1;
}
