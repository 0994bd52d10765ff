#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dgs/errors.hpp"
#include "dgs/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"digraph-spectra: spectral experiments on random directed "
                 "configuration multigraphs"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_root;
    std::optional<std::string> out_dir;
    int jobs = 0;
    CLI::App* run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("config", config_path, "path to the experiment config")->required();
    run->add_option("--seed-root", seed_root, "override the config's seed root");
    run->add_option("--jobs", jobs, "worker threads (0 = hardware default)");
    run->add_option("--out", out_dir, "override the config's output directory");

    std::string proto_path_file;
    std::string oracle_out = "out";
    double oracle_c = 2.0;
    CLI::App* oracle = app.add_subcommand(
        "oracle", "evaluate exact expectations for a proto-path file");
    oracle->add_option("proto-path-file", proto_path_file, "degrees: and paths: blocks")
        ->required();
    oracle->add_option("--out", oracle_out, "output directory");
    oracle->add_option("--c", oracle_c, "constant for the bound being checked");

    CLI::App* chk = app.add_subcommand("check", "run the built-in consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help and friends
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (run->parsed()) {
            const dgs::ExperimentConfig cfg = dgs::load_config(config_path);
            dgs::RunOptions options;
            options.seed_root = seed_root;
            options.out_dir = out_dir;
            options.jobs = jobs;
            return dgs::run_experiment(cfg, options, std::cout);
        }
        if (oracle->parsed())
            return dgs::run_oracle_file(proto_path_file, oracle_out, oracle_c,
                                        std::cout);
        if (chk->parsed()) {
            int failed = 0;
            for (const auto& result : dgs::run_self_checks()) {
                std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << result.name;
                if (!result.pass) std::cout << ": " << result.detail;
                std::cout << "\n";
                if (!result.pass) ++failed;
            }
            return failed == 0 ? 0 : 1;
        }
    } catch (const dgs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dgs::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
