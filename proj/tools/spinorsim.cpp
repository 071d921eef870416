// Command-line runner: spinorsim <subcommand> --config <path> [--out <dir>]
//                                [--threads K] [--seed S]
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
// failure or size-cap breach.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <spinorsim/run.hpp>

namespace fs = std::filesystem;

namespace {

std::string rebase(const std::string& path, const std::string& out_dir) {
    if (out_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(out_dir) / path).string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinor-1 condensate simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 1;
    unsigned long seed = 12345;

    for (const char* name : {"ground", "evolve", "stationary", "validate"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file (key = value)")->required();
        sub->add_option("--out", out_dir, "directory for output artifacts");
        sub->add_option("--threads", threads, "worker threads for time grids");
        sub->add_option("--seed", seed, "seed for randomized validation draws");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        spinorsim::RunConfig cfg =
            spinorsim::parse_config(config_path, app.get_subcommands().front()->get_name());
        cfg.threads = threads;
        cfg.seed = seed;
        if (!out_dir.empty()) fs::create_directories(out_dir);
        cfg.csv_path = rebase(cfg.csv_path, out_dir);
        cfg.report_path = rebase(cfg.report_path, out_dir);
        cfg.plot_script_path = rebase(cfg.plot_script_path, out_dir);
        return spinorsim::run(cfg, std::cout);
    } catch (const spinorsim::config_error& e) {
        std::cerr << "config error [" << e.field << "]: " << e.what() << "\n";
        return 2;
    } catch (const spinorsim::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const spinorsim::resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
