#include "cli_lib.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace qform;

int main(int argc, char** argv) {
    CLI::App app{"qform: exact simulation of sign-quantized formation guidance"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir;

    auto* run = app.add_subcommand("run", "simulate one scenario and write run artifacts");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config out_dir)");

    auto* sweep = app.add_subcommand(
        "sweep", "three-agent basin table: classifier prediction vs simulated terminals");
    sweep->add_option("config", config_path, "scenario config file (n = 3)")->required();
    sweep->add_option("--out", out_dir, "output directory (overrides config out_dir)");
    cli::GridSpec grid;
    std::string lo_s = "-3", hi_s = "3";
    sweep->add_option("--min", lo_s, "grid lower bound (default -3)");
    sweep->add_option("--max", hi_s, "grid upper bound (default 3)");
    sweep->add_option("--count", grid.count, "points per axis (default 21)");
    sweep->add_flag("--axes-only", grid.axes_only, "keep only points with z1*z2 = 0");
    sweep->add_option("--random", grid.random_points,
                      "sample N random points (seeded by config 'seed') instead of a grid");

    auto* report = app.add_subcommand("report", "summarize a finished run directory");
    report->add_option("dir", run_dir, "run directory containing summary.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            cli::ScenarioConfig cfg = cli::load_config(config_path);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            const cli::RunResult result = cli::run_scenario(cfg);
            std::cout << "terminal: " << result.summary.at("terminal").at("class").get<std::string>()
                      << " (exit " << result.exit_code << "), artifacts in " << cfg.out_dir
                      << "\n";
            return result.exit_code;
        }
        if (sweep->parsed()) {
            cli::ScenarioConfig cfg = cli::load_config(config_path);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            grid.lo = parse_rational(lo_s);
            grid.hi = parse_rational(hi_s);
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream csv(std::filesystem::path(cfg.out_dir) / "sweep.csv");
            const cli::SweepStats stats = cli::run_sweep(cfg, grid, csv);
            std::cout << "sweep: " << stats.agreed << "/" << stats.total
                      << " points agree, table in " << cfg.out_dir << "/sweep.csv\n";
            return 0;
        }
        return cli::run_report(run_dir, std::cout);
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
