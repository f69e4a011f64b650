// Sweeps (E, omega) grids of the driven dissipative qubit and writes phase-diagram CSVs.
#include "floq/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

}  // namespace

int main(int argc, char** argv)
{
    floq::sweep_config cfg;
    std::string pipeline = "exact";

    CLI::App app{"Floquet-Lindbladian phase-diagram sweep"};
    app.set_config("--config", "", "key = value file supplying defaults; flags override it");
    app.add_option("--gamma", cfg.gamma, "dissipation rate")->capture_default_str();
    app.add_option("--phi", cfg.phi, "driving phase")->capture_default_str();
    app.add_option("--e-min", cfg.e_min)->capture_default_str();
    app.add_option("--e-max", cfg.e_max)->capture_default_str();
    app.add_option("--e-count", cfg.e_count)->capture_default_str();
    app.add_option("--omega-min", cfg.omega_min)->capture_default_str();
    app.add_option("--omega-max", cfg.omega_max)->capture_default_str();
    app.add_option("--omega-count", cfg.omega_count)->capture_default_str();
    app.add_option("--pipeline", pipeline, "exact | magnus-direct | magnus-rot | vanvleck-rot | keff-rot")
        ->capture_default_str();
    app.add_option("--order", cfg.order, "expansion order")->capture_default_str();
    app.add_option("--x-range", cfg.x_range, "branch scan half-width")->capture_default_str();
    app.add_option("--steps-per-period", cfg.steps_per_period)->capture_default_str();
    app.add_option("--omega-floor", cfg.omega_floor, "points below are written as nan")->capture_default_str();
    app.add_option("--out", cfg.output_path, "CSV output path; metadata goes to <out>.json");
    app.add_option("--workers", cfg.workers)->capture_default_str();

    std::string csv_a, csv_b;
    auto* compare = app.add_subcommand("compare", "count non-Lindbladian points of two sweeps on the same grid");
    compare->add_option("a", csv_a)->required();
    compare->add_option("b", csv_b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (compare->parsed()) {
        try {
            const auto c = floq::compare_phases(csv_a, csv_b);
            std::cout << "points " << c.points << "\nnon_lindbladian_a " << c.count_a << "\nnon_lindbladian_b "
                      << c.count_b << "\ndifference " << c.difference << "\n";
            return exit_ok;
        } catch (const floq::grid_mismatch& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_usage;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_runtime;
        }
    }

    try {
        cfg.pipe = floq::parse_pipeline(pipeline);
        cfg.validate();
        if (cfg.output_path.empty()) throw floq::usage_error("--out is required");
    } catch (const floq::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        std::ofstream out(cfg.output_path);
        if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
        std::ofstream meta(cfg.output_path + ".json");
        if (!meta) throw std::runtime_error("cannot write " + cfg.output_path + ".json");

        floq::sweep_summary summary;
        const auto rows = floq::run_sweep(cfg, &summary);
        floq::write_csv(out, rows);
        meta << floq::metadata_json(cfg, summary);
        if (!out || !meta) throw std::runtime_error("write failed for " + cfg.output_path);

        std::cerr << summary.points << " points, " << summary.non_lindbladian << " non-Lindbladian, "
                  << summary.nan_points << " nan, " << summary.failed << " failed, " << summary.wall_seconds << " s\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
