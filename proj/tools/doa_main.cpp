#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "doa/experiments.hpp"
#include "doa/geometry.hpp"
#include "doa/subspace.hpp"

namespace {

struct CommonOverrides {
    int trials = 0;
    long long seed = -1;
    std::string out;
    int workers = 0;
    bool no_timing = false;
};

void add_overrides(CLI::App* cmd, CommonOverrides& ov) {
    cmd->add_option("--trials", ov.trials, "Override the trial count");
    cmd->add_option("--seed", ov.seed, "Override the master seed");
    cmd->add_option("--out", ov.out, "Override the output path stem");
    cmd->add_option("--workers", ov.workers, "Worker thread count");
    cmd->add_flag("--no-timing", ov.no_timing,
                  "Write zeros in the seconds column (byte-reproducible output)");
}

doa::ExperimentConfig load_with_overrides(const std::string& path, const CommonOverrides& ov) {
    doa::ExperimentConfig cfg = doa::load_config(path);
    if (ov.trials > 0) cfg.trials = ov.trials;
    if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
    if (!ov.out.empty()) cfg.out = ov.out;
    if (ov.workers > 0) cfg.workers = ov.workers;
    if (ov.no_timing) cfg.timing = false;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coarray DOA estimation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    CommonOverrides run_ov, eta_ov, overload_ov;

    auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo OSPA sweep");
    run_cmd->add_option("config", config_path, "JSON experiment config")->required();
    add_overrides(run_cmd, run_ov);

    auto* eta_cmd = app.add_subcommand("eta-stats", "Coarray error-term statistics vs snapshots");
    eta_cmd->add_option("config", config_path, "JSON experiment config")->required();
    add_overrides(eta_cmd, eta_ov);

    auto* overload_cmd =
        app.add_subcommand("overload", "More-sources-than-sensors demonstration");
    overload_cmd->add_option("config", config_path, "JSON experiment config")->required();
    add_overrides(overload_cmd, overload_ov);

    std::string kind_name;
    int n_sensors = 8;
    std::string geometry_file;
    auto* geom_cmd = app.add_subcommand("geometry", "Print positions, lags and DoF");
    geom_cmd->add_option("kind", kind_name, "ULA, NAQ2, SNAQ2, MRA, MHA or custom")->required();
    geom_cmd->add_option("n", n_sensors, "Sensor count (named kinds)");
    geom_cmd->add_option("--file", geometry_file, "Positions file for custom geometries");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = load_with_overrides(config_path, run_ov);
            const auto result = doa::run_sweep(cfg);
            doa::write_sweep_csv(result, cfg.out + ".csv", cfg.timing);
            doa::write_gnuplot_script(result, cfg.out + ".csv", cfg.out + ".gp");
            std::printf("wrote %s.csv and %s.gp\n", cfg.out.c_str(), cfg.out.c_str());
        } else if (eta_cmd->parsed()) {
            const auto cfg = load_with_overrides(config_path, eta_ov);
            const auto result = doa::run_eta_statistics(cfg);
            doa::write_eta_stats_csv(result, cfg.out + "_variance.csv", cfg.out + "_hist.csv");
            std::printf("wrote %s_variance.csv and %s_hist.csv\n", cfg.out.c_str(),
                        cfg.out.c_str());
        } else if (overload_cmd->parsed()) {
            const auto cfg = load_with_overrides(config_path, overload_ov);
            const auto result = doa::run_overload_demo(cfg);
            doa::write_overload_csv(result, cfg.out + "_overload.csv");
            std::printf("wrote %s_overload.csv\n", cfg.out.c_str());
        } else if (geom_cmd->parsed()) {
            const auto kind = doa::parse_geometry_kind(kind_name);
            const doa::ArrayGeometry geom = kind == doa::GeometryKind::Custom
                                                ? doa::load_geometry_file(geometry_file)
                                                : doa::build_geometry(kind, n_sensors);
            const auto index = doa::coarray_index(geom);
            std::printf("kind: %s\npositions:", doa::to_string(geom.kind).c_str());
            for (int p : geom.positions) std::printf(" %d", p);
            std::printf("\nlags:");
            for (int l : index.lags) std::printf(" %d", l);
            std::printf("\nDoF: %d\ncontiguous segment: +-%d\n", index.dof,
                        doa::contiguous_segment(index));
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
