#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doa/coarray.hpp"
#include "doa/dictionary.hpp"
#include "doa/geometry.hpp"
#include "doa/metrics.hpp"
#include "doa/signal_model.hpp"
#include "doa/types.hpp"

namespace doa {

enum class Algorithm { LbmlOmp, Omp, Romp, Iht, Cosamp, SsMusic };

Algorithm parse_algorithm(std::string_view name);
std::string to_string(Algorithm alg);

/// Which coarray measurement an algorithm consumes. Estimated EDCTM
/// carries the estimation-noise level alpha.
struct ModelSpec {
    CoarrayModel model = CoarrayModel::Dctm;
    double alpha = 0.0;

    /// Series suffix: "" for DCTM, "_E" for exact EDCTM,
    /// "_E(a=0.40)" for the estimated variant.
    std::string suffix() const;
};

ModelSpec parse_model(std::string_view name);

enum class FailPolicy { Penalize, Skip };

/// Full description of one Monte Carlo experiment. Exactly one of the
/// two sweeps may have more than one entry; that one is the x-axis.
struct ExperimentConfig {
    GeometryKind geometry = GeometryKind::Snaq2;
    int n_sensors = 8;
    std::string geometry_file;  // Custom geometries only

    // Geometry-comparison mode: when non-empty, the sweep runs one series
    // per listed geometry (with a single algorithm and model) instead of
    // one per algorithm/model pair.
    std::vector<GeometryKind> compare_geometries;

    RVec doas;                 // radians
    bool on_grid = true;       // snap scene DOAs to the grid
    double source_power = 1.0;
    bool noiseless = false;    // sigma_n^2 = 0, ignore SNR

    std::vector<double> snr_sweep{0.0};  // dB
    std::vector<int> snapshot_sweep{50};

    int trials = 200;
    std::vector<Algorithm> algorithms{Algorithm::LbmlOmp, Algorithm::Omp};
    std::vector<ModelSpec> models{ModelSpec{}};
    CouplingModel coupling;

    int grid_size = 1024;
    int candidates = 11;
    double ospa_phi = 0.0430;
    int sparsity = 0;  // 0 means D+1
    FailPolicy fail_policy = FailPolicy::Penalize;

    std::uint64_t seed = 1;
    int workers = 1;
    bool timing = true;
    std::string out = "results/run";
};

/// Parse a JSON config file. Unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);

struct SweepResult {
    std::string axis_name;               // "snr_db" or "snapshots"
    std::vector<double> axis;
    std::vector<std::string> series;     // e.g. "OMP", "LBML-OMP_E"
    RMat ospa;                           // series x axis
    Eigen::MatrixXi trials;              // valid trials per cell
    RMat seconds;                        // accumulated per cell
};

/// Run the Monte Carlo sweep. Deterministic for a given (config, seed)
/// regardless of the worker count: every trial derives its own RNG
/// stream from (seed, cell, trial).
SweepResult run_sweep(const ExperimentConfig& config);

/// CSV with header "axis,algorithm,ospa,trials,seconds" (seconds written
/// as 0.000 when config.timing is off, keeping the bytes reproducible).
void write_sweep_csv(const SweepResult& result, const std::string& path,
                     bool timing);

/// Companion gnuplot script that plots each series from the CSV.
void write_gnuplot_script(const SweepResult& result, const std::string& csv_path,
                          const std::string& script_path);

struct EtaHistogram {
    int snapshots = 0;
    RVec bin_centers;   // 64 bins
    RVec density_real;
    RVec density_imag;
};

struct EtaStatsResult {
    std::vector<int> snapshot_values;
    RVec empirical_variance;   // E|eta'_1|^2 per T
    RVec oracle_variance;
    RVec mean_real, mean_imag;         // empirical mean of eta'_1
    RVec stderr_real, stderr_imag;     // standard errors of those means
    std::vector<EtaHistogram> histograms;
};

/// Empirical statistics of the first coarray error entry [eta']_1
/// against the snapshot count, with the analytic oracle overlay.
EtaStatsResult run_eta_statistics(const ExperimentConfig& config);

void write_eta_stats_csv(const EtaStatsResult& result, const std::string& variance_path,
                         const std::string& histogram_path);

struct OverloadResult {
    std::vector<int> true_bins;
    RVec grid_sines;
    // one (grid bin, |h|) list per trial, insertion order
    std::vector<std::vector<std::pair<int, double>>> support_magnitudes;
    std::vector<int> matched_within_two_bins;  // per trial
};

/// More-sources-than-sensors demonstration: LBML-OMP recovering D > N
/// sources; reports the recovered magnitude spectrum per trial.
OverloadResult run_overload_demo(const ExperimentConfig& config);

void write_overload_csv(const OverloadResult& result, const std::string& path);

}  // namespace doa
