#include "doa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <json.hpp>

#include "doa/recovery.hpp"
#include "doa/rng.hpp"
#include "doa/subspace.hpp"

namespace doa {

namespace {

using nlohmann::json;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void ensure_parent_dir(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::ofstream open_out(const std::string& path) {
    ensure_parent_dir(path);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

/// Run fn(i) for i in [0, count) on the requested number of threads.
/// Results must be written to pre-assigned slots, so the outcome does
/// not depend on the worker count.
void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& fn) {
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    lower.erase(std::remove_if(lower.begin(), lower.end(),
                               [](char c) { return c == '-' || c == '_'; }),
                lower.end());
    if (lower == "lbmlomp") return Algorithm::LbmlOmp;
    if (lower == "omp") return Algorithm::Omp;
    if (lower == "romp") return Algorithm::Romp;
    if (lower == "iht") return Algorithm::Iht;
    if (lower == "cosamp") return Algorithm::Cosamp;
    if (lower == "ssmusic") return Algorithm::SsMusic;
    throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

std::string to_string(Algorithm alg) {
    switch (alg) {
        case Algorithm::LbmlOmp: return "LBML-OMP";
        case Algorithm::Omp: return "OMP";
        case Algorithm::Romp: return "ROMP";
        case Algorithm::Iht: return "IHT";
        case Algorithm::Cosamp: return "CoSaMP";
        case Algorithm::SsMusic: return "SS-MUSIC";
    }
    return "?";
}

std::string ModelSpec::suffix() const {
    switch (model) {
        case CoarrayModel::Dctm: return "";
        case CoarrayModel::EdctmExact: return "_E";
        case CoarrayModel::EdctmEstimated: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "_E(a=%.2f)", alpha);
            return buf;
        }
    }
    return "";
}

ModelSpec parse_model(std::string_view name) {
    ModelSpec spec;
    if (name == "DCTM") {
        spec.model = CoarrayModel::Dctm;
        return spec;
    }
    if (name == "EDCTM") {
        spec.model = CoarrayModel::EdctmExact;
        return spec;
    }
    if (name.rfind("EDCTM:", 0) == 0) {
        spec.model = CoarrayModel::EdctmEstimated;
        spec.alpha = std::stod(std::string(name.substr(6)));
        if (spec.alpha < 0.0) throw std::invalid_argument("model alpha must be >= 0");
        return spec;
    }
    throw std::invalid_argument("unknown model: " + std::string(name) +
                                " (expected DCTM, EDCTM or EDCTM:<alpha>)");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;

    static const std::vector<std::string> known = {
        "geometry", "n_sensors", "geometry_file", "compare_geometries", "doas_rad",
        "doas_pi", "doa_sines", "on_grid", "source_power", "noiseless", "snr_db",
        "snapshots", "trials", "algorithms", "models", "coupling", "grid_size",
        "candidates", "ospa_phi", "sparsity", "fail_policy", "seed", "workers",
        "timing", "out"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown config key: " + key);

    ExperimentConfig cfg;
    if (j.contains("geometry")) cfg.geometry = parse_geometry_kind(j["geometry"].get<std::string>());
    if (j.contains("n_sensors")) cfg.n_sensors = j["n_sensors"].get<int>();
    if (j.contains("geometry_file")) cfg.geometry_file = j["geometry_file"].get<std::string>();
    if (j.contains("compare_geometries"))
        for (const auto& name : j["compare_geometries"])
            cfg.compare_geometries.push_back(parse_geometry_kind(name.get<std::string>()));

    int doa_keys = 0;
    if (j.contains("doas_rad")) {
        ++doa_keys;
        const auto v = j["doas_rad"].get<std::vector<double>>();
        cfg.doas = Eigen::Map<const RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    if (j.contains("doas_pi")) {
        ++doa_keys;
        const auto v = j["doas_pi"].get<std::vector<double>>();
        cfg.doas.resize(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) cfg.doas(static_cast<Eigen::Index>(i)) = v[i] * kPi;
    }
    if (j.contains("doa_sines")) {
        ++doa_keys;
        const auto v = j["doa_sines"].get<std::vector<double>>();
        cfg.doas.resize(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) cfg.doas(static_cast<Eigen::Index>(i)) = std::asin(v[i]);
    }
    if (doa_keys > 1)
        throw std::invalid_argument("give DOAs as exactly one of doas_rad/doas_pi/doa_sines");
    if (doa_keys == 0) {
        // the reference five-source scene, in units of pi
        const std::vector<double> scene = {-0.3426, -0.2947, -0.2889, -0.2820, 0.2947};
        cfg.doas.resize(static_cast<Eigen::Index>(scene.size()));
        for (std::size_t i = 0; i < scene.size(); ++i) cfg.doas(static_cast<Eigen::Index>(i)) = scene[i] * kPi;
    }

    if (j.contains("on_grid")) cfg.on_grid = j["on_grid"].get<bool>();
    if (j.contains("source_power")) cfg.source_power = j["source_power"].get<double>();
    if (j.contains("noiseless")) cfg.noiseless = j["noiseless"].get<bool>();

    if (j.contains("snr_db")) {
        if (j["snr_db"].is_array())
            cfg.snr_sweep = j["snr_db"].get<std::vector<double>>();
        else
            cfg.snr_sweep = {j["snr_db"].get<double>()};
    }
    if (j.contains("snapshots")) {
        if (j["snapshots"].is_array())
            cfg.snapshot_sweep = j["snapshots"].get<std::vector<int>>();
        else
            cfg.snapshot_sweep = {j["snapshots"].get<int>()};
    }
    if (cfg.snr_sweep.empty() || cfg.snapshot_sweep.empty())
        throw std::invalid_argument("sweeps must be non-empty");
    if (cfg.snr_sweep.size() > 1 && cfg.snapshot_sweep.size() > 1)
        throw std::invalid_argument("only one of snr_db/snapshots may sweep");

    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (cfg.trials < 1) throw std::invalid_argument("trials >= 1 required");

    if (j.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const auto& name : j["algorithms"]) cfg.algorithms.push_back(parse_algorithm(name.get<std::string>()));
    }
    if (j.contains("models")) {
        cfg.models.clear();
        for (const auto& name : j["models"]) cfg.models.push_back(parse_model(name.get<std::string>()));
    }
    if (j.contains("coupling")) {
        const auto& c = j["coupling"];
        for (const auto& [key, _] : c.items())
            if (key != "enabled" && key != "g1_mag" && key != "g1_phase_pi" && key != "band")
                throw std::invalid_argument("unknown coupling key: " + key);
        cfg.coupling.enabled = c.value("enabled", false);
        const double mag = c.value("g1_mag", 0.3);
        const double phase = c.value("g1_phase_pi", 1.0 / 3.0) * kPi;
        cfg.coupling.g1 = std::polar(mag, phase);
        cfg.coupling.band = c.value("band", 100);
        if (cfg.coupling.enabled && mag >= 1.0)
            throw std::invalid_argument("coupling requires |g1| < 1");
    }
    if (j.contains("grid_size")) cfg.grid_size = j["grid_size"].get<int>();
    if (j.contains("candidates")) cfg.candidates = j["candidates"].get<int>();
    if (j.contains("ospa_phi")) cfg.ospa_phi = j["ospa_phi"].get<double>();
    if (j.contains("sparsity")) cfg.sparsity = j["sparsity"].get<int>();
    if (j.contains("fail_policy")) {
        const auto p = j["fail_policy"].get<std::string>();
        if (p == "penalize")
            cfg.fail_policy = FailPolicy::Penalize;
        else if (p == "skip")
            cfg.fail_policy = FailPolicy::Skip;
        else
            throw std::invalid_argument("fail_policy must be penalize or skip");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("timing")) cfg.timing = j["timing"].get<bool>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    return cfg;
}

namespace {

struct Bench {
    ArrayGeometry geom;
    CoarrayIndex index;
    Dictionary dict;
    RVec truth;       // scene DOAs, snapped when on_grid
    int sparsity = 0; // D+1 unless overridden
};

Bench make_bench(const ExperimentConfig& cfg, GeometryKind kind) {
    Bench bench;
    bench.geom = kind == GeometryKind::Custom ? load_geometry_file(cfg.geometry_file)
                                              : build_geometry(kind, cfg.n_sensors);
    bench.index = coarray_index(bench.geom);
    const AngularGrid grid = build_grid(cfg.grid_size);
    bench.dict = build_dictionary(bench.geom, bench.index, grid);

    bench.truth = cfg.doas;
    if (cfg.on_grid)
        for (Eigen::Index i = 0; i < bench.truth.size(); ++i)
            bench.truth(i) = grid.angles(grid.nearest_bin(std::sin(cfg.doas(i))));
    bench.sparsity = cfg.sparsity > 0 ? cfg.sparsity : static_cast<int>(bench.truth.size()) + 1;
    return bench;
}

CoarrayVector measurement_for_model(const ModelSpec& spec, const SnapshotSet& draw,
                                    const Bench& bench, int snapshots,
                                    std::uint64_t perturb_seed) {
    if (spec.model == CoarrayModel::Dctm) return dctm(draw.sample_covariance, bench.index);
    const CMat source_cov =
        (draw.source_samples * draw.source_samples.adjoint()) / static_cast<double>(snapshots);
    EtaPrime eta = eta_prime_exact(bench.geom, bench.truth, source_cov, bench.index);
    if (spec.model == CoarrayModel::EdctmEstimated)
        eta = eta_prime_estimated(eta, spec.alpha, bench.index.dof, perturb_seed);
    CoarrayVector out = edctm(draw.sample_covariance, eta, bench.index);
    out.model = spec.model;
    out.alpha = spec.alpha;
    return out;
}

RVec run_algorithm(Algorithm alg, const Bench& bench, const CoarrayVector& y,
                   const SnapshotSet& draw, const ExperimentConfig& cfg) {
    const int n = bench.geom.size();
    const int d = static_cast<int>(bench.truth.size());
    switch (alg) {
        case Algorithm::LbmlOmp:
            return lbml_omp(bench.dict, y.values, bench.sparsity, draw.sample_covariance,
                            n, cfg.candidates)
                .doa_estimates;
        case Algorithm::Omp:
            return omp(bench.dict, y.values, bench.sparsity).doa_estimates;
        case Algorithm::Romp:
            return romp(bench.dict.atoms, y.values, bench.sparsity, bench.dict.grid)
                .doa_estimates;
        case Algorithm::Iht:
            return iht(bench.dict.atoms, y.values, bench.sparsity, bench.dict.grid)
                .doa_estimates;
        case Algorithm::Cosamp:
            return cosamp(bench.dict.atoms, y.values, bench.sparsity, bench.dict.grid)
                .doa_estimates;
        case Algorithm::SsMusic:
            return ss_music(y, bench.index, bench.dict.grid, d).doas;
    }
    throw std::logic_error("unreachable");
}

struct TrialOutcome {
    double term = 0.0;
    double seconds = 0.0;
    bool ok = true;
};

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
    const bool compare_mode = !cfg.compare_geometries.empty();
    if (compare_mode && (cfg.algorithms.size() != 1 || cfg.models.size() != 1))
        throw std::invalid_argument(
            "compare_geometries requires exactly one algorithm and one model");

    std::vector<Bench> benches;
    if (compare_mode)
        for (const auto kind : cfg.compare_geometries) benches.push_back(make_bench(cfg, kind));
    else
        benches.push_back(make_bench(cfg, cfg.geometry));

    const bool snapshots_axis = cfg.snapshot_sweep.size() > 1;
    const int n_cells =
        static_cast<int>(snapshots_axis ? cfg.snapshot_sweep.size() : cfg.snr_sweep.size());
    const int per_bench = static_cast<int>(cfg.algorithms.size() * cfg.models.size());
    const int n_series = per_bench * static_cast<int>(benches.size());
    const int d = static_cast<int>(benches.front().truth.size());

    SweepResult result;
    result.axis_name = snapshots_axis ? "snapshots" : "snr_db";
    for (int c = 0; c < n_cells; ++c)
        result.axis.push_back(snapshots_axis ? static_cast<double>(cfg.snapshot_sweep[c])
                                             : cfg.snr_sweep[c]);
    for (const auto& bench : benches)
        for (const auto& model : cfg.models)
            for (const auto alg : cfg.algorithms)
                result.series.push_back(compare_mode ? to_string(bench.geom.kind)
                                                     : to_string(alg) + model.suffix());

    // per-cell scenes (noise power tracks the SNR axis)
    std::vector<SourceScene> scenes(n_cells);
    std::vector<int> snapshot_counts(n_cells);
    for (int c = 0; c < n_cells; ++c) {
        scenes[c].doas = benches.front().truth;
        scenes[c].powers = RVec::Constant(d, cfg.source_power);
        const double snr = snapshots_axis ? cfg.snr_sweep[0] : cfg.snr_sweep[c];
        scenes[c].noise_power = cfg.noiseless ? 0.0 : noise_power_for_snr_db(snr);
        snapshot_counts[c] = snapshots_axis ? cfg.snapshot_sweep[c] : cfg.snapshot_sweep[0];
    }

    const std::int64_t n_jobs = static_cast<std::int64_t>(n_cells) * cfg.trials;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n_jobs) * n_series);

    parallel_for(n_jobs, cfg.workers, [&](std::int64_t job) {
        const int cell = static_cast<int>(job / cfg.trials);
        const int trial = static_cast<int>(job % cfg.trials);
        const RVec empty(0);
        for (std::size_t bi = 0; bi < benches.size(); ++bi) {
            const Bench& bench = benches[bi];
            // the seed is shared across benches: geometries face common
            // random source draws
            const SnapshotSet draw =
                simulate_snapshots(bench.geom, scenes[cell], cfg.coupling,
                                   snapshot_counts[cell], seed_for(cfg.seed, cell, trial));
            for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
                CoarrayVector y;
                bool model_ok = true;
                try {
                    y = measurement_for_model(cfg.models[mi], draw, bench,
                                              snapshot_counts[cell],
                                              seed_for(cfg.seed, cell, trial, 1000 + mi));
                } catch (const std::exception&) {
                    model_ok = false;
                }
                for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
                    const std::size_t series =
                        bi * per_bench + mi * cfg.algorithms.size() + ai;
                    TrialOutcome& slot =
                        outcomes[static_cast<std::size_t>(job) * n_series + series];
                    const auto start = std::chrono::steady_clock::now();
                    try {
                        if (!model_ok) throw std::runtime_error("model failed");
                        const RVec estimates =
                            run_algorithm(cfg.algorithms[ai], bench, y, draw, cfg);
                        slot.term = ospa_trial_term(estimates, bench.truth, cfg.ospa_phi);
                    } catch (const std::exception&) {
                        if (cfg.fail_policy == FailPolicy::Penalize)
                            slot.term = ospa_trial_term(empty, bench.truth, cfg.ospa_phi);
                        else
                            slot.ok = false;
                    }
                    slot.seconds = elapsed_seconds(start);
                }
            }
        }
    });

    result.ospa.resize(n_series, n_cells);
    result.trials.resize(n_series, n_cells);
    result.seconds.resize(n_series, n_cells);
    for (int c = 0; c < n_cells; ++c) {
        for (int s = 0; s < n_series; ++s) {
            std::vector<double> terms;
            double seconds = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                const auto& slot =
                    outcomes[(static_cast<std::size_t>(c) * cfg.trials + t) * n_series + s];
                if (slot.ok) terms.push_back(slot.term);
                seconds += slot.seconds;
            }
            const int valid = static_cast<int>(terms.size());
            result.trials(s, c) = valid;
            result.seconds(s, c) = seconds;
            result.ospa(s, c) = valid > 0 ? ospa_aggregate(terms, d, valid)
                                          : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path, bool timing) {
    auto out = open_out(path);
    out << "axis,algorithm,ospa,trials,seconds\n";
    char line[256];
    for (std::size_t c = 0; c < result.axis.size(); ++c) {
        for (std::size_t s = 0; s < result.series.size(); ++s) {
            const auto si = static_cast<Eigen::Index>(s);
            const auto ci = static_cast<Eigen::Index>(c);
            std::snprintf(line, sizeof(line), "%.6g,%s,%.8f,%d,%.3f\n", result.axis[c],
                          result.series[s].c_str(), result.ospa(si, ci), result.trials(si, ci),
                          timing ? result.seconds(si, ci) : 0.0);
            out << line;
        }
    }
}

void write_gnuplot_script(const SweepResult& result, const std::string& csv_path,
                          const std::string& script_path) {
    auto out = open_out(script_path);
    const std::string csv_name = std::filesystem::path(csv_path).filename().string();
    out << "set datafile separator ','\n";
    out << "set key outside\n";
    out << "set xlabel '" << result.axis_name << "'\n";
    out << "set ylabel 'OSPA'\n";
    out << "set grid\n";
    out << "plot \\\n";
    for (std::size_t s = 0; s < result.series.size(); ++s) {
        out << "  '" << csv_name << "' using 1:(strcol(2) eq '" << result.series[s]
            << "' ? $3 : 1/0) with linespoints title '" << result.series[s] << "'";
        out << (s + 1 < result.series.size() ? ", \\\n" : "\n");
    }
    out << "pause -1\n";
}

EtaStatsResult run_eta_statistics(const ExperimentConfig& cfg) {
    const Bench bench = make_bench(cfg, cfg.geometry);
    const int d = static_cast<int>(bench.truth.size());
    const RVec powers = RVec::Constant(d, cfg.source_power);
    const int n_t = static_cast<int>(cfg.snapshot_sweep.size());

    EtaStatsResult result;
    result.snapshot_values = cfg.snapshot_sweep;
    result.empirical_variance.resize(n_t);
    result.oracle_variance.resize(n_t);
    result.mean_real.resize(n_t);
    result.mean_imag.resize(n_t);
    result.stderr_real.resize(n_t);
    result.stderr_imag.resize(n_t);

    constexpr int kBins = 64;
    for (int ti = 0; ti < n_t; ++ti) {
        const int snapshots = cfg.snapshot_sweep[ti];
        const auto moments = eta_prime_moments_oracle(bench.geom, bench.truth, powers, snapshots);
        result.oracle_variance(ti) = moments.variance(0);

        std::vector<Complex> samples(cfg.trials);
        parallel_for(cfg.trials, cfg.workers, [&](std::int64_t trial) {
            Rng rng(seed_for(cfg.seed, ti, static_cast<std::uint64_t>(trial)));
            CMat sources(d, snapshots);
            for (int t = 0; t < snapshots; ++t)
                for (int i = 0; i < d; ++i)
                    sources(i, t) = std::sqrt(powers(i)) * rng.complex_normal();
            const CMat source_cov = (sources * sources.adjoint()) / static_cast<double>(snapshots);
            const EtaPrime eta = eta_prime_exact(bench.geom, bench.truth, source_cov, bench.index);
            samples[static_cast<std::size_t>(trial)] = eta.values(0);
        });

        double sum_re = 0, sum_im = 0, sum_sq = 0, sum_re2 = 0, sum_im2 = 0;
        for (const Complex z : samples) {
            sum_re += z.real();
            sum_im += z.imag();
            sum_re2 += z.real() * z.real();
            sum_im2 += z.imag() * z.imag();
            sum_sq += std::norm(z);
        }
        const double n = static_cast<double>(cfg.trials);
        result.mean_real(ti) = sum_re / n;
        result.mean_imag(ti) = sum_im / n;
        result.empirical_variance(ti) = sum_sq / n;
        result.stderr_real(ti) =
            std::sqrt((sum_re2 / n - std::pow(sum_re / n, 2)) / n);
        result.stderr_imag(ti) =
            std::sqrt((sum_im2 / n - std::pow(sum_im / n, 2)) / n);

        // fixed 64-bin histograms over +-4 oracle standard deviations
        EtaHistogram hist;
        hist.snapshots = snapshots;
        const double span = 4.0 * std::sqrt(moments.variance(0) / 2.0);
        const double width = 2.0 * span / kBins;
        hist.bin_centers.resize(kBins);
        hist.density_real = RVec::Zero(kBins);
        hist.density_imag = RVec::Zero(kBins);
        for (int b = 0; b < kBins; ++b) hist.bin_centers(b) = -span + (b + 0.5) * width;
        for (const Complex z : samples) {
            const auto bin = [&](double x) {
                return static_cast<int>(std::floor((x + span) / width));
            };
            const int br = bin(z.real());
            const int bi = bin(z.imag());
            if (br >= 0 && br < kBins) hist.density_real(br) += 1.0;
            if (bi >= 0 && bi < kBins) hist.density_imag(bi) += 1.0;
        }
        hist.density_real /= n * width;
        hist.density_imag /= n * width;
        result.histograms.push_back(std::move(hist));
    }
    return result;
}

void write_eta_stats_csv(const EtaStatsResult& result, const std::string& variance_path,
                         const std::string& histogram_path) {
    {
        auto out = open_out(variance_path);
        out << "snapshots,empirical_variance,oracle_variance,mean_real,mean_imag,"
               "stderr_real,stderr_imag\n";
        char line[256];
        for (std::size_t i = 0; i < result.snapshot_values.size(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            std::snprintf(line, sizeof(line), "%d,%.8e,%.8e,%.8e,%.8e,%.8e,%.8e\n",
                          result.snapshot_values[i], result.empirical_variance(ii),
                          result.oracle_variance(ii), result.mean_real(ii),
                          result.mean_imag(ii), result.stderr_real(ii),
                          result.stderr_imag(ii));
            out << line;
        }
    }
    {
        auto out = open_out(histogram_path);
        out << "snapshots,part,bin_center,density\n";
        char line[128];
        for (const auto& hist : result.histograms) {
            for (int b = 0; b < hist.bin_centers.size(); ++b) {
                std::snprintf(line, sizeof(line), "%d,re,%.8e,%.8e\n", hist.snapshots,
                              hist.bin_centers(b), hist.density_real(b));
                out << line;
            }
            for (int b = 0; b < hist.bin_centers.size(); ++b) {
                std::snprintf(line, sizeof(line), "%d,im,%.8e,%.8e\n", hist.snapshots,
                              hist.bin_centers(b), hist.density_imag(b));
                out << line;
            }
        }
    }
}

OverloadResult run_overload_demo(const ExperimentConfig& cfg) {
    const Bench bench = make_bench(cfg, cfg.geometry);
    const int d = static_cast<int>(bench.truth.size());
    const int snapshots = cfg.snapshot_sweep[0];

    OverloadResult result;
    result.grid_sines = bench.dict.grid.sines;
    for (Eigen::Index i = 0; i < bench.truth.size(); ++i)
        result.true_bins.push_back(bench.dict.grid.nearest_bin(std::sin(bench.truth(i))));

    SourceScene scene;
    scene.doas = bench.truth;
    scene.powers = RVec::Constant(d, cfg.source_power);
    scene.noise_power = cfg.noiseless ? 0.0 : noise_power_for_snr_db(cfg.snr_sweep[0]);

    result.support_magnitudes.resize(cfg.trials);
    result.matched_within_two_bins.assign(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.workers, [&](std::int64_t trial) {
        const SnapshotSet draw = simulate_snapshots(
            bench.geom, scene, cfg.coupling, snapshots,
            seed_for(cfg.seed, 0, static_cast<std::uint64_t>(trial)));
        const CoarrayVector y = measurement_for_model(
            cfg.models[0], draw, bench, snapshots,
            seed_for(cfg.seed, 0, static_cast<std::uint64_t>(trial), 1000));
        const RecoveryResult rec =
            lbml_omp(bench.dict, y.values, bench.sparsity, draw.sample_covariance,
                     bench.geom.size(), cfg.candidates);
        auto& support = result.support_magnitudes[static_cast<std::size_t>(trial)];
        for (int idx : rec.support) {
            if (idx == bench.dict.noise_atom()) continue;
            support.emplace_back(idx, std::abs(rec.coefficients(idx)));
        }
        int matched = 0;
        for (int truth_bin : result.true_bins) {
            for (const auto& [bin, mag] : support) {
                if (std::abs(bin - truth_bin) <= 2) {
                    ++matched;
                    break;
                }
            }
        }
        result.matched_within_two_bins[static_cast<std::size_t>(trial)] = matched;
    });
    return result;
}

void write_overload_csv(const OverloadResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "trial,sine,magnitude,matched_sources\n";
    char line[128];
    for (std::size_t trial = 0; trial < result.support_magnitudes.size(); ++trial) {
        for (const auto& [bin, mag] : result.support_magnitudes[trial]) {
            std::snprintf(line, sizeof(line), "%zu,%.8f,%.8e,%d\n", trial,
                          result.grid_sines(bin), mag,
                          result.matched_within_two_bins[trial]);
            out << line;
        }
    }
}

}  // namespace doa
