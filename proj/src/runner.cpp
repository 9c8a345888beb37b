#include "vrs/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vrs/dynamics.hpp"
#include "vrs/errors.hpp"
#include "vrs/io.hpp"
#include "vrs/sha1.hpp"

namespace vrs {

namespace {

namespace fs = std::filesystem;

std::string point_label(double lambda_c, double alpha) {
    std::ostringstream out;
    out << "lc" << lambda_c << "_a" << alpha;
    return out.str();
}

void hash_artifact(nlohmann::json& artifacts, const fs::path& dir,
                   const std::string& name) {
    artifacts[name] = git_blob_hash(read_text_file(dir / name));
}

// Runs `count` tasks with at most `jobs` worker threads. Each task owns its
// slot in any result vector, so no synchronization beyond the index is needed.
void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i)
            task(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                task(i);
        });
    for (auto& worker : workers)
        worker.join();
}

// Multiplicities used for the canned deviation table, one per
// (lambda_c, alpha) cell of the standard sweep.
Eigen::Index table1_multiplicity(double lambda_c, double alpha) {
    const auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    const int row = near(lambda_c, 0.0)   ? 0
                    : near(lambda_c, 0.1) ? 1
                    : near(lambda_c, 0.3) ? 2
                                          : 3;
    const int col = near(alpha, 0.05) ? 0 : near(alpha, 0.1) ? 1 : 2;
    static constexpr Eigen::Index map[4][3] = {
        {3, 6, 10}, {3, 6, 12}, {4, 6, 12}, {4, 10, 12}};
    return map[row][col];
}

} // namespace

RunOutcome run(const RunConfig& config, std::ostream& log) {
    config.validate();

    RunOutcome outcome;
    outcome.output_dir = config.output_dir;
    fs::create_directories(config.output_dir);

    nlohmann::json manifest;
    manifest["format"] = "vrsim-run-manifest";
    manifest["config_text"] = config.to_text();
    nlohmann::json artifacts = nlohmann::json::object();
    nlohmann::json methods_json = nlohmann::json::object();

    for (const auto method : config.methods) {
        MethodOutcome m;
        m.method = method;
        nlohmann::json entry;
        try {
            if (method == SpectrumMethod::multid1) {
                const DiscretizedBath bath =
                    discretize_bath(config.params, config.n_modes, config.omega_max);
                const MultiD1State initial = initial_state(
                    config.multiplicity, bath, config.noise_scale, config.seed);
                PropagateOptions options;
                options.t_f = config.t_f;
                options.dt = config.dt;
                options.output_stride = config.output_stride;
                options.regularization_eps = config.regularization_eps;
                options.noise_scale = config.noise_scale;
                options.snapshot_times = config.snapshot_times;

                log << "[multid1] propagating M=" << config.multiplicity
                    << " Nb=" << config.n_modes << " t_f=" << config.t_f << '\n';
                const TrajectoryRecord record =
                    propagate(initial, config.params, bath, options);
                if (record.aborted)
                    throw NumericalError("propagation aborted: " + record.abort_reason);

                write_trajectory_csv(config.output_dir / "trajectory_multid1.csv",
                                     record);
                save_snapshot(config.output_dir / "final_state.json",
                              record.final_state);

                SpectrumResult spectrum;
                spectrum.method = SpectrumMethod::multid1;
                spectrum.frequencies = bath.frequencies;
                const auto n_bath = static_cast<Eigen::Index>(bath.n_modes);
                spectrum.values.resize(bath.n_modes);
                for (Eigen::Index k = 0; k < n_bath; ++k)
                    spectrum.values[static_cast<std::size_t>(k)] =
                        record.final_photon_numbers[1 + k];
                spectrum.metadata["method"] = "multid1";
                spectrum.metadata["t_f"] = format_double(config.t_f);
                spectrum.metadata["sigma2_max"] = format_double(record.sigma2_max);
                spectrum.metadata["multiplicity"] = std::to_string(config.multiplicity);
                spectrum.metadata["seed"] = std::to_string(config.seed);
                spectrum.metadata["coupling_measure"] = "discrete";
                spectrum.metadata["tail_change"] =
                    format_double(record.spectrum_tail_change);
                write_spectrum_csv(config.output_dir / "spectrum_multid1.csv", spectrum);

                m.sigma2_max = record.sigma2_max;
                m.accepted = record.accepted;
                entry["sigma2_max"] = record.sigma2_max;
                entry["accepted"] = record.accepted;
                entry["spectrum_tail_change"] = record.spectrum_tail_change;
                hash_artifact(artifacts, config.output_dir, "trajectory_multid1.csv");
                hash_artifact(artifacts, config.output_dir, "spectrum_multid1.csv");
                if (!record.accepted)
                    log << "[multid1] warning: sigma2_max=" << record.sigma2_max
                        << " exceeds the 1e-2 accuracy gate\n";
            } else {
                const auto grid = uniform_grid(config.grid_max, config.grid_points);
                const SpectrumResult spectrum = method == SpectrumMethod::trwa
                                                    ? trwa_spectrum(grid, config.params)
                                                    : rwa_spectrum(grid, config.params);
                const std::string name =
                    "spectrum_" + to_string(method) + ".csv";
                write_spectrum_csv(config.output_dir / name, spectrum);
                hash_artifact(artifacts, config.output_dir, name);
            }
            m.ok = true;
        } catch (const NumericalError& err) {
            m.ok = false;
            m.error = err.what();
            log << "[" << to_string(method) << "] numerical failure: " << err.what()
                << '\n';
            outcome.exit_code = kExitNumerical;
        }
        entry["ok"] = m.ok;
        if (!m.ok)
            entry["error"] = m.error;
        methods_json[to_string(method)] = entry;
        outcome.methods.push_back(std::move(m));
    }

    write_text_file(config.output_dir / "config.resolved", config.to_text());
    hash_artifact(artifacts, config.output_dir, "config.resolved");
    manifest["methods"] = methods_json;
    manifest["artifacts"] = artifacts;
    manifest["exit_code"] = outcome.exit_code;
    write_text_file(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
    return outcome;
}

SweepOutcome sweep(const SweepSpec& spec, const RunConfig& base, int jobs,
                   std::ostream& log) {
    spec.validate();
    base.validate();
    fs::create_directories(base.output_dir);

    struct Point {
        double lambda_c;
        double alpha;
        Eigen::Index multiplicity;
        double sigma2_max = 0.0;
        bool ok = false;
        std::string error;
    };
    std::vector<Point> points;
    for (const double lc : spec.lambda_c_values)
        for (const double alpha : spec.alpha_values) {
            Point p;
            p.lambda_c = lc;
            p.alpha = alpha;
            const auto it = spec.multiplicity_overrides.find({lc, alpha});
            p.multiplicity = it != spec.multiplicity_overrides.end()
                                 ? it->second
                                 : base.multiplicity;
            points.push_back(p);
        }

    std::mutex log_mutex;
    parallel_for(static_cast<int>(points.size()), jobs, [&](int i) {
        Point& p = points[static_cast<std::size_t>(i)];
        RunConfig config = base;
        config.params.lambda_c = p.lambda_c;
        config.params.alpha = p.alpha;
        config.multiplicity = p.multiplicity;
        config.methods = {SpectrumMethod::multid1};
        config.output_dir = base.output_dir / point_label(p.lambda_c, p.alpha);
        {
            std::lock_guard<std::mutex> guard(log_mutex);
            log << "[sweep] lambda_c=" << p.lambda_c << " alpha=" << p.alpha
                << " M=" << p.multiplicity << '\n';
        }
        try {
            std::ostringstream local_log;
            const RunOutcome outcome = run(config, local_log);
            p.ok = outcome.exit_code == kExitOk;
            if (!outcome.methods.empty()) {
                p.sigma2_max = outcome.methods.front().sigma2_max;
                if (!p.ok)
                    p.error = outcome.methods.front().error;
            }
        } catch (const std::exception& err) {
            p.ok = false;
            p.error = err.what();
        }
    });

    // Deviation table mirroring the standard layout: one row per lambda_c,
    // sigma2/multiplicity column pair per alpha.
    std::ostringstream table;
    table << "lambda_c";
    for (const double alpha : spec.alpha_values)
        table << ",sigma2_max_alpha" << alpha << ",M_alpha" << alpha;
    table << '\n';
    std::size_t index = 0;
    bool any_failed = false;
    for (const double lc : spec.lambda_c_values) {
        table << format_double(lc);
        for (std::size_t a = 0; a < spec.alpha_values.size(); ++a, ++index) {
            const Point& p = points[index];
            if (p.ok)
                table << ',' << format_double(p.sigma2_max) << ',' << p.multiplicity;
            else {
                table << ",failed," << p.multiplicity;
                any_failed = true;
            }
        }
        table << '\n';
    }

    SweepOutcome outcome;
    outcome.table_csv = base.output_dir / "deviation_table.csv";
    write_text_file(outcome.table_csv, table.str());
    outcome.exit_code = any_failed ? kExitNumerical : kExitOk;
    for (const Point& p : points)
        if (!p.ok)
            log << "[sweep] point (" << p.lambda_c << ", " << p.alpha
                << ") failed: " << p.error << '\n';
    return outcome;
}

int compare_spectra(const std::vector<fs::path>& csv_paths,
                    const fs::path& output_csv, std::ostream& log,
                    double rel_threshold) {
    if (csv_paths.empty())
        throw ValidationError("compare: need at least one spectrum CSV");
    std::vector<std::pair<std::string, std::vector<Peak>>> reports;
    for (const auto& path : csv_paths) {
        const SpectrumResult spectrum = read_spectrum_csv(path);
        auto peaks = find_peaks(spectrum.frequencies, spectrum.values, rel_threshold);
        if (peaks.empty())
            log << "[compare] warning: no peaks in " << path.string() << '\n';
        for (const auto& peak : peaks)
            log << "[compare] " << path.filename().string() << " peak at "
                << peak.position << " height " << peak.height << " fwhm " << peak.fwhm
                << '\n';
        reports.emplace_back(path.filename().string(), std::move(peaks));
    }
    write_peaks_csv(output_csv, reports);
    return kExitOk;
}

int run_table1(const RunConfig& base, const std::string& scale, int jobs,
               std::ostream& log) {
    SweepSpec spec;
    spec.lambda_c_values = {0.0, 0.1, 0.3, 0.5};
    spec.alpha_values = {0.05, 0.1, 0.2};
    for (const double lc : spec.lambda_c_values)
        for (const double alpha : spec.alpha_values)
            spec.multiplicity_overrides[{lc, alpha}] = table1_multiplicity(lc, alpha);

    RunConfig config = base;
    if (scale == "desk") {
        config.n_modes = 100;
        config.t_f = 100.0;
    } else if (scale == "paper") {
        config.n_modes = 500;
        config.t_f = 300.0;
    } else {
        throw ValidationError("table1: scale must be desk or paper");
    }
    return sweep(spec, config, jobs, log).exit_code;
}

int run_figures(const RunConfig& base, const std::string& scale, int jobs,
                std::ostream& log) {
    const bool desk = scale == "desk";
    if (!desk && scale != "paper")
        throw ValidationError("figures: scale must be desk or paper");

    struct Panel {
        int figure;
        double lambda_c;
        char panel;
        double alpha;
    };
    const double lambda_values[4] = {0.0, 0.1, 0.3, 0.5};
    const double alpha_values[3] = {0.05, 0.1, 0.2};
    std::vector<Panel> panels;
    for (int f = 0; f < 4; ++f)
        for (int a = 0; a < 3; ++a)
            panels.push_back(
                {f + 1, lambda_values[f], static_cast<char>('a' + a), alpha_values[a]});

    std::mutex log_mutex;
    std::atomic<int> exit_code{kExitOk};
    parallel_for(static_cast<int>(panels.size()), jobs, [&](int i) {
        const Panel& panel = panels[static_cast<std::size_t>(i)];
        RunConfig config = base;
        config.params.lambda_c = panel.lambda_c;
        config.params.alpha = panel.alpha;
        if (desk) {
            config.n_modes = 200;
            config.t_f = 150.0;
            config.multiplicity = 6;
        } else {
            config.n_modes = 500;
            config.t_f = 300.0;
            config.multiplicity = table1_multiplicity(panel.lambda_c, panel.alpha);
        }
        config.output_dir = base.output_dir /
                            ("fig" + std::to_string(panel.figure)) /
                            (std::string("panel_") + panel.panel);
        {
            std::lock_guard<std::mutex> guard(log_mutex);
            log << "[figures] fig" << panel.figure << " panel " << panel.panel
                << " (lambda_c=" << panel.lambda_c << ", alpha=" << panel.alpha
                << ")\n";
        }
        std::ostringstream local_log;
        const RunOutcome outcome = run(config, local_log);
        if (outcome.exit_code != kExitOk)
            exit_code = outcome.exit_code;
    });
    return exit_code.load();
}

} // namespace vrs
