#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vrs/analytic.hpp"
#include "vrs/model.hpp"

namespace vrs {

// One flat key-value file = one run. Keys are dotted (`integrator.dt = 0.01`),
// `#` starts a comment. Unknown keys are rejected with a line diagnostic.
struct RunConfig {
    ModelParams params;

    // bath
    std::size_t n_modes = 500;
    double omega_max = 20.0;

    // ansatz
    Eigen::Index multiplicity = 6;
    double noise_scale = 1.0;
    std::uint64_t seed = 20240901;

    // integrator
    double dt = 0.01;
    double t_f = 300.0;
    double regularization_eps = 1e-8;
    int output_stride = 10;
    std::vector<double> snapshot_times;

    // spectrum grid for the closed-form methods
    double grid_max = 3.0;
    int grid_points = 2000;

    std::set<SpectrumMethod> methods = {SpectrumMethod::multid1, SpectrumMethod::trwa,
                                        SpectrumMethod::rwa};

    std::filesystem::path output_dir = "out";

    void validate() const; // throws ValidationError

    // The resolved flat key-value text; embedded in manifests so that a run is
    // reproducible from its manifest alone.
    std::string to_text() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Deviation-table sweep: the cross product of coupling values, with optional
// per-point multiplicity overrides (`lambda_c:alpha:M` triples).
struct SweepSpec {
    std::vector<double> lambda_c_values;
    std::vector<double> alpha_values;
    std::map<std::pair<double, double>, Eigen::Index> multiplicity_overrides;

    void validate() const;
};

SweepSpec parse_sweep_text(const std::string& text);
SweepSpec load_sweep(const std::filesystem::path& path);

} // namespace vrs
