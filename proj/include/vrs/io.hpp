#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vrs/analytic.hpp"
#include "vrs/dynamics.hpp"
#include "vrs/peaks.hpp"

namespace vrs {

// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

// Spectrum CSV schema: `omega,N` with a mandatory header, one row per grid
// point; the metadata sidecar `<name>.meta.json` carries the parameter set and
// provenance.
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);
SpectrumResult read_spectrum_csv(const std::filesystem::path& path);

// Trajectory CSV schema: t,norm,energy,sigma_x,sigma_y,sigma_z,parity,sigma2.
void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryRecord& record);

void write_peaks_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::vector<Peak>>>& reports);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace vrs
