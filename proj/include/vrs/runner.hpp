#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vrs/config.hpp"
#include "vrs/peaks.hpp"

namespace vrs {

// Exit codes shared by the library entry points and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct MethodOutcome {
    SpectrumMethod method;
    bool ok = false;
    std::string error;
    double sigma2_max = 0.0;  // multid1 only
    bool accepted = false;    // multid1 only
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::filesystem::path output_dir;
    std::vector<MethodOutcome> methods;
};

// Executes the configured methods, writing spectra, the multid1 trajectory,
// a final-state snapshot and a manifest into config.output_dir. Per-method
// failures are recorded without aborting the other methods.
RunOutcome run(const RunConfig& config, std::ostream& log);

struct SweepOutcome {
    int exit_code = kExitOk;
    std::filesystem::path table_csv;
};

// Runs every (lambda_c, alpha) point of the sweep concurrently (at most `jobs`
// in flight) and writes a deviation table with one row per lambda_c and one
// sigma2/multiplicity column pair per alpha.
SweepOutcome sweep(const SweepSpec& spec, const RunConfig& base, int jobs,
                   std::ostream& log);

// Peak report over previously written spectrum CSVs.
int compare_spectra(const std::vector<std::filesystem::path>& csv_paths,
                    const std::filesystem::path& output_csv, std::ostream& log,
                    double rel_threshold = 0.05);

// Canned reproductions. `scale` is "desk" (reduced bath, shorter runs) or
// "paper" (full-size settings).
int run_table1(const RunConfig& base, const std::string& scale, int jobs,
               std::ostream& log);
int run_figures(const RunConfig& base, const std::string& scale, int jobs,
                std::ostream& log);

} // namespace vrs
