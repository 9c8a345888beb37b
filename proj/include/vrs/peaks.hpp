#pragma once

#include <vector>

namespace vrs {

struct Peak {
    double position = 0.0;
    double height = 0.0;
    double fwhm = 0.0;
    bool fwhm_complete = false; // both half-height crossings found
};

// Local maxima above `rel_threshold` of the global maximum, with positions
// refined by a three-point parabola and full widths at half maximum obtained
// by linear interpolation of the crossings. Works on any strictly increasing
// grid. A flat spectrum yields an empty list.
std::vector<Peak> find_peaks(const std::vector<double>& frequencies,
                             const std::vector<double>& values,
                             double rel_threshold = 0.05);

} // namespace vrs
