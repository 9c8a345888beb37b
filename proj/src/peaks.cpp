#include "vrs/peaks.hpp"

#include <algorithm>
#include <cmath>

#include "vrs/errors.hpp"

namespace vrs {

namespace {

// x where the line through (x0,y0)-(x1,y1) crosses `level`.
double crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0)
        return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

} // namespace

std::vector<Peak> find_peaks(const std::vector<double>& frequencies,
                             const std::vector<double>& values,
                             double rel_threshold) {
    const std::size_t n = values.size();
    if (frequencies.size() != n)
        throw ValidationError("find_peaks: grid and values differ in length");
    std::vector<Peak> peaks;
    if (n < 3)
        return peaks;

    const double global_max = *std::max_element(values.begin(), values.end());
    if (!(global_max > 0.0))
        return peaks; // flat spectrum
    const double floor = rel_threshold * global_max;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(values[i] > values[i - 1] && values[i] >= values[i + 1]))
            continue;
        if (values[i] < floor)
            continue;

        Peak peak;
        peak.height = values[i];
        peak.position = frequencies[i];

        // Parabolic refinement through the three points around the maximum.
        {
            const double x0 = frequencies[i - 1], x1 = frequencies[i],
                         x2 = frequencies[i + 1];
            const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
            const double d0 = (y1 - y0) / (x1 - x0);
            const double d1 = (y2 - y1) / (x2 - x1);
            const double curvature = (d1 - d0) / (x2 - x0);
            if (curvature < 0.0) {
                const double vertex = 0.5 * (x0 + x1) - 0.5 * d0 / curvature;
                if (vertex > x0 && vertex < x2)
                    peak.position = vertex;
            }
        }

        const double half = 0.5 * values[i];
        bool left_found = false;
        double left_x = frequencies.front();
        for (std::size_t j = i; j-- > 0;) {
            if (values[j] <= half) {
                left_x = crossing(frequencies[j], values[j], frequencies[j + 1],
                                  values[j + 1], half);
                left_found = true;
                break;
            }
            if (values[j] > values[j + 1]) {
                left_x = frequencies[j + 1]; // rising into a neighbor peak
                break;
            }
        }

        bool right_found = false;
        double right_x = frequencies.back();
        for (std::size_t j = i + 1; j < n; ++j) {
            if (values[j] <= half) {
                right_x = crossing(frequencies[j - 1], values[j - 1], frequencies[j],
                                   values[j], half);
                right_found = true;
                break;
            }
            if (values[j] > values[j - 1]) {
                right_x = frequencies[j - 1];
                break;
            }
        }

        peak.fwhm = right_x - left_x;
        peak.fwhm_complete = left_found && right_found;
        peaks.push_back(peak);
    }
    return peaks;
}

} // namespace vrs
