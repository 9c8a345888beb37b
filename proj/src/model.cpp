#include "vrs/model.hpp"

#include <cmath>
#include <string>

#include "vrs/errors.hpp"

namespace vrs {

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError(std::string(name) + " must be > 0");
    };
    auto nonnegative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError(std::string(name) + " must be >= 0");
    };
    positive(omega0, "model.omega0");
    positive(omega_c, "model.omega_c");
    positive(omega_cut, "model.omega_cut");
    nonnegative(lambda_c, "model.lambda_c");
    nonnegative(alpha, "model.alpha");
}

double spectral_density(double omega, const ModelParams& params) {
    if (omega < 0.0)
        throw ValidationError("spectral_density: omega must be >= 0");
    return 2.0 * params.alpha * omega * std::exp(-omega / params.omega_cut);
}

DiscretizedBath discretize_bath(const ModelParams& params, std::size_t n_modes,
                                double omega_max) {
    params.validate();
    if (n_modes < 1)
        throw ValidationError("discretize_bath: n_modes must be >= 1");
    if (!(omega_max > 0.0))
        throw ValidationError("discretize_bath: omega_max must be > 0");

    DiscretizedBath bath;
    bath.n_modes = n_modes;
    bath.omega_max = omega_max;
    bath.frequencies.resize(n_modes);
    bath.couplings.resize(n_modes);

    // Weight of exp(-w/w_cut) on (0, omega_max]; equal slices of it per mode.
    const double depletion = -std::expm1(-omega_max / params.omega_cut);
    const double nb = static_cast<double>(n_modes);
    for (std::size_t k = 1; k <= n_modes; ++k) {
        const double fraction = static_cast<double>(k) / nb;
        const double w = -params.omega_cut * std::log1p(-fraction * depletion);
        bath.frequencies[k - 1] = w;
        bath.couplings[k - 1] =
            std::sqrt(2.0 * params.alpha * w * params.omega_cut * depletion / nb);
    }
    return bath;
}

ModeTable make_mode_table(const ModelParams& params, const DiscretizedBath& bath) {
    const auto n = static_cast<Eigen::Index>(bath.n_modes);
    ModeTable table;
    table.omega.resize(1 + n);
    table.lambda.resize(1 + n);
    table.omega[0] = params.omega_c;
    table.lambda[0] = params.lambda_c;
    for (Eigen::Index k = 0; k < n; ++k) {
        table.omega[1 + k] = bath.frequencies[static_cast<std::size_t>(k)];
        table.lambda[1 + k] = bath.couplings[static_cast<std::size_t>(k)];
    }
    return table;
}

} // namespace vrs
