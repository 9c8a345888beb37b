#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace vrs {

// Physical constants of the qubit + cavity + reservoir system. Energies are in
// units of the bare qubit frequency omega0, times in 1/omega0.
struct ModelParams {
    double omega0 = 1.0;    // qubit bare transition frequency
    double omega_c = 1.0;   // cavity frequency
    double lambda_c = 0.0;  // qubit-cavity coupling
    double alpha = 0.1;     // dimensionless qubit-reservoir coupling
    double omega_cut = 5.0; // spectral density cutoff

    void validate() const; // throws ValidationError
};

// Ohmic spectral density J(w) = 2*alpha*w*exp(-w/omega_cut). Throws for w < 0.
double spectral_density(double omega, const ModelParams& params);

// Reservoir modes obtained by discretizing J(w) on (0, omega_max] with equal
// spectral weight per mode. Mode k=1..Nb; frequencies strictly increasing,
// the last one equal to omega_max.
struct DiscretizedBath {
    std::size_t n_modes = 0;
    double omega_max = 0.0;
    std::vector<double> frequencies;
    std::vector<double> couplings;
};

DiscretizedBath discretize_bath(const ModelParams& params, std::size_t n_modes,
                                double omega_max);

// Frequencies/couplings of all bosonic modes the qubit couples to, cavity
// first, then the reservoir modes. Column 0 of displacement matrices always
// refers to the cavity.
struct ModeTable {
    Eigen::VectorXd omega;  // size 1 + Nb
    Eigen::VectorXd lambda; // size 1 + Nb
};

ModeTable make_mode_table(const ModelParams& params, const DiscretizedBath& bath);

} // namespace vrs
