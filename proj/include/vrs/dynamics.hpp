#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "vrs/model.hpp"
#include "vrs/state.hpp"

namespace vrs {

// Time derivatives of all variational parameters, same shapes as the state.
struct MultiD1Derivative {
    Eigen::VectorXcd amplitudes_plus;
    Eigen::VectorXcd amplitudes_minus;
    Eigen::MatrixXcd displacements_plus;
    Eigen::MatrixXcd displacements_minus;
};

struct EomSolveReport {
    MultiD1Derivative derivative;
    double gram_condition = 0.0;      // spectral estimate from the M x M Gram blocks
    double regularization_used = 0.0; // absolute Tikhonov shift applied
    double residual = 0.0;            // relative residual of the regularized system
    double tangent_norm_sq = 0.0;     // <Ddot|Ddot> of the solved tangent vector
    double state_norm = 0.0;          // <D|D> at assembly time
};

// Solves the Dirac-Frenkel stationarity conditions for the parameter
// derivatives: the Schroedinger flow is projected onto the tangent space of
// the ansatz, giving a Hermitian positive semidefinite linear system per qubit
// branch. The system is regularized by adding eps to its diagonal, with
// regularization_eps interpreted relative to the mean diagonal magnitude.
// Throws NumericalError when the solve residual is not small.
EomSolveReport assemble_eom(const MultiD1State& state, const ModelParams& params,
                            const DiscretizedBath& bath,
                            double regularization_eps = 1e-8);

// Classic 4-stage Runge-Kutta update of all variational parameters.
MultiD1State step_rk4(const MultiD1State& state, double dt, const ModelParams& params,
                      const DiscretizedBath& bath, double regularization_eps = 1e-8);

// Squared norm of the residual of the time-dependent Schroedinger equation,
// scaled by 1/omega0^2:  sigma^2 = [<H^2> - <Ddot|Ddot>] / omega0^2,
// both terms normalized by <D|D>. Tiny negative rounding is clamped to zero;
// values below -1e-6 throw NumericalError.
double deviation(const MultiD1State& state, const MultiD1Derivative& derivative,
                 const ModelParams& params, const DiscretizedBath& bath);

struct PropagateOptions {
    double t_f = 300.0;
    double dt = 0.01;
    int output_stride = 10;              // record observables every stride steps
    double regularization_eps = 1e-8;
    double noise_scale = 1.0;            // recorded in run manifests
    std::vector<double> snapshot_times;  // extra full photon snapshots (<= 10)
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<ObservableSet> observables;
    std::vector<double> sigma2;
    double sigma2_max = 0.0;
    bool accepted = false; // sigma2_max < 1e-2
    std::vector<std::pair<double, Eigen::VectorXd>> photon_snapshots;
    Eigen::VectorXd final_photon_numbers;  // all modes, cavity first
    double spectrum_tail_change = 0.0;     // rel. change of bath spectrum over last 10%
    MultiD1State final_state;
    bool aborted = false;
    std::string abort_reason;
};

// Integrates the equations of motion to t_f, recording observables and the
// deviation sigma^2 every output_stride steps. A solver failure aborts the
// propagation and returns the partial record with `aborted` set.
TrajectoryRecord propagate(const MultiD1State& initial, const ModelParams& params,
                           const DiscretizedBath& bath, const PropagateOptions& options);

TrajectoryRecord propagate(const MultiD1State& initial, const ModelParams& params,
                           const DiscretizedBath& bath, double t_f, double dt,
                           int output_stride, double regularization_eps);

} // namespace vrs
