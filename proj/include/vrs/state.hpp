#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>

#include <Eigen/Core>

#include "vrs/model.hpp"

namespace vrs {

// Superposition of multiplicity-M products of a sigma_x eigenstate with
// multimode coherent states:
//   |D> = sum_n  A_n |+>|f_n>  +  B_n |->|g_n>.
// Displacement rows are components, columns are modes (cavity = column 0).
struct MultiD1State {
    Eigen::VectorXcd amplitudes_plus;     // A_n, size M
    Eigen::VectorXcd amplitudes_minus;    // B_n, size M
    Eigen::MatrixXcd displacements_plus;  // f_nj, M x (1 + Nb)
    Eigen::MatrixXcd displacements_minus; // g_nj, M x (1 + Nb)
    double time = 0.0;                    // units 1/omega0

    Eigen::Index multiplicity() const { return amplitudes_plus.size(); }
    Eigen::Index mode_count() const { return displacements_plus.cols(); }

    void check_shape() const; // throws ValidationError on inconsistent sizes
};

struct ObservableSet {
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double sigma_z = 0.0;
    double excited_population = 0.0; // (1 + <sigma_z>)/2
    double norm = 0.0;
    double energy = 0.0;
    double parity = 0.0;
};

// <d1|d2> for two normalized multimode coherent states:
// exp(sum_j d1_j^* d2_j - |d1_j|^2/2 - |d2_j|^2/2).
std::complex<double> coherent_overlap(const Eigen::VectorXcd& d1,
                                      const Eigen::VectorXcd& d2);

// |e, 0_c, 0> = (|+> + |->)/sqrt(2) (x) vacuum, carried by component 1.
// Components n >= 2 start dormant: amplitudes of magnitude <= 1e-7*noise_scale
// and displacements <= 1e-4*noise_scale, drawn deterministically from `seed`
// so that the initial Gram matrix is not exactly singular. The returned state
// has unit norm.
MultiD1State initial_state(Eigen::Index multiplicity, const DiscretizedBath& bath,
                           double noise_scale = 1.0, std::uint64_t seed = 20240901);

double norm(const MultiD1State& state);

// Mean photon number of mode j (0 = cavity, 1..Nb = reservoir), normalized.
// Tiny negative rounding (> -1e-10) is clamped to zero; anything more negative
// signals a bug and throws NumericalError.
double photon_number(const MultiD1State& state, Eigen::Index mode_index);

// Photon numbers of all modes at once (same shape as the mode table).
Eigen::VectorXd photon_numbers(const MultiD1State& state);

ObservableSet qubit_observables(const MultiD1State& state);

// <sigma_z (x) exp(i*pi*sum_j n_j)>; conserved by the Hamiltonian.
double parity_expectation(const MultiD1State& state);

double energy(const MultiD1State& state, const ModelParams& params,
              const DiscretizedBath& bath);

// <H^2>/<D|D>. Needed for the deviation measure of the variational solution.
double h_squared(const MultiD1State& state, const ModelParams& params,
                 const DiscretizedBath& bath);

ObservableSet observables(const MultiD1State& state, const ModelParams& params,
                          const DiscretizedBath& bath);

// Self-describing JSON snapshot with (re, im) pairs at full double precision;
// round-trips bit-exactly. Used for restart and debugging.
void save_snapshot(const std::filesystem::path& path, const MultiD1State& state);
MultiD1State load_snapshot(const std::filesystem::path& path);

namespace detail {

// S_ln = <u_l|v_n> for all component pairs of two displacement matrices.
Eigen::MatrixXcd overlap_matrix(const Eigen::MatrixXcd& bra_disp,
                                const Eigen::MatrixXcd& ket_disp);

// sum_j w_j u_lj^* v_nj for all pairs.
Eigen::MatrixXcd weighted_inner(const Eigen::MatrixXcd& bra_disp,
                                const Eigen::MatrixXcd& ket_disp,
                                const Eigen::VectorXd& weights);

// a_l + b_n for all pairs.
Eigen::MatrixXcd pair_sum(const Eigen::VectorXcd& bra_part,
                          const Eigen::VectorXcd& ket_part);

} // namespace detail

} // namespace vrs
