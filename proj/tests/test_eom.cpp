#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "support/fock_oracle.hpp"
#include "support/random_state.hpp"
#include "vrs/dynamics.hpp"
#include "vrs/errors.hpp"
#include "vrs/state.hpp"

using namespace vrs;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cxd = std::complex<double>;

namespace {

constexpr cxd kImag{0.0, 1.0};

// Dense reference solve of the Dirac-Frenkel system, assembled numerically in
// the truncated Fock space: the tangent basis of one branch is
//   { |s, f_l> } u { A_l b_i^dag |s, f_l> },
// the Gram matrix and right-hand side come from plain dense linear algebra.
struct DenseBranch {
    VectorXcd u;
    MatrixXcd disp_dot;
    double residual = 0.0;
};

DenseBranch dense_branch_solve(const testing::FockOracle& oracle,
                               const MultiD1State& state, bool plus_branch,
                               double eps_abs) {
    const Index mult = state.multiplicity();
    const Index n_modes = state.mode_count();
    const VectorXcd& amps = plus_branch ? state.amplitudes_plus
                                        : state.amplitudes_minus;
    const MatrixXcd& disp = plus_branch ? state.displacements_plus
                                        : state.displacements_minus;

    // Tangent basis vectors in the Fock space.
    std::vector<VectorXcd> basis;
    basis.reserve(static_cast<std::size_t>(mult * (1 + n_modes)));
    for (Index l = 0; l < mult; ++l) {
        MultiD1State single;
        single.amplitudes_plus = VectorXcd::Zero(1);
        single.amplitudes_minus = VectorXcd::Zero(1);
        single.displacements_plus = MatrixXcd::Zero(1, n_modes);
        single.displacements_minus = MatrixXcd::Zero(1, n_modes);
        if (plus_branch) {
            single.amplitudes_plus[0] = 1.0;
            single.displacements_plus.row(0) = disp.row(l);
        } else {
            single.amplitudes_minus[0] = 1.0;
            single.displacements_minus.row(0) = disp.row(l);
        }
        basis.push_back(oracle.to_vector(single));
    }
    for (Index l = 0; l < mult; ++l)
        for (Index i = 0; i < n_modes; ++i)
            basis.push_back(amps[l] *
                            oracle.apply_raise(basis[static_cast<std::size_t>(l)],
                                               static_cast<int>(i)));

    const Index dim = static_cast<Index>(basis.size());
    MatrixXcd gram(dim, dim);
    for (Index r = 0; r < dim; ++r)
        for (Index c = 0; c < dim; ++c)
            gram(r, c) = basis[static_cast<std::size_t>(r)].dot(
                basis[static_cast<std::size_t>(c)]);

    const VectorXcd h_psi = oracle.hamiltonian() * oracle.to_vector(state);
    VectorXcd rhs(dim);
    for (Index r = 0; r < dim; ++r)
        rhs[r] = -kImag * basis[static_cast<std::size_t>(r)].dot(h_psi);

    MatrixXcd regularized = gram;
    regularized.diagonal().array() += eps_abs;
    const VectorXcd x = regularized.ldlt().solve(rhs);

    DenseBranch out;
    out.u = x.head(mult);
    out.disp_dot.resize(mult, n_modes);
    for (Index l = 0; l < mult; ++l)
        for (Index i = 0; i < n_modes; ++i)
            out.disp_dot(l, i) = x[mult + l * n_modes + i];
    out.residual = (regularized * x - rhs).norm() / rhs.norm();
    return out;
}

ModelParams eom_params() {
    ModelParams p;
    p.omega_c = 1.2;
    p.lambda_c = 0.35;
    p.alpha = 0.15;
    return p;
}

} // namespace

TEST_CASE("derivatives match a dense Fock-space solve of the same system") {
    const ModelParams params = eom_params();
    const auto bath = discretize_bath(params, 1, 1.6);
    const testing::FockOracle oracle(params, bath, 14);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        const MultiD1State state = testing::random_state(2, 2, rng, 0.4);
        const EomSolveReport report = assemble_eom(state, params, bath, 1e-10);

        const double eps = report.regularization_used;
        const DenseBranch plus = dense_branch_solve(oracle, state, true, eps);
        const DenseBranch minus = dense_branch_solve(oracle, state, false, eps);
        REQUIRE(plus.residual < 1e-9);
        REQUIRE(minus.residual < 1e-9);

        // Displacement derivatives compare directly.
        CHECK((report.derivative.displacements_plus - plus.disp_dot)
                  .cwiseAbs()
                  .maxCoeff() < 1e-7);
        CHECK((report.derivative.displacements_minus - minus.disp_dot)
                  .cwiseAbs()
                  .maxCoeff() < 1e-7);

        // Amplitude derivatives via Adot_n = u_n + A_n Re<f_n|fdot_n>.
        for (Index n = 0; n < 2; ++n) {
            const cxd adot_dense =
                plus.u[n] + state.amplitudes_plus[n] *
                                state.displacements_plus.row(n)
                                    .dot(plus.disp_dot.row(n))
                                    .real();
            CHECK(std::abs(report.derivative.amplitudes_plus[n] - adot_dense) < 1e-7);
            const cxd bdot_dense =
                minus.u[n] + state.amplitudes_minus[n] *
                                 state.displacements_minus.row(n)
                                     .dot(minus.disp_dot.row(n))
                                     .real();
            CHECK(std::abs(report.derivative.amplitudes_minus[n] - bdot_dense) < 1e-7);
        }

        CHECK(report.residual < 1e-8);
        CHECK(report.gram_condition >= 1.0);
    }
}

TEST_CASE("deviation matches the dense Schroedinger residual") {
    const ModelParams params = eom_params();
    const auto bath = discretize_bath(params, 1, 1.6);
    const testing::FockOracle oracle(params, bath, 14);

    std::mt19937_64 rng(23);
    const MultiD1State state = testing::random_state(2, 2, rng, 0.4);
    const EomSolveReport report = assemble_eom(state, params, bath, 1e-12);

    // i|Ddot> - H|D> in the Fock space, |Ddot> built from the solved
    // derivatives by finite differences of the embedding map.
    const double h = 1e-6;
    MultiD1State fwd = state;
    fwd.amplitudes_plus += h * report.derivative.amplitudes_plus;
    fwd.amplitudes_minus += h * report.derivative.amplitudes_minus;
    fwd.displacements_plus += h * report.derivative.displacements_plus;
    fwd.displacements_minus += h * report.derivative.displacements_minus;
    MultiD1State bwd = state;
    bwd.amplitudes_plus -= h * report.derivative.amplitudes_plus;
    bwd.amplitudes_minus -= h * report.derivative.amplitudes_minus;
    bwd.displacements_plus -= h * report.derivative.displacements_plus;
    bwd.displacements_minus -= h * report.derivative.displacements_minus;

    const VectorXcd psi = oracle.to_vector(state);
    const VectorXcd psi_dot =
        (oracle.to_vector(fwd) - oracle.to_vector(bwd)) / (2.0 * h);
    const VectorXcd residual_vec = kImag * psi_dot - oracle.hamiltonian() * psi;
    const double sigma2_dense =
        residual_vec.squaredNorm() / (params.omega0 * params.omega0 * psi.squaredNorm());

    const double sigma2 = deviation(state, report.derivative, params, bath);
    CHECK(sigma2 == doctest::Approx(sigma2_dense).epsilon(1e-4).scale(1e-6));
}

TEST_CASE("decoupled qubit only rotates the amplitude phases") {
    ModelParams params;
    params.lambda_c = 0.0;
    params.alpha = 0.0;
    const auto bath = discretize_bath(params, 2, 2.0);
    const MultiD1State state = initial_state(1, bath);

    const EomSolveReport report = assemble_eom(state, params, bath, 0.0);
    const cxd expected_adot = -kImag * 0.5 * params.omega0 * state.amplitudes_plus[0];
    CHECK(std::abs(report.derivative.amplitudes_plus[0] - expected_adot) < 1e-12);
    CHECK(std::abs(report.derivative.amplitudes_minus[0] - expected_adot) < 1e-12);
    CHECK(report.derivative.displacements_plus.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(report.derivative.displacements_minus.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(deviation(state, report.derivative, params, bath) < 1e-12);
}

TEST_CASE("solved derivatives conserve the norm") {
    const ModelParams params = eom_params();
    const auto bath = discretize_bath(params, 3, 2.0);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const MultiD1State state = testing::random_state(3, 4, rng);
        const EomSolveReport report = assemble_eom(state, params, bath, 1e-12);

        // d<D|D>/dt = 2 Re<D|Ddot> with
        // <D|Ddot> = A^H (S u + (S o P) A) summed over branches.
        auto branch_overlap = [](const VectorXcd& a, const MatrixXcd& f,
                                 const VectorXcd& adot, const MatrixXcd& fdot) {
            const MatrixXcd s = detail::overlap_matrix(f, f);
            const Eigen::VectorXd re_pair =
                f.conjugate().cwiseProduct(fdot).rowwise().sum().real();
            const VectorXcd u = adot - a.cwiseProduct(re_pair.cast<cxd>());
            const MatrixXcd p = f.conjugate() * fdot.transpose();
            return a.dot(s * u + s.cwiseProduct(p) * a);
        };
        const cxd overlap =
            branch_overlap(state.amplitudes_plus, state.displacements_plus,
                           report.derivative.amplitudes_plus,
                           report.derivative.displacements_plus) +
            branch_overlap(state.amplitudes_minus, state.displacements_minus,
                           report.derivative.amplitudes_minus,
                           report.derivative.displacements_minus);
        CHECK(std::abs(2.0 * overlap.real()) < 1e-9);
    }
}

TEST_CASE("initial derivatives reproduce the exact short-time observables") {
    // Quantum Rabi setup (no reservoir coupling): at t = 0 the product state is
    // represented exactly, so the projected derivative must match the exact
    // one. Compare d<O>/dt from a tiny variational step against a centered
    // difference of the dense propagation.
    ModelParams params;
    params.omega_c = 1.0;
    params.lambda_c = 0.5;
    params.alpha = 0.0;
    const auto bath = discretize_bath(params, 1, 2.0);
    const testing::FockOracle oracle(params, bath, 12);

    const MultiD1State state = initial_state(1, bath);
    const double dt = 1e-5;
    const MultiD1State stepped = step_rk4(state, dt, params, bath, 0.0);

    const ObservableSet before = qubit_observables(state);
    const ObservableSet after = qubit_observables(stepped);
    const double dsz_var = (after.sigma_z - before.sigma_z) / dt;
    const double dnc_var =
        (photon_number(stepped, 0) - photon_number(state, 0)) / dt;

    const VectorXcd psi0 = oracle.to_vector(state);
    const double delta = 1e-4;
    const VectorXcd fwd = oracle.evolve(psi0, delta);
    const VectorXcd bwd = oracle.evolve(psi0, -delta);
    const double dsz_exact =
        (oracle.sigma_z(fwd) - oracle.sigma_z(bwd)) / (2.0 * delta);
    const double dnc_exact =
        (oracle.photon_number(fwd, 0) - oracle.photon_number(bwd, 0)) / (2.0 * delta);

    CHECK(dsz_var == doctest::Approx(dsz_exact).epsilon(1e-4).scale(1.0));
    CHECK(dnc_var == doctest::Approx(dnc_exact).epsilon(1e-4).scale(1.0));
}

TEST_CASE("assemble_eom rejects bad input") {
    const ModelParams params = eom_params();
    const auto bath = discretize_bath(params, 2, 2.0);
    const MultiD1State state = initial_state(1, bath);
    CHECK_THROWS_AS(assemble_eom(state, params, bath, -1.0), ValidationError);

    const auto wrong_bath = discretize_bath(params, 5, 2.0);
    CHECK_THROWS_AS(assemble_eom(state, params, wrong_bath, 1e-8), ValidationError);
}
