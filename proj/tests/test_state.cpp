#include <cmath>
#include <complex>
#include <filesystem>
#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "support/fock_oracle.hpp"
#include "support/random_state.hpp"
#include "vrs/errors.hpp"
#include "vrs/state.hpp"

using namespace vrs;
using cxd = std::complex<double>;

namespace {

ModelParams oracle_params() {
    ModelParams p;
    p.omega_c = 1.3;
    p.lambda_c = 0.4;
    p.alpha = 0.2;
    return p;
}

} // namespace

TEST_CASE("coherent overlap identities") {
    Eigen::VectorXcd d(2);
    d << cxd(0.3, -0.2), cxd(-0.5, 0.1);

    CHECK(std::abs(coherent_overlap(d, d) - 1.0) < 1e-14);

    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
    CHECK(std::abs(coherent_overlap(zero, d) - std::exp(-0.5 * d.squaredNorm())) <
          1e-14);

    // |<d1|d2>|^2 = exp(-|d1-d2|^2)
    Eigen::VectorXcd d1(1), d2(1);
    d1 << cxd(1.0, 0.0);
    d2 << cxd(0.0, 1.0);
    const double modulus_sq = std::norm(coherent_overlap(d1, d2));
    CHECK(modulus_sq == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    // swap + conjugate symmetry
    CHECK(std::abs(coherent_overlap(d1, d2) - std::conj(coherent_overlap(d2, d1))) <
          1e-14);

    Eigen::VectorXcd mismatched(3);
    CHECK_THROWS_AS(coherent_overlap(d, mismatched), ValidationError);
}

TEST_CASE("overlap Gram matrices are Hermitian positive semidefinite") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd disp(4, 3);
        for (Eigen::Index n = 0; n < 4; ++n)
            for (Eigen::Index j = 0; j < 3; ++j)
                disp(n, j) = cxd(unit(rng), unit(rng));
        const Eigen::MatrixXcd gram = detail::overlap_matrix(disp, disp);
        CHECK((gram - gram.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                           Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
}

TEST_CASE("initial state is the excited product state") {
    const auto bath = discretize_bath(oracle_params(), 4, 2.0);

    SUBCASE("single component is exact") {
        const MultiD1State state = initial_state(1, bath);
        CHECK(norm(state) == doctest::Approx(1.0).epsilon(1e-13));
        const ObservableSet obs = qubit_observables(state);
        CHECK(obs.sigma_z == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(obs.sigma_x == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(parity_expectation(state) == doctest::Approx(1.0).epsilon(1e-13));
        const Eigen::VectorXd photons = photon_numbers(state);
        CHECK(photons.maxCoeff() == 0.0);
    }

    SUBCASE("noise components stay tiny") {
        const MultiD1State state = initial_state(3, bath, 1.0, 1234);
        CHECK(std::abs(norm(state) - 1.0) < 1e-12);
        CHECK(std::abs(qubit_observables(state).sigma_z - 1.0) < 1e-6);
        for (Eigen::Index n = 1; n < 3; ++n) {
            CHECK(std::abs(state.amplitudes_plus[n]) < 2e-7);
            CHECK(state.displacements_plus.row(n).cwiseAbs().maxCoeff() < 2e-4);
        }
    }

    SUBCASE("deterministic for a fixed seed") {
        const MultiD1State a = initial_state(4, bath, 1.0, 99);
        const MultiD1State b = initial_state(4, bath, 1.0, 99);
        CHECK((a.amplitudes_plus - b.amplitudes_plus).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.displacements_minus - b.displacements_minus).cwiseAbs().maxCoeff() ==
              0.0);
    }
}

TEST_CASE("coherent-state photon number") {
    const auto bath = discretize_bath(oracle_params(), 1, 2.0);
    MultiD1State state = initial_state(1, bath);
    state.amplitudes_plus[0] = 1.0;
    state.amplitudes_minus[0] = 0.0;
    state.displacements_plus(0, 0) = cxd(0.6, -0.3);
    CHECK(photon_number(state, 0) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(photon_number(state, 1) == 0.0);
    CHECK_THROWS_AS(photon_number(state, 5), ValidationError);
    CHECK_THROWS_AS(photon_number(state, -1), ValidationError);
}

TEST_CASE("expectation values match the Fock oracle") {
    const ModelParams params = oracle_params();
    const auto bath = discretize_bath(params, 2, 2.0);
    const testing::FockOracle oracle(params, bath, 10);

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::Index multiplicity = 1 + trial % 3;
        const MultiD1State state = testing::random_state(multiplicity, 3, rng);
        const Eigen::VectorXcd psi = oracle.to_vector(state);

        CHECK(norm(state) == doctest::Approx(oracle.norm(psi)).epsilon(1e-8));

        const ObservableSet obs = qubit_observables(state);
        CHECK(obs.sigma_x == doctest::Approx(oracle.sigma_x(psi) / oracle.norm(psi))
                                 .epsilon(1e-8));
        CHECK(obs.sigma_y == doctest::Approx(oracle.sigma_y(psi) / oracle.norm(psi))
                                 .epsilon(1e-8));
        CHECK(obs.sigma_z == doctest::Approx(oracle.sigma_z(psi) / oracle.norm(psi))
                                 .epsilon(1e-8));
        CHECK(obs.sigma_x * obs.sigma_x + obs.sigma_y * obs.sigma_y +
                  obs.sigma_z * obs.sigma_z <=
              1.0 + 1e-9);

        for (int mode = 0; mode < 3; ++mode)
            CHECK(photon_number(state, mode) ==
                  doctest::Approx(oracle.photon_number(psi, mode) / oracle.norm(psi))
                      .epsilon(1e-7)
                      .scale(1.0));

        CHECK(parity_expectation(state) ==
              doctest::Approx(oracle.parity(psi) / oracle.norm(psi)).epsilon(1e-8));
        CHECK(energy(state, params, bath) ==
              doctest::Approx(oracle.energy(psi)).epsilon(1e-8).scale(1.0));
        CHECK(h_squared(state, params, bath) ==
              doctest::Approx(oracle.h_squared(psi)).epsilon(1e-6).scale(1.0));

        // variance nonnegativity
        const double mean = energy(state, params, bath);
        CHECK(h_squared(state, params, bath) - mean * mean >= -1e-9);
    }
}

TEST_CASE("bare qubit energies") {
    ModelParams params;
    params.lambda_c = 0.0;
    params.alpha = 0.0;
    const auto bath = discretize_bath(params, 2, 2.0);

    const MultiD1State excited = initial_state(1, bath);
    CHECK(energy(excited, params, bath) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(h_squared(excited, params, bath) == doctest::Approx(0.25).epsilon(1e-13));

    MultiD1State ground = initial_state(1, bath);
    ground.amplitudes_minus[0] *= -1.0; // |g> = (|+> - |->)/sqrt(2)
    CHECK(energy(ground, params, bath) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(parity_expectation(ground) == doctest::Approx(-1.0).epsilon(1e-13));

    MultiD1State plus = initial_state(1, bath);
    plus.amplitudes_plus[0] = 1.0;
    plus.amplitudes_minus[0] = 0.0;
    const ObservableSet obs = qubit_observables(plus);
    CHECK(obs.sigma_x == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(obs.sigma_z == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("initial h_squared includes the coupling weight") {
    // H|e,0,0> = (w0/2)|e,0,0> + (1/2) sum_j lambda_j |g,1_j>, so
    // <H^2> = w0^2/4 + (1/4) sum_j lambda_j^2.
    ModelParams params = oracle_params();
    const auto bath = discretize_bath(params, 3, 2.0);
    const MultiD1State state = initial_state(1, bath);
    double lambda_sq = params.lambda_c * params.lambda_c;
    for (const double lam : bath.couplings)
        lambda_sq += lam * lam;
    CHECK(h_squared(state, params, bath) ==
          doctest::Approx(0.25 + 0.25 * lambda_sq).epsilon(1e-12));
}

TEST_CASE("snapshot round trip is bit exact") {
    std::mt19937_64 rng(5);
    MultiD1State state = testing::random_state(2, 4, rng);
    state.time = 12.625;

    const auto path = std::filesystem::temp_directory_path() / "vrs_state_test.json";
    save_snapshot(path, state);
    const MultiD1State loaded = load_snapshot(path);
    std::filesystem::remove(path);

    CHECK(loaded.time == state.time);
    CHECK((loaded.amplitudes_plus - state.amplitudes_plus).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((loaded.amplitudes_minus - state.amplitudes_minus).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((loaded.displacements_plus - state.displacements_plus)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((loaded.displacements_minus - state.displacements_minus)
              .cwiseAbs()
              .maxCoeff() == 0.0);
}
