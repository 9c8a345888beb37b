#include "vrs/state.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <utility>

#include <json.hpp>

#include "vrs/errors.hpp"

namespace vrs {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cxd = std::complex<double>;

void MultiD1State::check_shape() const {
    const Index m = amplitudes_plus.size();
    const Index j = displacements_plus.cols();
    if (amplitudes_minus.size() != m || displacements_plus.rows() != m ||
        displacements_minus.rows() != m || displacements_minus.cols() != j || m < 1 ||
        j < 1)
        throw ValidationError("MultiD1State: inconsistent dimensions");
}

namespace detail {

MatrixXcd overlap_matrix(const MatrixXcd& bra_disp, const MatrixXcd& ket_disp) {
    const VectorXd bra_sq = bra_disp.rowwise().squaredNorm();
    const VectorXd ket_sq = ket_disp.rowwise().squaredNorm();
    MatrixXcd log_s = bra_disp.conjugate() * ket_disp.transpose();
    log_s.colwise() -= (0.5 * bra_sq).cast<cxd>().eval();
    log_s.rowwise() -= (0.5 * ket_sq).transpose().cast<cxd>().eval();
    return log_s.array().exp().matrix();
}

MatrixXcd weighted_inner(const MatrixXcd& bra_disp, const MatrixXcd& ket_disp,
                         const VectorXd& weights) {
    return bra_disp.conjugate() *
           (weights.cast<cxd>().asDiagonal() * ket_disp.transpose());
}

MatrixXcd pair_sum(const VectorXcd& bra_part, const VectorXcd& ket_part) {
    MatrixXcd out(bra_part.size(), ket_part.size());
    out.colwise() = bra_part;
    out.rowwise() += ket_part.transpose();
    return out;
}

} // namespace detail

std::complex<double> coherent_overlap(const VectorXcd& d1, const VectorXcd& d2) {
    if (d1.size() != d2.size())
        throw ValidationError("coherent_overlap: displacement lengths differ");
    const cxd exponent =
        d1.dot(d2) - cxd(0.5 * d1.squaredNorm() + 0.5 * d2.squaredNorm(), 0.0);
    return std::exp(exponent);
}

MultiD1State initial_state(Index multiplicity, const DiscretizedBath& bath,
                           double noise_scale, std::uint64_t seed) {
    if (multiplicity < 1)
        throw ValidationError("initial_state: multiplicity must be >= 1");
    const Index n_modes = 1 + static_cast<Index>(bath.n_modes);

    MultiD1State state;
    state.amplitudes_plus = VectorXcd::Zero(multiplicity);
    state.amplitudes_minus = VectorXcd::Zero(multiplicity);
    state.displacements_plus = MatrixXcd::Zero(multiplicity, n_modes);
    state.displacements_minus = MatrixXcd::Zero(multiplicity, n_modes);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    state.amplitudes_plus[0] = inv_sqrt2;
    state.amplitudes_minus[0] = inv_sqrt2;

    // Dormant components break the exact Gram degeneracy at t = 0. Magnitudes
    // are bounded by 1e-7 (amplitudes) and 1e-4 (displacements) times
    // noise_scale; draws are reproducible for a given seed. The minus branch
    // mirrors the plus branch (B_n = A_n, g_n = -f_n) so the state keeps the
    // parity symmetry of the Hamiltonian, which the projected flow then
    // conserves to integrator precision.
    if (multiplicity > 1 && noise_scale > 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        auto draw = [&](double magnitude) {
            const double re = unit(rng);
            const double im = unit(rng);
            return cxd(re, im) * (magnitude / std::sqrt(2.0));
        };
        for (Index n = 1; n < multiplicity; ++n) {
            state.amplitudes_plus[n] = draw(1e-7 * noise_scale);
            state.amplitudes_minus[n] = state.amplitudes_plus[n];
            for (Index j = 0; j < n_modes; ++j) {
                state.displacements_plus(n, j) = draw(1e-4 * noise_scale);
                state.displacements_minus(n, j) = -state.displacements_plus(n, j);
            }
        }
    }

    const double rescale = 1.0 / std::sqrt(norm(state));
    state.amplitudes_plus *= rescale;
    state.amplitudes_minus *= rescale;
    return state;
}

double norm(const MultiD1State& state) {
    state.check_shape();
    const MatrixXcd s_ff =
        detail::overlap_matrix(state.displacements_plus, state.displacements_plus);
    const MatrixXcd s_gg =
        detail::overlap_matrix(state.displacements_minus, state.displacements_minus);
    const cxd value = state.amplitudes_plus.dot(s_ff * state.amplitudes_plus) +
                      state.amplitudes_minus.dot(s_gg * state.amplitudes_minus);
    if (std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value)))
        throw NumericalError("norm: non-real Gram quadratic form");
    if (!(value.real() > 0.0))
        throw NumericalError("norm: non-positive state norm");
    return value.real();
}

namespace {

// Photon numbers of every mode for one qubit branch, not yet normalized.
VectorXd branch_photon_numbers(const VectorXcd& amps, const MatrixXcd& disp,
                               const MatrixXcd& overlaps) {
    const MatrixXcd weighted =
        disp.array().colwise() * amps.array(); // (A_n f_nj) as M x J
    const MatrixXcd projected = overlaps * weighted;
    return (weighted.conjugate().array() * projected.array())
        .colwise()
        .sum()
        .real()
        .transpose();
}

double checked_nonnegative(double value, const char* what) {
    if (value < -1e-10)
        throw NumericalError(std::string(what) + ": negative beyond rounding (" +
                             std::to_string(value) + ")");
    return value < 0.0 ? 0.0 : value;
}

} // namespace

VectorXd photon_numbers(const MultiD1State& state) {
    state.check_shape();
    const MatrixXcd s_ff =
        detail::overlap_matrix(state.displacements_plus, state.displacements_plus);
    const MatrixXcd s_gg =
        detail::overlap_matrix(state.displacements_minus, state.displacements_minus);
    const cxd norm_value = state.amplitudes_plus.dot(s_ff * state.amplitudes_plus) +
                           state.amplitudes_minus.dot(s_gg * state.amplitudes_minus);

    VectorXd out =
        branch_photon_numbers(state.amplitudes_plus, state.displacements_plus, s_ff) +
        branch_photon_numbers(state.amplitudes_minus, state.displacements_minus, s_gg);
    out /= norm_value.real();
    for (Index j = 0; j < out.size(); ++j)
        out[j] = checked_nonnegative(out[j], "photon_number");
    return out;
}

double photon_number(const MultiD1State& state, Index mode_index) {
    if (mode_index < 0 || mode_index >= state.mode_count())
        throw ValidationError("photon_number: mode index out of range");
    return photon_numbers(state)[mode_index];
}

ObservableSet qubit_observables(const MultiD1State& state) {
    state.check_shape();
    const MatrixXcd s_ff =
        detail::overlap_matrix(state.displacements_plus, state.displacements_plus);
    const MatrixXcd s_gg =
        detail::overlap_matrix(state.displacements_minus, state.displacements_minus);
    const MatrixXcd s_fg =
        detail::overlap_matrix(state.displacements_plus, state.displacements_minus);

    const double pop_plus = state.amplitudes_plus.dot(s_ff * state.amplitudes_plus).real();
    const double pop_minus =
        state.amplitudes_minus.dot(s_gg * state.amplitudes_minus).real();
    const double n = pop_plus + pop_minus;
    if (!(n > 0.0))
        throw NumericalError("qubit_observables: non-positive norm");

    // sigma_z and sigma_y live in the +/- cross terms.
    const cxd cross = state.amplitudes_plus.dot(s_fg * state.amplitudes_minus);

    ObservableSet obs;
    obs.norm = n;
    obs.sigma_x = (pop_plus - pop_minus) / n;
    obs.sigma_z = 2.0 * cross.real() / n;
    obs.sigma_y = -2.0 * cross.imag() / n;
    obs.excited_population = 0.5 * (1.0 + obs.sigma_z);
    return obs;
}

double parity_expectation(const MultiD1State& state) {
    state.check_shape();
    // exp(i*pi*n_hat)|d> = |-d>, so parity reduces to sign-flipped overlaps.
    const MatrixXcd s_ff =
        detail::overlap_matrix(state.displacements_plus, state.displacements_plus);
    const MatrixXcd s_gg =
        detail::overlap_matrix(state.displacements_minus, state.displacements_minus);
    const MatrixXcd s_fg_neg = detail::overlap_matrix(
        state.displacements_plus, (-state.displacements_minus).eval());

    const double n = state.amplitudes_plus.dot(s_ff * state.amplitudes_plus).real() +
                     state.amplitudes_minus.dot(s_gg * state.amplitudes_minus).real();
    const cxd cross = state.amplitudes_plus.dot(s_fg_neg * state.amplitudes_minus);
    return 2.0 * cross.real() / n;
}

double energy(const MultiD1State& state, const ModelParams& params,
              const DiscretizedBath& bath) {
    state.check_shape();
    const ModeTable modes = make_mode_table(params, bath);
    if (modes.omega.size() != state.mode_count())
        throw ValidationError("energy: bath size does not match the state");

    const MatrixXcd& f = state.displacements_plus;
    const MatrixXcd& g = state.displacements_minus;
    const VectorXcd& a = state.amplitudes_plus;
    const VectorXcd& b = state.amplitudes_minus;

    const MatrixXcd s_ff = detail::overlap_matrix(f, f);
    const MatrixXcd s_gg = detail::overlap_matrix(g, g);
    const MatrixXcd s_fg = detail::overlap_matrix(f, g);

    const MatrixXcd bos_ff = detail::weighted_inner(f, f, modes.omega);
    const MatrixXcd bos_gg = detail::weighted_inner(g, g, modes.omega);

    const VectorXcd half_lambda = (0.5 * modes.lambda).cast<cxd>();
    const MatrixXcd coup_ff =
        detail::pair_sum((f.conjugate() * half_lambda), (f * half_lambda));
    const MatrixXcd coup_gg =
        detail::pair_sum((g.conjugate() * half_lambda), (g * half_lambda));

    const cxd plus = a.dot((s_ff.cwiseProduct(bos_ff + coup_ff)) * a);
    const cxd minus = b.dot((s_gg.cwiseProduct(bos_gg - coup_gg)) * b);
    const cxd cross = a.dot(s_fg * b); // <+|sigma_z|-> block
    const double qubit = params.omega0 * cross.real();

    const double n = a.dot(s_ff * a).real() + b.dot(s_gg * b).real();
    return (plus.real() + minus.real() + qubit) / n;
}

double h_squared(const MultiD1State& state, const ModelParams& params,
                 const DiscretizedBath& bath) {
    state.check_shape();
    const ModeTable modes = make_mode_table(params, bath);
    if (modes.omega.size() != state.mode_count())
        throw ValidationError("h_squared: bath size does not match the state");

    const MatrixXcd& f = state.displacements_plus;
    const MatrixXcd& g = state.displacements_minus;
    const VectorXcd& a = state.amplitudes_plus;
    const VectorXcd& b = state.amplitudes_minus;

    const MatrixXcd s_ff = detail::overlap_matrix(f, f);
    const MatrixXcd s_gg = detail::overlap_matrix(g, g);
    const MatrixXcd s_fg = detail::overlap_matrix(f, g);

    // H^2 = omega0^2/4 + Hb^2 + X^2 + omega0 sigma_z Hb + sigma_x (Hb X + X Hb),
    // with Hb the free boson energy and X = (1/2) sum_j lambda_j (b_j^† + b_j).
    // Every matrix element reduces to products of per-pair single-mode sums.
    const VectorXd omega_sq = modes.omega.array().square();
    const VectorXd omega_lambda = modes.omega.array() * modes.lambda.array();
    const double lambda_sq_quarter = 0.25 * modes.lambda.squaredNorm();
    const double qubit_sq = 0.25 * params.omega0 * params.omega0;

    const VectorXcd half_lambda = (0.5 * modes.lambda).cast<cxd>();
    const VectorXcd half_omega_lambda = (0.5 * omega_lambda).cast<cxd>();

    auto branch_value = [&](const VectorXcd& amps, const MatrixXcd& disp,
                            const MatrixXcd& overlaps, double sign) {
        const MatrixXcd bos = detail::weighted_inner(disp, disp, modes.omega);
        const MatrixXcd bos_sq = detail::weighted_inner(disp, disp, omega_sq);
        const MatrixXcd coup = detail::pair_sum((disp.conjugate() * half_lambda),
                                                (disp * half_lambda));
        const MatrixXcd mixed = detail::pair_sum(
            (disp.conjugate() * half_omega_lambda), (disp * half_omega_lambda));
        MatrixXcd per_pair = bos.array().square().matrix() + bos_sq;
        per_pair += coup.array().square().matrix();
        per_pair.array() += qubit_sq + lambda_sq_quarter;
        per_pair += sign * (2.0 * bos.cwiseProduct(coup) + mixed);
        return amps.dot(overlaps.cwiseProduct(per_pair) * amps);
    };

    const cxd plus = branch_value(a, f, s_ff, +1.0);
    const cxd minus = branch_value(b, g, s_gg, -1.0);

    const MatrixXcd bos_fg = detail::weighted_inner(f, g, modes.omega);
    const cxd cross = a.dot(s_fg.cwiseProduct(bos_fg) * b);
    const double qubit_bos = 2.0 * params.omega0 * cross.real();

    const double n = a.dot(s_ff * a).real() + b.dot(s_gg * b).real();
    return (plus.real() + minus.real() + qubit_bos) / n;
}

ObservableSet observables(const MultiD1State& state, const ModelParams& params,
                          const DiscretizedBath& bath) {
    ObservableSet obs = qubit_observables(state);
    obs.energy = energy(state, params, bath);
    obs.parity = parity_expectation(state);
    return obs;
}

// ---------------------------- snapshot I/O ----------------------------------

namespace {

nlohmann::json complex_vector_to_json(const VectorXcd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back({v[i].real(), v[i].imag()});
    return out;
}

nlohmann::json complex_matrix_to_json(const MatrixXcd& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        out.push_back(std::move(row));
    }
    return out;
}

VectorXcd complex_vector_from_json(const nlohmann::json& j) {
    VectorXcd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Index>(i)] = cxd(j[i][0].get<double>(), j[i][1].get<double>());
    return v;
}

MatrixXcd complex_matrix_from_json(const nlohmann::json& j) {
    const Index rows = static_cast<Index>(j.size());
    const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
    MatrixXcd m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) {
            const auto& cell = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            m(r, c) = cxd(cell[0].get<double>(), cell[1].get<double>());
        }
    return m;
}

} // namespace

void save_snapshot(const std::filesystem::path& path, const MultiD1State& state) {
    state.check_shape();
    nlohmann::json j;
    j["format"] = "multid1-state";
    j["version"] = 1;
    j["multiplicity"] = state.multiplicity();
    j["n_bath_modes"] = state.mode_count() - 1;
    j["time"] = state.time;
    j["amplitudes_plus"] = complex_vector_to_json(state.amplitudes_plus);
    j["amplitudes_minus"] = complex_vector_to_json(state.amplitudes_minus);
    j["displacements_plus"] = complex_matrix_to_json(state.displacements_plus);
    j["displacements_minus"] = complex_matrix_to_json(state.displacements_minus);

    std::ofstream out(path);
    if (!out)
        throw ValidationError("save_snapshot: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

MultiD1State load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("load_snapshot: cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "multid1-state")
        throw ValidationError("load_snapshot: not a multid1-state file");

    MultiD1State state;
    state.time = j.at("time").get<double>();
    state.amplitudes_plus = complex_vector_from_json(j.at("amplitudes_plus"));
    state.amplitudes_minus = complex_vector_from_json(j.at("amplitudes_minus"));
    state.displacements_plus = complex_matrix_from_json(j.at("displacements_plus"));
    state.displacements_minus = complex_matrix_from_json(j.at("displacements_minus"));
    state.check_shape();
    return state;
}

} // namespace vrs
