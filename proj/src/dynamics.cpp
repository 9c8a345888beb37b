#include "vrs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "vrs/errors.hpp"

namespace vrs {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cxd = std::complex<double>;

namespace {

constexpr cxd kImag{0.0, 1.0};

// One qubit branch of the state: (A, F) with sigma_x eigenvalue `sign`, the
// other branch entering only through the sigma_z cross terms of H.
struct BranchView {
    const VectorXcd& amps;
    const MatrixXcd& disp;
    const VectorXcd& other_amps;
    const MatrixXcd& other_disp;
    double sign;
};

// The tangent vector of one branch is parametrized as
//   |Ddot> = sum_n u_n |s, f_n> + sum_{n,j} A_n fdot_nj b_j^† |s, f_n>,
// where u_n absorbs the amplitude and normalization-factor derivatives
// (Adot_n = u_n + A_n Re<f_n|fdot_n>). Projecting onto the same (amplitude-
// weighted) tangent basis yields a Hermitian system whose blocks only couple
// modes through the pair sums p_ln = f_l^H fdot_n; eliminating the
// displacement block therefore reduces the solve to the M x M coupling matrix
// plus an (M^2 + M) auxiliary system for (u, p).
struct BranchSolution {
    VectorXcd u;        // effective amplitude derivatives
    MatrixXcd disp_dot; // fdot_nj
    double tangent_sq = 0.0;
    double residual_num_sq = 0.0;
    double residual_den_sq = 0.0;
    double lambda_min = 0.0; // over the amplitude/displacement Gram blocks
    double lambda_max = 0.0;
};

struct BranchMatrices {
    MatrixXcd overlaps;   // S_ln
    VectorXcd rhs_amp;    // -i <s, f_l | H | D>
    MatrixXcd rhs_disp;   // -i A_l^* <s, f_l| b_i H | D>, M x J
    MatrixXcd coupling;   // W = (A_l^* A_n) S_ln
};

BranchMatrices assemble_branch(const BranchView& b, const ModeTable& modes,
                               double omega0) {
    const VectorXcd& a = b.amps;
    const MatrixXcd& f = b.disp;

    BranchMatrices m;
    m.overlaps = detail::overlap_matrix(f, f);
    const MatrixXcd cross = detail::overlap_matrix(f, b.other_disp);

    const MatrixXcd bos = detail::weighted_inner(f, f, modes.omega);
    const VectorXcd half_lambda = (0.5 * modes.lambda).cast<cxd>();
    const MatrixXcd coup =
        detail::pair_sum((f.conjugate() * half_lambda), (f * half_lambda));

    const MatrixXcd h_pair = m.overlaps.cwiseProduct(bos + b.sign * coup);

    VectorXcd rhs_amp = h_pair * a + (0.5 * omega0) * (cross * b.other_amps);

    // <f_l| b_i H |f_n> splits into f_ni * (pair sums + omega_i) plus the
    // commutator terms [b_i, X] = lambda_i/2 and the sigma_z cross block.
    MatrixXcd inner = h_pair * a.asDiagonal() * f;
    inner += (m.overlaps * a.asDiagonal() * f) * modes.omega.cast<cxd>().asDiagonal();
    inner += b.sign * (m.overlaps * a) * half_lambda.transpose();
    inner += (0.5 * omega0) * (cross * b.other_amps.asDiagonal() * b.other_disp);

    m.rhs_amp = (-kImag) * rhs_amp;
    m.rhs_disp = (-kImag) * (a.conjugate().asDiagonal() * inner);
    m.coupling =
        (a.conjugate() * a.transpose()).cwiseProduct(m.overlaps);
    return m;
}

BranchSolution solve_branch(const BranchView& b, const BranchMatrices& m,
                            double eps, bool want_condition) {
    const Index mult = b.amps.size();
    const MatrixXcd& s = m.overlaps;
    const MatrixXcd& f = b.disp;
    const VectorXcd& a = b.amps;

    MatrixXcd w_eps = m.coupling;
    w_eps.diagonal().array() += eps;
    const Eigen::LDLT<MatrixXcd> w_solver(w_eps);
    if (w_solver.info() != Eigen::Success)
        throw NumericalError("assemble_eom: displacement Gram factorization failed");

    MatrixXcd s_eps = s;
    s_eps.diagonal().array() += eps;

    const MatrixXcd g0 = w_solver.solve(m.rhs_disp);
    const MatrixXcd p0 = f.conjugate() * g0.transpose();
    const MatrixXcd gram_inner = f.conjugate() * f.transpose();
    const MatrixXcd w_conj_inv =
        w_solver.solve(MatrixXcd::Identity(mult, mult)).conjugate();

    // Reduced linear system over xi = [u; vec(P)], P_ln = f_l^H fdot_n.
    const Index dim = mult + mult * mult;
    MatrixXcd reduced(dim, dim);
    VectorXcd reduced_rhs(dim);
    reduced_rhs.head(mult) = m.rhs_amp;
    reduced_rhs.tail(mult * mult) = p0.reshaped();

    auto apply = [&](const VectorXcd& u, const MatrixXcd& p, VectorXcd& out) {
        const MatrixXcd sp = s.cwiseProduct(p);
        MatrixXcd q = s * u.asDiagonal();
        q += sp * a.asDiagonal();
        out.head(mult) = s_eps * u + sp * a;
        const MatrixXcd p_out =
            p + gram_inner * q.transpose() * a.conjugate().asDiagonal() * w_conj_inv;
        out.tail(mult * mult) = p_out.reshaped();
    };

    VectorXcd basis_u = VectorXcd::Zero(mult);
    MatrixXcd basis_p = MatrixXcd::Zero(mult, mult);
    VectorXcd column(dim);
    for (Index k = 0; k < dim; ++k) {
        if (k < mult)
            basis_u[k] = 1.0;
        else
            basis_p.reshaped()[k - mult] = 1.0;
        apply(basis_u, basis_p, column);
        reduced.col(k) = column;
        if (k < mult)
            basis_u[k] = 0.0;
        else
            basis_p.reshaped()[k - mult] = 0.0;
    }

    const Eigen::ColPivHouseholderQR<MatrixXcd> reduced_solver(reduced);
    const VectorXcd xi = reduced_solver.solve(reduced_rhs);

    BranchSolution sol;
    sol.u = xi.head(mult);
    const MatrixXcd p = xi.tail(mult * mult).reshaped(mult, mult);

    MatrixXcd q = s * sol.u.asDiagonal();
    q += s.cwiseProduct(p) * a.asDiagonal();
    sol.disp_dot =
        w_solver.solve(m.rhs_disp - a.conjugate().asDiagonal() * (q * f));

    // Residual and tangent norm via the structured matvec; the pair sums of
    // the solved displacement derivatives are used, not the auxiliaries.
    const MatrixXcd p_actual = f.conjugate() * sol.disp_dot.transpose();
    const MatrixXcd sp_actual = s.cwiseProduct(p_actual);
    const VectorXcd lx_amp = s * sol.u + sp_actual * a;
    MatrixXcd lx_disp = s * sol.u.asDiagonal() * f;
    lx_disp += s * a.asDiagonal() * sol.disp_dot;
    lx_disp += sp_actual * a.asDiagonal() * f;
    lx_disp = a.conjugate().asDiagonal() * lx_disp;

    sol.tangent_sq = lx_amp.dot(sol.u).real() +
                     (sol.disp_dot.conjugate().cwiseProduct(lx_disp)).sum().real();
    // tangent_sq = x^H L x computed as (Lx)^H x; Hermitian L keeps it real.
    sol.residual_num_sq = (lx_amp + eps * sol.u - m.rhs_amp).squaredNorm() +
                          (lx_disp + eps * sol.disp_dot - m.rhs_disp).squaredNorm();
    sol.residual_den_sq = m.rhs_amp.squaredNorm() + m.rhs_disp.squaredNorm();

    if (want_condition) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es_s(s, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es_w(m.coupling,
                                                      Eigen::EigenvaluesOnly);
        sol.lambda_min = std::max(
            0.0, std::min(es_s.eigenvalues().minCoeff(), es_w.eigenvalues().minCoeff()));
        sol.lambda_max =
            std::max(es_s.eigenvalues().maxCoeff(), es_w.eigenvalues().maxCoeff());
    }
    return sol;
}

struct EomInternal {
    MultiD1Derivative derivative;
    double tangent_sq;
    double residual;
    double eps_abs;
    double norm_value;
    double lambda_min;
    double lambda_max;
};

EomInternal solve_eom(const MultiD1State& state, const ModelParams& params,
                      const DiscretizedBath& bath, double eps_rel,
                      bool want_condition) {
    state.check_shape();
    const ModeTable modes = make_mode_table(params, bath);
    if (modes.omega.size() != state.mode_count())
        throw ValidationError("assemble_eom: bath size does not match the state");

    const BranchView plus{state.amplitudes_plus, state.displacements_plus,
                          state.amplitudes_minus, state.displacements_minus, +1.0};
    const BranchView minus{state.amplitudes_minus, state.displacements_minus,
                           state.amplitudes_plus, state.displacements_plus, -1.0};

    const BranchMatrices mat_plus = assemble_branch(plus, modes, params.omega0);
    const BranchMatrices mat_minus = assemble_branch(minus, modes, params.omega0);

    // Mean diagonal magnitude of the full Gram system, both branches.
    const Index mult = state.multiplicity();
    const Index n_modes = state.mode_count();
    double diag_sum = 2.0 * static_cast<double>(mult);
    for (Index l = 0; l < mult; ++l) {
        diag_sum += std::norm(state.amplitudes_plus[l]) *
                    (static_cast<double>(n_modes) +
                     state.displacements_plus.row(l).squaredNorm());
        diag_sum += std::norm(state.amplitudes_minus[l]) *
                    (static_cast<double>(n_modes) +
                     state.displacements_minus.row(l).squaredNorm());
    }
    const double mean_diag =
        diag_sum / (2.0 * static_cast<double>(mult) * (1.0 + static_cast<double>(n_modes)));
    const double eps_abs = eps_rel * mean_diag;

    const BranchSolution sol_plus = solve_branch(plus, mat_plus, eps_abs, want_condition);
    const BranchSolution sol_minus =
        solve_branch(minus, mat_minus, eps_abs, want_condition);

    EomInternal out;
    out.derivative.displacements_plus = sol_plus.disp_dot;
    out.derivative.displacements_minus = sol_minus.disp_dot;
    // Adot_n = u_n + A_n Re<f_n|fdot_n> restores the coherent-state
    // normalization-factor contribution.
    const VectorXd re_pair_plus =
        (state.displacements_plus.conjugate().cwiseProduct(sol_plus.disp_dot))
            .rowwise()
            .sum()
            .real();
    const VectorXd re_pair_minus =
        (state.displacements_minus.conjugate().cwiseProduct(sol_minus.disp_dot))
            .rowwise()
            .sum()
            .real();
    out.derivative.amplitudes_plus =
        sol_plus.u + state.amplitudes_plus.cwiseProduct(re_pair_plus.cast<cxd>());
    out.derivative.amplitudes_minus =
        sol_minus.u + state.amplitudes_minus.cwiseProduct(re_pair_minus.cast<cxd>());

    out.tangent_sq = sol_plus.tangent_sq + sol_minus.tangent_sq;
    const double den = sol_plus.residual_den_sq + sol_minus.residual_den_sq;
    const double num = sol_plus.residual_num_sq + sol_minus.residual_num_sq;
    out.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    out.eps_abs = eps_abs;
    out.norm_value =
        state.amplitudes_plus.dot(mat_plus.overlaps * state.amplitudes_plus).real() +
        state.amplitudes_minus.dot(mat_minus.overlaps * state.amplitudes_minus).real();
    out.lambda_min = std::min(sol_plus.lambda_min, sol_minus.lambda_min);
    out.lambda_max = std::max(sol_plus.lambda_max, sol_minus.lambda_max);

    if (!std::isfinite(out.residual) || out.residual > 1e-6)
        throw NumericalError("assemble_eom: solver residual " +
                             std::to_string(out.residual) +
                             " exceeds 1e-6 (Gram system singular beyond "
                             "regularization)");
    return out;
}

MultiD1State apply_derivative(const MultiD1State& state, const MultiD1Derivative& d,
                              double h) {
    MultiD1State out = state;
    out.amplitudes_plus += h * d.amplitudes_plus;
    out.amplitudes_minus += h * d.amplitudes_minus;
    out.displacements_plus += h * d.displacements_plus;
    out.displacements_minus += h * d.displacements_minus;
    return out;
}

// Tangent-space norm <Ddot|Ddot> for a given parameter derivative (used by
// deviation(), which may receive a derivative not produced in this translation
// unit's solve path).
double tangent_norm_sq(const MultiD1State& state, const MultiD1Derivative& d) {
    auto branch = [](const VectorXcd& a, const MatrixXcd& f, const VectorXcd& adot,
                     const MatrixXcd& fdot) {
        const MatrixXcd s = detail::overlap_matrix(f, f);
        const VectorXd re_pair =
            (f.conjugate().cwiseProduct(fdot)).rowwise().sum().real();
        const VectorXcd u = adot - a.cwiseProduct(re_pair.cast<cxd>());
        const MatrixXcd p = f.conjugate() * fdot.transpose();
        const MatrixXcd sp = s.cwiseProduct(p);
        const VectorXcd lx_amp = s * u + sp * a;
        MatrixXcd lx_disp = s * u.asDiagonal() * f;
        lx_disp += s * a.asDiagonal() * fdot;
        lx_disp += sp * a.asDiagonal() * f;
        lx_disp = a.conjugate().asDiagonal() * lx_disp;
        return lx_amp.dot(u).real() +
               (fdot.conjugate().cwiseProduct(lx_disp)).sum().real();
    };
    return branch(state.amplitudes_plus, state.displacements_plus, d.amplitudes_plus,
                  d.displacements_plus) +
           branch(state.amplitudes_minus, state.displacements_minus,
                  d.amplitudes_minus, d.displacements_minus);
}

} // namespace

EomSolveReport assemble_eom(const MultiD1State& state, const ModelParams& params,
                            const DiscretizedBath& bath, double regularization_eps) {
    if (regularization_eps < 0.0)
        throw ValidationError("assemble_eom: regularization_eps must be >= 0");
    EomInternal internal = solve_eom(state, params, bath, regularization_eps, true);

    EomSolveReport report;
    report.derivative = std::move(internal.derivative);
    report.regularization_used = internal.eps_abs;
    report.residual = internal.residual;
    report.tangent_norm_sq = internal.tangent_sq;
    report.state_norm = internal.norm_value;
    report.gram_condition =
        (internal.lambda_max + internal.eps_abs) / (internal.lambda_min + internal.eps_abs);
    return report;
}

MultiD1State step_rk4(const MultiD1State& state, double dt, const ModelParams& params,
                      const DiscretizedBath& bath, double regularization_eps) {
    if (!(dt > 0.0))
        throw ValidationError("step_rk4: dt must be > 0");
    const auto f = [&](const MultiD1State& s) {
        return solve_eom(s, params, bath, regularization_eps, false).derivative;
    };
    const MultiD1Derivative k1 = f(state);
    const MultiD1Derivative k2 = f(apply_derivative(state, k1, 0.5 * dt));
    const MultiD1Derivative k3 = f(apply_derivative(state, k2, 0.5 * dt));
    const MultiD1Derivative k4 = f(apply_derivative(state, k3, dt));

    MultiD1State out = state;
    const double w = dt / 6.0;
    out.amplitudes_plus +=
        w * (k1.amplitudes_plus + 2.0 * k2.amplitudes_plus + 2.0 * k3.amplitudes_plus +
             k4.amplitudes_plus);
    out.amplitudes_minus += w * (k1.amplitudes_minus + 2.0 * k2.amplitudes_minus +
                                 2.0 * k3.amplitudes_minus + k4.amplitudes_minus);
    out.displacements_plus +=
        w * (k1.displacements_plus + 2.0 * k2.displacements_plus +
             2.0 * k3.displacements_plus + k4.displacements_plus);
    out.displacements_minus +=
        w * (k1.displacements_minus + 2.0 * k2.displacements_minus +
             2.0 * k3.displacements_minus + k4.displacements_minus);
    out.time = state.time + dt;
    return out;
}

double deviation(const MultiD1State& state, const MultiD1Derivative& derivative,
                 const ModelParams& params, const DiscretizedBath& bath) {
    const double n = norm(state);
    const double h2 = h_squared(state, params, bath);
    const double tangent = tangent_norm_sq(state, derivative) / n;
    const double omega0_sq = params.omega0 * params.omega0;
    double value = (h2 - tangent) / omega0_sq;
    if (value < -1e-6)
        throw NumericalError("deviation: sigma^2 = " + std::to_string(value) +
                             " strongly negative");
    return value < 0.0 ? 0.0 : value;
}

namespace {

// RK4 step reusing an already-solved first stage.
MultiD1State step_with_k1(const MultiD1State& state, const MultiD1Derivative& k1,
                          double dt, const ModelParams& params,
                          const DiscretizedBath& bath, double eps_rel) {
    const auto f = [&](const MultiD1State& s) {
        return solve_eom(s, params, bath, eps_rel, false).derivative;
    };
    const MultiD1Derivative k2 = f(apply_derivative(state, k1, 0.5 * dt));
    const MultiD1Derivative k3 = f(apply_derivative(state, k2, 0.5 * dt));
    const MultiD1Derivative k4 = f(apply_derivative(state, k3, dt));

    MultiD1State out = state;
    const double w = dt / 6.0;
    out.amplitudes_plus +=
        w * (k1.amplitudes_plus + 2.0 * k2.amplitudes_plus + 2.0 * k3.amplitudes_plus +
             k4.amplitudes_plus);
    out.amplitudes_minus += w * (k1.amplitudes_minus + 2.0 * k2.amplitudes_minus +
                                 2.0 * k3.amplitudes_minus + k4.amplitudes_minus);
    out.displacements_plus +=
        w * (k1.displacements_plus + 2.0 * k2.displacements_plus +
             2.0 * k3.displacements_plus + k4.displacements_plus);
    out.displacements_minus +=
        w * (k1.displacements_minus + 2.0 * k2.displacements_minus +
             2.0 * k3.displacements_minus + k4.displacements_minus);
    out.time = state.time + dt;
    return out;
}

Eigen::VectorXd bath_part(const Eigen::VectorXd& all_modes) {
    return all_modes.tail(all_modes.size() - 1);
}

} // namespace

TrajectoryRecord propagate(const MultiD1State& initial, const ModelParams& params,
                           const DiscretizedBath& bath,
                           const PropagateOptions& options) {
    if (!(options.t_f > 0.0))
        throw ValidationError("propagate: t_f must be > 0");
    if (!(options.dt > 0.0))
        throw ValidationError("propagate: dt must be > 0");
    if (options.output_stride < 1)
        throw ValidationError("propagate: output_stride must be >= 1");

    const long n_steps = std::lround(options.t_f / options.dt);
    const long tail_start_step = std::lround(0.9 * static_cast<double>(n_steps));

    TrajectoryRecord record;
    MultiD1State state = initial;
    Eigen::VectorXd tail_reference;

    auto pending_snapshots = options.snapshot_times;
    std::sort(pending_snapshots.begin(), pending_snapshots.end());
    std::size_t next_snapshot = 0;

    try {
        for (long step = 0; step <= n_steps; ++step) {
            const double t = initial.time + static_cast<double>(step) * options.dt;
            const bool record_now = (step % options.output_stride == 0) || step == n_steps;

            EomInternal eom = solve_eom(state, params, bath,
                                        options.regularization_eps, false);
            if (record_now) {
                ObservableSet obs = observables(state, params, bath);
                const double h2 = h_squared(state, params, bath);
                double sigma2 =
                    (h2 - eom.tangent_sq / eom.norm_value) /
                    (params.omega0 * params.omega0);
                if (sigma2 < -1e-6)
                    throw NumericalError("propagate: sigma^2 strongly negative");
                if (sigma2 < 0.0)
                    sigma2 = 0.0;
                record.times.push_back(t);
                record.observables.push_back(obs);
                record.sigma2.push_back(sigma2);
                record.sigma2_max = std::max(record.sigma2_max, sigma2);
            }
            if (step == tail_start_step)
                tail_reference = bath_part(photon_numbers(state));
            while (next_snapshot < pending_snapshots.size() &&
                   t >= pending_snapshots[next_snapshot] - 0.5 * options.dt) {
                record.photon_snapshots.emplace_back(t, photon_numbers(state));
                ++next_snapshot;
            }
            if (step == n_steps)
                break;
            state = step_with_k1(state, eom.derivative, options.dt, params, bath,
                                 options.regularization_eps);
        }
    } catch (const NumericalError& err) {
        record.aborted = true;
        record.abort_reason = err.what();
    }

    record.final_state = state;
    record.final_photon_numbers = photon_numbers(state);
    if (tail_reference.size() > 0) {
        const Eigen::VectorXd tail_final = bath_part(record.final_photon_numbers);
        const double scale = tail_final.cwiseAbs().maxCoeff();
        record.spectrum_tail_change =
            scale > 0.0 ? (tail_final - tail_reference).cwiseAbs().maxCoeff() / scale
                        : 0.0;
    }
    record.accepted = !record.aborted && record.sigma2_max < 1e-2;
    return record;
}

TrajectoryRecord propagate(const MultiD1State& initial, const ModelParams& params,
                           const DiscretizedBath& bath, double t_f, double dt,
                           int output_stride, double regularization_eps) {
    PropagateOptions options;
    options.t_f = t_f;
    options.dt = dt;
    options.output_stride = output_stride;
    options.regularization_eps = regularization_eps;
    return propagate(initial, params, bath, options);
}

} // namespace vrs
