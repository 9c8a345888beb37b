#include "fock_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace vrs::testing {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cxd = std::complex<double>;

FockOracle::FockOracle(const ModelParams& params, const DiscretizedBath& bath,
                       int n_max)
    : omega0_(params.omega0), n_max_(n_max) {
    const ModeTable modes = make_mode_table(params, bath);
    omega_.assign(modes.omega.data(), modes.omega.data() + modes.omega.size());
    lambda_.assign(modes.lambda.data(), modes.lambda.data() + modes.lambda.size());

    boson_dim_ = 1;
    for (std::size_t j = 0; j < omega_.size(); ++j)
        boson_dim_ *= (n_max_ + 1);
    dim_ = 2 * boson_dim_;
    if (dim_ > 6000)
        throw std::runtime_error("FockOracle: basis too large");

    // q = 0 is |e>, q = 1 is |g>; sigma_z = diag(+1, -1), sigma_x flips.
    h_ = MatrixXcd::Zero(dim_, dim_);
    for (Index idx = 0; idx < dim_; ++idx) {
        const int q = qubit(idx);
        double diag = 0.5 * omega0_ * (q == 0 ? 1.0 : -1.0);
        for (int j = 0; j < mode_count(); ++j)
            diag += omega_[static_cast<std::size_t>(j)] * occupation(idx, j);
        h_(idx, idx) = diag;

        Index stride = 1;
        for (int j = 0; j < mode_count(); ++j) {
            const int n = occupation(idx, j);
            const double half_lambda = 0.5 * lambda_[static_cast<std::size_t>(j)];
            const Index flipped = (q == 0) ? idx + boson_dim_ : idx - boson_dim_;
            if (n < n_max_) // sigma_x b_j^dagger
                h_(flipped + stride, idx) += half_lambda * std::sqrt(n + 1.0);
            if (n > 0) // sigma_x b_j
                h_(flipped - stride, idx) += half_lambda * std::sqrt(double(n));
            stride *= (n_max_ + 1);
        }
    }
}

int FockOracle::occupation(Index index, int mode) const {
    Index rest = index % boson_dim_;
    for (int j = 0; j < mode; ++j)
        rest /= (n_max_ + 1);
    return static_cast<int>(rest % (n_max_ + 1));
}

VectorXcd FockOracle::to_vector(const MultiD1State& state) const {
    state.check_shape();
    if (state.mode_count() != mode_count())
        throw std::runtime_error("FockOracle: mode count mismatch");

    VectorXcd psi = VectorXcd::Zero(dim_);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Index n = 0; n < state.multiplicity(); ++n) {
        for (int branch = 0; branch < 2; ++branch) {
            const cxd amp = branch == 0 ? state.amplitudes_plus[n]
                                        : state.amplitudes_minus[n];
            if (amp == cxd(0.0, 0.0))
                continue;
            const auto& disp = branch == 0 ? state.displacements_plus
                                           : state.displacements_minus;
            // coherent product state over all modes
            VectorXcd boson = VectorXcd::Zero(boson_dim_);
            for (Index b = 0; b < boson_dim_; ++b) {
                cxd value = 1.0;
                for (int j = 0; j < mode_count(); ++j) {
                    const cxd d = disp(n, j);
                    const int occ = occupation(b, j);
                    cxd term = std::exp(-0.5 * std::norm(d));
                    for (int p = 1; p <= occ; ++p)
                        term *= d / std::sqrt(double(p));
                    value *= term;
                }
                boson[b] = value;
            }
            // |+> = (|e> + |g>)/sqrt(2), |-> = (|e> - |g>)/sqrt(2)
            const double g_sign = branch == 0 ? 1.0 : -1.0;
            psi.segment(0, boson_dim_) += amp * inv_sqrt2 * boson;
            psi.segment(boson_dim_, boson_dim_) += amp * inv_sqrt2 * g_sign * boson;
        }
    }
    return psi;
}

double FockOracle::sigma_x(const VectorXcd& psi) const {
    // sigma_x |e,n> = |g,n>
    cxd value = 0.0;
    for (Index b = 0; b < boson_dim_; ++b)
        value += std::conj(psi[b]) * psi[b + boson_dim_] +
                 std::conj(psi[b + boson_dim_]) * psi[b];
    return value.real();
}

double FockOracle::sigma_y(const VectorXcd& psi) const {
    // sigma_y = i(|g><e| - |e><g|)
    cxd value = 0.0;
    for (Index b = 0; b < boson_dim_; ++b)
        value += cxd(0, 1) * (std::conj(psi[b + boson_dim_]) * psi[b] -
                              std::conj(psi[b]) * psi[b + boson_dim_]);
    return value.real();
}

double FockOracle::sigma_z(const VectorXcd& psi) const {
    return psi.segment(0, boson_dim_).squaredNorm() -
           psi.segment(boson_dim_, boson_dim_).squaredNorm();
}

double FockOracle::photon_number(const VectorXcd& psi, int mode) const {
    double value = 0.0;
    for (Index idx = 0; idx < dim_; ++idx)
        value += occupation(idx, mode) * std::norm(psi[idx]);
    return value;
}

double FockOracle::parity(const VectorXcd& psi) const {
    double value = 0.0;
    for (Index idx = 0; idx < dim_; ++idx) {
        int total = 0;
        for (int j = 0; j < mode_count(); ++j)
            total += occupation(idx, j);
        const double boson_sign = (total % 2 == 0) ? 1.0 : -1.0;
        const double qubit_sign = qubit(idx) == 0 ? 1.0 : -1.0;
        value += qubit_sign * boson_sign * std::norm(psi[idx]);
    }
    return value;
}

double FockOracle::energy(const VectorXcd& psi) const {
    return psi.dot(h_ * psi).real() / psi.squaredNorm();
}

double FockOracle::h_squared(const VectorXcd& psi) const {
    return (h_ * psi).squaredNorm() / psi.squaredNorm();
}

VectorXcd FockOracle::apply_raise(const VectorXcd& psi, int mode) const {
    VectorXcd out = VectorXcd::Zero(dim_);
    Index stride = 1;
    for (int j = 0; j < mode; ++j)
        stride *= (n_max_ + 1);
    for (Index idx = 0; idx < dim_; ++idx) {
        const int n = occupation(idx, mode);
        if (n < n_max_)
            out[idx + stride] += std::sqrt(n + 1.0) * psi[idx];
    }
    return out;
}

VectorXcd FockOracle::evolve(const VectorXcd& psi0, double t) const {
    if (!eig_ready_) {
        eig_.compute(h_);
        eig_ready_ = true;
    }
    const VectorXcd coeffs = eig_.eigenvectors().adjoint() * psi0;
    VectorXcd phased(coeffs.size());
    for (Index i = 0; i < coeffs.size(); ++i)
        phased[i] = coeffs[i] * std::exp(cxd(0.0, -eig_.eigenvalues()[i] * t));
    return eig_.eigenvectors() * phased;
}

} // namespace vrs::testing
