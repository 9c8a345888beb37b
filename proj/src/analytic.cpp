#include "vrs/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "vrs/errors.hpp"
#include "vrs/quadrature.hpp"

namespace vrs {

using cxd = std::complex<double>;

namespace {

double shift_domain_upper(const ModelParams& p) {
    return std::max(8.0 * p.omega_cut, 40.0 * p.omega0);
}

// P int_0^X factor(x) J(x) / (omega - x) dx with the shared PV machinery.
// Both treatments use this with their own kernel factor, so the reduction
// identity holds down to floating rounding.
double pv_shift(double omega, const ModelParams& params,
                const std::function<double(double)>& factor) {
    if (!(omega > 0.0))
        throw ValidationError("level shift: omega must be > 0");
    const double upper = shift_domain_upper(params);
    if (!(omega < upper))
        throw ValidationError("level shift: omega exceeds the integration domain");
    if (params.alpha == 0.0)
        return 0.0;
    auto h = [&](double x) { return factor(x) * spectral_density(x, params); };
    return principal_value(h, omega, upper);
}

double renorm_factor(double x, double eta_omega0) {
    const double r = eta_omega0 / (eta_omega0 + x);
    return r * r;
}

// Reservoir part of the eta exponent: Int_0^inf J(x)/(x + eta*w0)^2 dx.
double eta_reservoir_integral(const ModelParams& params, double eta) {
    if (params.alpha == 0.0)
        return 0.0;
    const double a = eta * params.omega0;
    auto f = [&](double x) {
        const double d = x + a;
        return spectral_density(x, params) / (d * d);
    };
    return integrate_half_line(f, 0.0, params.omega_cut, 1e-12, 1e-16);
}

double eta_rhs(const ModelParams& params, double eta) {
    const double cavity = params.lambda_c / (params.omega_c + eta * params.omega0);
    const double exponent =
        -0.5 * cavity * cavity - 0.5 * eta_reservoir_integral(params, eta);
    return std::exp(exponent);
}

} // namespace

double solve_eta(const ModelParams& params) {
    params.validate();
    double eta = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double rhs = eta_rhs(params, eta);
        if (std::abs(eta - rhs) < 1e-10)
            return eta;
        eta = 0.5 * eta + 0.5 * rhs;
    }
    // Damped iteration stalled; g(eta) = eta - rhs(eta) changes sign on (0, 1]
    // because rhs is bounded in (0, 1].
    double lo = 1e-12;
    double hi = 1.0;
    if (!(lo - eta_rhs(params, lo) < 0.0))
        throw NumericalError("solve_eta: no sign change for bisection");
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid - eta_rhs(params, mid);
        if (std::abs(g) < 1e-10)
            return mid;
        (g < 0.0 ? lo : hi) = mid;
    }
    throw NumericalError("solve_eta: bisection did not converge, residual " +
                         std::to_string(hi - eta_rhs(params, hi)));
}

double trwa_shift(double omega, const ModelParams& params, double eta) {
    const double eta_omega0 = eta * params.omega0;
    return pv_shift(omega, params,
                    [eta_omega0](double x) { return renorm_factor(x, eta_omega0); });
}

double trwa_rate(double omega, const ModelParams& params, double eta) {
    if (omega < 0.0)
        throw ValidationError("trwa_rate: omega must be >= 0");
    return std::numbers::pi * renorm_factor(omega, eta * params.omega0) *
           spectral_density(omega, params);
}

double rwa_shift(double omega, const ModelParams& params) {
    return pv_shift(omega, params, [](double) { return 0.25; });
}

double rwa_rate(double omega, const ModelParams& params) {
    if (omega < 0.0)
        throw ValidationError("rwa_rate: omega must be >= 0");
    return 0.25 * std::numbers::pi * spectral_density(omega, params);
}

double TrwaQuantities::shift(double omega) const {
    return trwa_shift(omega, params, eta);
}

double TrwaQuantities::rate(double omega) const {
    return trwa_rate(omega, params, eta);
}

TrwaQuantities make_trwa(const ModelParams& params) {
    TrwaQuantities q;
    q.params = params;
    q.eta = solve_eta(params);
    const double eta_omega0 = q.eta * params.omega0;
    q.lambda_tilde_c = eta_omega0 * params.lambda_c / (eta_omega0 + params.omega_c);
    return q;
}

std::string to_string(SpectrumMethod method) {
    switch (method) {
    case SpectrumMethod::multid1: return "multid1";
    case SpectrumMethod::trwa: return "trwa";
    case SpectrumMethod::rwa: return "rwa";
    }
    return "unknown";
}

std::vector<double> uniform_grid(double upper, int n) {
    if (!(upper > 0.0) || n < 1)
        throw ValidationError("uniform_grid: need upper > 0 and n >= 1");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] =
            upper * static_cast<double>(i + 1) / static_cast<double>(n);
    return grid;
}

namespace {

// Shared evaluator for the transformed spectrum and its rotating-wave
// reduction. The reduction replaces the dressed couplings by lambda/2, the
// kernel factor by 1/4, the pole frequency by omega0, and drops the two small
// additive terms.
struct LineShapeKnobs {
    double qubit_pole;                    // eta*w0, or w0 when reduced
    std::function<double(double)> kernel; // renormalization factor in the shift/rate
    std::function<double(double, double)> coupling_map; // (lambda_j, w_j) -> dressed
    bool small_terms;                                   // numerator shift + direct term
};

LineShapeKnobs trwa_knobs(const ModelParams& params, double eta) {
    const double eta_omega0 = eta * params.omega0;
    LineShapeKnobs knobs;
    knobs.qubit_pole = eta_omega0;
    knobs.kernel = [eta_omega0](double x) { return renorm_factor(x, eta_omega0); };
    knobs.coupling_map = [eta_omega0](double lambda, double omega) {
        return eta_omega0 * lambda / (eta_omega0 + omega);
    };
    knobs.small_terms = true;
    return knobs;
}

LineShapeKnobs reduced_knobs(const ModelParams&) {
    LineShapeKnobs knobs;
    knobs.qubit_pole = 0.0; // set per params below
    knobs.kernel = [](double) { return 0.25; };
    knobs.coupling_map = [](double lambda, double) { return 0.5 * lambda; };
    knobs.small_terms = false;
    return knobs;
}

std::vector<double> line_shape_values(const std::vector<double>& grid,
                                      const std::vector<double>& couplings,
                                      const ModelParams& params,
                                      const LineShapeKnobs& knobs, double eta) {
    const double eta_omega0 = eta * params.omega0;
    const double lamc_tilde = knobs.coupling_map(params.lambda_c, params.omega_c);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        const double lam = couplings[i];
        const double lam_tilde = knobs.coupling_map(lam, w);
        const double shift = pv_shift(w, params, knobs.kernel);
        const double rate = std::numbers::pi * knobs.kernel(w) *
                            spectral_density(w, params);
        const cxd qubit_term(w - knobs.qubit_pole - shift, rate);

        const double direct =
            knobs.small_terms ? lam / (2.0 * (w + eta_omega0)) : 0.0;
        cxd amplitude;
        if (params.lambda_c == 0.0) {
            amplitude = lam_tilde / qubit_term + direct;
        } else if (w == params.omega_c) {
            // The two contributions cancel algebraically at the cavity line.
            values[i] = 0.0;
            continue;
        } else {
            const double numerator_shift =
                knobs.small_terms ? lamc_tilde * lamc_tilde / (2.0 * eta_omega0) : 0.0;
            amplitude = lam_tilde * (w - params.omega_c + numerator_shift) /
                            ((w - params.omega_c) * qubit_term -
                             lamc_tilde * lamc_tilde) +
                        direct;
        }
        values[i] = std::norm(amplitude);
    }
    return values;
}

std::vector<double> continuum_couplings(const std::vector<double>& grid,
                                        const ModelParams& params, double* spacing) {
    if (grid.size() < 2)
        throw ValidationError("spectrum: continuum grid needs at least 2 points");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] > 0.0) || !(grid[i] < grid[i + 1]))
            throw ValidationError("spectrum: grid must be positive and increasing");
    const double h = grid[1] - grid[0];
    std::vector<double> couplings(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        couplings[i] = std::sqrt(spectral_density(grid[i], params) * h);
    *spacing = h;
    return couplings;
}

SpectrumResult make_result(SpectrumMethod method, std::vector<double> grid,
                           std::vector<double> values, const ModelParams& params,
                           double eta, const std::string& measure) {
    SpectrumResult out;
    out.method = method;
    out.frequencies = std::move(grid);
    out.values = std::move(values);
    out.metadata["method"] = to_string(method);
    out.metadata["omega0"] = std::to_string(params.omega0);
    out.metadata["omega_c"] = std::to_string(params.omega_c);
    out.metadata["lambda_c"] = std::to_string(params.lambda_c);
    out.metadata["alpha"] = std::to_string(params.alpha);
    out.metadata["omega_cut"] = std::to_string(params.omega_cut);
    out.metadata["coupling_measure"] = measure;
    if (method == SpectrumMethod::trwa)
        out.metadata["eta"] = std::to_string(eta);
    return out;
}

std::vector<double> rwa_values(const std::vector<double>& grid,
                               const std::vector<double>& couplings,
                               const ModelParams& params) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        const double lam_sq_quarter = 0.25 * couplings[i] * couplings[i];
        if (params.lambda_c > 0.0 && w == params.omega_c) {
            values[i] = 0.0;
            continue;
        }
        double detuning = w - params.omega0 - rwa_shift(w, params);
        if (params.lambda_c > 0.0)
            detuning -= 0.25 * params.lambda_c * params.lambda_c / (w - params.omega_c);
        const double rate = rwa_rate(w, params);
        values[i] = lam_sq_quarter / (detuning * detuning + rate * rate);
    }
    return values;
}

} // namespace

SpectrumResult trwa_spectrum(const std::vector<double>& grid, const ModelParams& params) {
    params.validate();
    const double eta = solve_eta(params);
    double spacing = 0.0;
    const auto couplings = continuum_couplings(grid, params, &spacing);
    auto values = line_shape_values(grid, couplings, params, trwa_knobs(params, eta), eta);
    return make_result(SpectrumMethod::trwa, grid, std::move(values), params, eta,
                       "continuum:J(w)*dw, dw=" + std::to_string(spacing));
}

SpectrumResult trwa_spectrum(const DiscretizedBath& bath, const ModelParams& params) {
    params.validate();
    const double eta = solve_eta(params);
    auto values = line_shape_values(bath.frequencies, bath.couplings, params,
                                    trwa_knobs(params, eta), eta);
    return make_result(SpectrumMethod::trwa, bath.frequencies, std::move(values),
                       params, eta, "discrete");
}

SpectrumResult rwa_spectrum(const std::vector<double>& grid, const ModelParams& params) {
    params.validate();
    double spacing = 0.0;
    const auto couplings = continuum_couplings(grid, params, &spacing);
    return make_result(SpectrumMethod::rwa, grid, rwa_values(grid, couplings, params),
                       params, 1.0, "continuum:J(w)*dw, dw=" + std::to_string(spacing));
}

SpectrumResult rwa_spectrum(const DiscretizedBath& bath, const ModelParams& params) {
    params.validate();
    return make_result(SpectrumMethod::rwa, bath.frequencies,
                       rwa_values(bath.frequencies, bath.couplings, params), params,
                       1.0, "discrete");
}

SpectrumResult rwa_spectrum_via_trwa_reduction(const std::vector<double>& grid,
                                               const ModelParams& params) {
    params.validate();
    double spacing = 0.0;
    const auto couplings = continuum_couplings(grid, params, &spacing);
    LineShapeKnobs knobs = reduced_knobs(params);
    knobs.qubit_pole = params.omega0;
    auto values = line_shape_values(grid, couplings, params, knobs, 1.0);
    return make_result(SpectrumMethod::rwa, grid, std::move(values), params, 1.0,
                       "continuum:J(w)*dw, dw=" + std::to_string(spacing));
}

SpectrumResult rwa_spectrum_via_trwa_reduction(const DiscretizedBath& bath,
                                               const ModelParams& params) {
    params.validate();
    LineShapeKnobs knobs = reduced_knobs(params);
    knobs.qubit_pole = params.omega0;
    auto values = line_shape_values(bath.frequencies, bath.couplings, params, knobs, 1.0);
    return make_result(SpectrumMethod::rwa, bath.frequencies, std::move(values), params,
                       1.0, "discrete");
}

PolaritonPoles polariton_poles(const ModelParams& params) {
    params.validate();
    if (!(params.lambda_c > 0.0))
        throw ValidationError("polariton_poles: lambda_c must be > 0");
    const TrwaQuantities q = make_trwa(params);
    const double eta_omega0 = q.eta * params.omega0;

    // One self-consistency pass: evaluate the shift at the dressed qubit
    // frequency, then freeze shift and rate at the shifted reference.
    const double reference = eta_omega0 + q.shift(eta_omega0);
    const cxd qubit_pole(eta_omega0 + q.shift(reference), -q.rate(reference));

    const cxd half_sum = 0.5 * (params.omega_c + qubit_pole);
    const cxd half_diff = 0.5 * (params.omega_c - qubit_pole);
    const cxd root = std::sqrt(half_diff * half_diff +
                               cxd(q.lambda_tilde_c * q.lambda_tilde_c, 0.0));

    PolaritonPoles poles;
    poles.lower = half_sum - root;
    poles.upper = half_sum + root;
    if (poles.lower.real() > poles.upper.real())
        std::swap(poles.lower, poles.upper);
    return poles;
}

} // namespace vrs
