#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "vrs/model.hpp"

namespace vrs {

// Renormalized quantities of the polaron-transformed rotating-wave treatment.
// After the transformation the counter-rotating couplings survive only through
// eta and the dressed couplings lambda_tilde.
struct TrwaQuantities {
    ModelParams params;
    double eta = 1.0;            // in (0, 1]; 1 exactly for a decoupled qubit
    double lambda_tilde_c = 0.0; // eta*w0*lambda_c / (eta*w0 + w_c)

    double shift(double omega) const; // level-shift function, < 0 near omega0
    double rate(double omega) const;  // >= 0
};

// Solves eta = exp[-(lambda_c/(w_c+eta*w0))^2/2 - (1/2)Int J(x)/(x+eta*w0)^2 dx]
// by damped fixed-point iteration with a bisection fallback; the residual of
// the returned value is below 1e-10. Throws NumericalError on non-convergence.
double solve_eta(const ModelParams& params);

TrwaQuantities make_trwa(const ModelParams& params);

// Principal-value level shifts and rates. The shift integrals run over the
// truncated reservoir domain (8 cutoffs, at least 40*omega0) with the
// subtracted pole term handled analytically.
double trwa_shift(double omega, const ModelParams& params, double eta);
double trwa_rate(double omega, const ModelParams& params, double eta);
double rwa_shift(double omega, const ModelParams& params);
double rwa_rate(double omega, const ModelParams& params);

enum class SpectrumMethod { multid1, trwa, rwa };

std::string to_string(SpectrumMethod method);

struct SpectrumResult {
    SpectrumMethod method = SpectrumMethod::trwa;
    std::vector<double> frequencies;
    std::vector<double> values; // photon number density, >= 0
    std::map<std::string, std::string> metadata;
};

// Uniform grid of n points on (0, upper]; spacing upper/n.
std::vector<double> uniform_grid(double upper, int n);

// Steady-state emission spectra. The continuum overloads replace the discrete
// couplings by lambda^2 -> J(w) * grid spacing (recorded in metadata); the
// discrete overloads evaluate on the bath modes for like-for-like comparison
// with the variational spectrum. Both vanish identically at w = omega_c when
// the cavity is coupled.
SpectrumResult trwa_spectrum(const std::vector<double>& grid, const ModelParams& params);
SpectrumResult trwa_spectrum(const DiscretizedBath& bath, const ModelParams& params);
SpectrumResult rwa_spectrum(const std::vector<double>& grid, const ModelParams& params);
SpectrumResult rwa_spectrum(const DiscretizedBath& bath, const ModelParams& params);

// The rotating-wave spectrum obtained by reducing the transformed evaluator
// (bare couplings halved, eta -> 1, small additive terms dropped). Must agree
// pointwise with rwa_spectrum; kept as a separate path on purpose.
SpectrumResult rwa_spectrum_via_trwa_reduction(const std::vector<double>& grid,
                                               const ModelParams& params);
SpectrumResult rwa_spectrum_via_trwa_reduction(const DiscretizedBath& bath,
                                               const ModelParams& params);

// Complex polariton poles in the Markovian approximation: roots of
// (w - w_c)(w - eta*w0 - shift + i*rate) - lambda_tilde_c^2 with the shift and
// rate frozen at the dressed qubit frequency. Imaginary parts are decay rates
// (<= 0). Requires lambda_c > 0.
struct PolaritonPoles {
    std::complex<double> lower;
    std::complex<double> upper;
};

PolaritonPoles polariton_poles(const ModelParams& params);

} // namespace vrs
