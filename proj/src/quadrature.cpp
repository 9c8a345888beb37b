#include "vrs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vrs/errors.hpp"

namespace vrs {

namespace {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double kronrod = 0.0;
    double error = 0.0;
};

PanelEstimate gauss_kronrod_15(const std::function<double(double)>& f, double a,
                               double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1)
            result_gauss += kWg[j / 2] * (f1 + f2);
    }

    PanelEstimate est;
    est.kronrod = result_kronrod * half;
    est.error = std::abs((result_kronrod - result_gauss) * half);
    return est;
}

double integrate_impl(const std::function<double(double)>& f, double a, double b,
                      double tol, int depth) {
    const PanelEstimate est = gauss_kronrod_15(f, a, b);
    if (est.error <= tol || depth >= 48)
        return est.kronrod;
    const double mid = 0.5 * (a + b);
    return integrate_impl(f, a, mid, 0.5 * tol, depth + 1) +
           integrate_impl(f, mid, b, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
    if (a == b)
        return 0.0;
    const PanelEstimate scale = gauss_kronrod_15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(scale.kronrod));
    if (scale.error <= tol)
        return scale.kronrod;
    const double mid = 0.5 * (a + b);
    return integrate_impl(f, a, mid, 0.5 * tol, 1) +
           integrate_impl(f, mid, b, 0.5 * tol, 1);
}

double integrate_half_line(const std::function<double(double)>& f, double a,
                           double scale, double rel_tol, double abs_tol) {
    if (!(scale > 0.0))
        throw ValidationError("integrate_half_line: scale must be > 0");
    auto mapped = [&](double t) {
        const double u = 1.0 - t;
        const double x = a + scale * t / u;
        return f(x) * scale / (u * u);
    };
    // The t=1 endpoint is never evaluated (Gauss-Kronrod nodes are interior).
    return integrate(mapped, 0.0, 1.0, rel_tol, abs_tol);
}

double principal_value(const std::function<double(double)>& h, double pole,
                       double upper, double rel_tol) {
    if (!(pole > 0.0) || !(pole < upper))
        throw ValidationError("principal_value: pole must lie in (0, upper)");

    const double h_pole = h(pole);
    auto regular = [&](double x) { return (h(x) - h_pole) / (pole - x); };

    // Splitting at the pole keeps quadrature nodes away from the removable
    // singularity of the difference quotient.
    const double left = integrate(regular, 0.0, pole, rel_tol);
    const double right = integrate(regular, pole, upper, rel_tol);
    const double log_term = h_pole * std::log(pole / (upper - pole));
    return left + right + log_term;
}

} // namespace vrs
