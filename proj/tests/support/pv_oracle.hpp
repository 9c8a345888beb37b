#pragma once

// Independent principal-value reference: symmetric pairing around the pole
// plus plain adaptive Simpson quadrature (deliberately not the library's
// Gauss-Kronrod code path).

#include <cmath>
#include <functional>

namespace vrs::testing {

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double split = left + right;
    if (depth <= 0 || std::abs(split - whole) < 15.0 * tol)
        return split + (split - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-11) {
    const double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 40);
}

// P int_0^upper h(x)/(pole - x) dx via exact symmetric exclusion: the window
// [0, 2*pole] is folded into int_0^pole [h(pole-s) - h(pole+s)]/s ds, which is
// regular, and the remainder has no singularity.
inline double principal_value_paired(const std::function<double(double)>& h,
                                     double pole, double upper) {
    const double delta = 1e-6 * pole;
    const double slope = (h(pole + delta) - h(pole - delta)) / (2.0 * delta);
    auto folded = [&](double s) {
        if (s < delta)
            return -2.0 * slope; // limit of the folded quotient at s -> 0
        return (h(pole - s) - h(pole + s)) / s;
    };
    double value = simpson(folded, 0.0, pole);
    if (upper > 2.0 * pole) {
        auto tail = [&](double x) { return h(x) / (pole - x); };
        value += simpson(tail, 2.0 * pole, upper);
    }
    return value;
}

} // namespace vrs::testing
