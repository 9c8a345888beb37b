#pragma once

#include <functional>

namespace vrs {

// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14);

// Integral of f over [a, inf), mapped to a finite interval via
// x = a + scale*t/(1-t). `scale` should match the decay length of f.
double integrate_half_line(const std::function<double(double)>& f, double a,
                           double scale, double rel_tol = 1e-10,
                           double abs_tol = 1e-14);

// Cauchy principal value of \int_0^upper h(x)/(pole - x) dx for a smooth h,
// via singularity subtraction: the regularized quotient is integrated
// numerically and the subtracted pole term contributes h(pole)*log(pole/(upper-pole)).
// Requires 0 < pole < upper.
double principal_value(const std::function<double(double)>& h, double pole,
                       double upper, double rel_tol = 1e-9);

} // namespace vrs
