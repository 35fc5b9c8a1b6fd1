#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "abelint/orbit.hpp"

namespace abelint {

// Adaptive Gauss-Legendre quadrature of f on [a, b]: bisects panels until the
// order-15 vs order-31 values agree. Integrands are smooth after the callers'
// endpoint substitutions, so this converges fast.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-13, double abs_tol = 1e-15, int max_depth = 48);

// Central finite difference with one Richardson step (4th order):
// f'(h) = (4 D(s/2) - D(s)) / 3, D(s) = (f(h+s) - f(h-s)) / (2s).
inline double fd_derivative(const std::function<double(double)>& f, double h, double step) {
    auto d = [&](double s) { return (f(h + s) - f(h - s)) / (2.0 * s); };
    return (4.0 * d(0.5 * step) - d(step)) / 3.0;
}

}  // namespace abelint
