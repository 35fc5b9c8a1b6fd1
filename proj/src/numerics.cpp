#include "abelint/numerics.hpp"

namespace abelint {

namespace {

double gl_panel(const std::function<double(double)>& f, double a, double b, int order) {
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f(c + r * x[k]);
    return s * r;
}

double adapt(const std::function<double(double)>& f, double a, double b, double rel_tol,
             double abs_tol, int depth, double whole) {
    const double coarse = gl_panel(f, a, b, 15);
    const double fine = gl_panel(f, a, b, 31);
    const double err = std::abs(fine - coarse);
    if (err <= std::max(abs_tol, rel_tol * std::max(std::abs(fine), std::abs(whole))) || depth <= 0)
        return fine;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, rel_tol, abs_tol, depth - 1, whole) +
           adapt(f, m, b, rel_tol, abs_tol, depth - 1, whole);
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double rough = gl_panel(f, a, b, 31);
    return adapt(f, a, b, rel_tol, abs_tol, max_depth, rough);
}

}  // namespace abelint
