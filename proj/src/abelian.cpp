#include "abelint/abelian.hpp"

#include <cmath>

#include "abelint/numerics.hpp"

namespace abelint {

std::string gen_name(int k) {
    const auto [i, j] = kGenExponents[static_cast<std::size_t>(k)];
    return "I" + std::to_string(i) + std::to_string(j);
}

PerturbationPoly::PerturbationPoly(int degree) : n_(degree) {
    if (degree < 0) throw std::domain_error("perturbation degree must be >= 0");
    a_ = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
    b_ = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
}

void PerturbationPoly::check(int i, int j) const {
    if (i < 0 || j < 0 || i + j > n_)
        throw std::domain_error("perturbation index out of range: i, j >= 0 and i + j <= degree");
}

void PerturbationPoly::set_a(int i, int j, double v) { check(i, j); a_(i, j) = v; }
void PerturbationPoly::set_b(int i, int j, double v) { check(i, j); b_(i, j) = v; }

double PerturbationPoly::eval_f(double x, double y) const {
    double s = 0.0;
    for (int i = 0; i <= n_; ++i)
        for (int j = 0; i + j <= n_; ++j)
            if (a_(i, j) != 0.0) s += a_(i, j) * std::pow(x, i) * std::pow(y, j);
    return s;
}

double PerturbationPoly::eval_g(double x, double y) const {
    double s = 0.0;
    for (int i = 0; i <= n_; ++i)
        for (int j = 0; i + j <= n_; ++j)
            if (b_(i, j) != 0.0) s += b_(i, j) * std::pow(x, i) * std::pow(y, j);
    return s;
}

bool PerturbationPoly::empty() const {
    return a_.cwiseAbs().maxCoeff() == 0.0 && b_.cwiseAbs().maxCoeff() == 0.0;
}

ValueWithError integrate_monomial(Orbit& orbit, int i, int j, double rel_tol, double abs_tol) {
    if (i < 0 || j < 0 || i + j > 60)
        throw std::domain_error("monomial exponents out of range (need 0 <= i+j <= 60)");
    auto f = [i, j](double x, double y, double dx, double) {
        return std::pow(x, i) * std::pow(y, j) * dx;
    };
    const auto est = contour_integral(orbit, f, rel_tol, abs_tol);
    ValueWithError out;
    out.value = orbit.flow_sign() * est.value;
    out.err = est.err;
    out.flagged = !est.converged;
    return out;
}

GeneratorVector generator_vector_on(Orbit& orbit, bool sym_x, bool sym_y, double rel_tol) {
    GeneratorVector gv;
    gv.h = orbit.h;
    std::vector<std::function<double(double, double, double, double)>> fs;
    std::vector<int> idx;
    for (int k = 0; k < 9; ++k) {
        const auto [i, j] = kGenExponents[static_cast<std::size_t>(k)];
        const bool forced = (sym_x && i % 2 == 1) || (sym_y && j % 2 == 0);
        if (forced) continue;  // symmetry kills the integral exactly
        idx.push_back(k);
        fs.push_back([i = i, j = j](double x, double y, double dx, double) {
            return std::pow(x, i) * std::pow(y, j) * dx;
        });
    }
    const auto ests = contour_integrals(orbit, fs, rel_tol, 1e-14);
    for (std::size_t q = 0; q < idx.size(); ++q) {
        gv.values[idx[q]] = orbit.flow_sign() * ests[q].value;
        gv.est_error[idx[q]] = ests[q].err;
    }
    return gv;
}

GeneratorVector generator_vector(const HamiltonianParams& p, const PeriodAnnulus& ann, double h,
                                 double rel_tol) {
    Orbit orbit = trace_orbit(p, ann, h);
    return generator_vector_on(orbit, ann.sym_x, ann.sym_y, rel_tol);
}

DerivativeResult derivative_Iij(const HamiltonianParams& p, const PeriodAnnulus& ann, double h,
                                int i, int j, double fd_step) {
    if (fd_step <= 0.0) {
        const double len = (ann.lo_unbounded || ann.hi_unbounded)
                               ? 1.0
                               : std::min(1.0, ann.h_hi - ann.h_lo);
        fd_step = 1e-4 * len;
    }
    const bool lo_ok = ann.lo_unbounded || (h - 2.0 * fd_step > ann.h_lo);
    const bool hi_ok = ann.hi_unbounded || (h + 2.0 * fd_step < ann.h_hi);
    if (!lo_ok || !hi_ok)
        throw std::domain_error("derivative needs margin >= 2 * fd_step to the annulus boundary");

    auto I = [&](double hh) {
        Orbit orb = trace_orbit(p, ann, hh);
        return integrate_monomial(orb, i, j, 1e-12).value;
    };
    DerivativeResult out;
    out.value = fd_derivative(I, h, fd_step);

    // quadrature route from dH = (2c y^2 + b x^2 - 1) 2y dy at fixed x
    if (j >= 2) {
        Orbit orb = trace_orbit(p, ann, h);
        auto f = [&p, i, j](double x, double y, double dx, double) {
            const double den = 2.0 * p.c * y * y + p.b * x * x - 1.0;
            return 0.5 * j * std::pow(x, i) * std::pow(y, j - 2) / den * dx;
        };
        const auto est = contour_integral(orb, f, 1e-10, 1e-13);
        if (est.converged) {
            out.quadrature = orb.flow_sign() * est.value;
            out.cross_checked = true;
            const double scale = std::max({std::abs(out.value), std::abs(out.quadrature), 1e-12});
            out.flagged = std::abs(out.value - out.quadrature) > 1e-5 * scale;
        }
    }
    return out;
}

double melnikov_on_orbit(Orbit& orbit, const PerturbationPoly& pert, double rel_tol) {
    if (pert.empty()) return 0.0;
    auto f = [&pert](double x, double y, double dx, double dy) {
        return pert.eval_g(x, y) * dx - pert.eval_f(x, y) * dy;
    };
    const auto est = contour_integral(orbit, f, rel_tol, 1e-14);
    return orbit.flow_sign() * est.value;
}

double melnikov_eval(const HamiltonianParams& p, const PerturbationPoly& pert,
                     const PeriodAnnulus& ann, double h, double rel_tol) {
    Orbit orbit = trace_orbit(p, ann, h);
    return melnikov_on_orbit(orbit, pert, rel_tol);
}

MomentTable moment_table(Orbit& orbit, int deg, double rel_tol) {
    MomentTable t;
    t.h = orbit.h;
    t.deg = deg;
    t.m = Eigen::MatrixXd::Zero(deg + 2, deg + 2);
    std::vector<std::function<double(double, double, double, double)>> fs;
    std::vector<std::pair<int, int>> idx;
    for (int i = 0; i <= deg + 1; ++i)
        for (int j = 0; i + j <= deg + 1; ++j) {
            idx.push_back({i, j});
            fs.push_back([i, j](double x, double y, double dx, double) {
                return std::pow(x, i) * std::pow(y, j) * dx;
            });
        }
    const auto ests = contour_integrals(orbit, fs, rel_tol, 1e-14);
    for (std::size_t q = 0; q < idx.size(); ++q)
        t.m(idx[q].first, idx[q].second) = orbit.flow_sign() * ests[q].value;
    return t;
}

double melnikov_from_moments(const MomentTable& t, const PerturbationPoly& pert) {
    if (pert.degree() > t.deg)
        throw std::domain_error("moment table degree too small for this perturbation");
    double s = 0.0;
    const int n = pert.degree();
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            if (pert.b(i, j) != 0.0) s += pert.b(i, j) * t.m(i, j);
            // contour x^i y^j dy = -(i/(j+1)) contour x^(i-1) y^(j+1) dx
            if (pert.a(i, j) != 0.0 && i >= 1)
                s += pert.a(i, j) * static_cast<double>(i) / (j + 1) * t.m(i - 1, j + 1);
        }
    return s;
}

}  // namespace abelint
