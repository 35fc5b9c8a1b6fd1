#include "abelint/picard_fuchs.hpp"

#include <cmath>

#include "abelint/numerics.hpp"

namespace abelint {

namespace {

void require_main(const HamiltonianParams& p) {
    if (p.a == 0.0 || p.c == 0.0 || p.disc() == 0.0)
        throw std::domain_error("selector requires a c (b^2 - 4ac) != 0");
}

void require_azero(const HamiltonianParams& p) {
    if (p.a != 0.0 || p.b == 0.0 || p.c == 0.0)
        throw std::domain_error("selector requires a = 0 and b c != 0");
}

Eigen::Matrix4d a1_matrix(const HamiltonianParams& p) {
    const double a = p.a, b = p.b, c = p.c, D = p.disc();
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A(0, 0) = 2.0;
    A(1, 0) = 3.0 / (4.0 * c);
    A(1, 1) = 1.0;
    A(2, 0) = -1.0 / (4.0 * a);
    A(2, 2) = 1.0;
    A(3, 0) = (4.0 * a * c + a * b + b * c) / (8.0 * a * c * D);
    A(3, 1) = (b + 2.0 * c) / (6.0 * D);
    A(3, 2) = -(b + 2.0 * a) / (2.0 * D);
    A(3, 3) = 2.0 / 3.0;
    return A;
}

Eigen::Matrix4d b1_matrix(const HamiltonianParams& p) {
    const double a = p.a, b = p.b, c = p.c, D = p.disc();
    Eigen::Matrix4d B = Eigen::Matrix4d::Zero();
    B(0, 1) = 1.0 / 3.0;
    B(0, 2) = -1.0;
    B(1, 1) = 3.0 / (8.0 * c);
    B(1, 2) = -3.0 / (8.0 * c);
    B(1, 3) = -b / (4.0 * c) - 0.5;
    B(2, 1) = -1.0 / (24.0 * a);
    B(2, 2) = 3.0 / (8.0 * a);
    B(2, 3) = b / (12.0 * a) + 1.0 / 6.0;
    B(3, 1) = (8.0 * a * c + 3.0 * a * b + b * c) / (48.0 * a * c * D);
    B(3, 2) = -(8.0 * a * c + a * b + 3.0 * b * c) / (16.0 * a * c * D);
    B(3, 3) = -(24.0 * a * b * c + 20.0 * a * a * c + a * b * b + 20.0 * a * c * c + b * b * c) /
              (24.0 * a * c * D);
    return B;
}

}  // namespace

std::vector<int> pf_components(PFSelector which) {
    switch (which) {
        case PFSelector::V1: return {kI01, kI03, kI21, kI23};
        case PFSelector::V2: return {kI11, kI13};
        case PFSelector::V3: return {kI02, kI22};
        case PFSelector::V4: return {kI01, kI03, kI21, kI23, kI12};
        case PFSelector::V5: return {kI01, kI03, kI21};
        case PFSelector::V6: return {kI11, kI13};
    }
    throw std::logic_error("bad selector");
}

CurveFamily pf_chart(const HamiltonianParams& p, PFSelector which) {
    if (which == PFSelector::V5 || which == PFSelector::V6) {
        require_azero(p);
        return swapped_chart(p);
    }
    require_main(p);
    return main_chart(p);
}

PFSystem pf_matrices(const HamiltonianParams& p, PFSelector which) {
    PFSystem s;
    s.which = which;
    const double a = p.a, b = p.b, c = p.c, D = p.disc();
    switch (which) {
        case PFSelector::V1: {
            require_main(p);
            s.A = a1_matrix(p);
            s.B = b1_matrix(p);
            break;
        }
        case PFSelector::V2: {
            require_main(p);
            s.A = Eigen::Matrix2d{{4.0 / 3.0, 0.0}, {-4.0 * (b + 2.0 * a) / (5.0 * D), 4.0 / 5.0}};
            s.B = Eigen::Matrix2d{
                {1.0 / (3.0 * a), b / (9.0 * a) + 2.0 / 9.0},
                {-(b + 2.0 * a) / (5.0 * a * D),
                 -(12.0 * a * c + b * b + 16.0 * a * b + 16.0 * a * a) / (15.0 * a * D)}};
            break;
        }
        case PFSelector::V3: {
            require_main(p);
            s.A = Eigen::Matrix2d{{4.0 / 3.0, 0.0}, {4.0 * (b + 2.0 * c) / (15.0 * D), 4.0 / 5.0}};
            s.B = Eigen::Matrix2d{
                {1.0 / (3.0 * c), -b / (3.0 * c) - 2.0 / 3.0},
                {(b + 2.0 * c) / (15.0 * c * D),
                 -(b * b + 16.0 * b * c + 16.0 * c * c + 12.0 * a * c) / (15.0 * c * D)}};
            break;
        }
        case PFSelector::V4: {
            require_main(p);
            s.A = Eigen::MatrixXd::Zero(5, 5);
            s.B = Eigen::MatrixXd::Zero(5, 5);
            s.A.topLeftCorner<4, 4>() = a1_matrix(p);
            s.B.topLeftCorner<4, 4>() = b1_matrix(p);
            s.A(4, 4) = 1.0;
            s.B(4, 4) = -(a + b + c) / D;
            break;
        }
        case PFSelector::V5: {
            require_azero(p);
            s.A = Eigen::Matrix3d{{2.0, 0.0, 0.0},
                                  {(5.0 * c + 4.0 * b) / (2.0 * b * b), 2.0 / 3.0, -c / b},
                                  {-1.0 / (2.0 * b), 0.0, 1.0}};
            s.B = Eigen::Matrix3d{
                {0.0, -1.0 / 3.0, 1.0},
                {0.0, -(13.0 * b + 15.0 * c) / (12.0 * b * b), (3.0 * b + 5.0 * c) / (4.0 * b * b)},
                {0.0, (3.0 * c + b) / (12.0 * b * c), (b - c) / (4.0 * b * c)}};
            break;
        }
        case PFSelector::V6: {
            require_azero(p);
            s.A = Eigen::Matrix2d{{4.0 / 3.0, 0.0},
                                  {(4.0 * b * c + 8.0 * c * c) / (5.0 * b * b * c), 4.0 / 5.0}};
            s.B = Eigen::Matrix2d{{1.0 / (3.0 * c), -(b + 2.0 * c) / (9.0 * c)},
                                  {(b + 2.0 * c) / (5.0 * b * b * c),
                                   -(b * b + 16.0 * b * c + 16.0 * c * c) / (15.0 * b * b * c)}};
            break;
        }
    }
    return s;
}

double pf_residual(const HamiltonianParams& p, PFSelector which, const PeriodAnnulus& ann,
                   double h) {
    const PFSystem sys = pf_matrices(p, which);
    const CurveFamily fam = pf_chart(p, which);
    const auto comps = pf_components(which);
    const int m = static_cast<int>(comps.size());

    auto eval = [&](double hh) {
        Orbit orb = trace_orbit_of(fam, ann, hh);
        std::vector<std::function<double(double, double, double, double)>> fs;
        for (int k : comps) {
            const auto [i, j] = kGenExponents[static_cast<std::size_t>(k)];
            fs.push_back([i = i, j = j](double x, double y, double dx, double) {
                return std::pow(x, i) * std::pow(y, j) * dx;
            });
        }
        const auto ests = contour_integrals(orb, fs, 1e-12, 1e-15);
        Eigen::VectorXd v(m);
        for (int q = 0; q < m; ++q) v[q] = orb.flow_sign() * ests[static_cast<std::size_t>(q)].value;
        return v;
    };

    const Eigen::VectorXd V = eval(h);
    const double len = (ann.lo_unbounded || ann.hi_unbounded)
                           ? 1.0
                           : std::min(1.0, ann.h_hi - ann.h_lo);
    const double step = 1e-4 * len;
    auto d = [&](double s) { return ((eval(h + s) - eval(h - s)) / (2.0 * s)).eval(); };
    const Eigen::VectorXd Vp = (4.0 * d(0.5 * step) - d(step)) / 3.0;

    const Eigen::VectorXd r = V - (sys.A * h + sys.B) * Vp;
    return r.norm() / std::max(1.0, V.norm());
}

SecondOrderSystem second_order_system(const HamiltonianParams& p) {
    require_main(p);
    const double a = p.a, b = p.b, c = p.c, D = p.disc();
    const double h4 = (a + b + c) / D;
    const double iac = 1.0 / (12.0 * a * c);
    const Poly root4a{1.0, 4.0 * a};   // 4 a h + 1
    const Poly root4c{1.0, 4.0 * c};   // 4 c h + 1
    const Poly hh{0.0, 1.0};
    const Poly h_m4{-h4, 1.0};         // h - (a+b+c)/disc
    const Poly lin{a + b + c, 2.0 * a * b + 8.0 * a * c + 2.0 * b * c};

    SecondOrderSystem s;
    s.G1 = iac * (hh * root4a * root4c * h_m4);
    s.d11 = -iac * (hh * Poly{a + c, 8.0 * a * c} * h_m4);
    s.d12 = (-0.5 * iac) * lin;
    s.d21 = (-1.5 * iac) * (hh * root4a * h_m4);
    s.d22 = (1.5 * iac * (b + 2.0 * c)) * (hh * root4a);
    s.d31 = (0.5 * iac) * (hh * root4c * h_m4);
    s.d32 = (-0.5 * iac * (b + 2.0 * a)) * (hh * root4c);
    s.d41 = (-0.5 * iac / D) * (hh * lin * h_m4);
    s.d42 = iac * (hh * Poly{a + c, 8.0 * a * c} * h_m4);
    s.z_coef = {-(b + 2.0 * c) / (6.0 * D), (b + 2.0 * a) / (2.0 * D), 1.0 / 3.0};
    return s;
}

SecondOrderAZero second_order_system_azero(const HamiltonianParams& p) {
    require_azero(p);
    const double b = p.b, c = p.c;
    const Poly hh{0.0, 1.0};
    const Poly root4c{1.0, 4.0 * c};
    const Poly h_m{-(b + c) / (b * b), 1.0};

    SecondOrderAZero s;
    s.G4 = (b * b) * (hh * root4c * h_m);
    s.d11 = -0.5 * (hh * Poly{b * b - b * c - 2.0 * c * c, 4.0 * b * b * c});
    s.d12 = (5.0 * b / 12.0) * Poly{b + c, 2.0 * b * c};
    s.d21 = (-1.5 * (b + c)) * (hh * root4c);
    s.d22 = (1.25 * b * b) * (hh * root4c);
    s.d31 = (-3.0 / (5.0 * b)) * (hh * Poly{b * b - c * c, 4.0 * b * b * c + 2.0 * b * c * c});
    s.d32 = 0.5 * (hh * Poly{b * b - b * c - 2.0 * c * c, 4.0 * b * b * c});
    s.zbar_coef = {2.0 / 5.0, 6.0 * c / (5.0 * b)};
    return s;
}

RiccatiSystem riccati_system(const HamiltonianParams& p, RiccatiSelector which) {
    RiccatiSystem r;
    r.which = which;
    const double a = p.a, b = p.b, c = p.c, D = p.disc();
    switch (which) {
        case RiccatiSelector::Omega1: {
            const auto s = second_order_system(p);
            r.G = s.G1;
            r.q2 = s.d12;
            r.q1 = s.d42 - s.d11;
            r.q0 = s.d41;
            break;
        }
        case RiccatiSelector::Omega2: {
            require_main(p);
            const double h4 = (a + b + c) / D;
            r.G = (4.0 / (15.0 * a)) * (Poly{1.0, 4.0 * a} * Poly{-h4, 1.0});
            r.q2 = Poly::constant(-b / (9.0 * a) - 2.0 / 9.0);
            const Poly a1{-(12.0 * a * c + b * b + 16.0 * a * b + 16.0 * a * a) / (15.0 * a * D),
                          4.0 / 5.0};
            const Poly a4{1.0 / (3.0 * a), 4.0 / 3.0};
            r.q1 = a4 - a1;
            r.q0 = Poly{(b + 2.0 * a) / (5.0 * a * D), 4.0 * (b + 2.0 * a) / (5.0 * D)};
            break;
        }
        case RiccatiSelector::Omega3: {
            require_main(p);
            const double h4 = (a + b + c) / D;
            r.G = (4.0 / (15.0 * c)) * (Poly{1.0, 4.0 * c} * Poly{-h4, 1.0});
            r.q2 = Poly::constant(b / (3.0 * c) - 2.0 / 3.0);
            const Poly b1{-(12.0 * a * c + b * b + 16.0 * b * c + 16.0 * c * c) / (15.0 * c * D),
                          4.0 / 5.0};
            const Poly b4{1.0 / (3.0 * c), 4.0 / 3.0};
            r.q1 = b4 - b1;
            r.q0 = Poly{-(b + 2.0 * c) / (15.0 * c * D), -4.0 * (b + 2.0 * c) / (15.0 * D)};
            break;
        }
        case RiccatiSelector::OmegaBar1: {
            const auto s = second_order_system_azero(p);
            r.G = s.G4;
            r.q2 = s.d12;
            r.q1 = s.d32 - s.d11;
            r.q0 = s.d31;
            break;
        }
        case RiccatiSelector::OmegaBar2: {
            require_azero(p);
            r.G = (b * b) * (Poly{1.0, 4.0 * c} * Poly{-(b + c) / (b * b), 1.0});
            r.q2 = Poly::constant((5.0 / 12.0) * (b + 2.0 * c) * b * b);
            const Poly abar1{0.25 * (-b * b - 16.0 * b * c - 16.0 * c * c), 3.0 * b * b * c};
            const Poly abar4 = (1.25 * b * b) * Poly{1.0, 4.0 * c};
            r.q1 = abar4 - abar1;
            r.q0 = (-0.75 * (b + 2.0 * c)) * Poly{1.0, 4.0 * c};
            break;
        }
    }
    return r;
}

namespace {

// generator subset values on a chart orbit at level h
Eigen::VectorXd raw_values(const CurveFamily& fam, const PeriodAnnulus& ann, double h,
                           const std::vector<int>& comps) {
    Orbit orb = trace_orbit_of(fam, ann, h);
    std::vector<std::function<double(double, double, double, double)>> fs;
    for (int k : comps) {
        const auto [i, j] = kGenExponents[static_cast<std::size_t>(k)];
        fs.push_back([i = i, j = j](double x, double y, double dx, double) {
            return std::pow(x, i) * std::pow(y, j) * dx;
        });
    }
    const auto ests = contour_integrals(orb, fs, 1e-12, 1e-15);
    Eigen::VectorXd v(static_cast<int>(comps.size()));
    for (int q = 0; q < v.size(); ++q) v[q] = orb.flow_sign() * ests[static_cast<std::size_t>(q)].value;
    return v;
}

}  // namespace

RiccatiResidual riccati_residual(const HamiltonianParams& p, RiccatiSelector which,
                                 const PeriodAnnulus& ann, double h) {
    const RiccatiSystem sys = riccati_system(p, which);
    const bool azero = which == RiccatiSelector::OmegaBar1 || which == RiccatiSelector::OmegaBar2;
    const CurveFamily fam = azero ? swapped_chart(p) : main_chart(p);

    const double len = (ann.lo_unbounded || ann.hi_unbounded)
                           ? 1.0
                           : std::min(1.0, ann.h_hi - ann.h_lo);
    const double inner = 1e-4 * len;
    const double outer = 40.0 * inner;

    std::function<double(double)> num, den;
    if (which == RiccatiSelector::Omega1 || which == RiccatiSelector::OmegaBar1) {
        // primed ratio: numerator Z' (or Zbar'), denominator I01'
        Eigen::Vector3d zc3 = Eigen::Vector3d::Zero();
        std::vector<int> comps;
        if (which == RiccatiSelector::Omega1) {
            const auto s = second_order_system(p);
            zc3 = s.z_coef;
            comps = {kI01, kI03, kI21, kI23};
        } else {
            const auto s = second_order_system_azero(p);
            zc3.head<2>() = s.zbar_coef;
            comps = {kI01, kI03, kI21};
        }
        auto z_and_i01 = [=, &fam, &ann](double hh) {
            const Eigen::VectorXd v = raw_values(fam, ann, hh, comps);
            const double z = comps.size() == 4 ? zc3[0] * v[1] + zc3[1] * v[2] + zc3[2] * v[3]
                                               : zc3[0] * v[1] + zc3[1] * v[2];
            return std::pair<double, double>{z, v[0]};
        };
        num = [=](double hh) { return fd_derivative([&](double u) { return z_and_i01(u).first; }, hh, inner); };
        den = [=](double hh) { return fd_derivative([&](double u) { return z_and_i01(u).second; }, hh, inner); };
    } else if (which == RiccatiSelector::Omega2 || which == RiccatiSelector::OmegaBar2) {
        num = [=, &fam, &ann](double hh) { return raw_values(fam, ann, hh, {kI13})[0]; };
        den = [=, &fam, &ann](double hh) { return raw_values(fam, ann, hh, {kI11})[0]; };
    } else {
        num = [=, &fam, &ann](double hh) { return raw_values(fam, ann, hh, {kI22})[0]; };
        den = [=, &fam, &ann](double hh) { return raw_values(fam, ann, hh, {kI02})[0]; };
    }

    auto omega = [&](double hh) { return num(hh) / den(hh); };
    const double w = omega(h);
    const double wp = (omega(h + outer) - omega(h - outer)) / (2.0 * outer);

    RiccatiResidual out;
    out.denominator = std::abs(den(h));
    out.residual = std::abs(sys.G(h) * wp - (-sys.q2(h) * w * w + sys.q1(h) * w + sys.q0(h)));
    return out;
}

I11ClosedForm closed_form_I11_abzero(const HamiltonianParams& p, double h) {
    if (p.a != 0.0 || p.b != 0.0 || p.c <= 0.0)
        throw std::domain_error("closed form needs a = b = 0 and c > 0");
    const CurveFamily fam = swapped_chart(p);
    // right well of the double-well chart: center (1/sqrt(2c), 0), levels (-1/(4c), 0)
    PeriodAnnulus ann;
    ann.h_lo = -1.0 / (4.0 * p.c);
    ann.h_hi = 0.0;
    ann.anchor = {1.0 / std::sqrt(2.0 * p.c), 0.0};
    ann.ray = {1.0, 0.0};
    const double href = -1.0 / (8.0 * p.c);
    Orbit orb = trace_orbit_of(fam, ann, href);
    const double i11 = integrate_monomial(orb, 1, 1, 1e-12).value;
    I11ClosedForm out;
    out.C1 = i11 / (href + 1.0 / (4.0 * p.c));
    out.value = out.C1 * (h + 1.0 / (4.0 * p.c));
    return out;
}

}  // namespace abelint
