#include "abelint/hopf.hpp"

#include <cmath>

namespace abelint {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// truncated power series in m (constant term first), small fixed order
using Series = std::vector<double>;

Series smul(const Series& a, const Series& b, std::size_t order) {
    Series c(order + 1, 0.0);
    for (std::size_t i = 0; i < a.size() && i <= order; ++i)
        for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) c[i + j] += a[i] * b[j];
    return c;
}

// inverts m(r) = r + a2 r^2 + ... term by term: returns r(m) with r(0) = 0, r'(0) = 1
Series revert(const Series& m_of_r, std::size_t order) {
    Series r(order + 1, 0.0);
    r[1] = 1.0;
    for (std::size_t n = 2; n <= order; ++n) {
        // coefficient of m^n in m(r(m)) with the current truncation must vanish
        Series comp(order + 1, 0.0);
        Series rp{1.0};  // r(m)^k accumulator
        for (std::size_t k = 1; k < m_of_r.size() && k <= n; ++k) {
            rp = smul(rp, r, n);
            if (m_of_r[k] != 0.0)
                for (std::size_t q = 0; q <= n; ++q) comp[q] += m_of_r[k] * rp[q];
        }
        r[n] -= comp[n];
    }
    return r;
}

}  // namespace

Eigen::Vector4d hat_transform(const Eigen::Vector4d& a) {
    return {a[0] - 2.0 * kSqrt2 * a[1] + 2.0 * a[3], a[1] - 2.0 * kSqrt2 * a[3], a[2], a[3]};
}

Eigen::Vector4d hat_inverse(const Eigen::Vector4d& ah) {
    const double a3 = ah[3];
    const double a1 = ah[1] + 2.0 * kSqrt2 * a3;
    return {ah[0] + 2.0 * kSqrt2 * a1 - 2.0 * a3, a1, ah[2], a3};
}

double radius_series(double theta, double m, int order) {
    if (order < 0 || order > 6) throw std::domain_error("radius series order must be in [0, 6]");
    if (m < 0.0) throw std::domain_error("radius series needs m >= 0");
    const double c = std::cos(theta);
    const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2, c8 = c4 * c4;
    double e[7] = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    e[2] = -0.5 * kSqrt2 * c;
    e[3] = 0.5 * c4 + 0.25 * c2 + 0.25;
    e[4] = -0.25 * kSqrt2 * (6.0 * c4 - 4.0 * c2 + 3.0) * c;
    e[5] = 7.0 / 8.0 * c8 + 35.0 / 8.0 * c6 - 133.0 / 32.0 * c4 + 35.0 / 16.0 * c2 + 7.0 / 32.0;
    e[6] = -0.25 * kSqrt2 * (20.0 * c8 - 4.0 * c4 + 5.0) * c;
    double r = 0.0, mk = 1.0;
    for (int k = 1; k <= order; ++k) {
        mk *= m;
        r += e[k] * mk;
    }
    return r;
}

Eigen::Matrix4d hopf_coefficient_matrix(HopfCenter center) {
    Eigen::Matrix4d B;
    B << 1.0, 0.0, 0.0, 0.0,
        11.0 / 8.0, -kSqrt2 / 2.0, 3.0 / 4.0, 1.0 / 4.0,
        259.0 / 64.0, -7.0 * kSqrt2 / 4.0, 27.0 / 16.0, 21.0 / 16.0,
        16235.0 / 1024.0, -1885.0 * kSqrt2 / 256.0, 2505.0 / 512.0, 3195.0 / 512.0;
    B *= M_PI;
    if (center == HopfCenter::Second) B.col(1) *= -1.0;  // mirrored chart flips odd-in-x terms
    return B;
}

Eigen::Matrix4d hopf_quadrature_matrix(HopfCenter center, int theta_nodes) {
    const CurveFamily fam = hopf_chart(center);
    constexpr std::size_t M = 10;  // series order in m

    // I(h) row accumulators: integrals of phi^2, cos phi^3, sin^2 phi^4, cos^2 phi^4
    Series s2(M + 1, 0.0), sc3(M + 1, 0.0), ss4(M + 1, 0.0), sc4(M + 1, 0.0);

    for (int k = 0; k < theta_nodes; ++k) {
        const double th = 2.0 * M_PI * (k + 0.5) / theta_nodes;
        const double ct = std::cos(th), st = std::sin(th);
        // -H/2 = r^2 + A3 r^3 + A4 r^4 along this ray equals m^2
        const double c2 = fam.P[2] * ct * ct + fam.Q[0] * st * st;
        const double c3 = fam.P[3] * ct * ct * ct + fam.Q[1] * ct * st * st;
        const double c4r = fam.P[4] * ct * ct * ct * ct + fam.Q[2] * ct * ct * st * st +
                           fam.R * st * st * st * st;
        if (std::abs(c2 + 2.0) > 1e-12) throw std::logic_error("chart is not normalized to -2r^2");
        const double A3 = -0.5 * c3, A4 = -0.5 * c4r;
        // m(r) = r sqrt(1 + A3 r + A4 r^2), expanded then reverted
        Series inner{1.0, A3, A4};
        Series root(M + 1, 0.0);
        root[0] = 1.0;
        // sqrt by Newton on series: x_{k+1} = (x_k + inner / x_k) / 2
        for (int it = 0; it < 8; ++it) {
            // divide inner by root
            Series quot(M + 1, 0.0);
            Series acc = root;
            for (std::size_t q = 0; q <= M; ++q) {
                const double v = (q < inner.size() ? inner[q] : 0.0);
                double have = 0.0;
                for (std::size_t u = 1; u <= q; ++u) have += quot[q - u] * root[u];
                quot[q] = (v - have) / root[0];
            }
            for (std::size_t q = 0; q <= M; ++q) root[q] = 0.5 * (root[q] + quot[q]);
            (void)acc;
        }
        Series m_of_r(M + 2, 0.0);
        for (std::size_t q = 0; q + 1 <= M + 1; ++q) m_of_r[q + 1] = q <= M ? root[q] : 0.0;
        const Series phi = revert(m_of_r, M);

        const Series phi2 = smul(phi, phi, M);
        const Series phi3 = smul(phi2, phi, M);
        const Series phi4 = smul(phi2, phi2, M);
        const double w = 2.0 * M_PI / theta_nodes;
        for (std::size_t q = 0; q <= M; ++q) {
            s2[q] += w * phi2[q];
            sc3[q] += w * ct * phi3[q];
            ss4[q] += w * st * st * phi4[q];
            sc4[q] += w * ct * ct * phi4[q];
        }
    }

    // I(m) = -(a0/2) S2 - (a1/3) Sc3 - (3 a2/4) Ss4 - (a3/4) Sc4; rows are the
    // m^(2j) coefficients of -I (first center) resp. -I in the hat chart (second)
    Eigen::Matrix4d Q;
    for (int j = 1; j <= 4; ++j) {
        const std::size_t q = static_cast<std::size_t>(2 * j);
        Q(j - 1, 0) = 0.5 * s2[q];
        Q(j - 1, 1) = sc3[q] / 3.0;
        Q(j - 1, 2) = 0.75 * ss4[q];
        Q(j - 1, 3) = 0.25 * sc4[q];
    }
    return Q;
}

HopfSeries hopf_coefficients(const Eigen::Vector4d& delta, HopfCenter center) {
    HopfSeries out;
    out.center = center;
    const Eigen::Vector4d chart_alpha =
        center == HopfCenter::First ? delta : hat_transform(delta);
    out.coef = hopf_coefficient_matrix(center) * chart_alpha;
    out.quadrature = hopf_quadrature_matrix(center) * chart_alpha;
    out.flagged = (out.coef - out.quadrature).cwiseAbs().maxCoeff() > 1e-8;
    return out;
}

double hopf_design_jacobian() {
    const Eigen::Matrix4d B = hopf_coefficient_matrix(HopfCenter::First);
    return B.topLeftCorner<3, 3>().determinant();
}

PeriodAnnulus hopf_annulus() {
    PeriodAnnulus ann;
    ann.h_lo = -0.25;
    ann.h_hi = 0.0;
    ann.anchor = {0.0, 0.0};
    ann.ray = {1.0, 0.0};
    ann.sym_y = true;  // both charts are even in y
    return ann;
}

CurveFamily hopf_chart(HopfCenter center) {
    return center == HopfCenter::First ? hopf_chart_first() : hopf_chart_second();
}

double hopf_melnikov(HopfCenter center, const Eigen::Vector4d& chart_alpha, double h) {
    PerturbationPoly pert(3);
    pert.set_b(0, 1, chart_alpha[0]);
    pert.set_b(1, 1, chart_alpha[1]);
    pert.set_b(0, 3, chart_alpha[2]);
    pert.set_b(2, 1, chart_alpha[3]);
    Orbit orb = trace_orbit_of(hopf_chart(center), hopf_annulus(), h);
    return melnikov_on_orbit(orb, pert, 1e-11);
}

HopfDesign design_hopf_three(HopfCenter center, double alpha3_star) {
    if (alpha3_star == 0.0) throw std::domain_error("design needs alpha3 != 0");
    HopfDesign d;
    d.center = center;

    const Eigen::Matrix4d B = hopf_coefficient_matrix(center);

    // roots of the truncated quartic in u = m^2, geometrically separated
    const double u3 = 4e-3, rho = 0.1;
    const Eigen::Vector3d roots{u3 * rho * rho, u3 * rho, u3};

    // chart_alpha solves rows 1..3 for the Vieta targets; iterate once since the
    // leading coefficient b4 moves with the solution
    Eigen::Vector4d chart_alpha{0.0, 0.0, 0.0, 0.0};
    chart_alpha[3] = center == HopfCenter::First ? alpha3_star : alpha3_star;
    double b4 = B.row(3)[3] * chart_alpha[3];
    for (int it = 0; it < 3; ++it) {
        const Eigen::Vector3d target{-b4 * roots[0] * roots[1] * roots[2],
                                     b4 * (roots[0] * roots[1] + roots[0] * roots[2] +
                                           roots[1] * roots[2]),
                                     -b4 * (roots[0] + roots[1] + roots[2])};
        const Eigen::Matrix3d M = B.topLeftCorner<3, 3>();
        const Eigen::Vector3d rhs = target - B.topRightCorner<3, 1>() * chart_alpha[3];
        chart_alpha.head<3>() = M.partialPivLu().solve(rhs);
        b4 = B.row(3) * chart_alpha;
    }
    d.coef = B * chart_alpha;
    d.delta = center == HopfCenter::First ? chart_alpha : hat_inverse(chart_alpha);

    // direct Melnikov verification in the chart's own annulus
    d.window = 8.0 * 2.0 * u3;
    ScanOptions opt;
    opt.grid_size = 160;
    opt.refine_tol = 1e-12;
    auto I = [&](double h) { return hopf_melnikov(center, chart_alpha, h); };
    d.verification = scan_zeros(I, -d.window, -2e-7, opt);
    d.verified = d.verification.zeros.size() == 3;
    return d;
}

}  // namespace abelint
