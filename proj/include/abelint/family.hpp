#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "abelint/params.hpp"

namespace abelint {

// Level-curve family H(x,y) = P(x) + Q(x) y^2 + R y^4 with deg P, deg Q <= 4.
// Covers the main chart, the swapped a=0 chart and the three section-4 charts;
// quadratic-in-y^2 structure gives closed-form vertical slices everywhere.
struct CurveFamily {
    Eigen::Matrix<double, 5, 1> P = Eigen::Matrix<double, 5, 1>::Zero();
    Eigen::Matrix<double, 5, 1> Q = Eigen::Matrix<double, 5, 1>::Zero();
    double R = 0.0;

    double px(double x) const { return (((P[4] * x + P[3]) * x + P[2]) * x + P[1]) * x + P[0]; }
    double qx(double x) const { return (((Q[4] * x + Q[3]) * x + Q[2]) * x + Q[1]) * x + Q[0]; }
    double dpx(double x) const { return ((4.0 * P[4] * x + 3.0 * P[3]) * x + 2.0 * P[2]) * x + P[1]; }
    double dqx(double x) const { return ((4.0 * Q[4] * x + 3.0 * Q[3]) * x + 2.0 * Q[2]) * x + Q[1]; }

    double eval(double x, double y) const {
        const double y2 = y * y;
        return px(x) + qx(x) * y2 + R * y2 * y2;
    }
    Eigen::Vector2d grad(double x, double y) const {
        const double y2 = y * y;
        return {dpx(x) + dqx(x) * y2, y * (2.0 * qx(x) + 4.0 * R * y2)};
    }
    // Hessian entries (for critical point classification)
    Eigen::Matrix2d hessian(double x, double y) const;

    // All real y with H(x,y) = h, ascending. Stable quadratic formula in y^2.
    std::vector<double> y_levels(double x, double h) const;
};

// chart constructors
CurveFamily main_chart(const HamiltonianParams& p);
// a = 0 equivalent chart H(x,y) = y^2 - x^2 + b x^2 y^2 + c x^4 (x/y swap of the family)
CurveFamily swapped_chart(const HamiltonianParams& p);
// section-4 charts for (a,b,c) = (-1,-2,1)
CurveFamily hopf_chart_first();    // H1 around the first center
CurveFamily hopf_chart_second();   // H2 around the second center
CurveFamily homoclinic_chart();    // H3 with the double loop through the origin

enum class CriticalKind { Center, Saddle, Degenerate };

struct CriticalPoint {
    double x = 0.0, y = 0.0;
    CriticalKind kind = CriticalKind::Saddle;
    double level = 0.0;
};

// All real critical points of the main chart, Newton-polished, sorted by level
// then (x, y). Works in every region (NoAnnulus regions simply report what exists).
std::vector<CriticalPoint> critical_points(const HamiltonianParams& p);
// same for an arbitrary chart, seeded from a grid search over [-span, span]^2
std::vector<CriticalPoint> critical_points_of(const CurveFamily& f, double span);

struct PeriodAnnulus {
    int id = 0;
    double h_lo = 0.0;
    double h_hi = 0.0;
    bool lo_unbounded = false;   // h_lo = -inf
    bool hi_unbounded = false;   // h_hi = +inf
    Eigen::Vector2d anchor{0.0, 0.0};  // enclosed center (or origin for exterior families)
    Eigen::Vector2d ray{1.0, 0.0};     // seed ray direction from the anchor
    bool sym_x = false;  // orbits invariant under x -> -x (kills odd-i integrals)
    bool sym_y = false;  // orbits invariant under y -> -y (kills even-j integrals)

    bool contains(double h) const {
        return (lo_unbounded || h > h_lo) && (hi_unbounded || h < h_hi);
    }
    double midpoint(double h_max = 10.0) const;
};

// Enumerates the period annuli of the main chart by probing the intervals between
// critical levels with seeded traces. For unbounded families the open end is marked
// and scans use a caller-supplied cutoff.
std::vector<PeriodAnnulus> annuli(const HamiltonianParams& p);
// annuli of an arbitrary chart (used by the section-4 verification paths)
std::vector<PeriodAnnulus> annuli_of(const CurveFamily& f, double span);

struct G1Zero {
    double h = 0.0;
    bool defined = true;         // h4 is undefined when disc = 0
    bool inside_annulus = false;
    std::string note;            // coincidence / diagnostic text
};

// The four roots {0, -1/(4c), -1/(4a), (a+b+c)/disc} of the gating polynomial G1,
// flagged when they fall strictly inside a period annulus (Remark-2 split points).
std::vector<G1Zero> g1_zeros(const HamiltonianParams& p);

}  // namespace abelint
