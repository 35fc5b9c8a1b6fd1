#pragma once

#include <Eigen/Dense>

#include "abelint/scan.hpp"

namespace abelint {

enum class HopfCenter { First, Second };

// alpha -> alpha-hat chart change between the two center charts (unit Jacobian)
Eigen::Vector4d hat_transform(const Eigen::Vector4d& alpha);
Eigen::Vector4d hat_inverse(const Eigen::Vector4d& alpha_hat);

// Radius of the level oval of the first-center chart at angle theta, to the given
// series order in m = sqrt(-h/2); order <= 6 uses the closed-form e_2..e_6.
double radius_series(double theta, double m, int order);

// Rows j = 1..4 of the small-amplitude coefficients over (alpha0..alpha3):
//   First:  M(h) = sum b_j m^(2j), I = -M          (b_j rows, include the pi factor)
//   Second: I = -sum d_l m^(2l)                    (d_l rows)
Eigen::Matrix4d hopf_coefficient_matrix(HopfCenter center);

// Independent verification path: the same rows from series reversion of the chart's
// polar equation and theta-quadrature of the oval-power integrals.
Eigen::Matrix4d hopf_quadrature_matrix(HopfCenter center, int theta_nodes = 512);

struct HopfSeries {
    HopfCenter center = HopfCenter::First;
    Eigen::Vector4d coef;        // b_1..b_4 or d_1..d_4 for the given delta
    Eigen::Vector4d quadrature;  // same values through the quadrature path
    bool flagged = false;        // paths disagree beyond 1e-8
};
// delta = (alpha0, alpha1, alpha2, alpha3) in the first-center chart
HopfSeries hopf_coefficients(const Eigen::Vector4d& delta, HopfCenter center);

// det d(b1,b2,b3)/d(alpha0,alpha1,alpha2), constant in delta
double hopf_design_jacobian();

// the annulus of the center's own chart (levels (-1/4, 0) around the origin)
PeriodAnnulus hopf_annulus();
CurveFamily hopf_chart(HopfCenter center);
// Melnikov integral of the chart perturbation (alpha or alpha-hat as appropriate)
double hopf_melnikov(HopfCenter center, const Eigen::Vector4d& chart_alpha, double h);

struct HopfDesign {
    HopfCenter center = HopfCenter::First;
    Eigen::Vector4d delta;        // alpha-chart coefficients realizing the design
    Eigen::Vector4d coef;         // resulting b (or d) values
    double window = 0.0;          // zeros verified on (-window, 0)
    ZeroReport verification;
    bool verified = false;        // exactly 3 transversal zeros in the window
};

// Three small limit cycles at one center: places the designed roots of the
// truncated series, solves the linear system for (alpha0, alpha1, alpha2), and
// verifies the count by direct Melnikov quadrature in the chart.
HopfDesign design_hopf_three(HopfCenter center, double alpha3_star);

}  // namespace abelint
