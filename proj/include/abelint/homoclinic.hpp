#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "abelint/hopf.hpp"
#include "abelint/scan.hpp"

namespace abelint {

// chart changes between the original q-coefficients, the first-center alpha chart,
// and the bar chart of the double-loop system
Eigen::Vector4d q_to_alpha(const Eigen::Vector4d& q);
Eigen::Vector4d alpha_to_q(const Eigen::Vector4d& alpha);
Eigen::Vector4d bar_transform(const Eigen::Vector4d& alpha);      // alpha -> alpha-bar
Eigen::Vector4d bar_inverse(const Eigen::Vector4d& alpha_bar);

// double-loop geometry of the chart H3 = y^2/2 - x^2/2 + x^2 y^2 - y^4/2 + x^4/2
struct LoopGeometry {
    double x1_star = 0.05;  // reporting split only; integrands are exact everywhere
    double x2_star = 0.9;
    double y2_star = 0.0;   // y+(x2_star)

    // upper branch y+(x)^2 on [0, 1], computed cancellation-free
    static double y_plus_sq(double x);
    static double y_plus(double x);
    // nose branch x(y) on (-y2*, y2*) (right loop, x near 1)
    static double x_of_y(double y);
    // on-loop identities: 1 + 2x^2 - 2y+^2 = sqrt(8x^4+1), 1 - 2y^2 - 2x^2 = -sqrt(8y^4-8y^2+1)
    static double sqrt_loop_x(double x) { return std::sqrt(8.0 * x * x * x * x + 1.0); }
    static double sqrt_loop_y(double y) {
        return std::sqrt(std::max(0.0, (8.0 * y * y - 8.0) * y * y + 1.0));
    }
};

struct HomoclinicConstants {
    double A0 = 0, A1 = 0, A2 = 0, A3 = 0;  // loop integrals of y, xy, y^3, x^2 y dx
    double A4 = 0, A5 = 0, A6 = 0;          // the c2 integral constants
    double x1_star = 0.05, x2_star = 0.9;   // J-split used for reporting
    double y2_star = 0.0;                   // y+(x2_star)
    double J1[3] = {0, 0, 0};               // per-split pieces of (A4, A5, A6)
    double J2[3] = {0, 0, 0};
    double J3[3] = {0, 0, 0};
    double quad_tol = 1e-13;
};

// loop constants of the fixed double loop; cached after the first call
const HomoclinicConstants& loop_constants();
// uncached variant with explicit split points (for split-independence checks)
HomoclinicConstants compute_loop_constants(double x2_star, double rel_tol = 1e-13);

struct HomoclinicExpansion {
    double c0_1 = 0, c0_2 = 0, c1 = 0, c2_1 = 0, c2_2 = 0, c3 = 0;
    double c0 = 0, c2 = 0;
    double q = 0;                 // saddle constant used in c2_j (configuration input)
    Eigen::Vector3d mu{0, 0, 0};  // (c0_1, alpha-bar0, c2_1)
};
// inner expansions I_j(h) = c0_j + c1 h ln|h| + c2_j h + c3 h^2 ln|h|,
// outer I_3(h) = c0 + 2 c1 h ln|h| + c2 h + 2 c3 h^2 ln|h|
HomoclinicExpansion expansion_coefficients(const Eigen::Vector4d& alpha_bar, double q);

// evaluation of the truncated expansions
double inner_expansion(const HomoclinicExpansion& e, int loop, double h);  // loop 1 or 2, h < 0
double outer_expansion(const HomoclinicExpansion& e, double h);            // h > 0

// the three Melnikov branches of the double-loop chart
enum class LoopSite { Inner1, Inner2, Outer };
PeriodAnnulus loop_annulus(LoopSite site);
double loop_melnikov(LoopSite site, const Eigen::Vector4d& alpha_bar, double h);

struct HomoclinicDesign {
    Eigen::Vector4d alpha_bar;
    Eigen::Vector3d mu;        // designed (mu1, mu2, mu3)
    double q = 0.0;
    double window = 0.0;       // zeros verified for h in (-window, 0)
    ZeroReport verification;   // I_1 (or I_2) scan
    ZeroReport outer;          // companion I_3 scan (at most 2 expected)
    bool verified = false;
};
// three zeros of the chosen inner branch near the loop; mu-coordinates are inverted
// with the computed A-constants, so the unknown saddle constant q only shifts the
// designed mu3 by q mu2, which the staircase absorbs
HomoclinicDesign design_homoclinic_three(double alpha_bar3_star, double q = 0.0,
                                         LoopSite site = LoopSite::Inner1);

// ------------------------------------------------------------------ distributions

struct DistributionTuple {
    std::array<int, 5> n{};  // (N_M1, N_M2, N_I1, N_I2, N_I3)
    bool operator==(const DistributionTuple&) const = default;
};
const std::array<DistributionTuple, 18>& distribution_targets();
bool is_distribution_target(const DistributionTuple& t);

struct SiteReport {
    int count = 0;
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<double> zeros;
};

struct DistributionResult {
    DistributionTuple target;
    DistributionTuple realized;
    Eigen::Vector4d alpha;     // first-center chart coefficients
    bool verified = false;
    std::array<SiteReport, 5> sites;  // M1, M2, I1, I2, I3
    std::string note;
};

// Realizes one of the 18 coexistence distributions: chooses which expansion
// coefficients vanish or dominate, solves the linear relations for
// (alpha0, alpha1, alpha2) given the alpha3 anchor, and verifies every claimed
// count by direct quadrature scans near the relevant boundary.
DistributionResult distribution_search(const DistributionTuple& target, double alpha3_anchor = 1.0,
                                       double q = 0.0);

}  // namespace abelint
