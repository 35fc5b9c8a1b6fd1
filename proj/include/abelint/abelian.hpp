#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "abelint/orbit.hpp"

namespace abelint {

// the nine generator integrals, in the order used throughout
enum GenIndex : int { kI01 = 0, kI03, kI21, kI23, kI12, kI11, kI13, kI02, kI22 };
inline constexpr std::array<std::pair<int, int>, 9> kGenExponents{
    {{0, 1}, {0, 3}, {2, 1}, {2, 3}, {1, 2}, {1, 1}, {1, 3}, {0, 2}, {2, 2}}};
std::string gen_name(int k);

struct ValueWithError {
    double value = 0.0;
    double err = 0.0;
    bool flagged = false;  // error estimate above the requested tolerance
};

// I_ij = contour x^i y^j dx over the flow-oriented orbit
struct GeneratorVector {
    double h = 0.0;
    Eigen::Matrix<double, 9, 1> values = Eigen::Matrix<double, 9, 1>::Zero();
    Eigen::Matrix<double, 9, 1> est_error = Eigen::Matrix<double, 9, 1>::Zero();
    double operator[](int k) const { return values[k]; }
};

// Coefficients of the degree-n perturbation f = sum a_ij x^i y^j, g = sum b_ij x^i y^j.
class PerturbationPoly {
  public:
    explicit PerturbationPoly(int degree = 0);
    int degree() const { return n_; }
    double a(int i, int j) const { return a_(i, j); }
    double b(int i, int j) const { return b_(i, j); }
    void set_a(int i, int j, double v);
    void set_b(int i, int j, double v);
    double eval_f(double x, double y) const;
    double eval_g(double x, double y) const;
    bool empty() const;

  private:
    void check(int i, int j) const;
    int n_;
    Eigen::MatrixXd a_, b_;
};

inline constexpr double kSymTol = 1e-10;

// contour x^i y^j dx with the flow orientation of the orbit; i + j <= 60
ValueWithError integrate_monomial(Orbit& orbit, int i, int j, double rel_tol = 1e-11,
                                  double abs_tol = 1e-14);

// all nine generators on one shared discretization; symmetry-forced entries are
// exactly zero when the annulus carries the corresponding flag
GeneratorVector generator_vector(const HamiltonianParams& p, const PeriodAnnulus& ann, double h,
                                 double rel_tol = 1e-11);
GeneratorVector generator_vector_on(Orbit& orbit, bool sym_x, bool sym_y,
                                    double rel_tol = 1e-11);

struct DerivativeResult {
    double value = 0.0;        // finite-difference value (primary)
    double quadrature = 0.0;   // direct quadrature of the dH-differentiated integrand
    bool cross_checked = false;
    bool flagged = false;      // methods disagree beyond 1e-5 relative
};

// d/dh I_ij by 4th-order central differences; on the main chart also cross-checked
// against (j/2) contour x^i y^(j-2) / (2c y^2 + b x^2 - 1) dx
DerivativeResult derivative_Iij(const HamiltonianParams& p, const PeriodAnnulus& ann, double h,
                                int i, int j, double fd_step = 0.0);

// first-order Melnikov integral I(h) = contour g dx - f dy, flow orientation
double melnikov_eval(const HamiltonianParams& p, const PerturbationPoly& pert,
                     const PeriodAnnulus& ann, double h, double rel_tol = 1e-10);
double melnikov_on_orbit(Orbit& orbit, const PerturbationPoly& pert, double rel_tol = 1e-10);

// Flow-oriented moments contour x^i y^j dx for all i+j <= deg, sharing one grid;
// Melnikov values of any perturbation up to that degree follow by linearity.
struct MomentTable {
    double h = 0.0;
    int deg = 0;
    Eigen::MatrixXd m;  // m(i,j) = contour x^i y^j dx
};
MomentTable moment_table(Orbit& orbit, int deg, double rel_tol = 1e-10);
double melnikov_from_moments(const MomentTable& t, const PerturbationPoly& pert);

}  // namespace abelint
