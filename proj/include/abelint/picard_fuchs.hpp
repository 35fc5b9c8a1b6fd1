#pragma once

#include <Eigen/Dense>

#include "abelint/abelian.hpp"
#include "abelint/poly.hpp"

namespace abelint {

// first-order systems V = (A h + B) V' satisfied by the generator blocks
enum class PFSelector { V1, V2, V3, V4, V5, V6 };

struct PFSystem {
    PFSelector which;
    Eigen::MatrixXd A, B;
};

// V1..V4 need a c (b^2-4ac) != 0 on the main chart; V5/V6 need a = 0, b != 0 on the
// equivalent chart y^2 - x^2 + b x^2 y^2 + c x^4
PFSystem pf_matrices(const HamiltonianParams& p, PFSelector which);

// generator components of each block, as GenIndex values
std::vector<int> pf_components(PFSelector which);
// the chart the block lives on
CurveFamily pf_chart(const HamiltonianParams& p, PFSelector which);

// || V - (A h + B) V' || / max(1, ||V||) with V from quadrature and V' from
// finite differences; the annulus must belong to the selector's chart
double pf_residual(const HamiltonianParams& p, PFSelector which, const PeriodAnnulus& ann,
                   double h);

// second-order reduction: G1 (I01'', I03'', I21'', Z'', I12'')^T = D (I01', Z')^T
struct SecondOrderSystem {
    Poly G1;
    Poly d11, d12, d21, d22, d31, d32, d41, d42;
    Eigen::Vector3d z_coef;  // Z = z0 I03 + z1 I21 + z2 I23
};
SecondOrderSystem second_order_system(const HamiltonianParams& p);

// a = 0 analogue: G4 (I01'', I03'', Zbar'')^T = Dbar (I01', Zbar')^T
struct SecondOrderAZero {
    Poly G4;
    Poly d11, d12, d21, d22, d31, d32;
    Eigen::Vector2d zbar_coef;  // Zbar = z0 I03 + z1 I21
};
SecondOrderAZero second_order_system_azero(const HamiltonianParams& p);

// scalar Riccati equations G w' = -q2 w^2 + q1 w + q0 for the generator ratios
enum class RiccatiSelector {
    Omega1,     // Z'/I01'
    Omega2,     // I13/I11
    Omega3,     // I22/I02
    OmegaBar1,  // Zbar'/I01' (a = 0 chart)
    OmegaBar2,  // I13/I11   (a = 0 chart)
};

struct RiccatiSystem {
    RiccatiSelector which;
    Poly G, q2, q1, q0;
};
RiccatiSystem riccati_system(const HamiltonianParams& p, RiccatiSelector which);

// |G w' - (-q2 w^2 + q1 w + q0)| at h, with w and w' from quadrature + finite
// differences; returns the denominator magnitude too so callers can gate
struct RiccatiResidual {
    double residual = 0.0;
    double denominator = 0.0;  // magnitude of the ratio's denominator at h
};
RiccatiResidual riccati_residual(const HamiltonianParams& p, RiccatiSelector which,
                                 const PeriodAnnulus& ann, double h);

// a = b = 0, c > 0: I11 on the right well is exactly C1 (h + 1/(4c))
struct I11ClosedForm {
    double C1 = 0.0;
    double value = 0.0;
};
I11ClosedForm closed_form_I11_abzero(const HamiltonianParams& p, double h);

}  // namespace abelint
