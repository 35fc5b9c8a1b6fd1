#pragma once

#include <stdexcept>
#include <string>

namespace abelint {

// Coefficients of the quartic Hamiltonian H(x,y) = x^2 - y^2 + a x^4 + c y^4 + b x^2 y^2.
// The family requires c != 0. Derived discriminants are always recomputed.
struct HamiltonianParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;

    double disc() const { return b * b - 4.0 * a * c; }   // b^2 - 4ac
    double sum_a() const { return b + 2.0 * a; }
    double sum_c() const { return b + 2.0 * c; }

    void require_valid() const {
        if (c == 0.0) throw std::domain_error("family requires c != 0");
    }
};

enum class Region {
    D1p_1, D1p_2, D1p_3, L1p, D2p, L2p, D3p,
    D4p_1, D4p_2, D4p_3, D5p, L3p, D6p,
    D1m_1, D1m_2, D1m_3, D2m, L1m, D3m,
    NoAnnulus,
};

struct RegionLabel {
    Region tag = Region::NoAnnulus;
    bool a_zero = false;  // degenerate a = 0 sub-case (separate Table 1 rows)
};

std::string to_string(Region r);
std::string to_string(const RegionLabel& l);

// Classifies (a,b,c) into the parameter-plane regions. Boundary strata (l1, l2, l3)
// are matched with exact sign tests by default; a positive tol snaps near-boundary
// inputs onto the nearest stratum. Throws std::domain_error for c = 0 and
// std::runtime_error if two region predicates match (classification conflict).
RegionLabel classify_region(const HamiltonianParams& p, double tol = 0.0);

// True when the region has at least one period annulus.
inline bool has_annuli(const RegionLabel& l) { return l.tag != Region::NoAnnulus; }

}  // namespace abelint
