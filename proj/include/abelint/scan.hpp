#pragma once

#include <functional>

#include "abelint/abelian.hpp"

namespace abelint {

struct ZeroHit {
    double h = 0.0;
    double bracket = 0.0;  // final bracket width after bisection
    int slope = 0;         // sign of I across the crossing (-1 falling, +1 rising)
};

struct ZeroReport {
    int annulus_id = -1;
    std::vector<ZeroHit> zeros;  // strictly increasing in h
    int grid_size = 0;
    bool identically_zero = false;
    double grid_max = 0.0;                // max |I| seen on the grid
    std::vector<double> suspected_even;   // |I| dips below 1e-9 * grid_max, no sign change
    std::vector<double> excluded;         // grid points whose quadrature was flagged
    long long ceiling = -1;               // Table-1 bound when requested, else -1
    bool ceiling_respected = true;
};

struct ScanOptions {
    int grid_size = 128;
    double refine_tol = 1e-10;   // bisection width target in h
    double cluster_gamma = 3.0;  // tanh stretching (~20% of nodes in the outer 1%)
    double h_max = 10.0;         // cutoff for unbounded annuli
};

// Scans I on the open interval (lo, hi) with endpoint-clustered nodes, brackets sign
// changes, bisects each to refine_tol. Only transversal zeros are counted.
ZeroReport scan_zeros(const std::function<double(double)>& I, double lo, double hi,
                      const ScanOptions& opt = {});

// Melnikov scan over one period annulus; moments are cached per grid point so the
// bisection stage reuses orbit quadrature where possible.
ZeroReport zero_scan(const HamiltonianParams& p, const PerturbationPoly& pert,
                     const PeriodAnnulus& ann, const ScanOptions& opt = {});

// Table-1 upper bound for the number of zeros of I(h) for this region and degree.
long long table1_ceiling(const RegionLabel& region, int n);

}  // namespace abelint
