#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "abelint/family.hpp"

namespace abelint {

struct TraceOptions {
    int n_min = 256;            // minimum vertex count of the returned orbit
    double level_tol_scale = 1e-12;  // |H - h| <= level_tol_scale * max(1,|h|) at vertices
    double geom_tol = 1e-10;    // closure gap bound
    double escape_radius = 1e4; // give up (not a closed orbit) beyond this
    std::size_t max_steps = 2000000;
};

// thrown when the requested level has no closed orbit through the seed
struct NoClosedOrbit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// thrown when a trace exists but fails its accuracy contract
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One x-monotone piece of a closed orbit, bounded by vertical-tangency points.
struct OrbitArc {
    double xa = 0.0, xb = 0.0;  // xa < xb
    bool increasing = true;     // loop traversal runs xa -> xb
    std::vector<Eigen::Vector2d> guide;  // trace vertices ordered by increasing x
};

// Closed oriented level curve of one chart, stored as its x-monotone arcs in
// counterclockwise traversal order. Sampling puts Gauss-Legendre nodes in the
// cos-angle variable of each arc, which absorbs the square-root turning points,
// so contour integrals of smooth integrands converge spectrally. The orbit keeps
// its curve model and can resample itself at any resolution.
class Orbit {
  public:
    Orbit(CurveFamily fam, double h, std::vector<OrbitArc> arcs, double closure_gap, int n);

    double h = 0.0;
    int annulus_id = -1;

    const std::vector<Eigen::Vector2d>& points() const { return pts_; }
    int size() const { return static_cast<int>(pts_.size()); }
    double closure_gap() const { return gap_; }
    // +1 when the Hamiltonian flow runs counterclockwise on this orbit
    int flow_sign() const { return flow_sign_; }
    double x_min() const { return x_lo_; }
    double x_max() const { return x_hi_; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }
    const CurveFamily& family() const { return fam_; }

    // Shoelace area of the sampled polyline (positive, counterclockwise).
    double area() const;

    // resample with ~n nodes distributed over the arcs; keeps the model
    void resample(int n);

    // Integrates f(x, y, dx/dt, dy/dt) over the counterclockwise orbit, where t is
    // the per-arc angle parameter; quadrature weights are handled internally.
    double raw_contour(const std::function<double(double, double, double, double)>& f) const;

  private:
    CurveFamily fam_;
    std::vector<OrbitArc> arcs_;
    std::vector<Eigen::Vector2d> pts_;
    std::vector<double> dxdt_, dydt_, wgt_;
    double x_lo_ = 0.0, x_hi_ = 0.0;
    double gap_ = 0.0;
    int flow_sign_ = 1;

    void sample_arcs(int n);
};

struct IntegralEstimate {
    double value = 0.0;
    double err = 0.0;      // difference between the two finest resolutions
    int nodes = 0;
    bool converged = true; // false when the tolerance was not reached at the node cap
};

// Contour integral with automatic resolution doubling until the two finest levels
// agree to rel_tol (relative) or abs_tol (absolute). The orbit keeps its final grid.
IntegralEstimate contour_integral(Orbit& orbit,
                                  const std::function<double(double, double, double, double)>& f,
                                  double rel_tol = 1e-11, double abs_tol = 1e-14,
                                  int max_nodes = 1 << 20);

// Several integrands on a shared grid, refined until all are stable.
std::vector<IntegralEstimate> contour_integrals(
    Orbit& orbit, const std::vector<std::function<double(double, double, double, double)>>& fs,
    double rel_tol = 1e-11, double abs_tol = 1e-14, int max_nodes = 1 << 20);

// All real y with H(x,y) = h for the chart, Newton-polished onto the level set.
std::vector<double> branch_solve(const CurveFamily& fam, double h, double x);
inline std::vector<double> branch_solve(const HamiltonianParams& p, double h, double x) {
    return branch_solve(main_chart(p), h, x);
}

// Traces the closed orbit of {H = h} through a point near `seed` (projected onto the
// level set first). Throws NoClosedOrbit if the component escapes or h is outside the
// annulus, NumericalFailure if closure cannot be met.
Orbit trace_orbit(const CurveFamily& fam, double h, const Eigen::Vector2d& seed,
                  const TraceOptions& opt = {});

// Annulus-addressed convenience: seeds from the annulus ray, checks h is interior.
Orbit trace_orbit(const HamiltonianParams& p, const PeriodAnnulus& ann, double h,
                  int n_min = 256);
Orbit trace_orbit_of(const CurveFamily& fam, const PeriodAnnulus& ann, double h,
                     int n_min = 256);

// Writes the orbit as CSV: "# h=<value> annulus=<id>" header, then x,y rows.
void write_orbit_csv(std::ostream& os, const Orbit& orbit);

// Gauss-Legendre nodes/weights on [-1, 1] (cached by order).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace abelint
