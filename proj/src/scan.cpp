#include "abelint/scan.hpp"

#include <cmath>

namespace abelint {

ZeroReport scan_zeros(const std::function<double(double)>& I, double lo, double hi,
                      const ScanOptions& opt) {
    if (!(hi > lo)) throw std::domain_error("empty scan interval");
    if (opt.grid_size < 32) throw std::domain_error("scan grid must have at least 32 points");

    ZeroReport rep;
    rep.grid_size = opt.grid_size;

    const double g = opt.cluster_gamma;
    const double tg = std::tanh(g);
    std::vector<double> hs(static_cast<std::size_t>(opt.grid_size));
    std::vector<double> vs(static_cast<std::size_t>(opt.grid_size));
    for (int k = 0; k < opt.grid_size; ++k) {
        const double u = (k + 0.5) / opt.grid_size;
        const double s = 0.5 * (1.0 + std::tanh(g * (2.0 * u - 1.0)) / tg);
        hs[static_cast<std::size_t>(k)] = lo + (hi - lo) * s;
        vs[static_cast<std::size_t>(k)] = I(hs[static_cast<std::size_t>(k)]);
        rep.grid_max = std::max(rep.grid_max, std::abs(vs[static_cast<std::size_t>(k)]));
    }
    if (rep.grid_max <= 1e-12) {
        rep.identically_zero = true;
        return rep;
    }

    for (int k = 0; k + 1 < opt.grid_size; ++k) {
        double a = hs[static_cast<std::size_t>(k)], b = hs[static_cast<std::size_t>(k + 1)];
        double fa = vs[static_cast<std::size_t>(k)], fb = vs[static_cast<std::size_t>(k + 1)];
        if (fa == 0.0) {
            // grid point exactly on a zero: count once, attribute to this cell
            rep.zeros.push_back({a, 0.0, fb > 0.0 ? 1 : -1});
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0)) continue;
        int it = 0;
        while (b - a > opt.refine_tol && it++ < 200) {
            const double m = 0.5 * (a + b);
            const double fm = I(m);
            if (fm == 0.0) { a = b = m; break; }
            if ((fa < 0.0) != (fm < 0.0)) { b = m; fb = fm; }
            else { a = m; fa = fm; }
        }
        rep.zeros.push_back({0.5 * (a + b), b - a, fb > fa ? 1 : -1});
    }

    // tangential suspects: interior |I| minima far below scale without a sign change
    for (int k = 1; k + 1 < opt.grid_size; ++k) {
        const double v0 = std::abs(vs[static_cast<std::size_t>(k - 1)]);
        const double v1 = std::abs(vs[static_cast<std::size_t>(k)]);
        const double v2 = std::abs(vs[static_cast<std::size_t>(k + 1)]);
        const bool same_sign = (vs[static_cast<std::size_t>(k - 1)] < 0.0) ==
                                   (vs[static_cast<std::size_t>(k + 1)] < 0.0) &&
                               (vs[static_cast<std::size_t>(k)] < 0.0) ==
                                   (vs[static_cast<std::size_t>(k + 1)] < 0.0);
        if (same_sign && v1 < v0 && v1 < v2 && v1 < 1e-9 * rep.grid_max)
            rep.suspected_even.push_back(hs[static_cast<std::size_t>(k)]);
    }
    return rep;
}

ZeroReport zero_scan(const HamiltonianParams& p, const PerturbationPoly& pert,
                     const PeriodAnnulus& ann, const ScanOptions& opt) {
    double lo = ann.h_lo, hi = ann.h_hi;
    if (ann.lo_unbounded) lo = std::min(hi - 1.0, -std::abs(opt.h_max));
    if (ann.hi_unbounded) hi = std::max(lo + 1.0, std::abs(opt.h_max));

    std::vector<double> flagged;
    auto I = [&](double h) {
        Orbit orb = trace_orbit(p, ann, h);
        if (pert.empty()) return 0.0;
        auto f = [&pert](double x, double y, double dx, double dy) {
            return pert.eval_g(x, y) * dx - pert.eval_f(x, y) * dy;
        };
        const auto est = contour_integral(orb, f, 1e-10, 1e-14);
        if (!est.converged) flagged.push_back(h);
        return orb.flow_sign() * est.value;
    };
    ZeroReport rep = scan_zeros(I, lo, hi, opt);
    rep.annulus_id = ann.id;
    rep.excluded = flagged;

    const RegionLabel label = classify_region(p);
    if (has_annuli(label)) {
        rep.ceiling = table1_ceiling(label, std::max(1, pert.degree()));
        rep.ceiling_respected = static_cast<long long>(rep.zeros.size()) <= rep.ceiling;
    }
    return rep;
}

long long table1_ceiling(const RegionLabel& region, int n) {
    const long long N = n;
    switch (region.tag) {
        case Region::D1p_1: return 58 * N + 121;
        case Region::D1p_2: return 54 * N + 109;
        case Region::D1p_3: return 58 * N + 121;
        case Region::L1p: return 31 * N + 66;
        case Region::D2p: return 31 * N + 67;
        case Region::L2p: return 31 * N + 66;
        case Region::D3p: return 31 * N + 67;
        case Region::D4p_1: return region.a_zero ? 49 * N - 60 : 31 * N + 66;
        case Region::D4p_2: return region.a_zero ? 45 * N - 58 : 27 * N + 55;
        case Region::D4p_3: return region.a_zero ? 45 * N - 58 : 27 * N + 55;
        case Region::D5p: return region.a_zero ? 49 * N - 60 : 31 * N + 69;
        case Region::L3p: return 31 * N + 68;
        case Region::D6p: return 208 * N + 1089;
        case Region::D1m_1: return 27 * N + 55;
        case Region::D1m_2: return 27 * N + 55;
        case Region::D1m_3: return 31 * N + 66;
        case Region::D2m: return 31 * N + 69;
        case Region::L1m: return 31 * N + 68;
        case Region::D3m: return 208 * N + 1089;
        case Region::NoAnnulus: break;
    }
    throw std::domain_error("no Table-1 ceiling for a region without annuli");
}

}  // namespace abelint
