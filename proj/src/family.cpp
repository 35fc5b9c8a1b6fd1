#include "abelint/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "abelint/orbit.hpp"

namespace abelint {

namespace {

int sgn_tol(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::D1p_1: return "D1+(1)";
        case Region::D1p_2: return "D1+(2)";
        case Region::D1p_3: return "D1+(3)";
        case Region::L1p: return "l1+";
        case Region::D2p: return "D2+";
        case Region::L2p: return "l2+";
        case Region::D3p: return "D3+";
        case Region::D4p_1: return "D4+(1)";
        case Region::D4p_2: return "D4+(2)";
        case Region::D4p_3: return "D4+(3)";
        case Region::D5p: return "D5+";
        case Region::L3p: return "l3+";
        case Region::D6p: return "D6+";
        case Region::D1m_1: return "D1-(1)";
        case Region::D1m_2: return "D1-(2)";
        case Region::D1m_3: return "D1-(3)";
        case Region::D2m: return "D2-";
        case Region::L1m: return "l1-";
        case Region::D3m: return "D3-";
        case Region::NoAnnulus: return "NoAnnulus";
    }
    return "?";
}

std::string to_string(const RegionLabel& l) {
    std::string s = to_string(l.tag);
    if (l.a_zero) s += " [a=0]";
    return s;
}

RegionLabel classify_region(const HamiltonianParams& p, double tol) {
    p.require_valid();
    const int sa = sgn_tol(p.sum_a(), tol);   // sign of b + 2a
    const int sc = sgn_tol(p.sum_c(), tol);   // sign of b + 2c
    const int sd = sgn_tol(p.disc(), tol);    // sign of b^2 - 4ac
    const int sA = sgn_tol(p.a, tol);
    const int sB = sgn_tol(p.b, tol);
    const double h4 = p.disc() != 0.0 ? (p.a + p.b + p.c) / p.disc()
                                      : std::numeric_limits<double>::quiet_NaN();

    std::vector<Region> match;
    if (p.c > 0.0) {
        if (sA < 0 && sa > 0) match.push_back(Region::D2p);
        if (sA < 0 && sa == 0) match.push_back(Region::L1p);
        if (sA < 0 && sa < 0 && sc > 0) {
            // sub-case by the position of the off-axis saddle level h4 = (a+b+c)/disc
            // among the other critical levels 0 and -1/(4a)
            Region r = Region::D1p_1;
            if (h4 >= 0.0) r = (h4 < -1.0 / (4.0 * p.a)) ? Region::D1p_2 : Region::D1p_3;
            match.push_back(r);
        }
        if (sA < 0 && sc == 0) match.push_back(Region::L2p);
        if (sA < 0 && sc < 0) match.push_back(Region::D3p);
        if (sA >= 0 && sB < 0 && sc > 0 && sd > 0) {
            Region r = Region::D4p_1;  // no off-axis saddles when b+2a >= 0
            if (sa < 0) r = (h4 < 0.0) ? Region::D4p_2 : Region::D4p_3;
            match.push_back(r);
        }
        if ((sA >= 0 && sB >= 0) || (sd <= 0 && sc > 0)) match.push_back(Region::D5p);
        if (sd < 0 && sc == 0) match.push_back(Region::L3p);
        if (sd < 0 && sc < 0) match.push_back(Region::D6p);
    } else {
        if (sd > 0 && sc > 0 && sa < 0) {
            Region r = Region::D1m_1;
            if (h4 >= 0.0) r = (h4 < -1.0 / (4.0 * p.a)) ? Region::D1m_2 : Region::D1m_3;
            match.push_back(r);
        }
        if ((sA < 0 && sB < 0) || (sd <= 0 && sa < 0)) match.push_back(Region::D2m);
        if (sd < 0 && sa == 0) match.push_back(Region::L1m);
        if (sd < 0 && sa > 0) match.push_back(Region::D3m);
    }

    // D5- style unions may legitimately match twice with the same tag
    std::sort(match.begin(), match.end());
    match.erase(std::unique(match.begin(), match.end()), match.end());
    if (match.size() > 1) {
        std::string what = "classification conflict:";
        for (Region r : match) what += " " + to_string(r);
        throw std::runtime_error(what);
    }

    RegionLabel label;
    label.tag = match.empty() ? Region::NoAnnulus : match.front();
    label.a_zero = (sA == 0) && !match.empty();
    return label;
}

// ---------------------------------------------------------------------------
// charts

Eigen::Matrix2d CurveFamily::hessian(double x, double y) const {
    const double y2 = y * y;
    const double pxx = (12.0 * P[4] * x + 6.0 * P[3]) * x + 2.0 * P[2];
    const double qxx = (12.0 * Q[4] * x + 6.0 * Q[3]) * x + 2.0 * Q[2];
    Eigen::Matrix2d H;
    H(0, 0) = pxx + qxx * y2;
    H(0, 1) = H(1, 0) = 2.0 * y * dqx(x);
    H(1, 1) = 2.0 * qx(x) + 12.0 * R * y2;
    return H;
}

std::vector<double> CurveFamily::y_levels(double x, double h) const {
    const double A = R;
    const double B = qx(x);
    const double C = px(x) - h;
    const double scale = std::abs(A) + std::abs(B) + std::abs(C) + 1.0;

    std::vector<double> y2s;
    if (A == 0.0) {
        if (B != 0.0) y2s.push_back(-C / B);
    } else if (B == 0.0) {
        const double r = -C / A;
        if (r >= 0.0) y2s.push_back(std::sqrt(r));
    } else {
        double disc = B * B - 4.0 * A * C;
        if (disc < 0.0 && disc > -1e-13 * scale * scale) disc = 0.0;
        if (disc >= 0.0) {
            const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
            y2s.push_back(q / A);
            if (q != 0.0) y2s.push_back(C / q);
        }
    }

    std::vector<double> ys;
    for (double r : y2s) {
        if (r < 0.0 && r > -1e-13 * scale) r = 0.0;
        if (r < 0.0) continue;
        const double y = std::sqrt(r);
        ys.push_back(y);
        if (y > 0.0) ys.push_back(-y);
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end(),
                         [](double u, double v) { return std::abs(u - v) < 1e-15; }),
             ys.end());
    return ys;
}

CurveFamily main_chart(const HamiltonianParams& p) {
    p.require_valid();
    CurveFamily f;
    f.P << 0, 0, 1, 0, p.a;
    f.Q << -1, 0, p.b, 0, 0;
    f.R = p.c;
    return f;
}

CurveFamily swapped_chart(const HamiltonianParams& p) {
    p.require_valid();
    CurveFamily f;
    f.P << 0, 0, -1, 0, p.c;
    f.Q << 1, 0, p.b, 0, 0;
    f.R = 0.0;
    return f;
}

CurveFamily hopf_chart_first() {
    const double s2 = std::sqrt(2.0);
    CurveFamily f;
    f.P << 0, 0, -2, -2 * s2, -1;
    f.Q << -2, -2 * s2, -2, 0, 0;
    f.R = 1.0;
    return f;
}

CurveFamily hopf_chart_second() {
    const double s2 = std::sqrt(2.0);
    CurveFamily f;
    f.P << 0, 0, -2, 2 * s2, -1;
    f.Q << -2, 2 * s2, -2, 0, 0;
    f.R = 1.0;
    return f;
}

CurveFamily homoclinic_chart() {
    CurveFamily f;
    f.P << 0, 0, -0.5, 0, 0.5;
    f.Q << 0.5, 0, 1, 0, 0;
    f.R = -0.5;
    return f;
}

// ---------------------------------------------------------------------------
// critical points

namespace {

// one Newton polish run on grad H = 0; returns false if it wanders or stalls
bool newton_polish(const CurveFamily& f, Eigen::Vector2d& p) {
    for (int it = 0; it < 60; ++it) {
        const Eigen::Vector2d g = f.grad(p.x(), p.y());
        if (g.norm() < 1e-14) return true;
        const Eigen::Matrix2d Hm = f.hessian(p.x(), p.y());
        if (std::abs(Hm.determinant()) < 1e-14) {
            // degenerate direction: damped gradient descent on |grad|^2
            const Eigen::Vector2d step = -(Hm.transpose() * g) * 0.5;
            if (step.norm() < 1e-16) return f.grad(p.x(), p.y()).norm() < 1e-10;
            p += step.cwiseMax(-0.1).cwiseMin(0.1);
            continue;
        }
        const Eigen::Vector2d dp = Hm.partialPivLu().solve(-g);
        p += dp;
        if (dp.norm() < 1e-15 * (1.0 + p.norm())) break;
    }
    return f.grad(p.x(), p.y()).norm() < 1e-10;
}

CriticalKind classify_point(const CurveFamily& f, const Eigen::Vector2d& p) {
    const Eigen::Matrix2d Hm = f.hessian(p.x(), p.y());
    const double det = Hm.determinant();
    const double scale = Hm.cwiseAbs().maxCoeff() + 1e-30;
    if (std::abs(det) < 1e-8 * scale * scale) return CriticalKind::Degenerate;
    return det > 0.0 ? CriticalKind::Center : CriticalKind::Saddle;
}

void push_unique(std::vector<CriticalPoint>& out, const CurveFamily& f, Eigen::Vector2d p) {
    if (!newton_polish(f, p)) return;
    for (const CriticalPoint& q : out)
        if (std::abs(q.x - p.x()) < 1e-9 && std::abs(q.y - p.y()) < 1e-9) return;
    CriticalPoint cp;
    cp.x = p.x();
    cp.y = p.y();
    cp.kind = classify_point(f, p);
    cp.level = f.eval(p.x(), p.y());
    out.push_back(cp);
}

void sort_points(std::vector<CriticalPoint>& out) {
    std::sort(out.begin(), out.end(), [](const CriticalPoint& u, const CriticalPoint& v) {
        if (u.level != v.level) return u.level < v.level;
        if (u.x != v.x) return u.x < v.x;
        return u.y < v.y;
    });
}

}  // namespace

std::vector<CriticalPoint> critical_points(const HamiltonianParams& p) {
    p.require_valid();
    const CurveFamily f = main_chart(p);
    std::vector<CriticalPoint> out;
    // the axes and the off-axis branch solve in closed form:
    //   x (1 + 2a x^2 + b y^2) = 0 and y (-1 + b x^2 + 2c y^2) = 0
    push_unique(out, f, {0.0, 0.0});
    if (p.c > 0.0 || p.c < 0.0) {
        const double y2 = 1.0 / (2.0 * p.c);
        if (y2 > 0.0) {
            push_unique(out, f, {0.0, std::sqrt(y2)});
            push_unique(out, f, {0.0, -std::sqrt(y2)});
        }
    }
    if (p.a != 0.0) {
        const double x2 = -1.0 / (2.0 * p.a);
        if (x2 > 0.0) {
            push_unique(out, f, {std::sqrt(x2), 0.0});
            push_unique(out, f, {-std::sqrt(x2), 0.0});
        }
    }
    if (p.disc() != 0.0) {
        const double x2 = p.sum_c() / p.disc();
        const double y2 = -p.sum_a() / p.disc();
        if (x2 > 0.0 && y2 > 0.0) {
            const double xs = std::sqrt(x2), ys = std::sqrt(y2);
            push_unique(out, f, {xs, ys});
            push_unique(out, f, {xs, -ys});
            push_unique(out, f, {-xs, ys});
            push_unique(out, f, {-xs, -ys});
        }
    }
    sort_points(out);
    return out;
}

std::vector<CriticalPoint> critical_points_of(const CurveFamily& f, double span) {
    std::vector<CriticalPoint> out;
    const int n = 41;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Eigen::Vector2d p{-span + 2.0 * span * i / (n - 1), -span + 2.0 * span * j / (n - 1)};
            const Eigen::Vector2d g = f.grad(p.x(), p.y());
            if (g.norm() > 10.0 * span) continue;
            if (p.norm() > 4.0 * span) continue;
            Eigen::Vector2d q = p;
            if (!newton_polish(f, q)) continue;
            if (q.cwiseAbs().maxCoeff() > 2.0 * span) continue;
            push_unique(out, f, q);
        }
    sort_points(out);
    return out;
}

// ---------------------------------------------------------------------------
// annuli

double PeriodAnnulus::midpoint(double h_max) const {
    if (lo_unbounded && hi_unbounded) return 0.0;
    if (lo_unbounded) return h_hi - std::max(1.0, std::abs(h_hi));
    if (hi_unbounded) return std::min(h_lo + std::max(1.0, std::abs(h_lo)), std::max(h_lo * 1.5 + 1e-3, h_max));
    return 0.5 * (h_lo + h_hi);
}

namespace {

// winding number of a closed polyline around q (0 or +-1 for our simple curves)
int winding(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& q) {
    double total = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Eigen::Vector2d u = pts[k] - q;
        const Eigen::Vector2d v = pts[(k + 1) % pts.size()] - q;
        total += std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

// first root of H(anchor + t ray) = h with t > t_floor, or nullopt
std::optional<Eigen::Vector2d> seed_on_ray(const CurveFamily& f, double h,
                                           const Eigen::Vector2d& anchor,
                                           const Eigen::Vector2d& ray, double reach) {
    auto val = [&](double t) {
        const Eigen::Vector2d p = anchor + t * ray;
        return f.eval(p.x(), p.y()) - h;
    };
    const int n = 4000;
    double t_prev = 0.0, v_prev = val(0.0);
    for (int k = 1; k <= n; ++k) {
        // geometric refinement near the anchor, linear growth outward
        const double t = reach * std::pow(static_cast<double>(k) / n, 2.0);
        const double v = val(t);
        if (v == 0.0 || (v_prev < 0.0) != (v < 0.0)) {
            double lo = t_prev, hi = t;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((val(lo) < 0.0) != (val(mid) < 0.0)) hi = mid;
                else lo = mid;
            }
            return anchor + 0.5 * (lo + hi) * ray;
        }
        t_prev = t;
        v_prev = v;
    }
    return std::nullopt;
}

struct ProbeOrbit {
    std::vector<int> enclosed;   // indices into the critical point list (the signature)
    bool sym_x = false, sym_y = false;
    Eigen::Vector2d anchor, ray;
};

std::optional<ProbeOrbit> probe(const CurveFamily& f, double h,
                                const std::vector<CriticalPoint>& cps,
                                const Eigen::Vector2d& anchor, double reach) {
    for (const Eigen::Vector2d ray : {Eigen::Vector2d{1, 0}, Eigen::Vector2d{0, 1}}) {
        const auto seed = seed_on_ray(f, h, anchor, ray, reach);
        if (!seed) continue;
        try {
            TraceOptions opt;
            opt.n_min = 64;
            Orbit orb = trace_orbit(f, h, *seed, opt);
            ProbeOrbit po;
            po.anchor = anchor;
            po.ray = ray;
            if (winding(orb.points(), anchor) == 0) continue;  // closed but not around anchor
            for (std::size_t k = 0; k < cps.size(); ++k)
                if (winding(orb.points(), {cps[k].x, cps[k].y}) != 0)
                    po.enclosed.push_back(static_cast<int>(k));
            // mirror symmetry: reflected sample points must land back on this orbit,
            // tested against the vertex set (dense enough after resampling)
            orb.resample(1024);
            const auto& pts = orb.points();
            double spacing = 0.0;
            for (std::size_t k = 0; k + 1 < pts.size(); ++k)
                spacing = std::max(spacing, (pts[k + 1] - pts[k]).norm());
            auto on_orbit = [&](const Eigen::Vector2d& q) {
                double best = 1e300;
                for (const auto& v : pts) best = std::min(best, (v - q).norm());
                return best < 2.0 * spacing + 1e-9;
            };
            po.sym_y = true;
            po.sym_x = true;
            for (std::size_t k = 0; k < pts.size(); k += std::max<std::size_t>(1, pts.size() / 24)) {
                if (!on_orbit({pts[k].x(), -pts[k].y()})) po.sym_y = false;
                if (!on_orbit({-pts[k].x(), pts[k].y()})) po.sym_x = false;
            }
            return po;
        } catch (const NoClosedOrbit&) {
        } catch (const NumericalFailure&) {
        }
    }
    return std::nullopt;
}

std::vector<PeriodAnnulus> enumerate_annuli(const CurveFamily& f,
                                            const std::vector<CriticalPoint>& cps) {
    std::vector<PeriodAnnulus> out;
    if (cps.empty()) return out;

    double span = 1.0;
    for (const CriticalPoint& cp : cps) span = std::max({span, std::abs(cp.x), std::abs(cp.y)});
    const double reach = 40.0 * span;

    std::vector<double> levels;
    for (const CriticalPoint& cp : cps) levels.push_back(cp.level);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double u, double v) { return std::abs(u - v) < 1e-11; }),
                 levels.end());

    // probe heights: interval midpoints plus one level beyond each end
    const double lspan = std::max(1.0, levels.back() - levels.front());
    std::vector<std::pair<double, std::pair<int, int>>> intervals;  // (probe h, (lo idx, hi idx))
    for (std::size_t k = 0; k + 1 < levels.size(); ++k)
        intervals.push_back({0.5 * (levels[k] + levels[k + 1]),
                             {static_cast<int>(k), static_cast<int>(k) + 1}});
    intervals.push_back({levels.back() + 0.5 * lspan, {static_cast<int>(levels.size()) - 1, -1}});
    intervals.push_back({levels.front() - 0.5 * lspan, {-1, 0}});

    std::vector<Eigen::Vector2d> anchors;
    for (const CriticalPoint& cp : cps)
        if (cp.kind == CriticalKind::Center) anchors.push_back({cp.x, cp.y});
    anchors.push_back({0.0, 0.0});

    struct Family {
        std::vector<int> signature;
        int lo_idx, hi_idx;  // indices into levels, -1 for open ends
        ProbeOrbit rep;
    };
    std::vector<Family> fams;

    for (const auto& [hp, iv] : intervals) {
        std::set<std::vector<int>> seen;
        for (const auto& anchor : anchors) {
            auto po = probe(f, hp, cps, anchor, reach);
            if (!po || po->enclosed.empty()) continue;
            if (!seen.insert(po->enclosed).second) continue;
            fams.push_back({po->enclosed, iv.first, iv.second, *po});
        }
    }

    // merge runs of adjacent intervals carrying the same signature: a critical level
    // only bounds a family when the enclosed set changes across it
    std::sort(fams.begin(), fams.end(), [](const Family& u, const Family& v) {
        if (u.signature != v.signature) return u.signature < v.signature;
        return u.lo_idx < v.lo_idx;
    });
    std::vector<Family> merged;
    for (const Family& fam : fams) {
        if (!merged.empty() && merged.back().signature == fam.signature &&
            merged.back().hi_idx == fam.lo_idx) {
            merged.back().hi_idx = fam.hi_idx;
        } else {
            merged.push_back(fam);
        }
    }

    int next_id = 0;
    for (const Family& fam : merged) {
        PeriodAnnulus ann;
        ann.lo_unbounded = fam.lo_idx < 0;
        ann.hi_unbounded = fam.hi_idx < 0;
        ann.h_lo = ann.lo_unbounded ? -std::numeric_limits<double>::infinity()
                                    : levels[static_cast<std::size_t>(fam.lo_idx)];
        ann.h_hi = ann.hi_unbounded ? std::numeric_limits<double>::infinity()
                                    : levels[static_cast<std::size_t>(fam.hi_idx)];
        ann.anchor = fam.rep.anchor;
        ann.ray = fam.rep.ray;
        ann.sym_x = fam.rep.sym_x;
        ann.sym_y = fam.rep.sym_y;
        ann.id = next_id++;
        out.push_back(ann);
    }
    std::sort(out.begin(), out.end(), [](const PeriodAnnulus& u, const PeriodAnnulus& v) {
        if (u.h_lo != v.h_lo) return u.h_lo < v.h_lo;
        if (u.anchor.x() != v.anchor.x()) return u.anchor.x() < v.anchor.x();
        return u.anchor.y() < v.anchor.y();
    });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].id = static_cast<int>(k);
    return out;
}

}  // namespace

std::vector<PeriodAnnulus> annuli(const HamiltonianParams& p) {
    if (!has_annuli(classify_region(p))) return {};
    return enumerate_annuli(main_chart(p), critical_points(p));
}

std::vector<PeriodAnnulus> annuli_of(const CurveFamily& f, double span) {
    return enumerate_annuli(f, critical_points_of(f, span));
}

std::vector<G1Zero> g1_zeros(const HamiltonianParams& p) {
    p.require_valid();
    if (p.a == 0.0) throw std::domain_error("g1_zeros requires a != 0 (use the a=0 variant)");
    std::vector<G1Zero> zs(4);
    zs[0].h = 0.0;
    zs[1].h = -1.0 / (4.0 * p.c);
    zs[2].h = -1.0 / (4.0 * p.a);
    if (p.disc() != 0.0) {
        zs[3].h = (p.a + p.b + p.c) / p.disc();
    } else {
        zs[3].defined = false;
        zs[3].note = "h4 undefined: b^2 - 4ac = 0";
    }
    const auto anns = annuli(p);
    for (auto& z : zs) {
        if (!z.defined) continue;
        for (const auto& ann : anns) {
            if (ann.contains(z.h) && std::abs(z.h - ann.h_lo) > 1e-12 &&
                std::abs(z.h - ann.h_hi) > 1e-12) {
                z.inside_annulus = true;
            }
        }
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (zs[i].defined && zs[j].defined && std::abs(zs[i].h - zs[j].h) < 1e-12) {
                const std::string note =
                    "h" + std::to_string(i + 1) + " = h" + std::to_string(j + 1) + " (degenerate)";
                zs[i].note = zs[i].note.empty() ? note : zs[i].note + "; " + note;
                zs[j].note = zs[j].note.empty() ? note : zs[j].note + "; " + note;
            }
    return zs;
}

}  // namespace abelint
