#include "abelint/orbit.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>

namespace abelint {

namespace {

double level_scale(double h) { return std::max(1.0, std::abs(h)); }

// Newton projection onto {H = h} along the gradient; returns false near critical points
bool project_to_level(const CurveFamily& f, double h, Eigen::Vector2d& p) {
    for (int it = 0; it < 50; ++it) {
        const double r = f.eval(p.x(), p.y()) - h;
        if (std::abs(r) <= 1e-15 * level_scale(h)) return true;
        const Eigen::Vector2d g = f.grad(p.x(), p.y());
        const double g2 = g.squaredNorm();
        if (g2 < 1e-28) return false;
        p -= (r / g2) * g;
    }
    return std::abs(f.eval(p.x(), p.y()) - h) <= 1e-12 * level_scale(h);
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) {
            nodes = it->second.first;
            weights = it->second.second;
            return;
        }
    }
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(n, std::make_pair(nodes, weights));
}

std::vector<double> branch_solve(const CurveFamily& fam, double h, double x) {
    std::vector<double> ys = fam.y_levels(x, h);
    for (double& y : ys) {
        // one guarded Newton step in y tightens the closed-form root
        const double hy = fam.grad(x, y).y();
        if (std::abs(hy) > 1e-8) y -= (fam.eval(x, y) - h) / hy;
    }
    return ys;
}

Orbit trace_orbit(const CurveFamily& fam, double h, const Eigen::Vector2d& seed,
                  const TraceOptions& opt) {
    Eigen::Vector2d p = seed;
    if (!project_to_level(fam, h, p))
        throw NoClosedOrbit("seed cannot be projected onto the level set");

    const Eigen::Vector2d p0 = p;
    auto tangent = [&](const Eigen::Vector2d& q) {
        const Eigen::Vector2d g = fam.grad(q.x(), q.y());
        Eigen::Vector2d t{g.y(), -g.x()};
        const double n = t.norm();
        if (n < 1e-300) throw NumericalFailure("tangent vanishes (critical point hit)");
        return Eigen::Vector2d(t / n);
    };

    const Eigen::Vector2d t0 = tangent(p0);
    Eigen::Vector2d t_prev = t0;

    std::vector<Eigen::Vector2d> chain;
    chain.push_back(p0);

    double scale = std::max(1.0, p0.norm());
    double step = 1e-3 * scale;
    const double max_step = 0.05 * scale;
    double perimeter = 0.0;
    double gap = 0.0;
    bool closed = false;

    for (std::size_t k = 0; k < opt.max_steps && !closed; ++k) {
        Eigen::Vector2d q;
        Eigen::Vector2d t_new;
        while (true) {
            q = p + step * t_prev;
            if (!project_to_level(fam, h, q) || (q - p).norm() > 2.5 * step) {
                step *= 0.5;
                if (step < 1e-14 * scale) throw NumericalFailure("step underflow during trace");
                continue;
            }
            t_new = tangent(q);
            const double turn = std::acos(std::clamp(t_new.dot(t_prev), -1.0, 1.0));
            if (turn > 0.30) {
                step *= 0.5;
                if (step < 1e-14 * scale) throw NumericalFailure("step underflow during trace");
                continue;
            }
            if (turn < 0.06) step = std::min(step * 1.4, max_step);
            break;
        }

        // closure: crossing of the section through p0 normal to t0, same direction
        const double s_prev = (p - p0).dot(t0);
        const double s_new = (q - p0).dot(t0);
        if (perimeter > 6.0 * step && s_prev < 0.0 && s_new >= 0.0 &&
            t_new.dot(t0) > 0.25 && (q - p0).norm() < 0.2 * perimeter) {
            const double w = s_prev / (s_prev - s_new);
            Eigen::Vector2d hit = p + w * (q - p);
            // walk the hit point along the curve onto the section; the residual
            // distance to p0 is the genuine level-set closure error
            for (int it = 0; it < 40; ++it) {
                project_to_level(fam, h, hit);
                const double s = (hit - p0).dot(t0);
                if (std::abs(s) < 1e-16 * scale) break;
                const Eigen::Vector2d tg = tangent(hit);
                const double ts = tg.dot(t0);
                if (std::abs(ts) < 0.1) break;
                hit -= (s / ts) * tg;
            }
            project_to_level(fam, h, hit);
            gap = (hit - p0).norm();
            closed = true;
            break;
        }

        perimeter += (q - p).norm();
        p = q;
        t_prev = t_new;
        chain.push_back(p);
        scale = std::max(scale, p.norm());
        if (p.norm() > opt.escape_radius) throw NoClosedOrbit("level component escapes to infinity");
        if (k + 1 == opt.max_steps) throw NumericalFailure("trace did not close within the step budget");
    }
    if (chain.size() < 8) throw NumericalFailure("degenerate trace");
    if (gap > opt.geom_tol * std::max(1.0, scale)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", gap);
        throw NumericalFailure(std::string("orbit closure gap ") + buf + " above tolerance");
    }

    const std::size_t m = chain.size();

    // vertical-tangency vertices: local extrema of x along the cyclic chain
    auto x_of = [&](std::size_t k) { return chain[k % m].x(); };
    std::vector<std::size_t> turns;
    for (std::size_t k = 0; k < m; ++k) {
        const double dl = x_of(k + m) - x_of(k + m - 1);
        const double dr = x_of(k + 1) - x_of(k);
        if ((dl > 0.0 && dr <= 0.0) || (dl < 0.0 && dr >= 0.0)) turns.push_back(k);
    }
    if (turns.size() < 2 || turns.size() % 2 != 0)
        throw NumericalFailure("unexpected turning-point structure");

    auto refine_turn = [&](Eigen::Vector2d v) {
        // on a symmetry axis the extreme sits at y = 0 where H_y vanishes identically
        if (std::abs(v.y()) < 1e-6 * scale) {
            double x = v.x();
            bool ok = true;
            for (int it = 0; it < 60; ++it) {
                const double r = fam.eval(x, 0.0) - h;
                const double d = fam.grad(x, 0.0).x();
                if (std::abs(d) < 1e-12) { ok = false; break; }
                const double dx = r / d;
                x -= dx;
                if (std::abs(dx) < 1e-16 * (1.0 + std::abs(x))) break;
            }
            if (ok && std::abs(x - v.x()) < 0.05 * scale + 2.0 * std::abs(v.y()))
                return Eigen::Vector2d{x, 0.0};
        }
        for (int it = 0; it < 60; ++it) {
            const Eigen::Vector2d g = fam.grad(v.x(), v.y());
            const Eigen::Matrix2d Hm = fam.hessian(v.x(), v.y());
            Eigen::Matrix2d J;
            J << g.x(), g.y(), Hm(1, 0), Hm(1, 1);
            if (std::abs(J.determinant()) < 1e-18) break;
            const Eigen::Vector2d r{fam.eval(v.x(), v.y()) - h, g.y()};
            const Eigen::Vector2d dv = J.partialPivLu().solve(-r);
            v += dv;
            if (dv.norm() < 1e-16 * (1.0 + v.norm())) break;
        }
        return v;
    };

    std::vector<Eigen::Vector2d> corner(turns.size());
    for (std::size_t i = 0; i < turns.size(); ++i) corner[i] = refine_turn(chain[turns[i]]);

    std::vector<OrbitArc> arcs;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const std::size_t j = (i + 1) % turns.size();
        OrbitArc arc;
        std::vector<Eigen::Vector2d> g;
        g.push_back(corner[i]);
        for (std::size_t k = (turns[i] + 1) % m; k != turns[j]; k = (k + 1) % m)
            g.push_back(chain[k]);
        g.push_back(corner[j]);
        arc.increasing = g.back().x() > g.front().x();
        if (!arc.increasing) std::reverse(g.begin(), g.end());
        // strict x-monotone filter for interpolation (keeps both refined endpoints)
        std::vector<Eigen::Vector2d> mono;
        for (const auto& v : g)
            if (mono.empty() || v.x() > mono.back().x() + 1e-15) mono.push_back(v);
        if (mono.back().x() < g.back().x()) mono.push_back(g.back());
        if (mono.size() < 2) throw NumericalFailure("degenerate arc");
        arc.guide = std::move(mono);
        arc.xa = arc.guide.front().x();
        arc.xb = arc.guide.back().x();
        if (!(arc.xb > arc.xa)) throw NumericalFailure("degenerate arc extent");
        arcs.push_back(std::move(arc));
    }

    return Orbit(fam, h, std::move(arcs), gap, std::max(opt.n_min, 64));
}

Orbit::Orbit(CurveFamily fam, double h_, std::vector<OrbitArc> arcs, double closure_gap, int n)
    : h(h_), fam_(std::move(fam)), arcs_(std::move(arcs)), gap_(closure_gap) {
    x_lo_ = arcs_.front().xa;
    x_hi_ = arcs_.front().xb;
    for (const auto& a : arcs_) {
        x_lo_ = std::min(x_lo_, a.xa);
        x_hi_ = std::max(x_hi_, a.xb);
    }
    sample_arcs(n);
    if (area() < 0.0) {
        // normalize counterclockwise; remember that the flow ran the other way
        std::reverse(arcs_.begin(), arcs_.end());
        for (auto& a : arcs_) a.increasing = !a.increasing;
        flow_sign_ = -1;
        sample_arcs(n);
    }
    // flow direction vs. traversal: compare the flow field with the sampled tangent
    int vote = 0;
    for (std::size_t k = 0; k < pts_.size(); k += std::max<std::size_t>(1, pts_.size() / 8)) {
        const Eigen::Vector2d g = fam_.grad(pts_[k].x(), pts_[k].y());
        const double d = g.y() * dxdt_[k] - g.x() * dydt_[k];
        vote += d > 0.0 ? 1 : -1;
    }
    flow_sign_ = vote >= 0 ? 1 : -1;
}

void Orbit::sample_arcs(int n) {
    const int arcs_n = static_cast<int>(arcs_.size());
    double total_w = 0.0;
    for (const auto& a : arcs_) total_w += a.xb - a.xa;

    pts_.clear();
    dxdt_.clear();
    dydt_.clear();
    wgt_.clear();

    for (const auto& arc : arcs_) {
        int ni = std::max(12, static_cast<int>(std::lround(n * (arc.xb - arc.xa) / total_w)));
        ni = std::min(ni, std::max(12, n));
        // composite Gauss-Legendre: uniform panels in t, capped order per panel
        const int order = std::min(ni, 48);
        const int panels = (ni + order - 1) / order;
        std::vector<double> gl_x, gl_w;
        gauss_legendre(order, gl_x, gl_w);
        std::vector<double> gnodes, gw;  // on [-1, 1] overall
        for (int pnl = 0; pnl < panels; ++pnl) {
            const double lo = -1.0 + 2.0 * pnl / panels;
            const double hw = 1.0 / panels;
            for (int q = 0; q < order; ++q) {
                gnodes.push_back(lo + hw * (gl_x[static_cast<std::size_t>(q)] + 1.0));
                gw.push_back(gl_w[static_cast<std::size_t>(q)] * hw);
            }
        }
        ni = static_cast<int>(gnodes.size());

        const double c = 0.5 * (arc.xa + arc.xb);
        const double w = 0.5 * (arc.xb - arc.xa);
        // x(t) = c -+ w cos t on (0, pi); cos substitution absorbs both sqrt endpoints
        const double sgn = arc.increasing ? -1.0 : 1.0;

        auto guide_y = [&](double x) {
            const auto& gd = arc.guide;
            auto it = std::lower_bound(gd.begin(), gd.end(), x,
                                       [](const Eigen::Vector2d& v, double xx) { return v.x() < xx; });
            if (it == gd.begin()) return gd.front().y();
            if (it == gd.end()) return gd.back().y();
            const auto& hi2 = *it;
            const auto& lo2 = *(it - 1);
            const double frac = (x - lo2.x()) / (hi2.x() - lo2.x());
            return lo2.y() + frac * (hi2.y() - lo2.y());
        };
        auto pick = [&](double x, double guess) {
            const auto ys = fam_.y_levels(x, h);
            if (ys.empty()) return guess;
            double best = ys.front();
            for (double y : ys)
                if (std::abs(y - guess) < std::abs(best - guess)) best = y;
            const double hy = fam_.grad(x, best).y();
            if (std::abs(hy) > 1e-8) best -= (fam_.eval(x, best) - h) / hy;
            return best;
        };

        // nearest-root continuation from the arc midpoint outward: adjacent nodes keep
        // the branches apart even right next to the turning points
        std::vector<double> xs(static_cast<std::size_t>(ni)), ys(static_cast<std::size_t>(ni));
        for (int j = 0; j < ni; ++j) {
            const double t = 0.5 * M_PI * (gnodes[static_cast<std::size_t>(j)] + 1.0);
            xs[static_cast<std::size_t>(j)] = c + sgn * w * std::cos(t);
        }
        const int mid = ni / 2;
        ys[static_cast<std::size_t>(mid)] = pick(xs[static_cast<std::size_t>(mid)],
                                                 guide_y(xs[static_cast<std::size_t>(mid)]));
        for (int j = mid + 1; j < ni; ++j)
            ys[static_cast<std::size_t>(j)] = pick(xs[static_cast<std::size_t>(j)],
                                                   ys[static_cast<std::size_t>(j - 1)]);
        for (int j = mid - 1; j >= 0; --j)
            ys[static_cast<std::size_t>(j)] = pick(xs[static_cast<std::size_t>(j)],
                                                   ys[static_cast<std::size_t>(j + 1)]);

        for (int j = 0; j < ni; ++j) {
            const double t = 0.5 * M_PI * (gnodes[static_cast<std::size_t>(j)] + 1.0);
            const double x = xs[static_cast<std::size_t>(j)];
            const double y = ys[static_cast<std::size_t>(j)];
            const double dxdt = -sgn * w * std::sin(t);
            const Eigen::Vector2d g = fam_.grad(x, y);
            const double dydt = g.y() != 0.0 ? -g.x() / g.y() * dxdt : 0.0;
            pts_.push_back({x, y});
            dxdt_.push_back(dxdt);
            dydt_.push_back(dydt);
            wgt_.push_back(gw[static_cast<std::size_t>(j)] * 0.5 * M_PI);
        }
    }
    (void)arcs_n;
}

void Orbit::resample(int n) { sample_arcs(n); }

double Orbit::area() const {
    double s = 0.0;
    for (std::size_t k = 0; k < pts_.size(); ++k) {
        const auto& u = pts_[k];
        const auto& v = pts_[(k + 1) % pts_.size()];
        s += u.x() * v.y() - v.x() * u.y();
    }
    return 0.5 * s;
}

double Orbit::raw_contour(const std::function<double(double, double, double, double)>& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < pts_.size(); ++k)
        sum += wgt_[k] * f(pts_[k].x(), pts_[k].y(), dxdt_[k], dydt_[k]);
    return sum;
}

std::vector<IntegralEstimate> contour_integrals(
    Orbit& orbit, const std::vector<std::function<double(double, double, double, double)>>& fs,
    double rel_tol, double abs_tol, int max_nodes) {
    int n = 256;
    orbit.resample(n);
    std::vector<double> prev(fs.size()), l1(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) prev[i] = orbit.raw_contour(fs[i]);
    std::vector<IntegralEstimate> est(fs.size());
    while (true) {
        n *= 2;
        orbit.resample(n);
        bool all_ok = true;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const double cur = orbit.raw_contour(fs[i]);
            // roundoff floor: cancellation below 1e-14 of the integrand mass is noise
            l1[i] = orbit.raw_contour([&](double x, double y, double dx, double dy) {
                return std::abs(fs[i](x, y, dx, dy));
            });
            est[i].value = cur;
            est[i].err = std::abs(cur - prev[i]);
            est[i].nodes = n;
            est[i].converged =
                est[i].err <= std::max({abs_tol, rel_tol * std::abs(cur), 1e-14 * l1[i]});
            all_ok = all_ok && est[i].converged;
            prev[i] = cur;
        }
        if (all_ok || n >= max_nodes) return est;
    }
}

IntegralEstimate contour_integral(Orbit& orbit,
                                  const std::function<double(double, double, double, double)>& f,
                                  double rel_tol, double abs_tol, int max_nodes) {
    return contour_integrals(orbit, {f}, rel_tol, abs_tol, max_nodes).front();
}

Orbit trace_orbit_of(const CurveFamily& fam, const PeriodAnnulus& ann, double h, int n_min) {
    if (!ann.contains(h)) throw NoClosedOrbit("no closed orbit: h outside the annulus interval");
    auto val = [&](double t) {
        const Eigen::Vector2d p = ann.anchor + t * ann.ray;
        return fam.eval(p.x(), p.y()) - h;
    };
    double reach = 10.0 * std::max(1.0, ann.anchor.norm());
    std::optional<double> t_seed;
    for (int round = 0; round < 6 && !t_seed; ++round, reach *= 4.0) {
        const int n = 20000;
        double t_prev = 0.0, v_prev = val(0.0);
        for (int k = 1; k <= n; ++k) {
            const double t = reach * std::pow(static_cast<double>(k) / n, 2.0);
            const double v = val(t);
            if (v == 0.0 || (v_prev < 0.0) != (v < 0.0)) {
                double lo = t_prev, hi = t;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((val(lo) < 0.0) != (val(mid) < 0.0)) hi = mid;
                    else lo = mid;
                }
                t_seed = 0.5 * (lo + hi);
                break;
            }
            t_prev = t;
            v_prev = v;
        }
    }
    if (!t_seed) throw NoClosedOrbit("no closed orbit: seed ray misses the level set");
    TraceOptions opt;
    opt.n_min = n_min;
    Orbit orb = trace_orbit(fam, h, ann.anchor + *t_seed * ann.ray, opt);
    orb.annulus_id = ann.id;
    return orb;
}

Orbit trace_orbit(const HamiltonianParams& p, const PeriodAnnulus& ann, double h, int n_min) {
    return trace_orbit_of(main_chart(p), ann, h, n_min);
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
    os << "# h=" << std::setprecision(12) << orbit.h << " annulus=" << orbit.annulus_id << "\n";
    os << "x,y\n";
    for (const auto& p : orbit.points())
        os << std::setprecision(12) << p.x() << "," << p.y() << "\n";
}

}  // namespace abelint
