#include "vq/codebook1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vq/quadrature.hpp"

namespace vq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cell_mass(const Density& d, double l, double u) {
    double Fl = std::isinf(l) ? 0.0 : d.cdf1(l);
    double Fu = std::isinf(u) ? 1.0 : d.cdf1(u);
    return Fu - Fl;
}

// conditional mean of a cell; falls back to quadrature without a closed
// partial first moment
double cell_mean(const Density& d, double l, double u, double mass) {
    if (mass <= 0.0) return 0.5 * (std::max(l, d.qlo) + std::min(u, d.qhi));
    double lo = std::max(l, d.qlo), hi = std::min(u, d.qhi);
    if (d.pfm1) {
        // pfm at an effectively-infinite argument recovers the full mean
        double big = 4.0 * std::max({1.0, std::fabs(d.qlo), std::fabs(d.qhi)});
        double Ml = std::isinf(l) ? 0.0 : d.pfm1(l);
        double Mu = std::isinf(u) ? d.pfm1(big) : d.pfm1(u);
        return std::clamp((Mu - Ml) / mass, lo, hi);
    }
    auto num = integrate([&](double x) { return x * d.pdf1(x); }, lo, hi, 1e-13, 1e-12);
    return std::clamp(num.value / mass, lo, hi);
}

// stationarity integrand root over [l,u]: g(a) = int_l^a (a-x)^(r-1) f
//                                              - int_a^u (x-a)^(r-1) f
double stationarity_integral(const Density& d, double l, double u, double a,
                             double r) {
    double lo = std::max(l, d.qlo), hi = std::min(u, d.qhi);
    if (a <= lo) {
        auto right = integrate([&](double x) { return std::pow(x - a, r - 1.0) * d.pdf1(x); },
                               a > lo ? a : lo, hi, 1e-14, 1e-12);
        return -right.value;
    }
    if (a >= hi) {
        auto left = integrate([&](double x) { return std::pow(a - x, r - 1.0) * d.pdf1(x); },
                              lo, hi, 1e-14, 1e-12);
        return left.value;
    }
    auto left = integrate([&](double x) { return std::pow(a - x, r - 1.0) * d.pdf1(x); },
                          lo, a, 1e-14, 1e-12);
    auto right = integrate([&](double x) { return std::pow(x - a, r - 1.0) * d.pdf1(x); },
                           a, hi, 1e-14, 1e-12);
    return left.value - right.value;
}

// per-cell update: root of the stationarity integral (monotone in a)
double cell_root(const Density& d, double l, double u, double r, double mass) {
    if (mass <= 0.0) return 0.5 * (std::max(l, d.qlo) + std::min(u, d.qhi));
    if (r == 2.0) return cell_mean(d, l, u, mass);
    if (r == 1.0) {  // cell median
        double Fl = std::isinf(l) ? 0.0 : d.cdf1(l);
        double Fu = std::isinf(u) ? 1.0 : d.cdf1(u);
        return d.quantile(std::clamp(0.5 * (Fl + Fu), 1e-15, 1.0 - 1e-15));
    }
    double lo = std::max(l, d.qlo), hi = std::min(u, d.qhi);
    double a = lo, b = hi;
    double width = b - a;
    for (int it = 0; it < 48 && b - a > 1e-13 * width; ++it) {
        double mid = 0.5 * (a + b);
        if (stationarity_integral(d, l, u, mid, r) < 0.0)
            a = mid;
        else
            b = mid;
    }
    double x = 0.5 * (a + b);
    if (r >= 2.0) {  // Newton polish; derivative integrand stays bounded
        for (int it = 0; it < 4; ++it) {
            double g = stationarity_integral(d, l, u, x, r);
            auto dl = integrate([&](double t) { return std::pow(std::fabs(x - t), r - 2.0) * d.pdf1(t); },
                                lo, hi, 1e-13, 1e-10);
            double gp = (r - 1.0) * dl.value;
            if (!(gp > 0.0)) break;
            double xn = x - g / gp;
            if (xn <= a || xn >= b) break;
            x = xn;
        }
    }
    return x;
}

// quantiles of the normalized f^(1/(1+r)) point density on a fixed grid
std::vector<double> point_density_quantile_init(const Density& d, int n, double r) {
    const int panels = 4096;
    double lo = d.qlo, hi = d.qhi;
    double h = (hi - lo) / panels;
    std::vector<double> cum(panels + 1, 0.0);
    double expo = 1.0 / (1.0 + r);
    for (int i = 0; i < panels; ++i) {
        auto p = integrate([&](double x) { return std::pow(std::max(d.pdf1(x), 0.0), expo); },
                           lo + i * h, lo + (i + 1) * h, 1e-12, 1e-10, 64);
        cum[i + 1] = cum[i] + p.value;
    }
    double total = cum[panels];
    std::vector<double> pts(n);
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        double target = total * (2.0 * k + 1.0) / (2.0 * n);
        while (seg + 1 < panels && cum[seg + 1] < target) ++seg;
        double frac = (target - cum[seg]) / std::max(cum[seg + 1] - cum[seg], 1e-300);
        pts[k] = lo + (seg + frac) * h;
    }
    return pts;
}

struct LloydRun {
    std::vector<double> points;
    long iterations = 0;
    bool converged = false;
};

LloydRun lloyd_iterate(const Density& d, std::vector<double> pts, double r,
                       const Lloyd1DOptions& opt, std::vector<double>* trace,
                       const Codebook1D* trace_probe) {
    const int n = static_cast<int>(pts.size());
    const double sup_lo =
        d.support.kind == SupportKind::FullSpace ? -kInf : d.support.lower;
    const double sup_hi =
        d.support.kind == SupportKind::CompactInterval ? d.support.upper : kInf;
    LloydRun run;
    std::vector<double> next(n);
    for (long it = 0; it < opt.max_iter; ++it) {
        double move = 0.0;
        double l = sup_lo;
        for (int k = 0; k < n; ++k) {
            double u = k + 1 < n ? 0.5 * (pts[k] + pts[k + 1]) : sup_hi;
            double mass = cell_mass(d, l, u);
            next[k] = cell_root(d, l, u, r, mass);
            move = std::max(move, std::fabs(next[k] - pts[k]));
            l = u;
        }
        pts.swap(next);
        ++run.iterations;
        if (trace) {
            Codebook1D probe = *trace_probe;
            probe.points = pts;
            trace->push_back(distortion1d(probe, d, r));
        }
        if (move < opt.tol) {
            run.converged = true;
            break;
        }
    }
    run.points = std::move(pts);
    return run;
}

}  // namespace

std::vector<double> Codebook1D::boundaries() const {
    std::vector<double> b(points.size() - 1);
    for (size_t i = 0; i + 1 < points.size(); ++i)
        b[i] = 0.5 * (points[i] + points[i + 1]);
    return b;
}

void Codebook1D::validate() const {
    if (points.empty()) throw std::invalid_argument("codebook: empty");
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i] < points[i + 1]))
            throw std::invalid_argument("codebook: points must be strictly increasing");
}

Codebook1D midpoint_grid(int n) {
    if (n < 1) throw std::invalid_argument("midpoint_grid: n >= 1");
    Codebook1D cb;
    cb.density_id = "uniform01";
    cb.r = 2.0;
    cb.points.resize(n);
    cb.weights.assign(n, 1.0 / n);
    for (int k = 0; k < n; ++k) cb.points[k] = (2.0 * k + 1.0) / (2.0 * n);
    return cb;
}

Codebook1D lloyd1d(const Density& density, int n, double r,
                   const Lloyd1DOptions& opt) {
    if (density.dim != 1) throw std::invalid_argument("lloyd1d: 1-D densities only");
    if (n < 1) throw std::invalid_argument("lloyd1d: n >= 1");
    if (r < 1.0)
        throw std::invalid_argument("lloyd1d: r < 1 unsupported here, use clvq");

    Codebook1D cb;
    cb.r = r;
    cb.density_id = density.id;
    cb.seed = opt.seed;

    std::vector<std::vector<double>> inits;
    inits.push_back(point_density_quantile_init(density, n, r));
    if (!density.log_concave && opt.restarts > 1) {
        for (int s = 1; s < opt.restarts; ++s) {
            auto pts = sample(density, opt.seed + s, n);
            std::sort(pts.begin(), pts.end());
            for (int k = 1; k < n; ++k)  // nudge collisions apart
                if (pts[k] <= pts[k - 1])
                    pts[k] = pts[k - 1] + 1e-9 * (1.0 + std::fabs(pts[k - 1]));
            inits.push_back(std::move(pts));
        }
    }

    double best_dist = kInf;
    LloydRun best;
    std::vector<double> best_trace;
    for (auto& init : inits) {
        std::vector<double> trace;
        auto run = lloyd_iterate(density, init, r, opt,
                                 opt.track_distortion ? &trace : nullptr, &cb);
        Codebook1D probe = cb;
        probe.points = run.points;
        double dist = inits.size() > 1 || opt.track_distortion
                          ? distortion1d(probe, density, r)
                          : 0.0;
        if (inits.size() == 1 || dist < best_dist) {
            best_dist = dist;
            best = std::move(run);
            best_trace = std::move(trace);
        }
    }

    cb.points = std::move(best.points);
    cb.iterations = best.iterations;
    cb.converged = best.converged;
    cb.distortion_trace = std::move(best_trace);

    // final weights from the cdf, residual from the stationarity integrals
    const double sup_lo =
        density.support.kind == SupportKind::FullSpace ? -kInf : density.support.lower;
    const double sup_hi =
        density.support.kind == SupportKind::CompactInterval ? density.support.upper
                                                             : kInf;
    cb.weights.resize(n);
    double l = sup_lo;
    for (int k = 0; k < n; ++k) {
        double u = k + 1 < n ? 0.5 * (cb.points[k] + cb.points[k + 1]) : sup_hi;
        cb.weights[k] = cell_mass(density, l, u);
        l = u;
    }
    auto res = stationarity_residual(cb, density, r);
    double rmax = 0.0;
    for (double v : res) rmax = std::max(rmax, std::fabs(v));
    cb.residual = rmax;
    cb.validate();
    return cb;
}

double distortion1d(const Codebook1D& cb, const Density& density, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("distortion1d: s > 0 required");
    cb.validate();
    if (density.tail_poly_beta && s >= *density.tail_poly_beta - 1.0 - 1e-12)
        return kInf;  // tail moment of order s diverges
    const int n = cb.n();
    const double per_cell_tol = 1e-12 * std::max(1, n) / (2.0 * n);
    double total = 0.0;
    double l = density.qlo;
    for (int k = 0; k < n; ++k) {
        double a = cb.points[k];
        double u = k + 1 < n ? 0.5 * (cb.points[k] + cb.points[k + 1]) : density.qhi;
        double lo = std::max(l, density.qlo), hi = std::min(u, density.qhi);
        if (lo < a) {
            auto left = integrate(
                [&](double x) { return std::pow(a - x, s) * density.pdf1(x); },
                lo, std::min(a, hi), per_cell_tol, 1e-13);
            total += left.value;
        }
        if (hi > a) {
            auto right = integrate(
                [&](double x) { return std::pow(x - a, s) * density.pdf1(x); },
                std::max(a, lo), hi, per_cell_tol, 1e-13);
            total += right.value;
        }
        l = u;
    }
    return total;
}

std::vector<double> stationarity_residual(const Codebook1D& cb,
                                          const Density& density, double r) {
    if (r < 1.0) throw std::invalid_argument("stationarity_residual: r >= 1");
    cb.validate();
    const int n = cb.n();
    std::vector<double> out(n);
    const double sup_lo =
        density.support.kind == SupportKind::FullSpace ? -kInf : density.support.lower;
    const double sup_hi =
        density.support.kind == SupportKind::CompactInterval ? density.support.upper
                                                             : kInf;
    double l = sup_lo;
    for (int k = 0; k < n; ++k) {
        double u = k + 1 < n ? 0.5 * (cb.points[k] + cb.points[k + 1]) : sup_hi;
        if (r == 1.0) {
            double Fl = std::isinf(l) ? 0.0 : density.cdf1(l);
            double Fu = std::isinf(u) ? 1.0 : density.cdf1(u);
            out[k] = 2.0 * density.cdf1(cb.points[k]) - Fl - Fu;
        } else if (r == 2.0) {
            double mass = cell_mass(density, l, u);
            double mean = cell_mean(density, l, u, mass);
            out[k] = mass * (cb.points[k] - mean);
        } else {
            out[k] = stationarity_integral(density, l, u, cb.points[k], r);
        }
        l = u;
    }
    return out;
}

double cell_spread(const Codebook1D& cb, double a, double b) {
    cb.validate();
    if (!(a < b)) throw std::invalid_argument("cell_spread: degenerate support");
    if (cb.n() == 1 && !(cb.points[0] > a && cb.points[0] < b))
        throw std::invalid_argument("cell_spread: point outside support");
    double gmax = 0.0, gmin = kInf;
    double prev = a;
    for (int k = 0; k <= cb.n(); ++k) {
        double cur = k < cb.n() ? cb.points[k] : b;
        double gap = cur - prev;
        gmax = std::max(gmax, gap);
        gmin = std::min(gmin, gap);
        prev = cur;
    }
    if (!(gmin > 0.0)) throw std::invalid_argument("cell_spread: zero gap");
    return gmax / gmin;
}

}  // namespace vq
