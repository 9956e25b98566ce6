#pragma once

#include <cmath>
#include <queue>
#include <vector>

namespace vq {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    bool converged = true;
    int panels = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1]
inline constexpr double kGK_node[8] = {
    0.0000000000000000000000000, 0.2077849550078984676006894,
    0.4058451513773971669066064, 0.5860872354676911302941448,
    0.7415311855993944398638648, 0.8648644233597690727897128,
    0.9491079123427585245261897, 0.9914553711208126392068547};
inline constexpr double kGK_wk[8] = {
    0.2094821410847278280129992, 0.2044329400752988924141620,
    0.1903505780647854099132564, 0.1690047266392679028265834,
    0.1406532597155259187451896, 0.1047900103222501838398763,
    0.0630920926299785532907007, 0.0229353220105292249637320};
inline constexpr double kGK_wg[4] = {
    0.4179591836734693877551020, 0.3818300505051189449503698,
    0.2797053914892766679014678, 0.1294849661688696932706114};

template <class F>
inline void gk15(F&& f, double a, double b, double& val, double& err) {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(m);
    double g = kGK_wg[0] * fc;
    double k = kGK_wk[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double dx = h * kGK_node[i];
        double s = f(m + dx) + f(m - dx);
        k += kGK_wk[i] * s;
        if ((i & 1) == 0) g += kGK_wg[i / 2] * s;
    }
    val = k * h;
    double diff = 200.0 * std::fabs((k - g) * h);
    err = diff * std::sqrt(diff);
    if (!(err < std::fabs(val) + 1.0)) err = std::fabs(val) + 1.0;  // NaN guard
}

struct Panel {
    double a, b, val, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail

// worst-panel-first adaptive Gauss-Kronrod
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-12, int max_panels = 10000) {
    QuadResult res;
    if (a == b) return res;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<detail::Panel> q;
    detail::Panel p{a, b, 0, 0};
    detail::gk15(f, a, b, p.val, p.err);
    double total = p.val, toterr = p.err;
    q.push(p);
    int panels = 1;
    while (toterr > std::max(abs_tol, rel_tol * std::fabs(total)) &&
           panels < max_panels) {
        detail::Panel w = q.top();
        q.pop();
        double mid = 0.5 * (w.a + w.b);
        if (mid <= w.a || mid >= w.b) {  // interval no longer splittable
            q.push(w);
            break;
        }
        detail::Panel l{w.a, mid, 0, 0}, r{mid, w.b, 0, 0};
        detail::gk15(f, l.a, l.b, l.val, l.err);
        detail::gk15(f, r.a, r.b, r.val, r.err);
        total += l.val + r.val - w.val;
        toterr += l.err + r.err - w.err;
        q.push(l);
        q.push(r);
        ++panels;
    }
    res.value = sign * total;
    res.abs_err = toterr;
    res.panels = panels;
    res.converged = toterr <= std::max(abs_tol, rel_tol * std::fabs(total)) * 1.01 ||
                    toterr <= std::max(abs_tol, 1e-10 * std::fabs(total));
    return res;
}

}  // namespace vq
