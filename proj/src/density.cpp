#include "vq/density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vq/quadrature.hpp"

namespace vq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Estimate::infinite() const { return std::isinf(value); }

double Density::quantile(double u) const {
    if (dim != 1) throw std::invalid_argument("quantile: 1-D only");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u outside (0,1)");
    if (quantile1) return quantile1(u);
    // monotone bisection on the cdf, Newton-polished where the pdf is positive
    double lo = qlo, hi = qhi;
    double flo = cdf1(lo), fhi = cdf1(hi);
    if (u <= flo) return lo;
    if (u >= fhi) return hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = cdf1(mid);
        if (fm < u)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + std::fabs(lo))) break;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        double p = pdf1(x);
        if (p <= 0.0) break;
        double step = (cdf1(x) - u) / p;
        double xn = x - step;
        if (xn < lo || xn > hi) break;
        x = xn;
    }
    return x;
}

double pdf_eval(const Density& d, std::span<const double> x) {
    if (static_cast<int>(x.size()) != d.dim)
        throw std::invalid_argument("pdf_eval: point dimension mismatch for " + d.id);
    if (d.dim == 1) return d.pdf1(x[0]);
    return d.pdfN(x);
}

double pdf_eval(const Density& d, double x) {
    if (d.dim != 1) throw std::invalid_argument("pdf_eval: density is not 1-D");
    return d.pdf1(x);
}

namespace {

// integral over [X, +inf) of g with g ~ C x^-gamma, gamma > 1, via the
// substitution v = x^(1-gamma) which flattens the tail exactly
template <class G>
QuadResult poly_tail_integral(G&& g, double X, double gamma, double abs_tol) {
    double V = std::pow(X, 1.0 - gamma);
    auto h = [&](double v) {
        double x = std::pow(v, -1.0 / (gamma - 1.0));
        return g(x) * std::pow(x, gamma) / (gamma - 1.0);
    };
    return integrate(h, 0.0, V, abs_tol, 1e-12);
}

// expand the cutoff until the integrand is negligible (exponential tails)
template <class G>
double expand_cutoff(G&& g, double from, double dir_sign, double scale) {
    double x = from;
    double step = std::max(1.0, 0.25 * scale);
    for (int i = 0; i < 200; ++i) {
        if (g(x) * std::max(std::fabs(x), 1.0) < 1e-16) return x;
        x += dir_sign * step;
        step *= 1.4;
    }
    return x;
}

}  // namespace

Estimate moment(const Density& d, double p, long mc_samples, std::uint64_t seed) {
    if (!(p > 0.0)) throw std::invalid_argument("moment: p must be positive");
    if (d.moment_closed) {
        double v = d.moment_closed(p);
        if (!std::isnan(v)) return {v, 0.0, true};
    }
    if (d.tail_poly_beta && p >= *d.tail_poly_beta - 1.0 - 1e-12)
        return {kInf, 0.0, true};
    if (d.dim == 1) {
        auto g = [&](double x) { return std::pow(std::fabs(x), p) * d.pdf1(x); };
        Estimate out;
        double lo = d.qlo, hi = d.qhi;
        QuadResult r;
        if (lo < 0.0 && hi > 0.0) {
            auto r1 = integrate(g, lo, 0.0, 5e-11, 1e-12);
            auto r2 = integrate(g, 0.0, hi, 5e-11, 1e-12);
            r.value = r1.value + r2.value;
            r.abs_err = r1.abs_err + r2.abs_err;
            r.converged = r1.converged && r2.converged;
        } else {
            r = integrate(g, lo, hi, 1e-10, 1e-12);
        }
        out.value = r.value;
        out.error = r.abs_err;
        out.converged = r.converged;
        if (d.support.unbounded()) {
            if (d.tail_poly_beta) {
                double gamma = *d.tail_poly_beta - p;  // > 1 here
                auto t = poly_tail_integral(g, hi, gamma, 1e-11);
                out.value += t.value;
                out.error += t.abs_err;
                if (d.support.kind == SupportKind::FullSpace) {
                    auto gm = [&](double x) { return g(-x); };
                    auto t2 = poly_tail_integral(gm, -lo, gamma, 1e-11);
                    out.value += t2.value;
                    out.error += t2.abs_err;
                }
            } else {
                // exponential-type tails: truncation mass is below the
                // 1e-12 quantile; account for it in the error bound
                out.error += 2e-12 * (std::pow(std::fabs(lo), p) + std::pow(hi, p));
            }
        }
        return out;
    }
    // d >= 2: Monte Carlo with standard error
    RngStream rng(seed, 0x6d6f6d);
    std::vector<double> x(d.dim);
    double s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < mc_samples; ++i) {
        d.sampleN(rng, x);
        double n2 = 0.0;
        for (double c : x) n2 += c * c;
        double v = std::pow(n2, 0.5 * p);
        s1 += v;
        s2 += v * v;
    }
    double mean = s1 / mc_samples;
    double var = std::max(0.0, s2 / mc_samples - mean * mean);
    return {mean, std::sqrt(var / mc_samples), true};
}

Estimate power_integral(const Density& d, double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("power_integral: theta outside (0,1]");
    if (d.power_integral_closed) {
        double v = d.power_integral_closed(theta);
        if (!std::isnan(v)) return {v, 0.0, true};
    }
    if (d.tail_poly_beta && theta * *d.tail_poly_beta <= 1.0 + 1e-12)
        return {kInf, 0.0, true};
    if (d.dim != 1)
        throw std::invalid_argument("power_integral: no closed form for this d>=2 density");

    auto g = [&](double x) {
        double f = d.pdf1(x);
        return f > 0.0 ? std::pow(f, theta) : 0.0;
    };
    Estimate out;
    double lo = d.qlo, hi = d.qhi;
    if (d.support.unbounded() && !d.tail_poly_beta) {
        // f^theta has a fatter tail than f; push the cutoffs out
        hi = expand_cutoff(g, hi, +1.0, d.scale_hint);
        if (d.support.kind == SupportKind::FullSpace)
            lo = expand_cutoff(g, lo, -1.0, d.scale_hint);
    }
    auto r = integrate(g, lo, hi, 1e-10, 1e-12, 20000);
    out.value = r.value;
    out.error = r.abs_err;
    out.converged = r.converged;
    if (d.support.unbounded() && d.tail_poly_beta) {
        double gamma = theta * *d.tail_poly_beta;  // > 1 here
        auto t = poly_tail_integral(g, hi, gamma, 1e-11);
        out.value += t.value;
        out.error += t.abs_err;
        if (d.support.kind == SupportKind::FullSpace) {
            auto gm = [&](double x) { return g(-x); };
            auto t2 = poly_tail_integral(gm, -lo, gamma, 1e-11);
            out.value += t2.value;
            out.error += t2.abs_err;
        }
    }
    return out;
}

std::vector<double> sample(const Density& d, std::uint64_t seed, long count) {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    if (d.dim != 1) throw std::invalid_argument("sample: use sample_nd for d >= 2");
    RngStream rng(seed, 0);
    std::vector<double> out(count);
    for (long i = 0; i < count; ++i) out[i] = d.sample1(rng);
    return out;
}

std::vector<double> sample_nd(const Density& d, std::uint64_t seed, long count) {
    if (count < 1) throw std::invalid_argument("sample_nd: count must be >= 1");
    RngStream rng(seed, 0);
    std::vector<double> out(static_cast<size_t>(count) * d.dim);
    if (d.dim == 1) {
        for (long i = 0; i < count; ++i) out[i] = d.sample1(rng);
        return out;
    }
    for (long i = 0; i < count; ++i)
        d.sampleN(rng, std::span<double>(out.data() + i * d.dim, d.dim));
    return out;
}

double cdf_eval(const Density& d, double x) {
    if (d.dim != 1)
        throw std::invalid_argument("cdf_eval: unsupported for d >= 2");
    return d.cdf1(x);
}

}  // namespace vq
