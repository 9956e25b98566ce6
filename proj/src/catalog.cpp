#include "vq/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "vq/quadrature.hpp"
#include "vq/special.hpp"

namespace vq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr double kQuantileCut = 1e-12;  // truncation quantiles for quadrature

std::string fmt_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// doubling bracket + bisection on a closed-form cdf
double q_of(const std::function<double(double)>& cdf, double target, double lo,
            double hi) {
    while (cdf(lo) > target) lo = lo * 2.0 - std::max(1.0, std::fabs(lo));
    while (cdf(hi) < target) hi = hi * 2.0 + std::max(1.0, std::fabs(hi));
    for (int i = 0; i < 110; ++i) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// numeric inverse-cdf sampler; captures everything by value
std::function<double(RngStream&)> inverse_cdf_sampler(
    std::function<double(double)> cdf, double lo, double hi) {
    return [cdf = std::move(cdf), lo, hi](RngStream& g) {
        return q_of(cdf, g.uniform01(), lo, hi);
    };
}

double surface_unit_sphere(int d) {  // S_{d-1}
    return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace

Density make_uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
    Density d;
    d.id = (a == 0.0 && b == 1.0) ? "uniform01"
                                  : "uniform(a=" + fmt_param(a) + ",b=" + fmt_param(b) + ")";
    d.dim = 1;
    d.support = {SupportKind::CompactInterval, a, b, {}, {}, 0.0};
    d.log_concave = true;
    d.compact_lipschitz_positive = true;
    d.scale_hint = b - a;
    const double w = b - a;
    d.pdf1 = [a, b, w](double x) { return (x >= a && x <= b) ? 1.0 / w : 0.0; };
    d.cdf1 = [a, b, w](double x) {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (x - a) / w;
    };
    d.quantile1 = [a, w](double u) { return a + u * w; };
    d.pfm1 = [a, b, w](double x) {
        double t = std::clamp(x, a, b);
        return (t * t - a * a) / (2.0 * w);
    };
    d.sample1 = [a, w](RngStream& g) { return a + w * g.uniform01(); };
    if (a >= 0.0) {
        d.moment_closed = [a, b, w](double p) {
            return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / ((p + 1.0) * w);
        };
    }
    d.power_integral_closed = [w](double theta) { return std::pow(w, 1.0 - theta); };
    d.qlo = a;
    d.qhi = b;
    return d;
}

Density make_ramp() {
    Density d;
    d.id = "ramp";
    d.dim = 1;
    d.support = {SupportKind::CompactInterval, 0.0, 1.0, {}, {}, 0.0};
    d.log_concave = true;
    d.compact_lipschitz_positive = true;
    d.pdf1 = [](double x) { return (x >= 0.0 && x <= 1.0) ? (2.0 + 2.0 * x) / 3.0 : 0.0; };
    d.cdf1 = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return (2.0 * x + x * x) / 3.0;
    };
    d.quantile1 = [](double u) { return std::sqrt(1.0 + 3.0 * u) - 1.0; };
    d.pfm1 = [](double x) {
        double t = std::clamp(x, 0.0, 1.0);
        return t * t / 3.0 + 2.0 * t * t * t / 9.0;
    };
    d.sample1 = [](RngStream& g) { return std::sqrt(1.0 + 3.0 * g.uniform01()) - 1.0; };
    d.moment_closed = [](double p) { return 2.0 / (3.0 * (p + 1.0)) + 2.0 / (3.0 * (p + 2.0)); };
    d.qlo = 0.0;
    d.qhi = 1.0;
    return d;
}

Density make_normal(double sigma, int dim) {
    if (!(sigma > 0.0) || dim < 1) throw std::invalid_argument("normal: bad parameters");
    Density d;
    d.id = dim == 1 ? "normal(sigma=" + fmt_param(sigma) + ")"
                    : "normal(d=" + std::to_string(dim) + ",sigma=" + fmt_param(sigma) + ")";
    d.dim = dim;
    d.support.kind = SupportKind::FullSpace;
    d.log_concave = true;
    d.scale_hint = sigma;

    TailCriterion tail;
    tail.has_radial = true;
    tail.radial_from = 0.0;
    const double norm_const = std::pow(2.0 * kPi * sigma * sigma, -0.5 * dim);
    tail.radial_profile = [norm_const](double u) { return norm_const * std::exp(-0.5 * u * u); };
    tail.family = TailCriterion::Family::ExpPower;
    tail.exp_a = 0.5;
    tail.exp_b = 2.0;
    tail.peak_constant = 1.0;
    d.tail = tail;

    d.moment_closed = [sigma, dim](double p) {
        return std::pow(sigma, p) * std::pow(2.0, 0.5 * p) *
               std::exp(std::lgamma(0.5 * (p + dim)) - std::lgamma(0.5 * dim));
    };
    d.power_integral_closed = [sigma, dim](double theta) {
        double one = std::pow(sigma, 1.0 - theta) / std::sqrt(theta) *
                     std::pow(2.0 * kPi, 0.5 * (1.0 - theta));
        return std::pow(one, dim);
    };

    if (dim == 1) {
        d.pdf1 = [sigma](double x) { return norm_pdf(x / sigma) / sigma; };
        d.cdf1 = [sigma](double x) { return norm_cdf(x / sigma); };
        d.quantile1 = [sigma](double u) { return sigma * norm_quantile(u); };
        d.pfm1 = [sigma](double x) { return -sigma * norm_pdf(x / sigma); };
        d.sample1 = [sigma](RngStream& g) { return sigma * g.normal(); };
        d.qlo = sigma * norm_quantile(kQuantileCut);
        d.qhi = -d.qlo;
    } else {
        d.pdfN = [sigma, dim, norm_const](std::span<const double> x) {
            double q = 0.0;
            for (int i = 0; i < dim; ++i) q += x[i] * x[i];
            return norm_const * std::exp(-0.5 * q / (sigma * sigma));
        };
        d.sampleN = [sigma](RngStream& g, std::span<double> x) {
            for (auto& c : x) c = sigma * g.normal();
        };
    }
    return d;
}

Density make_gamma(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("gamma: bad parameters");
    Density d;
    d.id = "gamma(a=" + fmt_param(a) + ",b=" + fmt_param(b) + ")";
    d.dim = 1;
    d.support = {SupportKind::HalfLine, 0.0, kInf, {}, {}, 0.0};
    d.log_concave = b >= 1.0;
    d.scale_hint = b / a;
    const double lognc = b * std::log(a) - std::lgamma(b);
    d.pdf1 = [a, b, lognc](double x) {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return b < 1.0 ? kInf : (b == 1.0 ? a : 0.0);
        return std::exp(lognc + (b - 1.0) * std::log(x) - a * x);
    };
    d.cdf1 = [a, b](double x) { return x <= 0.0 ? 0.0 : gamma_p(b, a * x); };
    d.pfm1 = [a, b](double x) {
        return x <= 0.0 ? 0.0 : (b / a) * gamma_p(b + 1.0, a * x);
    };
    d.moment_closed = [a, b](double p) {
        return std::exp(std::lgamma(b + p) - std::lgamma(b) - p * std::log(a));
    };
    d.power_integral_closed = [a, b, lognc](double theta) {
        double nu = (b - 1.0) * theta + 1.0;  // > 0 for theta <= 1
        return std::exp(theta * lognc + std::lgamma(nu) - nu * std::log(a * theta));
    };
    TailCriterion tail;
    tail.family = TailCriterion::Family::ExpPower;
    tail.exp_a = a;
    tail.exp_b = 1.0;
    tail.has_radial = false;
    tail.peak_constant = 0.5;
    d.tail = tail;
    d.qlo = q_of(d.cdf1, kQuantileCut, 0.0, 1.0);
    d.qhi = q_of(d.cdf1, 1.0 - kQuantileCut, 0.0, std::max(4.0, 8.0 * b / a));
    d.sample1 = inverse_cdf_sampler(d.cdf1, d.qlo, d.qhi);
    return d;
}

Density make_double_gamma(double a, double c) {
    if (!(a > 0.0 && c > 0.0)) throw std::invalid_argument("dgamma: bad parameters");
    Density d;
    d.id = "dgamma(a=" + fmt_param(a) + ",c=" + fmt_param(c) + ")";
    d.dim = 1;
    d.support.kind = SupportKind::FullSpace;
    d.scale_hint = c / a;
    const double lognc = c * std::log(a) - std::log(2.0) - std::lgamma(c);
    d.pdf1 = [a, c, lognc](double x) {
        double ax = std::fabs(x);
        if (ax == 0.0) return c < 1.0 ? kInf : (c == 1.0 ? 0.5 * a : 0.0);
        return std::exp(lognc + (c - 1.0) * std::log(ax) - a * ax);
    };
    d.cdf1 = [a, c](double x) {
        if (x < 0.0) return 0.5 * gamma_q(c, -a * x);
        return 0.5 + 0.5 * gamma_p(c, a * x);
    };
    d.pfm1 = [a, c](double x) {
        double half_mean = 0.5 * c / a;
        if (x < 0.0) return -half_mean * gamma_q(c + 1.0, -a * x);
        return -half_mean + half_mean * gamma_p(c + 1.0, a * x);
    };
    d.moment_closed = [a, c](double p) {
        return std::exp(std::lgamma(c + p) - std::lgamma(c) - p * std::log(a));
    };
    d.power_integral_closed = [a, c, lognc](double theta) {
        double nu = (c - 1.0) * theta + 1.0;
        return 2.0 * std::exp(theta * lognc + std::lgamma(nu) - nu * std::log(a * theta));
    };
    TailCriterion tail;
    tail.has_radial = true;
    tail.radial_from = std::max(0.0, (c - 1.0) / a) + 1e-9;
    tail.radial_profile = [a, c, lognc](double u) {
        return u <= 0.0 ? 0.0 : std::exp(lognc + (c - 1.0) * std::log(u) - a * u);
    };
    tail.family = TailCriterion::Family::ExpPower;
    tail.exp_a = a;
    tail.exp_b = 1.0;
    tail.peak_constant = 1.0;
    d.tail = tail;
    d.qhi = q_of(d.cdf1, 1.0 - kQuantileCut, 0.0, std::max(4.0, 8.0 * c / a));
    d.qlo = -d.qhi;
    d.sample1 = inverse_cdf_sampler(d.cdf1, d.qlo, d.qhi);
    return d;
}

Density make_weibull(double b) {
    if (!(b > 0.0)) throw std::invalid_argument("weibull: bad parameter");
    Density d;
    d.id = "weibull(b=" + fmt_param(b) + ")";
    d.dim = 1;
    d.support = {SupportKind::HalfLine, 0.0, kInf, {}, {}, 0.0};
    d.log_concave = b >= 1.0;
    d.pdf1 = [b](double x) {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return b < 1.0 ? kInf : (b == 1.0 ? 1.0 : 0.0);
        return b * std::pow(x, b - 1.0) * std::exp(-std::pow(x, b));
    };
    d.cdf1 = [b](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-std::pow(x, b)); };
    d.quantile1 = [b](double u) { return std::pow(-std::log1p(-u), 1.0 / b); };
    d.pfm1 = [b](double x) {
        if (x <= 0.0) return 0.0;
        double nu = 1.0 + 1.0 / b;
        return std::tgamma(nu) * gamma_p(nu, std::pow(x, b));
    };
    d.sample1 = [b](RngStream& g) {
        return std::pow(-std::log1p(-g.uniform01()), 1.0 / b);
    };
    d.moment_closed = [b](double p) { return std::tgamma(1.0 + p / b); };
    d.power_integral_closed = [b](double theta) {
        double nu = ((b - 1.0) * theta + 1.0) / b;
        if (nu <= 0.0) return kInf;
        return std::pow(b, theta - 1.0) * std::pow(theta, -nu) * std::tgamma(nu);
    };
    TailCriterion tail;
    tail.family = TailCriterion::Family::ExpPower;
    tail.exp_a = 1.0;
    tail.exp_b = b;
    tail.peak_constant = 0.5;
    d.tail = tail;
    d.qlo = d.quantile1(kQuantileCut);
    d.qhi = d.quantile1(1.0 - kQuantileCut);
    return d;
}

Density make_lognormal(double a, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("lognormal: bad sigma");
    Density d;
    d.id = "lognormal(a=" + fmt_param(a) + ",sigma=" + fmt_param(sigma) + ")";
    d.dim = 1;
    d.support = {SupportKind::HalfLine, 0.0, kInf, {}, {}, 0.0};
    d.scale_hint = std::exp(a + 0.5 * sigma * sigma);
    d.pdf1 = [a, sigma](double x) {
        if (x <= 0.0) return 0.0;
        double z = (std::log(x) - a) / sigma;
        return std::exp(-0.5 * z * z) / (x * sigma * std::sqrt(2.0 * kPi));
    };
    d.cdf1 = [a, sigma](double x) {
        return x <= 0.0 ? 0.0 : norm_cdf((std::log(x) - a) / sigma);
    };
    d.quantile1 = [a, sigma](double u) { return std::exp(a + sigma * norm_quantile(u)); };
    d.pfm1 = [a, sigma](double x) {
        if (x <= 0.0) return 0.0;
        return std::exp(a + 0.5 * sigma * sigma) *
               norm_cdf((std::log(x) - a - sigma * sigma) / sigma);
    };
    d.sample1 = [a, sigma](RngStream& g) { return std::exp(a + sigma * g.normal()); };
    d.moment_closed = [a, sigma](double p) {
        return std::exp(p * a + 0.5 * p * p * sigma * sigma);
    };
    d.power_integral_closed = [a, sigma](double theta) {
        double om = 1.0 - theta;
        return std::pow(sigma * std::sqrt(2.0 * kPi), om) / std::sqrt(theta) *
               std::exp(om * a + 0.5 * om * om * sigma * sigma / theta);
    };
    d.qlo = d.quantile1(kQuantileCut);
    d.qhi = d.quantile1(1.0 - kQuantileCut);
    return d;
}

Density make_logistic() {
    Density d;
    d.id = "logistic";
    d.dim = 1;
    d.support.kind = SupportKind::FullSpace;
    d.log_concave = true;
    d.pdf1 = [](double x) {
        double e = std::exp(-std::fabs(x));
        double s = 1.0 + e;
        return e / (s * s);
    };
    d.cdf1 = [](double x) {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    };
    d.quantile1 = [](double u) { return std::log(u / (1.0 - u)); };
    d.pfm1 = [](double x) {
        // d/dx [x F(x) - log(1+e^x)] = x f(x); constant fixed by the x -> -inf limit
        double soft = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
        double F = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        return x * F - soft;
    };
    d.sample1 = [](RngStream& g) {
        double u = g.uniform01();
        return std::log(u / (1.0 - u));
    };
    d.power_integral_closed = [](double theta) {
        return std::exp(2.0 * std::lgamma(theta) - std::lgamma(2.0 * theta));
    };
    TailCriterion tail;
    tail.has_radial = true;
    tail.radial_from = 0.0;
    tail.radial_profile = [](double u) {
        double e = std::exp(-std::fabs(u));
        double s = 1.0 + e;
        return e / (s * s);
    };
    tail.family = TailCriterion::Family::ExpPower;
    tail.exp_a = 1.0;
    tail.exp_b = 1.0;
    tail.peak_constant = 1.0;
    d.tail = tail;
    d.qhi = d.quantile1(1.0 - kQuantileCut);
    d.qlo = -d.qhi;
    return d;
}

Density make_pareto(double b) {
    if (!(b > 0.0)) throw std::invalid_argument("pareto: bad parameter");
    Density d;
    d.id = "pareto(b=" + fmt_param(b) + ")";
    d.dim = 1;
    d.support = {SupportKind::HalfLine, 1.0, kInf, {}, {}, 0.0};
    d.pdf1 = [b](double x) { return x < 1.0 ? 0.0 : b * std::pow(x, -(b + 1.0)); };
    d.cdf1 = [b](double x) { return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -b); };
    d.quantile1 = [b](double u) { return std::pow(1.0 - u, -1.0 / b); };
    d.pfm1 = [b](double x) {
        if (x <= 1.0) return 0.0;
        if (b == 1.0) return std::log(x);
        return b / (b - 1.0) * (1.0 - std::pow(x, 1.0 - b));
    };
    d.sample1 = [b](RngStream& g) { return std::pow(1.0 - g.uniform01(), -1.0 / b); };
    d.moment_closed = [b](double p) { return p < b ? b / (b - p) : kInf; };
    d.power_integral_closed = [b](double theta) {
        double e = (b + 1.0) * theta;
        return e > 1.0 ? std::pow(b, theta) / (e - 1.0) : kInf;
    };
    d.tail_poly_beta = b + 1.0;
    TailCriterion tail;
    tail.has_radial = true;  // monotone on the half-line from 1
    tail.radial_from = 1.0;
    tail.radial_profile = [b](double u) { return u < 1.0 ? 0.0 : b * std::pow(u, -(b + 1.0)); };
    tail.family = TailCriterion::Family::Polynomial;
    tail.poly_beta = b + 1.0;
    tail.peak_constant = 0.5;
    d.tail = tail;
    d.qlo = 1.0;
    d.qhi = d.quantile1(1.0 - kQuantileCut);
    return d;
}

Density make_hyperexp(double a, double b, double c, int dim) {
    if (!(a > 0.0 && b > 0.0) || dim < 1 || c <= -dim)
        throw std::invalid_argument("hyperexp: bad parameters");
    Density d;
    d.id = "hyperexp(a=" + fmt_param(a) + ",b=" + fmt_param(b) + ",c=" + fmt_param(c) +
           (dim == 1 ? "" : ",d=" + std::to_string(dim)) + ")";
    d.dim = dim;
    d.support.kind = SupportKind::FullSpace;
    d.scale_hint = std::pow((c + dim) / (a * b), 1.0 / b);

    const double Sd = surface_unit_sphere(dim);
    // 1/kappa = S_{d-1} Gamma((c+d)/b) / (b a^((c+d)/b))
    const double nu0 = (c + dim) / b;
    const double log_kappa =
        std::log(b) + nu0 * std::log(a) - std::log(Sd) - std::lgamma(nu0);

    auto radial_pdf = [c, a, b, log_kappa](double u) {
        if (u < 0.0) return 0.0;
        if (u == 0.0) return c < 0.0 ? kInf : (c == 0.0 ? std::exp(log_kappa) : 0.0);
        return std::exp(log_kappa + c * std::log(u) - a * std::pow(u, b));
    };

    d.moment_closed = [a, b, nu0](double p) {
        return std::exp(std::lgamma(nu0 + p / b) - std::lgamma(nu0) -
                        (p / b) * std::log(a));
    };
    d.power_integral_closed = [a, b, c, dim, Sd, log_kappa](double theta) {
        double nu = (c * theta + dim) / b;
        return std::exp(theta * log_kappa + std::log(Sd) - std::log(b) +
                        std::lgamma(nu) - nu * std::log(a * theta));
    };

    TailCriterion tail;
    tail.has_radial = true;
    tail.radial_from = c > 0.0 ? std::pow(c / (a * b), 1.0 / b) + 1e-9 : 0.0;
    tail.radial_profile = radial_pdf;
    tail.family = TailCriterion::Family::ExpPower;
    tail.exp_a = a;
    tail.exp_b = b;
    tail.peak_constant = 1.0;
    d.tail = tail;

    if (dim == 1) {
        d.log_concave = (c == 0.0 && b >= 1.0);
        d.pdf1 = [radial_pdf](double x) { return radial_pdf(std::fabs(x)); };
        const double half_nu1 = nu0;  // (c+1)/b in 1-D
        d.cdf1 = [a, b, half_nu1](double x) {
            double t = gamma_p(half_nu1, a * std::pow(std::fabs(x), b));
            return x >= 0.0 ? 0.5 + 0.5 * t : 0.5 - 0.5 * t;
        };
        const double nu2 = (c + 2.0) / b;
        const double half_mean =
            std::exp(log_kappa + std::lgamma(nu2) - std::log(b) - nu2 * std::log(a));
        d.pfm1 = [a, b, nu2, half_mean](double x) {
            double t = gamma_p(nu2, a * std::pow(std::fabs(x), b));
            return x >= 0.0 ? -half_mean + half_mean * t : -half_mean * (1.0 - t);
        };
        d.qhi = q_of(d.cdf1, 1.0 - kQuantileCut, 0.0, std::max(4.0, 4.0 * d.scale_hint));
        d.qlo = -d.qhi;
        d.sample1 = inverse_cdf_sampler(d.cdf1, d.qlo, d.qhi);
    } else {
        d.pdfN = [radial_pdf, dim](std::span<const double> x) {
            double q = 0.0;
            for (int i = 0; i < dim; ++i) q += x[i] * x[i];
            return radial_pdf(std::sqrt(q));
        };
        // radius via T^(1/b), T ~ Gamma((c+d)/b, rate a); direction isotropic
        auto radial_cdf = [a, nu0, b](double u) {
            return u <= 0.0 ? 0.0 : gamma_p(nu0, a * std::pow(u, b));
        };
        double rhi = q_of(radial_cdf, 1.0 - kQuantileCut, 0.0, std::max(4.0, 4.0 * d.scale_hint));
        d.sampleN = [radial_cdf, rhi, dim](RngStream& g, std::span<double> x) {
            double r = q_of(radial_cdf, g.uniform01(), 0.0, rhi);
            double n2 = 0.0;
            for (auto& c2 : x) {
                c2 = g.normal();
                n2 += c2 * c2;
            }
            double s = r / std::sqrt(n2);
            for (auto& c2 : x) c2 *= s;
        };
    }
    return d;
}

Density make_poisson_comb(double lambda) {
    if (!(lambda > 1.0)) throw std::invalid_argument("poissoncomb: need lambda > 1");
    Density d;
    d.id = "poissoncomb(lambda=" + fmt_param(lambda) + ")";
    d.dim = 1;
    d.support = {SupportKind::HalfLine, 0.0, kInf, {}, {}, 0.0};
    d.scale_hint = lambda;
    auto logpois = [lambda](long k) {
        return -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
    };
    auto pois = [logpois](long k) { return std::exp(logpois(k)); };
    d.pdf1 = [pois](double x) {
        if (x < 0.0) return 0.0;
        return pois(static_cast<long>(std::floor(x)));
    };
    d.cdf1 = [pois](double x) {
        if (x <= 0.0) return 0.0;
        long K = static_cast<long>(std::floor(x));
        double acc = 0.0;
        for (long k = 0; k < K; ++k) acc += pois(k);
        return std::min(1.0, acc + pois(K) * (x - K));
    };
    d.pfm1 = [pois](double x) {
        if (x <= 0.0) return 0.0;
        long K = static_cast<long>(std::floor(x));
        double acc = 0.0;
        for (long k = 0; k < K; ++k) acc += pois(k) * (k + 0.5);
        double fr = x - K;
        return acc + pois(K) * (K * fr + 0.5 * fr * fr);
    };
    d.sample1 = [pois](RngStream& g) {
        double u = g.uniform01(), acc = 0.0;
        long k = 0;
        for (; k < 4000; ++k) {
            acc += pois(k);
            if (u <= acc) break;
        }
        return static_cast<double>(k) + g.uniform01();
    };
    d.moment_closed = [pois](double p) {
        double acc = 0.0;
        for (long k = 0; k < 400; ++k)
            acc += pois(k) * (std::pow(k + 1.0, p + 1.0) - std::pow(k, p + 1.0)) / (p + 1.0);
        return acc;
    };
    d.power_integral_closed = [logpois](double theta) {
        double acc = 0.0;
        for (long k = 0; k < 4000; ++k) {
            double t = std::exp(theta * logpois(k));
            acc += t;
            if (k > 10 && t < 1e-18 * acc) break;
        }
        return acc;
    };
    TailCriterion tail;
    tail.peak_constant = 0.5;
    tail.growth = TailCriterion::GrowthControl{0.1, 0.049, 10.0, 1.0};
    d.tail = tail;
    d.qlo = 0.0;
    d.qhi = q_of(d.cdf1, 1.0 - kQuantileCut, 0.0, 8.0 * lambda + 40.0);
    return d;
}

namespace {

// symmetric rho-stable pdf support: characteristic function exp(-|t|^rho)
// inverted on a fine grid, asymptotic tail series beyond x0
struct StableTable {
    double rho;
    double x0 = 30.0;
    double h = 0.004;
    std::vector<double> pdf;  // on 0, h, ..., x0
    std::vector<double> cdf;  // cumulative from 0 (Simpson)

    double tail_series(double ax) const {  // pdf for ax > x0
        double acc = 0.0;
        for (int k = 1; k <= 16; ++k) {
            double term = std::exp(std::lgamma(k * rho + 1.0) - std::lgamma(k + 1.0)) *
                          std::sin(0.5 * kPi * k * rho) / kPi *
                          std::pow(ax, -k * rho - 1.0);
            acc += (k % 2 == 1) ? term : -term;
        }
        return std::max(acc, 0.0);
    }
    double tail_mass(double ax) const {  // P(X > ax) for ax > x0
        double acc = 0.0;
        for (int k = 1; k <= 16; ++k) {
            double term = std::exp(std::lgamma(k * rho + 1.0) - std::lgamma(k + 1.0)) *
                          std::sin(0.5 * kPi * k * rho) / kPi *
                          std::pow(ax, -k * rho) / (k * rho);
            acc += (k % 2 == 1) ? term : -term;
        }
        return std::max(acc, 0.0);
    }
    double eval_pdf(double x) const {
        double ax = std::fabs(x);
        if (ax >= x0) return tail_series(ax);
        // local cubic Lagrange on the uniform grid
        double s = ax / h;
        long i = std::min<long>(static_cast<long>(s), static_cast<long>(pdf.size()) - 4);
        i = std::max<long>(0, i - 1);
        double t = s - i;
        double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        return c0 * pdf[i] + c1 * pdf[i + 1] + c2 * pdf[i + 2] + c3 * pdf[i + 3];
    }
    double eval_cdf(double x) const {
        double ax = std::fabs(x);
        double half;
        if (ax >= x0) {
            half = 0.5 - tail_mass(ax);
        } else {
            double s = ax / h;
            long i = static_cast<long>(s);
            i = std::min<long>(i, static_cast<long>(cdf.size()) - 2);
            double t = s - i;
            half = cdf[i] * (1.0 - t) + cdf[i + 1] * t;
        }
        return x >= 0.0 ? 0.5 + half : 0.5 - half;
    }
};

const StableTable& stable_table(double rho) {
    static std::map<double, StableTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(rho);
    if (it != cache.end()) return it->second;

    StableTable tb;
    tb.rho = rho;
    long n = static_cast<long>(std::llround(tb.x0 / tb.h)) + 1;
    tb.pdf.resize(n);
    if (rho < 1.0) {
        // rotate the contour onto the imaginary axis (valid for rho < 1):
        // pi f(x) = int_0^inf exp(-s x - s^rho cos(pi rho/2)) sin(s^rho sin(pi rho/2)) ds
        const double cphi = std::cos(0.5 * kPi * rho), sphi = std::sin(0.5 * kPi * rho);
        const double smax = std::pow(44.0 / cphi, 1.0 / rho);
        for (long i = 0; i < n; ++i) {
            double x = i * tb.h;
            auto integrand = [x, rho, cphi, sphi](double s) {
                double sr = std::pow(s, rho);
                return std::exp(-s * x - sr * cphi) * std::sin(sr * sphi);
            };
            auto r = integrate(integrand, 0.0, smax, 1e-13, 1e-13, 40000);
            tb.pdf[i] = std::max(r.value / kPi, 0.0);
        }
    } else {
        double tmax = std::pow(41.5, 1.0 / rho);  // exp(-t^rho) below 1e-18
        for (long i = 0; i < n; ++i) {
            double x = i * tb.h;
            auto integrand = [x, rho](double t) {
                return std::cos(t * x) * std::exp(-std::pow(t, rho));
            };
            auto r = integrate(integrand, 0.0, tmax, 1e-13, 1e-13, 40000);
            tb.pdf[i] = std::max(r.value / kPi, 0.0);
        }
    }
    // cumulative from 0 by Simpson on pairs of panels
    tb.cdf.assign(n, 0.0);
    for (long i = 2; i < n; i += 2)
        tb.cdf[i] = tb.cdf[i - 2] +
                    tb.h / 3.0 * (tb.pdf[i - 2] + 4.0 * tb.pdf[i - 1] + tb.pdf[i]);
    for (long i = 1; i < n; i += 2)
        tb.cdf[i] = tb.cdf[i - 1] +
                    tb.h / 12.0 *
                        (5.0 * tb.pdf[i - 1] + 8.0 * tb.pdf[i] -
                         (i + 1 < n ? tb.pdf[i + 1] : tb.tail_series(tb.x0 + tb.h)));
    return cache.emplace(rho, std::move(tb)).first->second;
}

}  // namespace

Density make_stable(double rho) {
    if (!(rho == 0.5 || rho == 1.0 || rho == 1.5))
        throw std::invalid_argument("stable: catalog carries rho in {0.5, 1, 1.5}");
    Density d;
    d.id = "stable(rho=" + fmt_param(rho) + ")";
    d.dim = 1;
    d.support.kind = SupportKind::FullSpace;
    d.tail_poly_beta = rho + 1.0;

    if (rho == 1.0) {  // Cauchy closed form
        d.pdf1 = [](double x) { return 1.0 / (kPi * (1.0 + x * x)); };
        d.cdf1 = [](double x) { return 0.5 + std::atan(x) / kPi; };
        d.quantile1 = [](double u) { return std::tan(kPi * (u - 0.5)); };
    } else {
        const StableTable& tb = stable_table(rho);
        d.pdf1 = [&tb](double x) { return tb.eval_pdf(x); };
        d.cdf1 = [&tb](double x) { return tb.eval_cdf(x); };
    }
    // Chambers-Mallows-Stuck for the symmetric case
    d.sample1 = [rho](RngStream& g) {
        double V = kPi * (g.uniform01() - 0.5);
        if (rho == 1.0) return std::tan(V);
        double E = -std::log(g.uniform01());
        return std::sin(rho * V) / std::pow(std::cos(V), 1.0 / rho) *
               std::pow(std::cos((1.0 - rho) * V) / E, (1.0 - rho) / rho);
    };
    TailCriterion tail;
    tail.has_radial = true;
    tail.radial_from = 0.0;
    tail.radial_profile = d.pdf1;
    tail.family = TailCriterion::Family::Polynomial;
    tail.poly_beta = rho + 1.0;
    tail.peak_constant = 1.0;
    d.tail = tail;
    d.qhi = q_of(d.cdf1, 1.0 - kQuantileCut, 0.0, 10.0);
    d.qlo = -d.qhi;
    return d;
}

Density make_box(int dim) {
    if (dim < 1) throw std::invalid_argument("box: bad dimension");
    if (dim == 1) return make_uniform(0.0, 1.0);
    Density d;
    d.id = "box(d=" + std::to_string(dim) + ")";
    d.dim = dim;
    d.support.kind = SupportKind::Box;
    d.support.box_lo.assign(dim, 0.0);
    d.support.box_hi.assign(dim, 1.0);
    d.pdfN = [dim](std::span<const double> x) {
        for (int i = 0; i < dim; ++i)
            if (x[i] < 0.0 || x[i] > 1.0) return 0.0;
        return 1.0;
    };
    d.sampleN = [](RngStream& g, std::span<double> x) {
        for (auto& c : x) c = g.uniform01();
    };
    d.power_integral_closed = [](double) { return 1.0; };
    if (dim >= 1) {
        int dd = dim;
        d.moment_closed = [dd](double p) {
            return p == 2.0 ? dd / 3.0 : std::numeric_limits<double>::quiet_NaN();
        };
    }
    return d;
}

namespace {

std::map<std::string, double> parse_params(const std::string& inside) {
    std::map<std::string, double> out;
    std::stringstream ss(inside);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("density parameter must be key=value: " + item);
        std::string key = item.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        out[key] = std::stod(item.substr(eq + 1));
    }
    return out;
}

double get(const std::map<std::string, double>& m, const std::string& k, double dflt) {
    auto it = m.find(k);
    return it == m.end() ? dflt : it->second;
}

}  // namespace

std::vector<std::string> catalog_listing() {
    return {
        "uniform01 | uniform(a=0,b=1)",
        "ramp                      (pdf (2+2x)/3 on [0,1])",
        "normal(sigma=1[,d=1])",
        "gamma(a=1,b=1)            (rate a, shape b)",
        "dgamma(a=1,c=2)",
        "weibull(b=2)",
        "lognormal(a=0,sigma=1)",
        "logistic",
        "pareto(b=3)",
        "hyperexp(a=1,b=2,c=0[,d=1])",
        "poissoncomb(lambda=2)",
        "stable(rho=0.5|1|1.5)",
        "box(d=2)",
    };
}

Density density_from_spec(const std::string& spec) {
    std::string name = spec;
    std::map<std::string, double> p;
    auto open = spec.find('(');
    if (open != std::string::npos) {
        auto close = spec.rfind(')');
        if (close == std::string::npos || close < open)
            throw std::invalid_argument("malformed density spec: " + spec);
        name = spec.substr(0, open);
        p = parse_params(spec.substr(open + 1, close - open - 1));
    }
    name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());

    if (name == "uniform01") return make_uniform(0.0, 1.0);
    if (name == "uniform") return make_uniform(get(p, "a", 0.0), get(p, "b", 1.0));
    if (name == "ramp") return make_ramp();
    if (name == "normal")
        return make_normal(get(p, "sigma", 1.0), static_cast<int>(get(p, "d", 1)));
    if (name == "gamma") return make_gamma(get(p, "a", 1.0), get(p, "b", 1.0));
    if (name == "dgamma") return make_double_gamma(get(p, "a", 1.0), get(p, "c", 2.0));
    if (name == "weibull") return make_weibull(get(p, "b", 2.0));
    if (name == "lognormal")
        return make_lognormal(get(p, "a", 0.0), get(p, "sigma", 1.0));
    if (name == "logistic") return make_logistic();
    if (name == "pareto") return make_pareto(get(p, "b", 3.0));
    if (name == "hyperexp")
        return make_hyperexp(get(p, "a", 1.0), get(p, "b", 2.0), get(p, "c", 0.0),
                             static_cast<int>(get(p, "d", 1)));
    if (name == "poissoncomb") return make_poisson_comb(get(p, "lambda", 2.0));
    if (name == "stable") return make_stable(get(p, "rho", 1.0));
    if (name == "box") return make_box(static_cast<int>(get(p, "d", 2)));

    std::string msg = "unknown density id '" + name + "'; catalog:\n";
    for (const auto& line : catalog_listing()) msg += "  " + line + "\n";
    throw std::invalid_argument(msg);
}

}  // namespace vq
