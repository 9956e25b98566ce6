#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vq/rng.hpp"

namespace vq {

enum class SupportKind { CompactInterval, HalfLine, FullSpace, Box, Ball };

struct SupportDescriptor {
    SupportKind kind = SupportKind::FullSpace;
    double lower = 0.0, upper = 0.0;     // 1-D interval / half-line start
    std::vector<double> box_lo, box_hi;  // d >= 2 box
    double radius = 0.0;                 // ball

    bool unbounded() const {
        return kind == SupportKind::HalfLine || kind == SupportKind::FullSpace;
    }
};

// Tail metadata consumed by the rate-criterion checks.
struct TailCriterion {
    // pdf(x) = radial_profile(||x||_0) outside B(0, radial_from), profile
    // nonincreasing there
    std::function<double(double)> radial_profile;
    double radial_from = 0.0;
    bool has_radial = false;

    enum class Family { None, ExpPower, Polynomial } family = Family::None;
    double exp_a = 0.0, exp_b = 0.0;  // profile ~ exp(-a u^b)
    double poly_beta = 0.0;           // profile ~ C u^-beta

    std::optional<double> peak_constant;  // kappa_f > 0

    struct GrowthControl {
        double eps, eta, M, C;
    };
    std::optional<GrowthControl> growth;
};

// A catalog probability law: pdf / cdf / quantile / sampler plus the
// analytic hooks the quantizer and constant computations use. Immutable
// after construction; evaluation is safe from concurrent callers.
struct Density {
    std::string id;
    int dim = 1;
    SupportDescriptor support;
    std::optional<TailCriterion> tail;

    bool log_concave = false;
    // Lipschitz pdf bounded away from 0 on a compact interval
    bool compact_lipschitz_positive = false;
    double scale_hint = 1.0;

    // 1-D hooks (pdf1/cdf1 present for every 1-D catalog member)
    std::function<double(double)> pdf1;
    std::function<double(double)> cdf1;
    std::function<double(double)> quantile1;  // optional closed form
    // partial first moment: x -> integral of t f(t) dt over (support lower, x]
    std::function<double(double)> pfm1;
    std::function<double(RngStream&)> sample1;  // documented per-density method

    // d >= 2 hooks
    std::function<double(std::span<const double>)> pdfN;
    std::function<void(RngStream&, std::span<double>)> sampleN;

    // analytic shortcuts (may return +inf)
    std::function<double(double)> moment_closed;          // p -> E||X||^p
    std::function<double(double)> power_integral_closed;  // theta -> int f^theta
    std::optional<double> tail_poly_beta;                 // f ~ C |x|^-beta

    // quadrature truncation bounds (1e-12 quantiles for unbounded supports)
    double qlo = 0.0, qhi = 0.0;

    double quantile(double u) const;  // closed form or numeric inversion
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;  // abs quadrature bound, or MC std error
    bool converged = true;
    bool infinite() const;
};

// ---- operations ------------------------------------------------------

double pdf_eval(const Density& d, std::span<const double> x);
double pdf_eval(const Density& d, double x);  // 1-D shorthand

// E||X||^p; +inf when the tail test fails. 1-D by adaptive quadrature,
// d >= 2 by Monte Carlo with a reported standard error.
Estimate moment(const Density& d, double p, long mc_samples = 200000,
                std::uint64_t seed = 12345);

// integral of f^theta over {f > 0}, theta in (0,1]; +inf on divergence
Estimate power_integral(const Density& d, double theta);

// i.i.d. draws, deterministic given seed; 1-D
std::vector<double> sample(const Density& d, std::uint64_t seed, long count);
// d >= 2: row-major count x dim
std::vector<double> sample_nd(const Density& d, std::uint64_t seed, long count);

double cdf_eval(const Density& d, double x);  // 1-D only

}  // namespace vq
