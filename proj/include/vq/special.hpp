#pragma once

namespace vq {

double norm_pdf(double x);
double norm_cdf(double x);
// Acklam's rational approximation polished by one Halley step; |error| < 1e-13
double norm_quantile(double p);

// regularized incomplete gamma P(a,x) = gamma(a,x)/Gamma(a), Q = 1 - P
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace vq
