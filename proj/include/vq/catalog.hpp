#pragma once

#include <string>
#include <vector>

#include "vq/density.hpp"

namespace vq {

Density make_uniform(double a = 0.0, double b = 1.0);
Density make_ramp();  // f(x) = (2+2x)/3 on [0,1]
Density make_normal(double sigma = 1.0, int dim = 1);
Density make_gamma(double a, double b);         // rate a, shape b
Density make_double_gamma(double a, double c);  // |x|^(c-1) e^(-a|x|) / (2 Gamma(c) a^-c)
Density make_weibull(double b);
Density make_lognormal(double a = 0.0, double sigma = 1.0);
Density make_logistic();
Density make_pareto(double b);
Density make_hyperexp(double a, double b, double c = 0.0, int dim = 1);
Density make_poisson_comb(double lambda);       // X = N + U, N ~ Poisson(lambda)
Density make_stable(double rho);                // rho in {0.5, 1, 1.5}
Density make_box(int dim);                      // uniform on [0,1]^d

// "name(k=v,...)" -> catalog member; throws std::invalid_argument with the
// catalog listing attached for unknown names
Density density_from_spec(const std::string& spec);
std::vector<std::string> catalog_listing();

}  // namespace vq
