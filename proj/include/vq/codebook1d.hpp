#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vq/density.hpp"

namespace vq {

// Ordered scalar codebook with Voronoi midpoint boundaries.
struct Codebook1D {
    std::vector<double> points;   // strictly increasing
    std::vector<double> weights;  // cell probabilities, sum to 1
    double r = 2.0;               // order of optimality it was built for
    std::string density_id;
    double residual = 0.0;  // max |per-cell stationarity integral|
    long iterations = 0;
    bool converged = true;
    std::uint64_t seed = 0;
    std::vector<double> distortion_trace;  // per-iteration, when tracked

    int n() const { return static_cast<int>(points.size()); }
    // inner Voronoi boundaries (n-1 midpoints)
    std::vector<double> boundaries() const;
    void validate() const;  // throws on duplicated/unsorted points
};

struct Lloyd1DOptions {
    double tol = 1e-10;
    long max_iter = 100000;
    int restarts = 5;  // used for non-log-concave densities
    std::uint64_t seed = 0;
    bool track_distortion = false;
};

// the (2k-1)/(2n) grid, L^r-optimal for U([0,1]) for every r
Codebook1D midpoint_grid(int n);

// Lloyd fixed point: alternate midpoint boundaries with the per-cell root
// of the L^r stationarity integral (conditional mean when r = 2)
Codebook1D lloyd1d(const Density& density, int n, double r,
                   const Lloyd1DOptions& opt = {});

// int min_k |x - a_k|^s f(x) dx by per-cell adaptive quadrature, split at
// the codepoint; +inf when the tail moment diverges
double distortion1d(const Codebook1D& cb, const Density& density, double s);

// per-cell values of int_{V_k} |a_k - x|^(r-1) sign(a_k - x) f(x) dx
std::vector<double> stationarity_residual(const Codebook1D& cb,
                                          const Density& density, double r);

// max gap / min gap, gaps including the edge gaps against [a,b]
double cell_spread(const Codebook1D& cb, double a, double b);

}  // namespace vq
