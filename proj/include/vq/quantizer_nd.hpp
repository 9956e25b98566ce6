#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vq/density.hpp"
#include "vq/norms.hpp"

namespace vq {

enum class TrainMethod { LloydMc, Clvq };

struct TrainMeta {
    TrainMethod method = TrainMethod::LloydMc;
    std::uint64_t seed = 0;
    long budget = 0;
    int epochs = 0;
    double gamma0 = 0.0, gamma_c = 0.0;  // CLVQ schedule constants
    std::vector<double> epoch_distortion;
    double final_distortion = 0.0;
    double final_distortion_se = 0.0;
};

struct CodebookND {
    int dim = 1;
    double r = 2.0;
    std::string density_id;
    Norm norm = Norm::Euclidean;
    std::vector<double> points;   // n x dim, row-major, pairwise distinct
    std::vector<double> weights;  // Monte-Carlo cell probabilities
    TrainMeta meta;

    int n() const { return static_cast<int>(points.size()) / dim; }
    std::span<const double> point(int i) const {
        return {points.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)};
    }
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

// argmin over codepoints of the configured norm; ties -> lowest index
std::pair<int, double> nearest(const CodebookND& cb, std::span<const double> x);

CodebookND train_nd(const Density& density, int n, double r, TrainMethod method,
                    std::uint64_t seed, long budget);

McEstimate mc_distortion(const CodebookND& cb, const Density& density, double s,
                         long m, std::uint64_t seed);

struct GapReport {
    double gap = 0.0;
    int excluded_cells = 0;  // cells with fewer than 30 samples
    std::vector<double> cell_count;
};

// max over cells of ||MC cell mean - codepoint|| for an r = 2 codebook
double stationarity_gap(const CodebookND& cb, const Density& density, long m,
                        std::uint64_t seed, GapReport* report = nullptr);

}  // namespace vq
