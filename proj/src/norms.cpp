#include "vq/norms.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace vq {

namespace {
std::atomic<Norm> g_norm{Norm::Euclidean};
}

Norm global_norm() { return g_norm.load(std::memory_order_relaxed); }
void set_global_norm(Norm n) { g_norm.store(n, std::memory_order_relaxed); }

double distance(std::span<const double> a, std::span<const double> b, Norm n) {
    if (n == Norm::Euclidean) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
            double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

std::string norm_id(Norm n) { return n == Norm::Euclidean ? "euclidean" : "sup"; }

Norm norm_from_id(const std::string& id) {
    if (id == "euclidean" || id == "l2") return Norm::Euclidean;
    if (id == "sup" || id == "linf") return Norm::Sup;
    throw std::invalid_argument("unknown norm id: " + id);
}

}  // namespace vq
